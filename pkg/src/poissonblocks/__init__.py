"""Block decomposition, module dimension and boundary verdicts for groups of
upper-triangular matrices over Laurent polynomial rings, plus random-walk
experiments that probe the same structure numerically."""

__version__ = "0.1.0"

from .blocks import BlockReport, decompose
from .catalog import build, list_entries
from .classify import MomentClass, Outcome, Verdict, classify
from .dimension import ModuleSpec, dimension_estimate, is_wreath_block
from .matrices import GroupSpec, StepMeasure, TOrder, UTMatrix
from .pipeline import analyze
from .recurrent import recurrent_measure_stages
from .walks import WalkConfig, simulate

__all__ = [
    "BlockReport", "GroupSpec", "ModuleSpec", "MomentClass", "Outcome", "StepMeasure",
    "TOrder", "UTMatrix", "Verdict", "WalkConfig", "analyze", "build", "classify",
    "decompose", "dimension_estimate", "is_wreath_block", "list_entries",
    "recurrent_measure_stages", "simulate",
]
