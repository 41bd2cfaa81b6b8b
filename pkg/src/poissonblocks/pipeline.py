"""blocks -> dimension -> wreath check -> verdict on one group."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .blocks import BlockReport, decompose
from .classify import Verdict, classify
from .dimension import DEFAULT_RADII, DimensionReport, WreathCheck, dimension_estimate, is_wreath_block
from .matrices import GroupSpec, TOrder


def derive_seed(seed: int, label: str) -> int:
    """Stage seed from the run seed and a stage label (64-bit)."""
    h = hashlib.blake2b(f"{seed}:{label}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


@dataclass
class Analysis:
    spec: GroupSpec
    blocks: BlockReport
    dims: dict[tuple[int, int], DimensionReport]
    wreath: dict[tuple[int, int], WreathCheck]
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "blocks": self.blocks.to_json(),
            "dimensions": {f"{p[0]},{p[1]}": d.to_json() for p, d in self.dims.items()},
            "wreath": {f"{p[0]},{p[1]}": w.to_json() for p, w in self.wreath.items()},
            "verdict": self.verdict.to_json(),
            "citations": self.verdict.citation_trail(),
        }


def analyze(spec: GroupSpec, depth: int = 8, order: TOrder | None = None, seed: int = 0,
            radii=DEFAULT_RADII) -> Analysis:
    order = order or TOrder.U()
    blocks = decompose(spec, depth, order, seed=derive_seed(seed, "blocks") % 2**32)
    dims: dict = {}
    wreath: dict = {}
    cache: dict = {}
    for p in blocks.valid_pairs():
        m = blocks.module_spec(p)
        key = json.dumps(m.to_json(), sort_keys=True)
        if key not in cache:
            rep = dimension_estimate(m, radii, seed=derive_seed(seed, "dim") % 2**32)
            w = None
            if spec.field.characteristic == 0 and rep.dimension == 2 and not rep.ambiguous:
                w = is_wreath_block(blocks, m)
            cache[key] = (rep, w)
        rep, w = cache[key]
        dims[p] = rep
        if w is not None:
            wreath[p] = w
    verdict = classify(spec, blocks, dims, wreath)
    return Analysis(spec, blocks, dims, wreath, verdict)
