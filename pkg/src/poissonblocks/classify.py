"""Boundary verdicts from block dimensions.

Triviality statements depend on a moment condition on the step measure, so a
verdict always carries a moment class next to its outcome.  Rules applied to
reach a verdict are listed in ``basis`` with a short statement of the rule.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping

from .abelian import MonomialCoordinates, NotMonomialError, rational_rank
from .blocks import BlockReport
from .dimension import DimensionReport, WreathCheck
from .matrices import GroupSpec


class Outcome(str, enum.Enum):
    TRIVIAL = "Trivial"
    NONTRIVIAL = "Nontrivial"
    CONJECTURAL = "ConjecturalNontrivial"
    UNKNOWN = "Unknown"


class MomentClass(str, enum.Enum):
    ANY_FINITE_ENTROPY = "AnyFiniteEntropyNondegenerate"
    CENTERED_SECOND = "CenteredSecondMoment"
    CENTERED_FIRST = "CenteredFirstMoment"


RULES = {
    "charp_dim3": "char p: a valid block of dimension >= 3 forces a non-trivial boundary "
                  "for every finite-entropy nondegenerate measure",
    "charp_dim2": "char p: all valid blocks of dimension <= 2 give a trivial boundary for "
                  "centered measures with finite second moment",
    "charp_dim1": "char p: all valid blocks of dimension <= 1 give a trivial boundary for "
                  "centered measures with finite first moment",
    "dim3": "a valid block of dimension >= 3 forces a non-trivial boundary for every "
            "finite-entropy nondegenerate measure",
    "char0_dim1": "char 0: valid blocks of dimension <= 1 give a trivial boundary for centered "
                  "measures with finite second moment",
    "wreath": "char 0: a dimension-2 block isomorphic to Z^2 wr Z is Liouville for centered "
              "measures with finite second moment",
    "root_of_unity": "char 0: a dimension-2 block whose constants are roots of unity is a "
                     "quotient of a rank-2 wreath product and is Liouville for centered "
                     "measures with finite second moment",
    "g_alpha": "char 0: a dimension-2 free block extended by a constant that is not a root of "
               "unity has a non-trivial boundary for every finite-entropy nondegenerate measure",
    "conjectural": "char 0: dimension-2 block outside the wreath and constant-extension "
                   "patterns; non-triviality is conjectured, not proved",
    "abelian": "all generators are diagonal: the group is abelian and every measure is Liouville",
    "no_block": "no valid block found within the search depth",
    "ambiguous": "dimension estimate ambiguous",
    "walk_rank": "linear conjugate-vector rank observed in simulation",
}


@dataclass
class BasisItem:
    pair: tuple[int, int] | None
    dimension: int | None
    rule: str

    def to_json(self):
        return {"pair": list(self.pair) if self.pair else None, "dimension": self.dimension,
                "rule": self.rule, "citation": RULES[self.rule]}


@dataclass
class Verdict:
    outcome: Outcome
    moment_class: MomentClass
    basis: list[BasisItem]
    per_element: dict = dc_field(default_factory=dict)
    ambiguity: list[str] = dc_field(default_factory=list)

    def to_json(self):
        out = {"outcome": self.outcome.value, "moment_class": self.moment_class.value,
               "basis": [b.to_json() for b in self.basis]}
        if self.per_element:
            out["per_element"] = self.per_element
        if self.ambiguity:
            out["ambiguity"] = self.ambiguity
        return out

    def citation_trail(self) -> list[str]:
        lines = []
        for b in self.basis:
            where = f"block {b.pair}" if b.pair else "group"
            dim = f", dim {b.dimension}" if b.dimension is not None else ""
            lines.append(f"{where}{dim}: {RULES[b.rule]}")
        return lines


def root_of_unity_check(alpha) -> bool:
    """True iff the rational number alpha is a root of unity, i.e. alpha = +-1."""
    a = Fraction(alpha)
    if a == 0:
        raise ValueError("alpha must be nonzero")
    return a in (1, -1)


def _constant_pattern(phis) -> tuple[bool, bool]:
    """(has a constant that is not a root of unity, has a nontrivial torsion constant).

    Only meaningful in char 0 for monomial-times-constant values.
    """
    try:
        mc = MonomialCoordinates.for_values(phis)
        coords = [mc.coords(p) for p in phis]
    except NotMonomialError:
        return False, False
    nv = mc.nvars
    var_rank = rational_rank([c[0][:nv] for c in coords])
    full_rank = rational_rank([c[0] for c in coords])
    torsion = any(any(t) for _, t in coords)
    return full_rank > var_rank, torsion


def _is_diagonal_group(spec: GroupSpec) -> bool:
    return all(g.is_diagonal() for g in spec.generators.values())


def classify(spec: GroupSpec, blocks: BlockReport, dims: Mapping[tuple, DimensionReport],
             wreath_flags: Mapping[tuple, WreathCheck | bool] | None = None,
             per_element: Mapping | None = None) -> Verdict:
    wreath_flags = wreath_flags or {}
    valid = blocks.valid_pairs()
    char = spec.field.characteristic
    per = dict(per_element or {})

    if not valid:
        if _is_diagonal_group(spec):
            return Verdict(Outcome.TRIVIAL, MomentClass.ANY_FINITE_ENTROPY,
                           [BasisItem(None, None, "abelian")], per)
        return Verdict(Outcome.UNKNOWN, MomentClass.ANY_FINITE_ENTROPY,
                       [BasisItem(None, None, "no_block")], per,
                       [f"no witness up to depth {blocks.depth}"])

    missing = [p for p in valid if p not in dims]
    if missing:
        raise ValueError(f"valid blocks without a dimension report: {missing}")

    ambiguous = [p for p in valid if dims[p].ambiguous or dims[p].dimension is None]
    certified = {p: dims[p].dimension for p in valid if p not in ambiguous}
    big = [p for p, d in certified.items() if d >= 3]
    if big:
        rule = "charp_dim3" if char else "dim3"
        return Verdict(Outcome.NONTRIVIAL, MomentClass.ANY_FINITE_ENTROPY,
                       [BasisItem(p, certified[p], rule) for p in big], per)
    if ambiguous:
        notes = [f"block {p}: candidates {list(dims[p].candidates)}, fitted "
                 f"{dims[p].fitted_exponent:.3f}" for p in ambiguous]
        return Verdict(Outcome.UNKNOWN, MomentClass.ANY_FINITE_ENTROPY,
                       [BasisItem(p, None, "ambiguous") for p in ambiguous], per, notes)

    top = max(certified.values())
    if char:
        if top == 2:
            rule, moment = "charp_dim2", MomentClass.CENTERED_SECOND
        else:
            rule, moment = "charp_dim1", MomentClass.CENTERED_FIRST
        return Verdict(Outcome.TRIVIAL, moment,
                       [BasisItem(p, d, rule) for p, d in certified.items()], per)

    basis: list[BasisItem] = []
    nontrivial, conjectural = [], []
    for p, d in certified.items():
        if d <= 1:
            basis.append(BasisItem(p, d, "char0_dim1"))
            continue
        phis = [v for _, v in blocks.phi_values[p]]
        extra_constant, torsion = _constant_pattern(phis)
        if bool(wreath_flags.get(p, False)):
            basis.append(BasisItem(p, d, "root_of_unity" if torsion else "wreath"))
        elif extra_constant:
            nontrivial.append(BasisItem(p, d, "g_alpha"))
        else:
            conjectural.append(BasisItem(p, d, "conjectural"))
    if nontrivial:
        return Verdict(Outcome.NONTRIVIAL, MomentClass.ANY_FINITE_ENTROPY, nontrivial, per)
    if conjectural:
        return Verdict(Outcome.CONJECTURAL, MomentClass.ANY_FINITE_ENTROPY, conjectural, per)
    return Verdict(Outcome.TRIVIAL, MomentClass.CENTERED_SECOND, basis, per)
