"""Named example groups as explicit generator matrices.

Each builder returns a :class:`CatalogEntry` holding the :class:`GroupSpec`
plus the block dimensions and boundary verdict the entry is known to have.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

from .errors import CatalogError
from .fields import CoefficientField, is_prime
from .matrices import GroupSpec, StepMeasure, UTMatrix
from .parsing import parse_rational
from .rational import RationalFunction


@dataclass(frozen=True)
class ExpectedVerdict:
    outcome: str
    moment_class: str
    reason: str


@dataclass
class CatalogEntry:
    name: str
    params: dict
    spec: GroupSpec
    expected_dimension: dict = dc_field(default_factory=dict)  # pair -> (dim, reason)
    expected_verdict: ExpectedVerdict | None = None
    base_generators: tuple[str, ...] = ()
    lamp: str | None = "delta"

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({','.join(str(v) for v in self.params.values())})"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": {k: str(v) for k, v in self.params.items()},
            "spec": self.spec.to_json(),
            "expected_dimension": {f"{p[0]},{p[1]}": {"dim": d, "reason": r}
                                   for p, (d, r) in self.expected_dimension.items()},
            "expected_verdict": None if self.expected_verdict is None else {
                "outcome": self.expected_verdict.outcome,
                "moment_class": self.expected_verdict.moment_class,
                "reason": self.expected_verdict.reason,
            },
        }


def _var_names(d: int) -> list[str]:
    return ["X", "Y", "Z"][:d] if d <= 3 else [f"X{i + 1}" for i in range(d)]


def _field(p: int) -> CoefficientField:
    if p == 0:
        return CoefficientField.rationals()
    if not is_prime(p):
        raise CatalogError(f"characteristic must be 0 or a prime, got {p}")
    return CoefficientField.prime(p)


def _check_d(d: int, lo: int = 1):
    if not isinstance(d, int) or d < lo:
        raise CatalogError(f"d must be an integer >= {lo}, got {d!r}")


def _two_by_two(field, d, entries: dict[str, str]) -> GroupSpec:
    """Generators diag(1, e) for every name -> e, with delta kept as given."""
    gens = {}
    for name, e in entries.items():
        if name == "delta":
            gens[name] = UTMatrix.from_strings([["1", "1"], ["0", "1"]], field, d)
        else:
            gens[name] = UTMatrix.from_strings([["1", "0"], ["0", e]], field, d)
    return GroupSpec(field, d, 2, gens)


def _trivial_second(reason):
    return ExpectedVerdict("Trivial", "CenteredSecondMoment", reason)


def _nontrivial(reason):
    return ExpectedVerdict("Nontrivial", "AnyFiniteEntropyNondegenerate", reason)


def lamplighter(d: int, p: int = 2) -> CatalogEntry:
    _check_d(d)
    field = _field(p)
    xs = _var_names(d)
    spec = _two_by_two(field, d, {"delta": "", **{f"M_{x}": x for x in xs}})
    dim = (d, "free module over the Laurent ring in d variables")
    if p == 0:
        verdict = (_nontrivial("block of dimension >= 3") if d >= 3
                   else _trivial_second("char 0 block of dimension 2 isomorphic to the rank-2 wreath product")
                   if d == 2 else _trivial_second("char 0, all blocks of dimension <= 1"))
    else:
        verdict = (_nontrivial("char p, block of dimension >= 3") if d >= 3
                   else _trivial_second("char p, all blocks of dimension <= 2") if d == 2
                   else ExpectedVerdict("Trivial", "CenteredFirstMoment", "char p, all blocks of dimension <= 1"))
    return CatalogEntry("lamplighter", {"d": d, "p": p}, spec, {(1, 2): dim}, verdict,
                        tuple(f"M_{x}" for x in xs))


def baumslag(d: int, p: int = 2) -> CatalogEntry:
    _check_d(d)
    field = _field(p)
    xs = _var_names(d)
    entries = {"delta": ""}
    for x in xs:
        entries[f"M_{x}"] = x
        entries[f"M_{x}+1"] = f"{x}+1"
    spec = _two_by_two(field, d, entries)
    if p:
        verdict = (_nontrivial("char p, block of dimension >= 3") if d >= 3
                   else _trivial_second("char p, all blocks of dimension <= 2") if d == 2
                   else ExpectedVerdict("Trivial", "CenteredFirstMoment", "char p, all blocks of dimension <= 1"))
    else:
        verdict = (_nontrivial("block of dimension >= 3") if d >= 3
                   else _trivial_second("char 0, all blocks of dimension <= 1") if d == 1 else None)
    return CatalogEntry("baumslag", {"d": d, "p": p}, spec,
                        {(1, 2): (d, "transcendence degree d")},
                        verdict, tuple(k for k in entries if k != "delta"))


def g23x() -> CatalogEntry:
    spec = _two_by_two(_field(0), 1, {"delta": "", "M_2": "2", "M_3": "3", "M_X": "X"})
    return CatalogEntry("g23x", {}, spec, {(1, 2): (1, "transcendence degree 1")},
                        _trivial_second("char 0, all blocks of dimension <= 1"), ("M_2", "M_3", "M_X"))


def gx_x1_x2(p: int = 0) -> CatalogEntry:
    spec = _two_by_two(_field(p), 1, {"delta": "", "M_X": "X", "M_X+1": "X+1", "M_X+2": "X+2"})
    verdict = (_trivial_second("char 0, all blocks of dimension <= 1") if p == 0
               else ExpectedVerdict("Trivial", "CenteredFirstMoment", "char p, all blocks of dimension <= 1"))
    return CatalogEntry("gx_x1_x2", {"p": p} if p else {}, spec,
                        {(1, 2): (1, "transcendence degree 1")}, verdict, ("M_X", "M_X+1", "M_X+2"))


def lbs(d: int) -> CatalogEntry:
    _check_d(d)
    xs = _var_names(d)
    entries = {**{f"M_{x}": x for x in xs}, "delta": "", "M_2": "2"}
    spec = _two_by_two(_field(0), d, entries)
    verdict = _nontrivial("dimension 2 block with a constant that is not a root of unity") if d >= 2 else None
    return CatalogEntry("lbs", {"d": d}, spec, {(1, 2): (d, "free module in the variables")},
                        verdict, tuple(k for k in entries if k != "delta"))


def x1x2x3(p: int = 0) -> CatalogEntry:
    field = _field(p)
    spec = _two_by_two(field, 3, {"delta": "", "M_X": "X", "M_Y": "Y", "M_Z": "Z", "M_X+Y+Z": "X+Y+Z"})
    return CatalogEntry("x1x2x3", {"p": p} if p else {}, spec, {(1, 2): (3, "transcendence degree 3")},
                        _nontrivial("block of dimension >= 3"), ("M_X", "M_Y", "M_Z", "M_X+Y+Z"))


def xyz(p: int = 0) -> CatalogEntry:
    field = _field(p)
    gens = {
        "M_X": UTMatrix.from_strings([["X", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]], field, 3),
        "M_Y": UTMatrix.from_strings([["1", "0", "0"], ["0", "Y", "0"], ["0", "0", "1"]], field, 3),
        "M_Z": UTMatrix.from_strings([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "Z"]], field, 3),
        "delta": UTMatrix.from_strings([["1", "1", "1"], ["0", "1", "1"], ["0", "0", "1"]], field, 3),
    }
    spec = GroupSpec(field, 3, 3, gens)
    two = (2, "rank-2 lamplighter block")
    return CatalogEntry("xyz", {"p": p} if p else {}, spec, {(1, 2): two, (2, 3): two, (1, 3): two},
                        _trivial_second("every block is a rank-2 wreath product"), ("M_X", "M_Y", "M_Z"))


def g_alpha(alpha, d: int = 2) -> CatalogEntry:
    _check_d(d)
    a = Fraction(alpha)
    if a == 0:
        raise CatalogError("alpha must be nonzero")
    xs = _var_names(d)
    alpha_str = str(a)
    entries = {"delta": "", f"M_{alpha_str}": alpha_str, **{f"M_{x}": x for x in xs}}
    spec = _two_by_two(_field(0), d, entries)
    if a in (1, -1):
        verdict = (_trivial_second("alpha is a root of unity: quotient of a rank-2 wreath product")
                   if d <= 2 else _nontrivial("block of dimension >= 3"))
    else:
        verdict = _nontrivial("dimension 2 block with a constant that is not a root of unity") if d >= 2 else None
    return CatalogEntry("g_alpha", {"alpha": a, "d": d}, spec, {(1, 2): (d, "free module in the variables")},
                        verdict, tuple(k for k in entries if k != "delta"))


def met_p(d: int, p: int = 0) -> CatalogEntry:
    _check_d(d, 2)
    field = _field(p)
    xs = _var_names(d)
    gens = {f"FM_{x}": UTMatrix.from_strings([[f"{x}^-1", "1"], ["0", x]], field, d) for x in xs}
    spec = GroupSpec(field, d, 2, gens)
    if p:
        verdict = (_nontrivial("char p, block of dimension >= 3") if d >= 3
                   else _trivial_second("char p, all blocks of dimension <= 2"))
    else:
        verdict = _nontrivial("block of dimension >= 3") if d >= 3 else None
    return CatalogEntry("met_p", {"d": d, "p": p}, spec, {(1, 2): (d, "free metabelian module")},
                        verdict, tuple(gens), lamp=None)


def lattice(d: int) -> CatalogEntry:
    """Z^d as diagonal 1x1 matrices; the base for plain lattice walks."""
    _check_d(d)
    field = _field(0)
    gens = {f"M_{x}": UTMatrix.from_strings([[x]], field, d) for x in _var_names(d)}
    return CatalogEntry("lattice", {"d": d}, GroupSpec(field, d, 1, gens), {},
                        ExpectedVerdict("Trivial", "AnyFiniteEntropyNondegenerate", "abelian"),
                        tuple(gens), lamp=None)


def one_relator_quotient(d: int = 3, p: int = 2, relation: str | None = None):
    """Lamplighter module modulo one relation, as a ModuleSpec (not a matrix group)."""
    from .dimension import ModuleSpec
    xs = _var_names(d)
    relation = relation or "1+" + "+".join(xs)
    return ModuleSpec.from_strings(_field(p), d, xs, relations=[relation])


BUILDERS: dict[str, Callable[..., CatalogEntry]] = {
    "lamplighter": lamplighter,
    "baumslag": baumslag,
    "g23x": g23x,
    "gx_x1_x2": gx_x1_x2,
    "lbs": lbs,
    "x1x2x3": x1x2x3,
    "xyz": xyz,
    "g_alpha": g_alpha,
    "met_p": met_p,
    "lattice": lattice,
}

SIGNATURES = {
    "lamplighter": "lamplighter(d,p)  p=0 for Q",
    "baumslag": "baumslag(d,p)",
    "g23x": "g23x",
    "gx_x1_x2": "gx_x1_x2[(p)]",
    "lbs": "lbs(d)",
    "x1x2x3": "x1x2x3[(p)]",
    "xyz": "xyz[(p)]",
    "g_alpha": "g_alpha(alpha,d)",
    "met_p": "met_p(d,p)  p=0 for the free metabelian group",
    "lattice": "lattice(d)  Z^d",
}


def list_entries() -> list[str]:
    return [SIGNATURES[k] for k in BUILDERS]


def _parse_param(tok: str):
    tok = tok.strip()
    try:
        return int(tok)
    except ValueError:
        try:
            return Fraction(tok)
        except ValueError as exc:
            raise CatalogError(f"bad parameter {tok!r}") from exc


def build(name: str, *params) -> CatalogEntry:
    """Build by name; ``name`` may carry its parameters, e.g. ``"lamplighter(3,2)"``."""
    m = re.fullmatch(r"\s*([A-Za-z_0-9]+?)\s*(?:\((.*)\))?\s*", name)
    if not m:
        raise CatalogError(f"cannot parse catalog name {name!r}")
    key, inner = m.group(1), m.group(2)
    if key not in BUILDERS:
        raise CatalogError(f"unknown catalog entry {key!r}; known: {', '.join(BUILDERS)}")
    args = list(params)
    if inner is not None and inner.strip():
        args = [_parse_param(t) for t in inner.split(",")] + args
    if key == "g_alpha" and args:
        args[0] = Fraction(args[0])
    try:
        return BUILDERS[key](*args)
    except TypeError as exc:
        raise CatalogError(f"bad parameters for {key}: {exc}") from exc


def default_measure(entry: CatalogEntry, kind: str = "uniform_symmetric") -> StepMeasure:
    names = entry.spec.names
    if kind == "uniform_symmetric":
        return StepMeasure.uniform([[(n, s)] for n in names for s in (1, -1)])
    if kind == "lazy_uniform":
        return StepMeasure.uniform([[(n, s)] for n in names for s in (1, -1)], lazy=0.5)
    if kind == "base_plus_lamp":
        if entry.lamp is None:
            raise CatalogError(f"{entry.label} has no lamp generator")
        words = [[(n, s)] for n in entry.base_generators for s in (1, -1)] + [[(entry.lamp, 1)]]
        return StepMeasure.uniform(words)
    raise CatalogError(f"unknown measure kind {kind!r}")
