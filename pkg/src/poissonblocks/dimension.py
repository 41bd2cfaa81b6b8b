"""k-dimension of modules over k[A]: span growth, exact shortcuts, wreath checks.

The span V_r of a module is the k-linear span of z*u where z is a product of
at most r action generators (or inverses) and u runs over the module
generators.  Its dimension grows like r^d with d the module's k-dimension.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .abelian import (
    MonomialCoordinates, NotMonomialError, has_short_relation, monomial_parts,
    rational_rank, relation_lattice,
)
from .errors import PoissonBlocksError, UnitRelationError
from .fields import CoefficientField
from .fingerprint import (
    Q_FINGERPRINT, FingerprintContext, PrimeFingerprintField, fingerprint_field,
    multiplication_matrix,
)
from .laurent import LaurentPoly, coordinate_map, new_basis, star_divide
from .linalg import RANK_PRIMES, DenseEchelon, SparseEchelon
from .parsing import parse_laurent, parse_rational
from .rational import RationalFunction

DEFAULT_RADII = (2, 4, 6, 8, 12)
TOLERANCE = 0.25
DEFAULT_RANK_BUDGET = 1500
# Independent evaluation runs per span table; each is a Schwartz-Zippel test.
SPAN_REPS = 1


class DimensionMismatchError(PoissonBlocksError):
    pass


@dataclass(frozen=True)
class ModuleSpec:
    field: CoefficientField
    nvars: int
    action_generators: tuple[RationalFunction, ...]
    module_generators: tuple[RationalFunction, ...] = ()
    relations: tuple[LaurentPoly, ...] = ()

    def __post_init__(self):
        if not self.module_generators:
            object.__setattr__(self, "module_generators",
                               (RationalFunction.one(self.field, self.nvars),))
        for phi in self.action_generators:
            if phi.is_zero():
                raise ValueError("action generators must be nonzero")
        for rel in self.relations:
            if rel.is_zero():
                raise ValueError("relations must be nonzero")

    @classmethod
    def from_strings(cls, field, nvars, actions, module=(), relations=()):
        return cls(field, nvars,
                   tuple(parse_rational(a, field, nvars) for a in actions),
                   tuple(parse_rational(u, field, nvars) for u in module),
                   tuple(parse_laurent(r, field, nvars) for r in relations))

    def to_json(self) -> dict:
        return {
            "char": self.field.characteristic,
            "vars": self.nvars,
            "action": [str(a) for a in self.action_generators],
            "module": [str(u) for u in self.module_generators],
            "relations": [str(r) for r in self.relations],
        }

    @classmethod
    def from_json(cls, obj) -> "ModuleSpec":
        field = CoefficientField(int(obj["char"]))
        return cls.from_strings(field, int(obj["vars"]), obj["action"],
                                obj.get("module", ()), obj.get("relations", ()))

    def nonconstant_actions(self) -> list[RationalFunction]:
        return [a for a in self.action_generators if not a.is_constant()]

    def all_monomial(self) -> bool:
        return all(a.is_monomial() for a in self.action_generators)


# ---------------------------------------------------------------------------
# span engines


def _variables_of(rf: RationalFunction) -> set[int]:
    out = set()
    for poly in (rf.num, rf.den):
        for e in poly.terms:
            out.update(i for i, k in enumerate(e) if k)
    return out


def _components(phis: Sequence[RationalFunction]) -> list[list[RationalFunction]]:
    """Group action generators into classes that share no variables."""
    groups: list[tuple[set[int], list[RationalFunction]]] = []
    for phi in phis:
        vs = _variables_of(phi)
        merged_vars, merged = set(vs), [phi]
        keep = []
        for gvars, members in groups:
            if gvars & vs:
                merged_vars |= gvars
                merged = members + merged
            else:
                keep.append((gvars, members))
        groups = keep + [(merged_vars, merged)]
    return [m for _, m in groups]


def monomial_ball_counts(vectors: Sequence[Sequence[int]], R: int) -> list[int]:
    """|{sum e_t v_t : sum |e_t| <= s}| for s = 0..R."""
    steps = set()
    for v in vectors:
        v = tuple(v)
        if any(v):
            steps.add(v)
            steps.add(tuple(-x for x in v))
    dim = len(vectors[0]) if vectors else 0
    seen = {(0,) * dim}
    frontier = set(seen)
    counts = [1]
    for _ in range(R):
        nxt = set()
        for x in frontier:
            for s in steps:
                y = tuple(a + b for a, b in zip(x, s))
                if y not in seen:
                    nxt.add(y)
        seen |= nxt
        frontier = nxt
        counts.append(len(seen))
    return counts


def _combine_filtrations(tables: list[list[int]], R: int) -> list[int]:
    """Dimension of the sum of tensor products of filtered pieces, levels 0..R."""
    total = np.zeros(R + 1, dtype=object)
    total[0] = 1
    for t in tables:
        t = list(t) + [t[-1]] * (R + 1 - len(t))
        delta = np.array([t[0]] + [t[s] - t[s - 1] for s in range(1, R + 1)], dtype=object)
        conv = np.zeros(R + 1, dtype=object)
        for i in range(R + 1):
            if total[i]:
                conv[i:] += total[i] * delta[: R + 1 - i]
        total = conv
    return [int(x) for x in np.cumsum(total)]


class _EvalSpan:
    """Randomized rank of V_s for s = 0..R via evaluation at random points.

    Characteristic 0 evaluates modulo a prime P < 2^26.  Characteristic p
    evaluates in GF(p^k) and ranks the F_p-coordinate vectors, which is the
    correct linear image for a char-p function field.
    """

    def __init__(self, field: CoefficientField, nvars: int, phis, gens, seed=0,
                 rank_budget=DEFAULT_RANK_BUDGET):
        self.field, self.nvars = field, nvars
        self.phis, self.gens = list(phis), list(gens)
        self.seed = seed
        self.rank_budget = rank_budget

    def _setup(self, npoints: int, rep: int):
        char = self.field.characteristic
        if char == 0:
            lin_p = RANK_PRIMES[rep % len(RANK_PRIMES)]
            fp = PrimeFingerprintField(lin_p)
        else:
            fp = fingerprint_field(char)
            lin_p = char
            if lin_p > RANK_PRIMES[0]:
                raise NotImplementedError("randomized span ranks need p < 2^26")
        rng = random.Random(f"span:{self.seed}:{rep}:{npoints}")
        return fp, lin_p, rng

    def _capacity(self, npoints, k, lin_p):
        if self.field.characteristic == 0:
            return npoints - 32
        bits = k * math.log2(lin_p) - 12
        return int((npoints * bits - 64) / math.log2(lin_p))

    def _evaluate(self, fp, rng, npoints):
        for _attempt in range(8):
            pts = [tuple(fp.random_nonzero(rng) for _ in range(self.nvars))
                   for _ in range(npoints)]
            ctx = _PointEvaluator(fp, pts)
            vals = [[ctx.eval(phi, j) for j in range(npoints)] for phi in self.phis]
            gvals = [[ctx.eval(u, j) for j in range(npoints)] for u in self.gens]
            if all(v is not None and v != fp.zero for row in vals for v in row) and \
                    all(v is not None for row in gvals for v in row):
                return vals, gvals
        raise PoissonBlocksError("could not find pole-free evaluation points")

    def _run(self, R: int, npoints: int, rep: int):
        fp, lin_p, rng = self._setup(npoints, rep)
        k = fp.k
        vals, gvals = self._evaluate(fp, rng, npoints)
        # Operators: for each phi and sign, per point a k x k matrix (or scalar).
        ops = []
        for row in vals:
            for sign in (1, -1):
                mats = []
                for v in row:
                    a = v if sign > 0 else fp.inv(v)
                    mats.append(multiplication_matrix(fp, a) if k > 1 else [[a]])
                ops.append(np.array(mats, dtype=np.int64))  # (J, k, k)
        init = np.array([[fp.coords(v) for v in row] for row in gvals], dtype=np.int64)
        ech = DenseEchelon(lin_p, npoints * k)
        frontier = ech.add(init.reshape(len(self.gens), npoints * k))
        ranks = [ech.rank]
        cap = self._capacity(npoints, k, lin_p)
        for _ in range(R):
            if ech.rank > self.rank_budget:
                break
            if frontier.shape[0] == 0:
                ranks.append(ech.rank)
                continue
            f3 = frontier.reshape(frontier.shape[0], npoints, k)
            cands = []
            for op in ops:
                if k == 1:
                    c = (f3[:, :, 0] * op[:, 0, 0][None, :]) % lin_p
                else:
                    c = np.einsum("rjc,jkc->rjk", f3, op) % lin_p
                cands.append(c.reshape(frontier.shape[0], npoints * k))
            frontier = ech.add(np.vstack(cands))
            ranks.append(ech.rank)
            if ech.rank > cap:
                return ranks, True
        return ranks, ranks[-1] > cap

    def table(self, R: int) -> list[int]:
        npoints = 256 if self.field.characteristic == 0 else 8
        while True:
            best, overflow = None, False
            for rep in range(SPAN_REPS):
                ranks, over = self._run(R, npoints, rep)
                overflow |= over
                best = ranks if best is None else [max(a, b) for a, b in zip(best, ranks)]
            if not overflow:
                return best
            need = max(best) * 1.25 + 64
            npoints = max(2 * npoints, 1 << math.ceil(math.log2(need)))


class _PointEvaluator:
    def __init__(self, fp, points):
        self.fp = fp
        self.points = points
        self._cache: dict = {}

    def _pow(self, j, i, e):
        key = (j, i, e)
        v = self._cache.get(key)
        if v is None:
            v = self.fp.pow(self.points[j][i], e)
            self._cache[key] = v
        return v

    def eval_poly(self, poly: LaurentPoly, j):
        fp = self.fp
        total = fp.zero
        for e, c in poly.terms.items():
            t = fp.from_scalar(c)
            if t is None:
                return None
            for i, k in enumerate(e):
                if k:
                    t = fp.mul(t, self._pow(j, i, k))
            total = fp.add(total, t)
        return total

    def eval(self, rf: RationalFunction, j):
        n = self.eval_poly(rf.num, j)
        if rf.den.is_one():
            return n
        d = self.eval_poly(rf.den, j)
        if n is None or d is None or d == self.fp.zero:
            return None
        return self.fp.mul(n, self.fp.inv(d))


class _QuotientSpan:
    """Exact ranks in k[Z^d]/(v) using star-division normal forms.

    The action generators must be monomials (times constants); constants are
    irrelevant for spans.  The basis change from :func:`new_basis` gives the
    relation a unique top and bottom monomial along the first coordinate.
    """

    def __init__(self, m: ModuleSpec):
        if len(m.relations) != 1:
            raise NotImplementedError("only a single relation is supported")
        if not m.all_monomial():
            raise NotImplementedError("relations need monomial action generators")
        rel = m.relations[0]
        if len(rel) < 2:
            raise UnitRelationError("a single-monomial relation generates the unit ideal")
        self.field = m.field
        self.T = coordinate_map(new_basis(list(rel.terms)))
        self.v = rel.transform_exponents(self.T)
        self.steps = [monomial_parts(a)[1] for a in m.action_generators]
        self.gens = []
        for u in m.module_generators:
            if not u.is_laurent():
                raise NotImplementedError("module generators must be Laurent polynomials")
            self.gens.append(self.normal_form(u.num.transform_exponents(self.T)))

    def normal_form(self, u_y: LaurentPoly) -> LaurentPoly:
        return star_divide(u_y, self.v, 0)[1]

    def _apply(self, vec):
        return tuple(sum(r[k] * vec[k] for k in range(len(vec))) for r in self.T)

    def table(self, R: int) -> list[int]:
        ech = SparseEchelon(self.field)
        dim = len(self.T)
        origin = (0,) * dim
        nf = {origin: self.gens}
        for g in self.gens:
            ech.add(dict(g.terms))
        ranks = [ech.rank]
        moves = []
        for s in self.steps:
            if any(s):
                moves.append(tuple(s))
                moves.append(tuple(-x for x in s))
        frontier = [origin]
        for _ in range(R):
            nxt = []
            for x in frontier:
                for mv in moves:
                    y = tuple(a + b for a, b in zip(x, mv))
                    if y in nf:
                        continue
                    shift = self._apply(mv)
                    forms = [self.normal_form(g.shift(shift)) for g in nf[x]]
                    nf[y] = forms
                    nxt.append(y)
                    for f in forms:
                        ech.add(dict(f.terms))
            frontier = nxt
            ranks.append(ech.rank)
        return ranks


def span_table(m: ModuleSpec, R: int, seed: int = 0,
               rank_budget: int = DEFAULT_RANK_BUDGET) -> list[int]:
    """Ranks of V_s for s = 0..R (the list may stop early past the rank budget)."""
    if m.relations:
        return _QuotientSpan(m).table(R)
    phis = m.nonconstant_actions()
    gens = [u for u in m.module_generators if not u.is_zero()]
    if not gens:
        return [0] * (R + 1)
    if not phis:
        return [_scalar_rank(m.field, gens)] * (R + 1)
    cyclic_constant = len(gens) == 1 and gens[0].is_constant()
    if cyclic_constant:
        tables = []
        for comp in _components(phis):
            if all(c.is_monomial() for c in comp):
                tables.append(monomial_ball_counts([monomial_parts(c)[1] for c in comp], R))
            else:
                one = RationalFunction.one(m.field, m.nvars)
                tables.append(_EvalSpan(m.field, m.nvars, comp, [one], seed,
                                        rank_budget).table(R))
        combined = _combine_filtrations(tables, R)
        shortest = min(len(t) for t in tables)
        return combined[:shortest]
    return _EvalSpan(m.field, m.nvars, phis, gens, seed, rank_budget).table(R)


def _scalar_rank(field, gens) -> int:
    """Rank of a list of functions (no action): evaluation rank."""
    ev = _EvalSpan(field, gens[0].nvars, [], gens)
    return ev.table(0)[0]


def span_dim(m: ModuleSpec, r: int, seed: int = 0) -> int:
    if r < 0:
        raise ValueError("radius must be non-negative")
    return span_table(m, r, seed, rank_budget=10**9)[r]


# ---------------------------------------------------------------------------
# growth fit and shortcuts


def fit_growth(radii: Sequence[int], ranks: Sequence[int]) -> tuple[float, float]:
    """(corrected exponent, plain log-log slope).

    The corrected fit regresses log rank on (log r, 1, 1/r); the 1/r column
    absorbs the lower-order terms of a degree-d polynomial count, which
    otherwise bias the plain slope low at small radii.
    """
    r = np.asarray(radii, dtype=float)
    y = np.log(np.asarray(ranks, dtype=float))
    plain = float(np.polyfit(np.log(r), y, 1)[0])
    if len(r) < 3:
        return plain, plain
    A = np.column_stack([np.log(r), np.ones_like(r), 1.0 / r])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[0]), plain


def _rank_over(fp, rows) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != fp.zero), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = fp.inv(rows[rank][col])
        for i in range(len(rows)):
            if i != rank and rows[i][col] != fp.zero:
                f = fp.mul(rows[i][col], inv)
                rows[i] = [fp.sub(a, fp.mul(f, b)) for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def trdeg(phis: Sequence[RationalFunction], seed: int = 0, attempts: int = 6) -> int:
    """Rank of the Jacobian (d phi_i / d X_j) at a random point.

    In characteristic 0 this is the transcendence degree with high
    probability.  In characteristic p it is only a lower bound (X^p has zero
    derivative), so callers cross-check it against span growth.
    """
    phis = list(phis)
    if not phis:
        return 0
    field, nvars = phis[0].field, phis[0].nvars
    derivs = [[phi.derivative(j) for j in range(nvars)] for phi in phis]
    best = 0
    for a in range(attempts):
        ctx = FingerprintContext(field, nvars, seed=seed * 1000 + a, npoints=1)
        vals = [[ctx.eval(dphi, 0) for dphi in row] for row in derivs]
        if any(v is None for row in vals for v in row):
            continue
        best = max(best, _rank_over(ctx.fp, vals))
        if best == min(len(phis), nvars) or a >= 1:
            return best
    return best


def principal_quotient_dim(d: int, relation: LaurentPoly, verify: bool = True,
                           radii=(2, 4, 6, 8, 12)) -> int:
    """Dimension of k[Z^d]/(relation): always d - 1 for a non-unit relation."""
    if relation.is_zero() or len(relation) < 2:
        raise UnitRelationError("relation must have at least two monomials")
    if relation.nvars != d:
        raise ValueError("relation must live in d variables")
    result = d - 1
    if verify and d <= 3:
        field = relation.field
        m = ModuleSpec(field, d,
                       tuple(RationalFunction.variable(field, d, i) for i in range(d)),
                       relations=(relation,))
        table = _QuotientSpan(m).table(max(radii))
        ranks = [table[r] for r in radii]
        if ranks[-1] == ranks[0]:
            observed = 0
        else:
            observed = round(fit_growth(radii, ranks)[0])
        if observed != result:
            raise DimensionMismatchError(
                f"span growth suggests dimension {observed}, expected {result}")
    return result


@dataclass
class DimensionReport:
    span_table: list[tuple[int, int]]
    fitted_exponent: float
    plain_slope: float
    exact_shortcuts: dict
    dimension: int | None
    provenance: str
    ambiguous: bool = False
    candidates: tuple[int, ...] = ()
    fit_agrees: bool = True
    notes: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "span_table": [list(x) for x in self.span_table],
            "fitted_exponent": round(self.fitted_exponent, 6),
            "plain_slope": round(self.plain_slope, 6),
            "exact_shortcuts": self.exact_shortcuts,
            "dimension": self.dimension,
            "provenance": self.provenance,
            "ambiguous": self.ambiguous,
            "candidates": list(self.candidates),
            "fit_agrees": self.fit_agrees,
            "notes": self.notes,
        }


def _lattice_rank(phis) -> int:
    vecs = [monomial_parts(p)[1] for p in phis]
    return rational_rank(vecs) if vecs else 0


def dimension_estimate(m: ModuleSpec, r_grid: Sequence[int] = DEFAULT_RADII, seed: int = 0,
                       tolerance: float = TOLERANCE,
                       rank_budget: int = DEFAULT_RANK_BUDGET) -> DimensionReport:
    r_grid = sorted(set(int(r) for r in r_grid))
    if len(r_grid) < 3 or r_grid[0] < 1:
        raise ValueError("need at least three increasing positive radii")
    table = span_table(m, max(r_grid), seed, rank_budget)
    notes = []
    grid = [r for r in r_grid if r < len(table)]
    if len(grid) < len(r_grid):
        notes.append(f"rank budget reached; table stops at radius {len(table) - 1}")
        if len(grid) < 3:
            grid = list(range(1, len(table)))
    ranks = [table[r] for r in grid]
    if len(grid) < 2 or ranks[-1] == ranks[0]:
        fitted, plain = 0.0, 0.0
    else:
        fitted, plain = fit_growth(grid, ranks)
    nearest = max(0, round(fitted))
    within = abs(fitted - nearest) <= tolerance

    shortcuts: dict = {"trdeg": None, "quotient_rule": None, "free_module": None}
    dimension, provenance = None, "SpanFit"
    if m.relations:
        if m.all_monomial() and len(m.relations) == 1:
            ambient = _lattice_rank(m.action_generators)
            if ambient == m.nvars:
                q = principal_quotient_dim(ambient, m.relations[0], verify=False)
                shortcuts["quotient_rule"] = q
                dimension, provenance = q, "QuotientRule"
    elif m.all_monomial():
        lr = _lattice_rank(m.action_generators)
        shortcuts["free_module"] = lr
        dimension, provenance = lr, "FreeModule"
    else:
        td = trdeg(m.action_generators, seed)
        shortcuts["trdeg"] = td
        if m.field.characteristic == 0:
            dimension, provenance = td, "Trdeg"
        elif within and td == nearest:
            dimension, provenance = td, "Trdeg"
        else:
            notes.append(f"char {m.field.characteristic} Jacobian rank {td} is only a lower bound")

    ambiguous = False
    candidates: tuple[int, ...] = ()
    if dimension is None:
        if within:
            dimension = nearest
        else:
            ambiguous = True
            candidates = (math.floor(fitted), math.ceil(fitted))
    fit_agrees = within and dimension == nearest
    return DimensionReport(
        span_table=[(r, table[r]) for r in grid],
        fitted_exponent=fitted, plain_slope=plain, exact_shortcuts=shortcuts,
        dimension=dimension, provenance=provenance, ambiguous=ambiguous,
        candidates=candidates, fit_agrees=fit_agrees, notes=notes)


# ---------------------------------------------------------------------------
# wreath-product certificate


@dataclass
class WreathCheck:
    ok: bool
    violations: list[str]
    details: dict

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "violations": self.violations, "details": self.details,
                "scope": "within bounds"}


def _dedupe(values):
    out = []
    for v in values:
        if not any(v.exact_equal(w) for w in out):
            out.append(v)
    return out


def is_wreath_block(report, m: ModuleSpec, exponent_bound: int = 3,
                    radii: Sequence[int] = (1, 2, 3, 4, 6)) -> WreathCheck:
    """Bounded certificate that the block is Z^2 wr Z (char 0) or Z^2 wr Z/p.

    (a) no short multiplicative relation among the distinct non-constant
        action values;
    (b) the group A generated by all action values is free abelian of rank 2
        modulo torsion;
    (c) the cyclic module k[A]*1 has no annihilator beyond torsion: the span
        at each tested radius equals the number of distinct elements of the
        radius ball in A modulo torsion.

    ``report`` (a BlockReport, optional) is only used for context.
    """
    del report
    violations: list[str] = []
    details: dict = {}
    phis = list(m.action_generators)
    nonconst = _dedupe([p for p in phis if not p.is_constant()])
    monomial = all(p.is_monomial() for p in phis)

    # (a)
    if nonconst:
        if all(p.is_monomial() for p in nonconst):
            lat = relation_lattice(nonconst)
            rel = has_short_relation(lat, len(nonconst), exponent_bound)
        else:
            rel = _bounded_relation_search(nonconst, exponent_bound)
        if rel is not None:
            violations.append(f"(a) relation {list(rel)} among non-constant values")
            details["relation"] = list(rel)

    # (b)
    if monomial:
        mc = MonomialCoordinates.for_values(phis)
        free = [mc.coords(p)[0] for p in phis]
        rank = rational_rank(free)
    else:
        rank = len(nonconst) - len(_bounded_relations_all(nonconst, exponent_bound))
    details["rank_mod_torsion"] = rank
    if rank != 2:
        violations.append(f"(b) value group has rank {rank} modulo torsion, expected 2")

    # (c)
    if not m.relations and len(m.module_generators) == 1 and m.module_generators[0].is_constant():
        R = max(radii)
        table = span_table(m, R)
        if monomial:
            counts = monomial_ball_counts(free, R)
        else:
            counts = _fingerprint_ball_counts(nonconst, R)
        mismatch = [(r, table[r], counts[r]) for r in radii if table[r] != counts[r]]
        details["span_vs_ball"] = [(r, table[r], counts[r]) for r in radii]
        if mismatch:
            violations.append(
                f"(c) annihilator detected: span {mismatch[0][1]} vs {mismatch[0][2]} "
                f"group elements at radius {mismatch[0][0]}")
    else:
        violations.append("(c) module is not cyclic over the constant generator")
    return WreathCheck(not violations, violations, details)


def _fingerprint_values(phis, npoints=2):
    field, nvars = phis[0].field, phis[0].nvars
    ctx = FingerprintContext(field, nvars, seed=7, npoints=npoints)
    return ctx, [[ctx.eval(p, j) for j in range(npoints)] for p in phis]


def _bounded_relations_all(phis, bound):
    ctx, vals = _fingerprint_values(phis)
    fp = ctx.fp
    found = []
    m = len(phis)
    if (2 * bound + 1) ** m > 200_000:
        return found
    for e in itertools.product(range(-bound, bound + 1), repeat=m):
        if not any(e):
            continue
        ok = True
        for j in range(ctx.npoints):
            acc = fp.one
            for k, ek in enumerate(e):
                if ek:
                    acc = fp.mul(acc, fp.pow(vals[k][j], ek))
            if acc != fp.one:
                ok = False
                break
        if ok:
            found.append(e)
    return [tuple(v) for v in _independent(found)]


def _independent(vectors):
    out = []
    for v in vectors:
        if rational_rank(out + [v]) > len(out):
            out.append(v)
    return out


def _bounded_relation_search(phis, bound):
    rels = _bounded_relations_all(phis, bound)
    return rels[0] if rels else None


def _fingerprint_ball_counts(phis, R):
    ctx, vals = _fingerprint_values(phis, npoints=1)
    fp = ctx.fp
    gens = []
    for row in vals:
        gens.append(row[0])
        gens.append(fp.inv(row[0]))
    seen = {fp.one}
    frontier = {fp.one}
    counts = [1]
    for _ in range(R):
        nxt = set()
        for x in frontier:
            for g in gens:
                y = fp.mul(x, g)
                if y not in seen:
                    nxt.add(y)
        seen |= nxt
        frontier = nxt
        counts.append(len(seen))
    return counts


__all__ = [
    "ModuleSpec", "DimensionReport", "WreathCheck", "span_dim", "span_table",
    "dimension_estimate", "trdeg", "principal_quotient_dim", "is_wreath_block",
    "fit_growth", "monomial_ball_counts", "DEFAULT_RADII", "Q_FINGERPRINT",
    "NotMonomialError",
]
