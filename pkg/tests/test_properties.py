"""Randomized property suites.

Sizes follow the acceptance targets: 10^3 ring triples, 10^3 division and
basis instances, 500 matrix instances, 10^4 equality pairs.
"""

import json
import math

import sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from poissonblocks.catalog import build, default_measure
from poissonblocks.cli import main
from poissonblocks.fields import CoefficientField
from poissonblocks.fingerprint import FingerprintContext
from poissonblocks.laurent import LaurentPoly, basis_coordinates, new_basis, star_divide
from poissonblocks.matrices import TOrder, UTMatrix, eval_word, in_NT, invert_word
from poissonblocks.rational import RationalFunction, rf_equal
from poissonblocks.walks import WalkConfig, simulate

FIELDS = [CoefficientField.rationals(), CoefficientField.prime(5)]
NVARS = 2


def heavy(n):
    return settings(max_examples=n, deadline=None, derandomize=True,
                    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])


@st.composite
def laurent(draw, field=None, lo=-3, hi=3, max_terms=5, nvars=NVARS):
    field = field or draw(st.sampled_from(FIELDS))
    exps = st.tuples(*[st.integers(lo, hi)] * nvars)
    terms = draw(st.dictionaries(exps, st.integers(-6, 6), max_size=max_terms))
    return LaurentPoly(field, nvars, terms)


@st.composite
def triples(draw):
    f = draw(st.sampled_from(FIELDS))
    return tuple(draw(laurent(field=f)) for _ in range(3))


@heavy(1000)
@given(triples())
def test_ring_axioms(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a and a + b == b + a
    assert (a - a).is_zero() and a * LaurentPoly.one(a.field, NVARS) == a
    assert all(c != 0 for c in (a * b).terms.values())


@st.composite
def division_instances(draw):
    f = draw(st.sampled_from(FIELDS))
    axis = draw(st.integers(0, NVARS - 1))
    m = draw(st.integers(-2, 1))
    M = draw(st.integers(m, m + 3))

    def mono(level):
        e = [draw(st.integers(-2, 2)) for _ in range(NVARS)]
        e[axis] = level
        return tuple(e)

    nonzero = st.integers(1, 4) if f.characteristic else st.integers(-4, 4).filter(bool)
    terms = {mono(M): draw(nonzero)}
    if m < M:
        terms[mono(m)] = draw(nonzero)
    for _ in range(draw(st.integers(0, 3)) if M - m >= 2 else 0):
        terms.setdefault(mono(draw(st.integers(m + 1, M - 1))), draw(nonzero))
    v = LaurentPoly(f, NVARS, terms)
    u = draw(laurent(field=f, lo=-5, hi=5, max_terms=8))
    return u, v, axis


@heavy(1000)
@given(division_instances())
def test_star_divide_reconstructs(inst):
    u, v, axis = inst
    t, w = star_divide(u, v, axis)
    assert u == v * t + w
    m, M = v.axis_range(axis)
    if m < M:
        assert all(m <= e[axis] < M for e in w.terms)
    else:
        assert w.is_zero()


@st.composite
def point_sets(draw):
    d = draw(st.integers(1, 4))
    S = draw(st.integers(0, 9))
    pts = draw(st.lists(st.tuples(*[st.integers(-S, S)] * d), min_size=1, max_size=50))
    return pts


@heavy(1000)
@given(point_sets())
def test_new_basis_separates_and_is_unimodular(W):
    basis = new_basis(W)
    assert abs(sympy.Matrix(basis).det()) == 1
    distinct = set(W)
    assert len({basis_coordinates(basis, w)[0] for w in distinct}) == len(distinct)


# ---------------------------------------------------------------------------
# N^T closure

Q = CoefficientField.rationals()


def _entry(draw):
    return RationalFunction.from_laurent(draw(laurent(field=Q, nvars=1, lo=-2, hi=2, max_terms=3)))


@st.composite
def nt_instances(draw):
    n = draw(st.sampled_from([3, 4]))
    order = draw(st.sampled_from([TOrder.row_major(n), TOrder.col_major(n)]))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    i, j = draw(st.sampled_from(pairs))
    zero, one = RationalFunction.zero(Q, 1), RationalFunction.one(Q, 1)

    def member():
        rows = [[one if a == b else zero for b in range(n)] for a in range(n)]
        for p in pairs:
            if not order.geq(p, (i, j)):
                rows[p[0] - 1][p[1] - 1] = _entry(draw)
        return UTMatrix(rows)

    def group_element():
        rows = [[zero] * n for _ in range(n)]
        for a in range(n):
            e = draw(st.integers(-2, 2))
            c = draw(st.sampled_from([1, -1, 2]))
            rows[a][a] = RationalFunction.from_laurent(LaurentPoly.monomial(Q, 1, (e,), c))
        for p in pairs:
            rows[p[0] - 1][p[1] - 1] = _entry(draw)
        return UTMatrix(rows)

    return order, (i, j), member(), member(), group_element()


@heavy(500)
@given(nt_instances())
def test_NT_closure(inst):
    order, (i, j), a, b, g = inst
    assert in_NT(a, i, j, order) and in_NT(b, i, j, order)
    assert in_NT(a @ b, i, j, order)
    assert in_NT(a.inverse(), i, j, order)
    assert in_NT(g.inverse() @ a @ g, i, j, order)


WORD_SPECS = {name: build(name).spec for name in ("lamplighter(2,2)", "xyz", "baumslag(2,3)")}


@st.composite
def words(draw):
    name = draw(st.sampled_from(sorted(WORD_SPECS)))
    gens = WORD_SPECS[name].names
    w = draw(st.lists(st.tuples(st.sampled_from(gens), st.sampled_from([1, -1])), max_size=20))
    return name, w


@heavy(200)
@given(words())
def test_word_times_inverse_is_identity(nw):
    name, w = nw
    spec = WORD_SPECS[name]
    assert eval_word(spec, list(w) + list(invert_word(w))).is_identity()


# ---------------------------------------------------------------------------
# randomized versus exact equality

CTX = {f.characteristic: FingerprintContext.for_field(f, NVARS, seed=1) for f in FIELDS}


def _poly(draw, f, lo, hi, k):
    p = draw(laurent(field=f, lo=lo, hi=hi, max_terms=k))
    return p if not p.is_zero() else LaurentPoly.one(f, NVARS)


@st.composite
def rf_pairs(draw):
    f = draw(st.sampled_from(FIELDS))
    p, q = _poly(draw, f, 0, 7, 4), _poly(draw, f, 0, 7, 4)
    kind = draw(st.sampled_from(["common_factor", "perturbed", "independent"]))
    a = RationalFunction(p, q)
    if kind == "common_factor":
        r = _poly(draw, f, 0, 6, 3)
        b = RationalFunction(p * r, q * r)
    elif kind == "perturbed":
        e = draw(st.tuples(st.integers(0, 7), st.integers(0, 7)))
        b = RationalFunction(p + LaurentPoly.monomial(f, NVARS, e), q)
    else:
        b = RationalFunction(_poly(draw, f, 0, 7, 4), _poly(draw, f, 0, 7, 4))
    return a, b


@heavy(10_000)
@given(rf_pairs())
def test_randomized_equality_agrees_with_exact(ab):
    a, b = ab
    ctx = CTX[a.field.characteristic]
    assert rf_equal(a, b, "randomized", ctx) == rf_equal(a, b, "exact")


# ---------------------------------------------------------------------------
# walk-level properties


def test_delta_rank_subadditive():
    e = build("lamplighter(3,2)")
    cfg = WalkConfig(e.spec, default_measure(e, "base_plus_lamp"), 600, 200, seed=21,
                     checkpoints=[200, 400, 600])
    ws = simulate(cfg, delta=([], ["delta"]), stats=["deltarank"])
    m, se = ws.delta_rank, ws.confidence["delta_rank"]
    for t, s in [(200, 200), (200, 400), (400, 200)]:
        slack = 3 * math.sqrt(se[t] ** 2 + se[s] ** 2 + se[t + s] ** 2)
        assert m[t + s] <= m[t] + m[s] + slack


def test_pipeline_determinism(tmp_path, capsys):
    digests = []
    for sub in ("first", "second"):
        out = tmp_path / sub
        assert main(["pipeline", "catalog:lamplighter(3,2)", "--n", "500", "--walkers", "20",
                     "--seed", "13", "--out", str(out)]) == 0
        digests.append(json.loads((out / "manifest.json").read_text())["outputs"])
    capsys.readouterr()
    assert digests[0] == digests[1] and digests[0]
