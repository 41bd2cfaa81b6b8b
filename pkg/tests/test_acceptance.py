"""Acceptance suite.

Each test carries ``criterion(n)``; the terminal summary prints one PASS/FAIL
line per criterion.  Expected values are either published ones (the dimension
and verdict tables) or come from independent oracles in ``oracles.py`` and
closed forms.
"""

import math

import pytest

import test_properties as props
from oracles import partial_return_sum_fft, return_probs_direct_1d, return_probs_direct_2d
from poissonblocks.blocks import decompose, valid_wrt
from poissonblocks.catalog import build, default_measure, one_relator_quotient
from poissonblocks.dimension import dimension_estimate
from poissonblocks.matrices import TOrder, eval_word
from poissonblocks.pipeline import analyze
from poissonblocks.recurrent import recurrent_measure_stages
from poissonblocks.walks import (WalkConfig, cautiousness_probe, exact_return_probabilities,
                                 simulate, strong_transience_probe)

c = pytest.mark.criterion


def lattice(d):
    e = build(f"lattice({d})")
    return e.spec, default_measure(e)


# ---------------------------------------------------------------------------
# 1. dimension table

DIMENSIONS = ([(f"lamplighter({d},{p})", d) for d in (1, 2, 3) for p in (2, 3)]
              + [(f"baumslag({d},{p})", d) for d in (1, 2, 3) for p in (2, 3)]
              + [("g23x", 1), ("g_alpha(2,2)", 2)])


def _check_report(rep, expected):
    assert rep.dimension == expected and not rep.ambiguous
    assert abs(rep.fitted_exponent - expected) <= 0.25
    shortcuts = [v for v in rep.exact_shortcuts.values() if v is not None]
    assert shortcuts and all(v == expected for v in shortcuts)
    ranks = [k for _, k in rep.span_table]
    assert ranks == sorted(ranks)


@c(1)
@pytest.mark.parametrize("name,expected", DIMENSIONS)
def test_c1_dimension_table(name, expected):
    report = decompose(build(name).spec, 8)
    assert report.valid_pairs() == [(1, 2)]
    _check_report(dimension_estimate(report.module_spec((1, 2))), expected)


@c(1)
def test_c1_one_relator_quotient():
    _check_report(dimension_estimate(one_relator_quotient(3, 2)), 2)


# ---------------------------------------------------------------------------
# 2. block decomposition of xyz


@c(2)
def test_c2_xyz_blocks():
    spec = build("xyz").spec
    report = decompose(spec, 8)
    assert sorted(report.valid_pairs()) == [(1, 2), (1, 3), (2, 3)]
    for (i, j) in report.valid_pairs():
        status = report.pairs[(i, j)]
        assert len(status.witness) <= 8 and not status.fingerprint_only
        w = eval_word(spec, status.witness)
        assert w.is_unipotent() and not w.entry(i, j).is_zero()
        assert valid_wrt(w, i, j, TOrder.U())
        # phi straight from the printed diagonals, not from the block code
        printed = {str(g.entry(i, i) / g.entry(j, j)) for g in spec.generators.values()}
        assert {str(v) for _, v in report.phi_values[(i, j)]} == printed


# ---------------------------------------------------------------------------
# 3. verdict table

VERDICTS = [
    ("lamplighter(3,2)", "Nontrivial", None), ("lamplighter(3,3)", "Nontrivial", None),
    ("lamplighter(2,2)", "Trivial", "CenteredSecondMoment"),
    ("lamplighter(2,3)", "Trivial", "CenteredSecondMoment"),
    ("baumslag(2,2)", "Trivial", "CenteredSecondMoment"),
    ("baumslag(2,3)", "Trivial", "CenteredSecondMoment"),
    ("baumslag(3,2)", "Nontrivial", None), ("baumslag(3,3)", "Nontrivial", None),
    ("g23x", "Trivial", None), ("x1x2x3", "Nontrivial", None), ("xyz", "Trivial", None),
    ("lbs(2)", "Nontrivial", None), ("g_alpha(2,2)", "Nontrivial", None),
    ("g_alpha(-1,2)", "Trivial", None),
]


@c(3)
@pytest.mark.parametrize("name,outcome,moment", VERDICTS)
def test_c3_verdict_table(name, outcome, moment):
    v = analyze(build(name).spec).verdict
    assert v.outcome.value == outcome
    if moment:
        assert v.moment_class.value == moment
    trail = v.citation_trail()
    assert trail and len(trail) == len(v.basis)


@c(3)
def test_c3_root_of_unity_path():
    v = analyze(build("g_alpha(-1,2)").spec).verdict
    assert [b.rule for b in v.basis] == ["root_of_unity"]
    assert "roots of unity" in v.citation_trail()[0]


# ---------------------------------------------------------------------------
# 4. simulation signatures


@c(4)
def test_c4a_range_z3():
    spec, mu = lattice(3)
    ws = simulate(WalkConfig(spec, mu, 10_000, 200, seed=41, checkpoints=[10_000], project=True))
    assert 0.61 <= ws.range[10_000] / 10_000 <= 0.71


@c(4)
def test_c4b_range_z2_decreasing():
    spec, mu = lattice(2)
    cps = [100, 1000, 10_000]
    ws = simulate(WalkConfig(spec, mu, 10_000, 200, seed=42, checkpoints=cps, project=True))
    ratios = [ws.range[t] / t for t in cps]
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[2] < 0.45


def _returns_match_oracle(d, walkers, seed, lo, hi):
    spec, mu = lattice(d)
    probe = strong_transience_probe(WalkConfig(spec, mu, 200, walkers, seed=seed))
    assert lo <= probe["fitted_exponent"] <= hi
    exact = exact_return_probabilities(spec, mu, 50)
    for t in range(1, 51):
        got = probe["return_freq"][t] or 0.0
        if t % 2:
            assert exact[t] == 0.0 and got == 0.0
        else:
            assert abs(got - exact[t]) / exact[t] < 0.05, t


@c(4)
def test_c4c_return_decay_z():
    _returns_match_oracle(1, 200_000, 43, 0.4, 0.6)


@c(4)
def test_c4c_return_decay_z3():
    # ~9000 returns at t = 50, so each even cell sits well inside 5%
    _returns_match_oracle(3, 5_000_000, 44, 1.3, 1.7)


@c(4)
def test_c4c_exact_oracle_is_closed_form():
    spec, mu = lattice(3)
    exact = exact_return_probabilities(spec, mu, 6)
    # returns in two steps: 1/6; in four steps: 90 / 6^4 closed walks
    assert exact[2] == pytest.approx(1 / 6) and exact[4] == pytest.approx(90 / 6**4)


# ---------------------------------------------------------------------------
# 5. delta-rank separation


def _delta_rank(name, seed):
    e = build(name)
    cfg = WalkConfig(e.spec, default_measure(e, "base_plus_lamp"), 10_000, 200, seed=seed,
                     checkpoints=[10_000])
    ws = simulate(cfg, delta=([], ["delta"]), stats=["deltarank"])
    return ws.delta_rank[10_000] / 10_000, ws.confidence["delta_rank"][10_000] / 10_000


@c(5)
def test_c5_delta_rank_linear_on_z3():
    ratio, se = _delta_rank("lamplighter(3,2)", 51)
    assert se < 0.02
    assert ratio >= 0.2, f"delta_rank/n = {ratio:.4f}"


@c(5)
def test_c5_delta_rank_sublinear_on_z2():
    ratio, se = _delta_rank("lamplighter(2,2)", 52)
    assert se < 0.02
    assert ratio <= 0.08, f"delta_rank/n = {ratio:.4f}"


# ---------------------------------------------------------------------------
# 6. cautiousness


@c(6)
def test_c6_cautiousness_z2():
    spec, mu = lattice(2)
    rows = cautiousness_probe(WalkConfig(spec, mu, 4096, 4000, seed=61,
                                         checkpoints=[256, 1024, 4096]), epsilons=[1.0])
    probs = [r["prob"] for r in rows]
    assert all(p >= 0.1 for p in probs)
    assert max(probs) <= 2 * min(probs)


# ---------------------------------------------------------------------------
# 7. property suites (the same functions as tests/test_properties.py)

test_c7_ring_axioms = c(7)(props.test_ring_axioms)
test_c7_star_divide = c(7)(props.test_star_divide_reconstructs)
test_c7_new_basis = c(7)(props.test_new_basis_separates_and_is_unimodular)
test_c7_NT_closure = c(7)(props.test_NT_closure)
test_c7_randomized_equality = c(7)(props.test_randomized_equality_agrees_with_exact)
test_c7_subadditivity = c(7)(props.test_delta_rank_subadditive)
test_c7_determinism = c(7)(props.test_pipeline_determinism)


# ---------------------------------------------------------------------------
# 8. recurrent-measure stages


@c(8)
@pytest.mark.parametrize("dim", [1, 2])
def test_c8_recurrent_stages(dim):
    stages = recurrent_measure_stages(dim, 2)
    assert len(stages) == 2
    assert stages[1].N >= 2 * stages[0].N
    assert stages[1].a == stages[0].b / 2
    for s in stages:
        assert s.N * s.b <= 0.5
        assert s.inequalities() == {"N_b_le_half": True, "half_partial_sum_ge_n": True}
        half = 0.5 * partial_return_sum_fft(s.measure, dim, s.N)
        assert half >= s.n and half == pytest.approx(s.partial_sum, rel=1e-9)
        # N is the first admissible time
        if s.N > max(1, 2 * (stages[0].N if s.n == 2 else 0)):
            assert 0.5 * partial_return_sum_fft(s.measure, dim, s.N - 1) < s.n


@c(8)
def test_c8_fft_oracle_matches_direct_convolution():
    (s1, s2) = recurrent_measure_stages(1, 2)
    for s in (s1, s2):
        direct = return_probs_direct_1d(s.measure, s.N)
        assert 0.5 * direct[1:].sum() == pytest.approx(s.partial_sum, rel=1e-12)
    (t1,) = recurrent_measure_stages(2, 1)
    direct = return_probs_direct_2d(t1.measure, t1.N)
    assert 0.5 * direct[1:].sum() == pytest.approx(t1.partial_sum, rel=1e-12)
    assert math.isclose(0.5 * direct[1:].sum(),
                        0.5 * partial_return_sum_fft(t1.measure, 2, t1.N), rel_tol=1e-12)
