"""Verdict rules, the root-of-unity check and catalog metadata."""

from fractions import Fraction

import pytest

from poissonblocks.blocks import decompose
from poissonblocks.catalog import build, default_measure, list_entries
from poissonblocks.classify import MomentClass, Outcome, classify, root_of_unity_check
from poissonblocks.dimension import DimensionReport
from poissonblocks.matrices import GroupSpec
from poissonblocks.pipeline import analyze


def fake_dim(d, ambiguous=False):
    return DimensionReport(span_table=[], fitted_exponent=float(d), plain_slope=float(d),
                           exact_shortcuts={}, dimension=None if ambiguous else d,
                           provenance="SpanFit", ambiguous=ambiguous,
                           candidates=(d, d + 1) if ambiguous else (), fit_agrees=not ambiguous,
                           notes=[])


@pytest.mark.parametrize("alpha,expected", [(-1, True), (1, True), (2, False),
                                            (Fraction(1, 2), False)])
def test_root_of_unity(alpha, expected):
    assert root_of_unity_check(alpha) is expected


def test_root_of_unity_rejects_zero():
    with pytest.raises(ValueError):
        root_of_unity_check(0)


@pytest.mark.parametrize("name,outcome,moment", [
    ("lamplighter(3,2)", "Nontrivial", "AnyFiniteEntropyNondegenerate"),
    ("baumslag(2,2)", "Trivial", "CenteredSecondMoment"),
    ("xyz", "Trivial", "CenteredSecondMoment"),
    ("g_alpha(2,2)", "Nontrivial", "AnyFiniteEntropyNondegenerate"),
    ("lamplighter(1,3)", "Trivial", "CenteredFirstMoment"),
    ("met_p(2,3)", "Trivial", "CenteredSecondMoment"),
])
def test_pipeline_examples(name, outcome, moment):
    v = analyze(build(name).spec).verdict
    assert (v.outcome.value, v.moment_class.value) == (outcome, moment)
    assert len(v.basis) >= 1 and all(b.to_json()["citation"] for b in v.basis)


def test_ambiguous_dimension_gives_unknown():
    spec = build("lamplighter(2,2)").spec
    blocks = decompose(spec, 3)
    v = classify(spec, blocks, {(1, 2): fake_dim(2, ambiguous=True)})
    assert v.outcome == Outcome.UNKNOWN and v.ambiguity


def test_char_p_is_total():
    spec = build("lamplighter(2,2)").spec
    blocks = decompose(spec, 3)
    for d in range(5):
        v = classify(spec, blocks, {(1, 2): fake_dim(d)})
        assert v.outcome in (Outcome.TRIVIAL, Outcome.NONTRIVIAL)


def test_adding_a_block_keeps_nontrivial():
    spec = build("xyz").spec
    blocks = decompose(spec, 8)
    base = {(1, 2): fake_dim(3), (2, 3): fake_dim(2), (1, 3): fake_dim(2)}
    assert classify(spec, blocks, base).outcome == Outcome.NONTRIVIAL
    assert classify(spec, blocks, {**base, (1, 3): fake_dim(1)}).outcome == Outcome.NONTRIVIAL


def test_char0_dim2_without_pattern_is_conjectural():
    spec = build("xyz").spec
    blocks = decompose(spec, 8)
    dims = {p: fake_dim(2) for p in blocks.valid_pairs()}
    v = classify(spec, blocks, dims, wreath_flags={})
    assert v.outcome == Outcome.CONJECTURAL


def test_diagonal_group_is_abelian_trivial():
    v = analyze(build("lattice(2)").spec).verdict
    assert v.outcome == Outcome.TRIVIAL and v.moment_class == MomentClass.ANY_FINITE_ENTROPY


class TestCatalog:
    def test_every_entry_round_trips(self):
        for name in ["lamplighter(2,3)", "baumslag(3,2)", "g23x", "gx_x1_x2", "lbs(3)",
                     "x1x2x3", "xyz", "g_alpha(2,2)", "met_p(3,2)", "lattice(3)"]:
            e = build(name)
            assert GroupSpec.from_json(e.spec.to_json()).to_json() == e.spec.to_json()
            diag = [g for g in e.spec.generators.values() if g.is_diagonal()]
            for a in diag:
                for b in diag:
                    assert (a @ b).to_strings() == (b @ a).to_strings()
            if "delta" in e.spec.generators:
                assert e.spec.generators["delta"].is_unipotent()

    def test_lamplighter_generators(self):
        e = build("lamplighter(3,2)")
        assert set(e.spec.names) == {"delta", "M_X", "M_Y", "M_Z"}
        assert e.spec.field.characteristic == 2

    def test_xyz_generators(self):
        assert build("xyz").spec.n == 3

    def test_g_alpha_generators(self):
        assert set(build("g_alpha(2,2)").spec.names) == {"delta", "M_2", "M_X", "M_Y"}

    def test_measures(self):
        e = build("lamplighter(2,2)")
        mu = default_measure(e, "uniform_symmetric")
        # three generators (delta, M_X, M_Y) and their inverses
        assert len(mu.atoms) == 6 and all(abs(p - 1 / 6) < 1e-12 for _, p in mu.atoms)
        lazy = default_measure(e, "lazy_uniform")
        assert lazy.lazy == 0.5
        bpl = default_measure(build("lamplighter(3,2)"), "base_plus_lamp")
        assert len(bpl.atoms) == 7

    def test_unknown_name(self):
        with pytest.raises(Exception):
            build("nope")

    def test_bad_characteristic(self):
        with pytest.raises(Exception):
            build("lamplighter(2,4)")

    def test_listing(self):
        assert any(s.startswith("lamplighter") for s in list_entries())
