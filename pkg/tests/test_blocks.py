"""Block decomposition and the per-element action search."""

import pytest

from poissonblocks.blocks import act_nontrivially, decompose, valid_wrt
from poissonblocks.catalog import build
from poissonblocks.matrices import GroupSpec, TOrder, UTMatrix, eval_word


def phi_set(report, pair):
    return {str(v) for _, v in report.phi_values[pair]}


def test_two_by_two_with_delta():
    spec = build("lamplighter(2,2)").spec
    r = decompose(spec, 3)
    assert r.valid_pairs() == [(1, 2)]
    assert r.pairs[(1, 2)].witness == (("delta", 1),)
    names = [n for n, _ in r.block_generators[(1, 2)]]
    assert set(spec.names) <= set(names)


def test_diagonal_group_has_no_blocks(Q):
    gens = {"a": UTMatrix.from_strings([["X", "0"], ["0", "1"]], Q, 1),
            "b": UTMatrix.from_strings([["1", "0"], ["0", "2"]], Q, 1)}
    r = decompose(GroupSpec(Q, 1, 2, gens), 6)
    assert r.valid_pairs() == []
    assert all(s.label == "NoWitnessUpToDepth(6)" for s in r.pairs.values())


def test_xyz_blocks_and_phi_sets():
    spec = build("xyz").spec
    r = decompose(spec, 8)
    assert sorted(r.valid_pairs()) == [(1, 2), (1, 3), (2, 3)]
    for pair, status in r.pairs.items():
        w = eval_word(spec, status.witness)
        assert len(status.witness) <= 8
        assert valid_wrt(w, *pair, TOrder.U())
        assert not status.fingerprint_only
    assert phi_set(r, (1, 2)) == {"X", "Y^-1", "1"}
    assert phi_set(r, (2, 3)) == {"1", "Y", "Z^-1"}
    assert phi_set(r, (1, 3)) == {"X", "1", "Z^-1"}


def test_valid_wrt_examples(Q):
    U = TOrder.U()
    assert valid_wrt(UTMatrix.elementary(3, 1, 2, Q, 1), 1, 2, U)
    d111 = UTMatrix.from_strings([["1", "1", "1"], ["0", "1", "1"], ["0", "0", "1"]], Q, 1)
    assert not valid_wrt(d111, 1, 3, U)
    assert valid_wrt(UTMatrix.elementary(3, 1, 3, Q, 1), 1, 3, U)


def test_validity_monotone_in_depth():
    spec = build("xyz").spec
    shallow, deep = decompose(spec, 4), decompose(spec, 8)
    for p in shallow.valid_pairs():
        assert p in deep.valid_pairs()
        assert len(deep.pairs[p].witness) <= len(shallow.pairs[p].witness)


@pytest.mark.parametrize("name", ["xyz", "lamplighter(3,2)", "met_p(2,3)", "baumslag(2,2)"])
def test_total_order_validity_implies_U(name):
    spec = build(name).spec
    u_valid = set(decompose(spec, 8).valid_pairs())
    for T in (TOrder.row_major(spec.n), TOrder.col_major(spec.n)):
        assert set(decompose(spec, 8, T).valid_pairs()) <= u_valid


def test_phi_matches_generators():
    spec = build("g_alpha(2,2)").spec
    r = decompose(spec, 3)
    for name, phi in r.phi_values[(1, 2)]:
        g = spec.generators[name]
        assert phi.exact_equal(g.entry(1, 1) * g.entry(2, 2).inverse())


class TestActNontrivially:
    def test_identity_has_no_evidence(self):
        spec = build("lamplighter(3,2)").spec
        v = act_nontrivially(spec, [], 4, TOrder.row_major(2), {(1, 2): True})
        assert v.label == "NoEvidenceUpToDepth(4)"

    def test_delta_in_rank3_lamplighter(self):
        spec = build("lamplighter(3,2)").spec
        v = act_nontrivially(spec, ["delta"], 4, TOrder.row_major(2), {(1, 2): True})
        assert v.label == "ActsNontrivially" and v.block == (1, 2)
        assert v.witness == (("delta", 1),)

    def test_delta_in_rank2_lamplighter(self):
        spec = build("lamplighter(2,2)").spec
        v = act_nontrivially(spec, ["delta"], 4, TOrder.row_major(2), {(1, 2): False})
        assert v.label == "NoEvidenceUpToDepth(4)"

    def test_needs_total_order(self):
        spec = build("lamplighter(2,2)").spec
        with pytest.raises(Exception):
            act_nontrivially(spec, ["delta"], 4, TOrder.U(), {})
