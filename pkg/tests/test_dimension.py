"""Span ranks, growth fits, shortcuts and the wreath certificate."""

import itertools

import pytest
import sympy

from poissonblocks.blocks import decompose
from poissonblocks.catalog import build, one_relator_quotient
from poissonblocks.dimension import (ModuleSpec, dimension_estimate, is_wreath_block,
                                     principal_quotient_dim, span_dim, span_table, trdeg)
from poissonblocks.errors import UnitRelationError
from poissonblocks.fields import CoefficientField
from poissonblocks.parsing import parse_laurent, parse_rational


def l1_ball(d, r):
    return sum(1 for v in itertools.product(range(-r, r + 1), repeat=d) if sum(map(abs, v)) <= r)


def quotient_span_oracle(p, modulus, r):
    """Rank of {X^k mod f : |k| <= r} over F_p, computed with sympy polynomials."""
    x = sympy.symbols("x")
    f = sympy.Poly(modulus, x, modulus=p)
    deg = f.degree()
    # X is a unit mod f when f(0) != 0; X^-k = (X^-1)^k
    xinv = sympy.Poly(sympy.invert(x, f.as_expr(), modulus=p), x, modulus=p)
    rows = []
    for k in range(-r, r + 1):
        base = sympy.Poly(x, x, modulus=p) if k >= 0 else xinv
        v = (base ** abs(k)).rem(f)
        coeffs = [int(c) % p for c in reversed(v.all_coeffs())]
        rows.append(coeffs + [0] * (deg - len(coeffs)))
    return _rank_mod_p(rows, p)


def _rank_mod_p(rows, p):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(c * inv) % p for c in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


Q = CoefficientField.rationals()
F2 = CoefficientField.prime(2)


def test_free_rank_one():
    m = ModuleSpec.from_strings(Q, 1, ["X"])
    assert [span_dim(m, r) for r in range(6)] == [2 * r + 1 for r in range(6)]


def test_free_rank_two_matches_ball_count():
    m = ModuleSpec.from_strings(Q, 2, ["X", "Y"])
    for r in range(7):
        assert span_dim(m, r) == 2 * r * r + 2 * r + 1 == l1_ball(2, r)


def test_free_rank_two_randomized_path():
    # a non-cyclic generator set forces the evaluation-rank path
    m = ModuleSpec.from_strings(Q, 2, ["X", "Y"], module=["1", "X+Y"])
    table = span_table(m, 4)
    assert table == sorted(table)
    assert table[4] <= 2 * l1_ball(2, 4)


def test_quotient_saturates():
    m = ModuleSpec.from_strings(F2, 1, ["X"], relations=["1+X+X^2"])
    for r in range(1, 7):
        assert span_dim(m, r) == 2 == quotient_span_oracle(2, "x**2+x+1", r)


def test_trdeg_examples():
    assert trdeg([parse_rational(s, Q, 1) for s in ["X", "X+1", "2"]]) == 1
    assert trdeg([parse_rational(s, Q, 2) for s in ["X", "Y"]]) == 2
    assert trdeg([parse_rational(s, Q, 1) for s in ["X", "X^2"]]) == 1


def test_principal_quotient_examples():
    assert principal_quotient_dim(3, parse_laurent("1+X+Y+Z", F2, 3), verify=False) == 2
    assert principal_quotient_dim(1, parse_laurent("1+X+X^2", F2, 1), verify=False) == 0
    assert principal_quotient_dim(2, parse_laurent("1+X", Q, 2)) == 1
    with pytest.raises(UnitRelationError):
        principal_quotient_dim(2, parse_laurent("X*Y", Q, 2))


def test_quotient_rank_drop_linear_growth():
    m = ModuleSpec.from_strings(Q, 2, ["X", "Y"], relations=["1+X"])
    table = span_table(m, 8)
    # k[Z^2]/(1+X) is k[Y^(+-1)] as a vector space; the ball of radius r reaches Y^-r..Y^r
    assert table == [2 * r + 1 for r in range(9)]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_lamplighter_dimension(d):
    rep = dimension_estimate(ModuleSpec.from_strings(F2, d, ["X", "Y", "Z"][:d]))
    assert rep.dimension == d and rep.provenance == "FreeModule" and rep.fit_agrees


def test_one_relator_quotient_dimension():
    rep = dimension_estimate(one_relator_quotient(3, 2))
    assert rep.dimension == 2 and rep.provenance == "QuotientRule"
    assert abs(rep.fitted_exponent - 2) <= 0.25


def test_span_monotone_and_generator_change():
    m1 = ModuleSpec.from_strings(Q, 2, ["X", "Y"])
    m2 = ModuleSpec.from_strings(Q, 2, ["X*Y", "X*Y^2"])   # same lattice, other basis
    t1, t2 = span_table(m1, 12), span_table(m2, 6)
    assert t1 == sorted(t1) and t2 == sorted(t2)
    # each generating set lies in a ball of radius 3 of the other
    for r in range(1, 5):
        assert t2[r] <= t1[3 * r] and t1[r] <= t2[min(3 * r, 6)]


def test_dimension_within_trdeg_bound():
    for phis in (["X", "X+1"], ["X", "Y", "X+Y"], ["X+Y", "Y"]):
        m = ModuleSpec.from_strings(Q, 2, phis)
        rep = dimension_estimate(m)
        assert rep.dimension <= trdeg(m.action_generators)


def test_ambiguous_needs_three_radii():
    with pytest.raises(ValueError):
        dimension_estimate(ModuleSpec.from_strings(Q, 1, ["X"]), [2, 4])


class TestWreath:
    def test_rank_two_lamplighter_block(self):
        m = ModuleSpec.from_strings(CoefficientField.prime(3), 2, ["X", "Y"])
        assert is_wreath_block(None, m).ok

    def test_g_alpha_rejected(self):
        # the constant 2 adds a third free direction and the ball outgrows the span
        m = ModuleSpec.from_strings(Q, 2, ["X", "Y", "2"])
        w = is_wreath_block(None, m)
        assert not w.ok
        assert {v[:3] for v in w.violations} == {"(b)", "(c)"}

    def test_xyz_block(self):
        r = decompose(build("xyz").spec, 8)
        assert is_wreath_block(r, r.module_spec((1, 2))).ok
