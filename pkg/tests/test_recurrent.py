"""Staged recurrent measures on Z and Z^2."""

from fractions import Fraction

import numpy as np
import pytest

from oracles import return_probs_direct_1d, return_probs_direct_2d
from poissonblocks.errors import InfeasibleStageError
from poissonblocks.recurrent import (component_measure, mixture, recurrent_measure_stages,
                                     return_probabilities)


def test_zero_stages():
    assert recurrent_measure_stages(1, 0) == []


def test_bad_degree():
    with pytest.raises(ValueError):
        recurrent_measure_stages(3, 1)


def test_components_are_probability_measures():
    for dim in (1, 2):
        for i in (1, 2, 3):
            mu = component_measure(i, dim)
            assert sum(mu.values()) == pytest.approx(1.0)
            assert all(tuple(-x for x in p) in mu for p in mu)


def test_fourier_returns_match_direct_convolution():
    mu = mixture([Fraction(1), Fraction(1, 10)], 1)
    assert np.allclose(return_probabilities(mu, 1, 60), return_probs_direct_1d(mu, 60), atol=1e-13)
    mu2 = mixture([Fraction(1), Fraction(1, 10)], 2)
    assert np.allclose(return_probabilities(mu2, 2, 25), return_probs_direct_2d(mu2, 25), atol=1e-13)


def test_stage_one_on_z():
    (s,) = recurrent_measure_stages(1, 1)
    assert s.a == 1 and s.weights == (Fraction(1),)
    p = return_probs_direct_1d(s.measure, s.N)
    assert 0.5 * p[1:].sum() >= 1
    assert 0.5 * p[1:s.N].sum() < 1          # N_1 is the first time the sum reaches 1
    assert s.N * s.b <= Fraction(1, 2)


def test_asymmetric_measure_rejected():
    with pytest.raises(ValueError):
        return_probabilities({(1,): 1.0}, 1, 3)


def test_budget_error_names_inequality():
    with pytest.raises(InfeasibleStageError, match=">= 2"):
        recurrent_measure_stages(2, 2, max_steps=64)
