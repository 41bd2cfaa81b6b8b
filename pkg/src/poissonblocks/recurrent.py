"""Staged construction of a recurrent measure on Z or Z^2.

Stage n mixes measures mu_1..mu_n with weights a_1..a_n: mu_1 is the lazy
simple walk (mass 1/2 at the origin) and mu_i, i >= 2, is uniform on the
l-infinity box of radius i.  Each stage fixes N_n with

    sum_{t <= N_n} (1/2) * mubar_n^{*t}(0) >= n,      N_n >= 2 N_{n-1},

then b_n = 1 / (2 N_n) and a_{n+1} = b_n / 2, so a_{n+1} + a_{n+2} + ... <= b_n
and N_n * b_n <= 1/2.  Return probabilities come from the characteristic
function on a grid wide enough that the DFT equals the exact convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InfeasibleStageError

MAX_STEPS = 1 << 14
MAX_GRID = 1 << 23


def component_measure(i: int, dim: int) -> dict[tuple[int, ...], float]:
    """mu_i as a dict point -> mass."""
    if i == 1:
        out = {(0,) * dim: 0.5}
        for k in range(dim):
            for s in (1, -1):
                e = [0] * dim
                e[k] = s
                out[tuple(e)] = 0.5 / (2 * dim)
        return out
    pts = np.array(np.meshgrid(*[np.arange(-i, i + 1)] * dim, indexing="ij")).reshape(dim, -1).T
    w = 1.0 / len(pts)
    return {tuple(int(x) for x in p): w for p in pts}


def mixture(weights, dim: int) -> dict[tuple[int, ...], float]:
    total = float(sum(weights))
    out: dict = {}
    for i, a in enumerate(weights, start=1):
        for pt, m in component_measure(i, dim).items():
            out[pt] = out.get(pt, 0.0) + float(a) / total * m
    return out


def return_probabilities(measure: dict, dim: int, t_max: int) -> np.ndarray:
    """p[t] = measure^{*t}(0) for t = 0..t_max via an alias-free DFT grid.

    The measure must be invariant under each coordinate sign flip; then only
    frequencies in [0, pi]^dim are needed, each weighted by its orbit size.
    """
    for pt, m in measure.items():
        for k in range(dim):
            flipped = tuple(-x if i == k else x for i, x in enumerate(pt))
            if abs(measure.get(flipped, 0.0) - m) > 1e-15:
                raise ValueError("measure is not reflection symmetric")
    radius = max(max(abs(x) for x in pt) for pt in measure)
    size = 1 << max(1, math.ceil(math.log2(2 * radius * t_max + 1)))
    half = size // 2
    if (half + 1) ** dim > MAX_GRID:
        raise InfeasibleStageError(f"grid of {size}^{dim} cells exceeds the budget")
    theta = 2 * np.pi * np.arange(half + 1) / size
    w1 = np.full(half + 1, 2.0)
    w1[0] = w1[-1] = 1.0
    grids = np.meshgrid(*[theta] * dim, indexing="ij")
    weight = np.ones((half + 1,) * dim)
    for g in np.meshgrid(*[w1] * dim, indexing="ij"):
        weight *= g
    phi = np.zeros((half + 1,) * dim)
    for pt, m in measure.items():
        phi += m * np.cos(sum(x * g for x, g in zip(pt, grids)))
    phi = phi.ravel()
    acc = weight.ravel() / size**dim
    out = np.empty(t_max + 1)
    out[0] = acc.sum()
    for t in range(1, t_max + 1):
        acc *= phi
        out[t] = acc.sum()
    return out


@dataclass
class Stage:
    n: int
    a: Fraction
    N: int
    b: Fraction
    C: float
    partial_sum: float
    weights: tuple[Fraction, ...]
    measure: dict

    def inequalities(self) -> dict:
        return {"N_b_le_half": self.N * self.b <= Fraction(1, 2),
                "half_partial_sum_ge_n": self.partial_sum >= self.n}

    def to_json(self):
        return {"stage": self.n, "a": str(self.a), "N": self.N, "b": str(self.b),
                "C": self.C, "half_partial_sum": self.partial_sum,
                "weights": [str(w) for w in self.weights],
                "components": [f"mu_{i}" for i in range(1, len(self.weights) + 1)],
                "inequalities": self.inequalities()}


def recurrent_measure_stages(growth_degree: int, stages: int, max_steps: int = MAX_STEPS) -> list[Stage]:
    if growth_degree not in (1, 2):
        raise ValueError("growth degree must be 1 or 2")
    if stages < 0:
        raise ValueError("stages must be non-negative")
    out: list[Stage] = []
    weights: list[Fraction] = []
    a = Fraction(1)
    prev_N = 0
    for n in range(1, stages + 1):
        weights.append(a)
        mu = mixture(weights, growth_degree)
        N = max(1, 2 * prev_N)
        limit = max(2 * N, 64)
        while True:
            limit = min(limit, max_steps)
            p = return_probabilities(mu, growth_degree, limit)
            half = 0.5 * np.cumsum(p[1:])
            ok = np.flatnonzero(half[N - 1:] >= n)
            if ok.size:
                N = N + int(ok[0])
                break
            if limit >= max_steps:
                raise InfeasibleStageError(
                    f"stage {n}: sum_(t<=N) mubar^t(0)/2 >= {n} fails for every N <= {max_steps}")
            limit = int(limit * 1.5)
        t = np.arange(1, N + 1)
        C = float(np.min(t * p[1:N + 1]))
        b = Fraction(1, 2 * N)
        out.append(Stage(n, a, N, b, C, float(half[N - 1]), tuple(weights), mu))
        a = b / 2
        prev_N = N
    return out
