"""Independent reference computations used by several test modules."""

from __future__ import annotations

import numpy as np


def return_probs_direct_1d(measure: dict, t_max: int) -> np.ndarray:
    """mu^{*t}(0) on Z by repeated dense convolution."""
    radius = max(abs(p[0]) for p in measure)
    kernel = np.zeros(2 * radius + 1)
    for (x,), m in measure.items():
        kernel[x + radius] += m
    dist = np.array([1.0])
    out = [1.0]
    for _ in range(t_max):
        dist = np.convolve(dist, kernel)
        out.append(float(dist[len(dist) // 2]))
    return np.array(out)


def return_probs_direct_2d(measure: dict, t_max: int) -> np.ndarray:
    """mu^{*t}(0) on Z^2 by shifting a dense grid, one atom at a time."""
    radius = max(max(abs(x) for x in p) for p in measure)
    reach = radius * t_max
    size = 2 * reach + 1
    dist = np.zeros((size, size))
    dist[reach, reach] = 1.0
    out = [1.0]
    for _ in range(t_max):
        new = np.zeros_like(dist)
        for (x, y), m in measure.items():
            new += m * np.roll(dist, (x, y), axis=(0, 1))
        dist = new
        out.append(float(dist[reach, reach]))
    return np.array(out)


def partial_return_sum_fft(measure: dict, dim: int, N: int) -> float:
    """sum_{t=1}^{N} mu^{*t}(0) through the full-grid Fourier transform.

    Uses the geometric series of the characteristic function, so no
    per-step loop is needed.  The grid exceeds the support of mu^{*N}.
    """
    radius = max(max(abs(x) for x in p) for p in measure)
    size = 1 << int(np.ceil(np.log2(2 * radius * N + 1)))
    grid = np.zeros((size,) * dim)
    for pt, m in measure.items():
        grid[tuple(x % size for x in pt)] += m
    phi = np.fft.fftn(grid).real      # symmetric measure: real transform
    with np.errstate(divide="ignore", invalid="ignore"):
        geo = np.where(np.isclose(phi, 1.0, atol=1e-15, rtol=0),
                       float(N), phi * (1 - phi**N) / (1 - phi))
    return float(geo.mean())
