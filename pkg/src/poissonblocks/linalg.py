"""Exact linear algebra over prime fields and sparse elimination over any field."""

from __future__ import annotations

import numpy as np

from .fields import CoefficientField

# Largest primes below 2^26: products of two residues stay below 2^52, so the
# split float64 products in :func:`matmul_mod` are exact.
RANK_PRIMES = (67108859, 67108763)
_SPLIT = 13
_EXACT = 2**53


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p for int64 arrays with entries in [0, p), p < 2^26.

    Uses float64 BLAS on 13-bit limbs of ``a`` with chunked inner dimension so
    that every partial sum is an exactly representable integer.
    """
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if p <= 2**_SPLIT:
        limbs = [(a, 0)]
        limb_max = p - 1
    else:
        lo = a & ((1 << _SPLIT) - 1)
        hi = a >> _SPLIT
        limbs = [(lo, 0), (hi, _SPLIT)]
        limb_max = (1 << _SPLIT) - 1
    chunk = max(1, int(_EXACT // max(1, limb_max * (p - 1))) - 1)
    bf = b.astype(np.float64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.float64)
    for limb, shift in limbs:
        lf = limb.astype(np.float64)
        acc = np.zeros_like(out)
        for s in range(0, k, chunk):
            acc += np.fmod(lf[:, s:s + chunk] @ bf[s:s + chunk], p)
        acc = np.fmod(acc, p)
        # acc * 2^13 + out stays below 2^40, exact in float64.
        out = np.fmod(out + acc * float(1 << shift), p)
    return out.astype(np.int64)


class DenseEchelon:
    """Incrementally maintained reduced row echelon basis over F_p (p < 2^26)."""

    def __init__(self, p: int, ncols: int):
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, block: np.ndarray) -> np.ndarray:
        block = np.asarray(block, dtype=np.int64) % self.p
        if self.rank == 0 or block.shape[0] == 0:
            return block
        coeff = block[:, self.pivots]
        return (block - matmul_mod(coeff, self.rows, self.p)) % self.p

    def add(self, block: np.ndarray, batch: int = 256) -> np.ndarray:
        """Add rows; return the reduced rows that were new (a complement basis)."""
        block = np.asarray(block, dtype=np.int64)
        new_rows = []
        for s in range(0, block.shape[0], batch):
            r = self.reduce(block[s:s + batch])
            fresh = self._eliminate_within(r)
            if fresh.shape[0]:
                self._append(fresh)
                new_rows.append(fresh)
        if not new_rows:
            return np.zeros((0, self.ncols), dtype=np.int64)
        return np.vstack(new_rows)

    def _eliminate_within(self, r: np.ndarray) -> np.ndarray:
        """Reduced echelon rows spanning the row space of r (already reduced)."""
        p = self.p
        r = r.copy()
        out = []
        used_piv = []
        for i in range(r.shape[0]):
            row = r[i]
            for piv, prow in zip(used_piv, out):
                c = row[piv]
                if c:
                    row = (row - c * prow) % p
            nz = np.flatnonzero(row)
            if nz.size == 0:
                continue
            piv = int(nz[0])
            row = (row * pow(int(row[piv]), -1, p)) % p
            # Keep earlier fresh rows reduced at the new pivot.
            for k in range(len(out)):
                c = out[k][piv]
                if c:
                    out[k] = (out[k] - c * row) % p
            out.append(row)
            used_piv.append(piv)
        if not out:
            return np.zeros((0, self.ncols), dtype=np.int64)
        return np.vstack(out)

    def _append(self, fresh: np.ndarray):
        p = self.p
        piv = [int(np.flatnonzero(row)[0]) for row in fresh]
        if self.rank:
            coeff = self.rows[:, piv]
            if coeff.any():
                self.rows = (self.rows - matmul_mod(coeff, fresh, p)) % p
        self.rows = np.vstack([self.rows, fresh])
        self.pivots.extend(piv)


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    e = DenseEchelon(p, matrix.shape[1])
    e.add(matrix)
    return e.rank


class SparseEchelon:
    """Incremental elimination of sparse vectors (dict key -> scalar) over a field.

    Each basis vector is normalized to coefficient 1 at its pivot, the largest
    key it contains.
    """

    def __init__(self, field: CoefficientField):
        self.field = field
        self.basis: dict = {}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def reduce(self, vec: dict) -> dict:
        f = self.field
        v = {k: c for k, c in vec.items() if c != 0}
        basis = self.basis
        while v:
            top = max(v)
            b = basis.get(top)
            if b is None:
                return v
            c = v[top]
            for k, bc in b.items():
                nv = f.add(v.get(k, 0), f.neg(f.mul(c, bc)))
                if nv == 0:
                    v.pop(k, None)
                else:
                    v[k] = nv
        return v

    def add(self, vec: dict) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        top = max(v)
        inv = self.field.inv(v[top])
        self.basis[top] = {k: self.field.mul(c, inv) for k, c in v.items()}
        return True
