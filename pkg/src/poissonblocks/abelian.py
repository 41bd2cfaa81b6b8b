"""Multiplicative bookkeeping for values of the form c * X^e.

Such values form a finitely generated abelian group.  Each one gets an
integer coordinate vector: the exponent e, the exponents of the primes in the
rational constant c (char 0) and a torsion part (the sign of c in char 0, the
discrete logarithm of c in char p).  Relations among values then become
integer kernels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import discrete_log, factorint, primitive_root

from .fields import CoefficientField
from .rational import RationalFunction


def _ext_gcd(a: int, b: int):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """A Z-basis of {x in Z^ncols : A x = 0} by unimodular column operations."""
    A = [list(r) for r in rows]
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns are U's columns

    def col_combine(c1, c2, a, b, c, d):
        # (col c1, col c2) <- (a*c1 + b*c2, c*c1 + d*c2), determinant ad - bc = +-1
        for M in (A, U):
            for row in M:
                x, y = row[c1], row[c2]
                row[c1], row[c2] = a * x + b * y, c * x + d * y

    piv = 0
    for r in range(len(A)):
        if piv >= ncols:
            break
        for c in range(piv + 1, ncols):
            y = A[r][c]
            if y == 0:
                continue
            x = A[r][piv]
            g, s, t = _ext_gcd(x, y)
            col_combine(piv, c, s, t, -y // g, x // g)
        if A[r][piv] != 0:
            piv += 1
    return [tuple(U[i][c] for i in range(ncols)) for c in range(piv, ncols)]


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    M = [[Fraction(x) for x in r] for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(M[0]) if M else 0
    while rank < len(M) and col < ncols:
        pivot = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        for i in range(rank + 1, len(M)):
            f = M[i][col] / M[rank][col]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
        col += 1
    return rank


class NotMonomialError(ValueError):
    pass


def monomial_parts(value: RationalFunction):
    """(constant, exponent) for a value c * X^e, else NotMonomialError."""
    if not value.is_monomial():
        raise NotMonomialError(f"{value} is not a constant times a monomial")
    e, c = value.num.single_term()
    return c, e


@dataclass
class MonomialCoordinates:
    """Coordinates for the group generated by given monomial-times-constant values.

    ``free`` columns are integers; ``torsion`` columns live in Z/m for the
    listed moduli.
    """

    field: CoefficientField
    nvars: int
    primes: tuple[int, ...]
    torsion_moduli: tuple[int, ...]
    _generator: int | None = None

    @classmethod
    def for_values(cls, values: Sequence[RationalFunction]) -> "MonomialCoordinates":
        if not values:
            raise ValueError("need at least one value")
        field, nvars = values[0].field, values[0].nvars
        primes: set[int] = set()
        for v in values:
            c, _ = monomial_parts(v)
            if field.characteristic == 0:
                f = Fraction(c)
                for n in (abs(f.numerator), f.denominator):
                    primes.update(factorint(n).keys())
        if field.characteristic == 0:
            return cls(field, nvars, tuple(sorted(primes)), (2,))
        p = field.characteristic
        return cls(field, nvars, (), (p - 1,) if p > 2 else (), primitive_root(p) if p > 2 else None)

    @property
    def nfree(self) -> int:
        return self.nvars + len(self.primes)

    def coords(self, value: RationalFunction) -> tuple[tuple[int, ...], tuple[int, ...]]:
        c, e = monomial_parts(value)
        if self.field.characteristic == 0:
            f = Fraction(c)
            free = list(e)
            num, den = abs(f.numerator), f.denominator
            for q in self.primes:
                k = 0
                while num % q == 0:
                    num //= q
                    k += 1
                while den % q == 0:
                    den //= q
                    k -= 1
                free.append(k)
            if num != 1 or den != 1:
                raise NotMonomialError(f"constant {c} uses primes outside {self.primes}")
            return tuple(free), ((1 if f < 0 else 0),)
        p = self.field.characteristic
        if p == 2:
            return tuple(e), ()
        return tuple(e), (int(discrete_log(p, int(c) % p, self._generator)),)


def relation_lattice(values: Sequence[RationalFunction]) -> list[tuple[int, ...]]:
    """Z-basis of {e : prod values_i^e_i = 1} for monomial-times-constant values."""
    mc = MonomialCoordinates.for_values(values)
    cols = [mc.coords(v) for v in values]
    m = len(values)
    rows = [[cols[i][0][r] for i in range(m)] for r in range(mc.nfree)]
    # Torsion rows: sum e_i t_i - M * s = 0 with an auxiliary variable s per row.
    ntor = len(mc.torsion_moduli)
    full = []
    for r in rows:
        full.append(r + [0] * ntor)
    for k, M in enumerate(mc.torsion_moduli):
        aux = [0] * ntor
        aux[k] = -M
        full.append([cols[i][1][k] for i in range(m)] + aux)
    ker = integer_kernel(full, m + ntor) if full else [
        tuple(int(i == j) for j in range(m + ntor)) for i in range(m + ntor)]
    projected = [v[:m] for v in ker]
    return hermite_rows(projected)


def hermite_rows(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Echelon Z-basis of the lattice spanned by the given integer vectors."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    ncols = len(rows[0])
    out = []
    for col in range(ncols):
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            pivot = active[0]
            nxt = [pivot]
            for r in active[1:]:
                q = r[col] // pivot[col]
                r = [a - q * b for a, b in zip(r, pivot)]
                (nxt if r[col] != 0 else rest).append(r)
            active = nxt
        if active:
            out.append(tuple(active[0]))
        rows = [r for r in rest if any(r)]
    return out


def has_short_relation(lattice: Sequence[Sequence[int]], m: int, bound: int,
                       budget: int = 300_000) -> tuple[int, ...] | None:
    """Some nonzero e in the lattice with max|e_i| <= bound, or None.

    Exhaustive when (2*bound+1)^m <= budget; otherwise any lattice basis vector
    within the bound is reported and the search is best effort.
    """
    if not lattice:
        return None
    basis = [tuple(v) for v in lattice]
    if (2 * bound + 1) ** m > budget:
        for v in basis:
            if max(abs(x) for x in v) <= bound:
                return v
        return None
    rows_matrix = basis
    # Membership test: e is in the lattice iff solving in echelon basis works.
    for e in itertools.product(range(-bound, bound + 1), repeat=m):
        if not any(e):
            continue
        r = list(e)
        for b in rows_matrix:
            col = next(i for i, x in enumerate(b) if x)
            if r[col] % b[col]:
                break
            q = r[col] // b[col]
            r = [x - q * y for x, y in zip(r, b)]
        if not any(r):
            return tuple(e)
    return None
