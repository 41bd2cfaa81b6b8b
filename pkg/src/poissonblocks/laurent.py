"""Sparse multivariate Laurent polynomials over Q or F_p.

A polynomial is an immutable map from integer exponent tuples (negative
entries allowed) to nonzero coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ArityMismatchError, StarConditionError
from .fields import CoefficientField

Exponent = tuple[int, ...]


def _coeff_to_str(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _coeff_from_str(s: str):
    f = Fraction(s)
    return f.numerator if f.denominator == 1 else f


class LaurentPoly:
    __slots__ = ("field", "nvars", "_terms", "_hash")

    def __init__(self, field: CoefficientField, nvars: int,
                 terms: Mapping[Exponent, object] | None = None, *, _clean: bool = False):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.field = field
        self.nvars = nvars
        self._hash = None
        if _clean:
            self._terms = terms  # caller guarantees normalized, zero-free
            return
        out: dict[Exponent, object] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ArityMismatchError(f"exponent {e} has wrong length for {nvars} variables")
            c = field.coerce(c)
            if c != 0:
                if e in out:
                    s = field.add(out[e], c)
                    if s == 0:
                        del out[e]
                    else:
                        out[e] = s
                else:
                    out[e] = c
        self._terms = out

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars, {}, _clean=True)

    @classmethod
    def constant(cls, field, nvars, c=1):
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, field, nvars):
        return cls.constant(field, nvars, 1)

    @classmethod
    def monomial(cls, field, nvars, exponent: Iterable[int], c=1):
        return cls(field, nvars, {tuple(exponent): c})

    @classmethod
    def variable(cls, field, nvars, index: int):
        e = [0] * nvars
        e[index] = 1
        return cls(field, nvars, {tuple(e): 1})

    # basic queries --------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, object]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0,) * self.nvars in self._terms)

    def constant_value(self):
        """Coefficient of the zero exponent (0 if absent)."""
        return self._terms.get((0,) * self.nvars, 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def single_term(self) -> tuple[Exponent, object]:
        if len(self._terms) != 1:
            raise ValueError("not a monomial")
        return next(iter(self._terms.items()))

    def is_one(self) -> bool:
        return len(self._terms) == 1 and self._terms.get((0,) * self.nvars) == 1

    def axis_range(self, axis: int) -> tuple[int, int]:
        vals = [e[axis] for e in self._terms]
        return min(vals), max(vals)

    def degree_spread(self) -> int:
        """Sum over variables of (max exponent - min exponent); a total-degree proxy."""
        if not self._terms:
            return 0
        return sum(hi - lo for lo, hi in (self.axis_range(i) for i in range(self.nvars)))

    def max_abs_degree(self) -> int:
        return max((sum(abs(x) for x in e) for e in self._terms), default=0)

    def _check(self, other: "LaurentPoly"):
        self.field.check_same(other.field)
        if self.nvars != other.nvars:
            raise ArityMismatchError(f"{self.nvars} vs {other.nvars} variables")

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.field, self.nvars, other)
        return NotImplemented

    # ring operations ------------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        add = self.field.add
        for e, c in small.items():
            if e in out:
                s = add(out[e], c)
                if s == 0:
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return LaurentPoly(self.field, self.nvars, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg
        return LaurentPoly(self.field, self.nvars,
                           {e: neg(c) for e, c in self._terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if not a or not b:
            return LaurentPoly.zero(self.field, self.nvars)
        if len(a) < len(b):
            a, b = b, a
        field = self.field
        p = field.characteristic
        out: dict[Exponent, object] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        if p:
            cleaned = {}
            for e, c in out.items():
                c %= p
                if c:
                    cleaned[e] = c
        else:
            cleaned = {}
            for e, c in out.items():
                if c:
                    if isinstance(c, Fraction) and c.denominator == 1:
                        c = c.numerator
                    cleaned[e] = c
        return LaurentPoly(field, self.nvars, cleaned, _clean=True)

    __rmul__ = __mul__

    def scale(self, c) -> "LaurentPoly":
        c = self.field.coerce(c)
        if c == 0:
            return LaurentPoly.zero(self.field, self.nvars)
        mul = self.field.mul
        return LaurentPoly(self.field, self.nvars,
                           {e: mul(v, c) for e, v in self._terms.items()}, _clean=True)

    def shift(self, exponent: Iterable[int]) -> "LaurentPoly":
        """Multiply by the monomial X^exponent."""
        s = tuple(exponent)
        return LaurentPoly(self.field, self.nvars,
                           {tuple(x + y for x, y in zip(e, s)): c for e, c in self._terms.items()},
                           _clean=True)

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative powers exist only for monomials")
            e, c = self.single_term()
            inv = LaurentPoly(self.field, self.nvars,
                              {tuple(-x for x in e): self.field.inv(c)}, _clean=True)
            return inv ** (-k)
        result = LaurentPoly.one(self.field, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monomial_inverse(self) -> "LaurentPoly":
        return self ** -1

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return (self.field == other.field and self.nvars == other.nvars
                    and self._terms == other._terms)
        if isinstance(other, (int, Fraction)):
            return self._terms == LaurentPoly.constant(self.field, self.nvars, other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.characteristic, self.nvars,
                               frozenset(self._terms.items())))
        return self._hash

    # calculus and substitutions -----------------------------------------

    def derivative(self, index: int) -> "LaurentPoly":
        out = {}
        for e, c in self._terms.items():
            k = e[index]
            if k:
                ne = list(e)
                ne[index] -= 1
                out[tuple(ne)] = c * k
        return LaurentPoly(self.field, self.nvars, out)

    def transform_exponents(self, matrix) -> "LaurentPoly":
        """Apply the integer linear map e -> matrix @ e to every exponent."""
        rows = [tuple(r) for r in matrix]
        out = {}
        for e, c in self._terms.items():
            out[tuple(sum(r[k] * e[k] for k in range(len(e))) for r in rows)] = c
        return LaurentPoly(self.field, len(rows), out)

    def content(self):
        """For Q: the positive rational g with self/g primitive integral. For F_p: 1."""
        if self.field.characteristic or not self._terms:
            return 1
        from math import gcd, lcm
        nums, dens = 0, 1
        for c in self._terms.values():
            f = Fraction(c)
            nums = gcd(nums, abs(f.numerator))
            dens = lcm(dens, f.denominator)
        return Fraction(nums, dens)

    def sorted_terms(self) -> list[tuple[Exponent, object]]:
        return sorted(self._terms.items())

    def leading_coefficient(self):
        """Coefficient of the lexicographically largest exponent."""
        return max(self._terms.items())[1] if self._terms else 0

    # text and JSON -------------------------------------------------------

    def var_names(self) -> list[str]:
        if self.nvars <= 3:
            return ["X", "Y", "Z"][: self.nvars]
        return [f"X{i + 1}" for i in range(self.nvars)]

    def __str__(self):
        if not self._terms:
            return "0"
        names = self.var_names()
        pieces = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            neg = c < 0 if not self.field.characteristic else False
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{_coeff_to_str(a)}*{mono}"
            else:
                body = _coeff_to_str(a)
            pieces.append(("-" if neg else "+", body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"LaurentPoly({self}, {self.field})"

    def to_json(self) -> dict:
        return {
            "char": self.field.characteristic,
            "vars": self.nvars,
            "terms": [[list(e), _coeff_to_str(c)] for e, c in sorted(self._terms.items())],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LaurentPoly":
        field = CoefficientField(int(obj["char"]))
        terms = {tuple(e): _coeff_from_str(str(c)) for e, c in obj["terms"]}
        return cls(field, int(obj["vars"]), terms)


def star_divide(u: LaurentPoly, v: LaurentPoly, axis: int) -> tuple[LaurentPoly, LaurentPoly]:
    """Long division along one axis: u = v*t + w with w in the window [m, M).

    m and M are the smallest and largest exponents of ``axis`` in v, and v must
    have exactly one monomial at each of those extremes.
    """
    u._check(v)
    if v.is_zero():
        raise StarConditionError("division by the zero polynomial")
    field = u.field
    m, M = v.axis_range(axis)
    top = [(e, c) for e, c in v.terms.items() if e[axis] == M]
    bottom = [(e, c) for e, c in v.terms.items() if e[axis] == m]
    if len(top) != 1 or len(bottom) != 1:
        raise StarConditionError(
            f"divisor {v} needs a unique monomial at both axis extremes ({m}, {M})")
    (et, ct), (eb, cb) = top[0], bottom[0]
    inv_t, inv_b = field.inv(ct), field.inv(cb)
    vterms = list(v.terms.items())
    add, mul, neg = field.add, field.mul, field.neg

    w = dict(u.terms)
    quotient: dict[Exponent, object] = {}

    def subtract_multiple(shift, q):
        for e, c in vterms:
            key = tuple(a + b for a, b in zip(e, shift))
            val = add(w.get(key, 0), neg(mul(q, c)))
            if val == 0:
                w.pop(key, None)
            else:
                w[key] = val
        quotient[shift] = add(quotient.get(shift, 0), q)

    # Top phase: clear everything at or above M, highest level first.
    while True:
        high = [e for e in w if e[axis] >= M]
        if not high:
            break
        e = max(high, key=lambda x: (x[axis], x))
        q = mul(w[e], inv_t)
        subtract_multiple(tuple(a - b for a, b in zip(e, et)), q)
    # Bottom phase: clear everything below m, lowest level first.
    while True:
        low = [e for e in w if e[axis] < m]
        if not low:
            break
        e = min(low, key=lambda x: (x[axis], x))
        q = mul(w[e], inv_b)
        subtract_multiple(tuple(a - b for a, b in zip(e, eb)), q)

    t = LaurentPoly(field, u.nvars, {e: c for e, c in quotient.items() if c != 0})
    return t, LaurentPoly(field, u.nvars, w, _clean=True)


def new_basis(W: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    """Unimodular basis whose first coordinate separates the points of W.

    Rows are basis vectors: b_1 = e_1 and b_i = (3S)^(i-1) e_1 + e_i, where S is
    the largest absolute coordinate in W.  The coordinate of x along b_1 is
    x_1 - sum_{i>=2} (3S)^(i-1) x_i (see :func:`basis_coordinates`).
    """
    pts = [tuple(int(c) for c in w) for w in W]
    if not pts:
        raise ValueError("W must be nonempty")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ArityMismatchError("points of W have different lengths")
    S = max((abs(c) for p in pts for c in p), default=0)
    rows = []
    for i in range(d):
        row = [0] * d
        row[i] = 1
        if i > 0:
            row[0] = (3 * S) ** i
        rows.append(tuple(row))
    return tuple(rows)


def coordinate_map(basis) -> tuple[tuple[int, ...], ...]:
    """Integer matrix C with coordinates(x) = C @ x for a :func:`new_basis` output.

    The basis is unit lower triangular in its first column, so the inverse is
    explicit: y_1 = x_1 - sum_{i>=2} basis[i][0] * x_i and y_i = x_i.
    """
    d = len(basis)
    rows = []
    first = [1] + [-basis[i][0] for i in range(1, d)]
    rows.append(tuple(first))
    for i in range(1, d):
        row = [0] * d
        row[i] = 1
        rows.append(tuple(row))
    return tuple(rows)


def basis_coordinates(basis, x: Iterable[int]) -> tuple[int, ...]:
    x = tuple(x)
    C = coordinate_map(basis)
    return tuple(sum(r[k] * x[k] for k in range(len(x))) for r in C)
