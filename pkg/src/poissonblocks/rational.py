"""Rational functions as lazily normalized fractions of Laurent polynomials.

No multivariate gcd is attempted.  Normalization only folds monomial
denominators into the numerator, makes the denominator's lexicographic
leading coefficient 1, shifts it so every variable's minimum exponent is 0,
and tries an exact single-axis division.  Equality is decided by
cross-multiplication (exact) or through fingerprints (randomized).
"""

from __future__ import annotations

import contextlib
import threading
from fractions import Fraction

from .errors import StarConditionError, TermCapExceeded
from .fields import CoefficientField
from .laurent import LaurentPoly, star_divide

_cap_state = threading.local()
DEFAULT_TERM_CAP = 50_000
_EXACT_DIVISION_LIMIT = 300


def current_term_cap() -> int:
    return getattr(_cap_state, "cap", DEFAULT_TERM_CAP)


@contextlib.contextmanager
def term_cap(cap: int):
    """Temporarily change the per-fraction term cap for this thread."""
    old = current_term_cap()
    _cap_state.cap = cap
    try:
        yield
    finally:
        _cap_state.cap = old


def _try_exact_division(num: LaurentPoly, den: LaurentPoly):
    if len(num) > _EXACT_DIVISION_LIMIT:
        return None
    for axis in range(den.nvars):
        try:
            t, w = star_divide(num, den, axis)
        except StarConditionError:
            continue
        return t if w.is_zero() else None
    return None


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None, *, normalize=True):
        if den is None:
            den = LaurentPoly.one(num.field, num.nvars)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if normalize:
            num, den = self._normalize(num, den)
            cap = current_term_cap()
            if len(num) + len(den) > cap:
                raise TermCapExceeded(f"{len(num) + len(den)} terms exceed cap {cap}")
        self.num = num
        self.den = den

    @staticmethod
    def _normalize(num: LaurentPoly, den: LaurentPoly):
        field = num.field
        if num.is_zero():
            return num, LaurentPoly.one(field, num.nvars)
        if den.is_monomial():
            return num * (den ** -1), LaurentPoly.one(field, num.nvars)
        if num == den:
            one = LaurentPoly.one(field, num.nvars)
            return one, one
        lo = [den.axis_range(i)[0] for i in range(den.nvars)]
        if any(lo):
            neg = tuple(-x for x in lo)
            den = den.shift(neg)
            num = num.shift(neg)
        lc = den.leading_coefficient()
        if lc != 1:
            inv = field.inv(lc)
            den = den.scale(inv)
            num = num.scale(inv)
        q = _try_exact_division(num, den)
        if q is not None:
            return q, LaurentPoly.one(field, num.nvars)
        return num, den

    # constructors -------------------------------------------------------

    @classmethod
    def from_laurent(cls, p: LaurentPoly) -> "RationalFunction":
        return cls(p, None, normalize=False)

    @classmethod
    def constant(cls, field: CoefficientField, nvars: int, c=1) -> "RationalFunction":
        return cls(LaurentPoly.constant(field, nvars, c), None, normalize=False)

    @classmethod
    def zero(cls, field, nvars):
        return cls(LaurentPoly.zero(field, nvars), None, normalize=False)

    @classmethod
    def one(cls, field, nvars):
        return cls.constant(field, nvars, 1)

    @classmethod
    def variable(cls, field, nvars, index):
        return cls(LaurentPoly.variable(field, nvars, index), None, normalize=False)

    # queries --------------------------------------------------------------

    @property
    def field(self) -> CoefficientField:
        return self.num.field

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant_value()

    def is_monomial(self) -> bool:
        """True for c * X^e with c a nonzero scalar."""
        return self.den.is_one() and self.num.is_monomial()

    def as_laurent(self) -> LaurentPoly:
        if not self.den.is_one():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    def size(self) -> int:
        return len(self.num) + len(self.den)

    # arithmetic -----------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, LaurentPoly):
            return RationalFunction.from_laurent(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(self.field, self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        if other.den.is_one():
            return RationalFunction(self.num + other.num * self.den, self.den)
        if self.den.is_one():
            return RationalFunction(self.num * other.den + other.num, other.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, normalize=False)

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
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero(self.field, self.nvars)
        a, b, c, d = self.num, self.den, other.num, other.den
        # Cross-cancel identical factors before multiplying out.
        if not b.is_one() and b == c:
            b, c = None, None
        if not d.is_one() and d == a:
            a, d = None, None
        one = LaurentPoly.one(self.field, self.nvars)
        num = (a if a is not None else one) * (c if c is not None else one)
        den = (b if b is not None else one) * (d if d is not None else one)
        return RationalFunction(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k)

    def exact_equal(self, other) -> bool:
        other = self._lift(other)
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def __eq__(self, other):
        if isinstance(other, (RationalFunction, LaurentPoly, int, Fraction)):
            return self.exact_equal(other)
        return NotImplemented

    def __hash__(self):
        # Only Laurent-valued functions have canonical form; others hash coarsely.
        if self.den.is_one():
            return hash(self.num)
        return hash(("frac", self.field.characteristic, self.nvars))

    def derivative(self, index: int) -> "RationalFunction":
        n, d = self.num, self.den
        if d.is_one():
            return RationalFunction.from_laurent(n.derivative(index))
        return RationalFunction(n.derivative(index) * d - n * d.derivative(index), d * d)

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self}, {self.field})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj) -> "RationalFunction":
        return cls(LaurentPoly.from_json(obj["num"]), LaurentPoly.from_json(obj["den"]))


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    """Ring operation on Laurent polynomials: op in {'add', 'sub', 'mul'}."""
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def rf_arith(a: RationalFunction, b: RationalFunction | None, op: str) -> RationalFunction:
    """op in {'add', 'mul', 'inv_of_a'}; b is ignored for inversion."""
    if op == "add":
        a.num._check(b.num)
        return a + b
    if op == "mul":
        a.num._check(b.num)
        return a * b
    if op == "inv_of_a":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")


def rf_equal(a, b, mode: str = "randomized", ctx=None) -> bool:
    """Equality of rational functions, by fingerprints or by cross-multiplication."""
    if mode == "exact":
        return RationalFunction.exact_equal(_as_rf(a), _as_rf(b))
    if mode != "randomized":
        raise ValueError(f"unknown mode {mode!r}")
    if ctx is None:
        from .fingerprint import FingerprintContext
        ra = _as_rf(a)
        ctx = FingerprintContext.for_field(ra.field, ra.nvars)
    return ctx.equal(_as_rf(a), _as_rf(b))


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, LaurentPoly):
        return RationalFunction.from_laurent(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a rational function")
