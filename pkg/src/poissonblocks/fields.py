"""Coefficient fields: the rationals and prime fields F_p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatchError

MAX_WORD_PRIME = 2**63


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, which covers machine words."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class CoefficientField:
    """Either Q (characteristic 0) or F_p for a machine-word prime p."""

    characteristic: int

    def __post_init__(self):
        p = self.characteristic
        if p < 0 or (p != 0 and not is_prime(p)):
            raise ValueError(f"characteristic must be 0 or a prime, got {p}")
        if p >= MAX_WORD_PRIME:
            raise ValueError("prime fields are limited to machine-word primes")

    @classmethod
    def rationals(cls) -> "CoefficientField":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "CoefficientField":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def kind(self) -> str:
        return "Rationals" if self.characteristic == 0 else "PrimeField"

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F_{self.characteristic}"

    # Scalar arithmetic.  Rationals are stored as int when integral and as
    # Fraction otherwise; F_p elements are ints in [0, p).

    def coerce(self, c):
        p = self.characteristic
        if p:
            if isinstance(c, Fraction):
                return c.numerator * pow(c.denominator, -1, p) % p
            return int(c) % p
        if isinstance(c, Fraction):
            return c.numerator if c.denominator == 1 else c
        return int(c)

    def add(self, a, b):
        s = a + b
        p = self.characteristic
        if p:
            return s % p
        return s.numerator if isinstance(s, Fraction) and s.denominator == 1 else s

    def mul(self, a, b):
        s = a * b
        p = self.characteristic
        if p:
            return s % p
        return s.numerator if isinstance(s, Fraction) and s.denominator == 1 else s

    def neg(self, a):
        p = self.characteristic
        return (-a) % p if p else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        p = self.characteristic
        if p:
            return pow(a, -1, p)
        r = Fraction(1) / a
        return r.numerator if r.denominator == 1 else r

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def check_same(self, other: "CoefficientField") -> None:
        if self != other:
            raise FieldMismatchError(f"field mismatch: {self} vs {other}")
