"""Randomized evaluation of rational functions (Schwartz-Zippel fingerprints).

In characteristic 0 the values live in F_q with q = 2^61 + 15.  In
characteristic p a prime field F_q would be the wrong target (reduction mod q
does not respect p = 0), so values live in an extension GF(p^k) with
p^k > 2^61 instead.  Both fields expose the same small scalar interface.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import AllPolesError
from .fields import CoefficientField
from .laurent import LaurentPoly
from .rational import RationalFunction

Q_FINGERPRINT = 2**61 + 15
NUM_POINTS = 3
_MAX_RESAMPLES = 5


class PrimeFingerprintField:
    """F_q with elements as Python ints in [0, q)."""

    def __init__(self, q: int):
        self.q = q
        self.p = q
        self.k = 1
        self.order = q
        self.zero = 0
        self.one = 1

    def from_int(self, c: int):
        return c % self.q

    def from_scalar(self, c):
        if isinstance(c, Fraction):
            den = c.denominator % self.q
            if den == 0:
                return None
            return c.numerator * pow(den, -1, self.q) % self.q
        return int(c) % self.q

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def mul(self, a, b):
        return a * b % self.q

    def inv(self, a):
        return pow(a, -1, self.q)

    def pow(self, a, e: int):
        return pow(a, e, self.q)

    def random_nonzero(self, rng: random.Random):
        return rng.randrange(1, self.q)

    def coords(self, a) -> list[int]:
        return [a]

    def __repr__(self):
        return f"F_{self.q}"


class BinaryExtensionField:
    """GF(2^k) with elements as bit masks, reduced modulo a fixed irreducible."""

    def __init__(self, k: int, modulus: int):
        self.p = 2
        self.k = k
        self.modulus = modulus
        self.order = 2**k
        self.zero = 0
        self.one = 1
        self._top = 1 << k

    def from_int(self, c: int):
        return c & 1

    def from_scalar(self, c):
        return int(c) & 1

    def add(self, a, b):
        return a ^ b

    sub = add

    def neg(self, a):
        return a

    def mul(self, a, b):
        r = 0
        top, mod = self._top, self.modulus
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        # Extended Euclid on bit polynomials.
        r0, r1 = self.modulus, a
        s0, s1 = 0, 1
        while r1:
            shift = r0.bit_length() - r1.bit_length()
            if shift < 0:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            r0 ^= r1 << shift
            s0 ^= s1 << shift
            if r0.bit_length() < r1.bit_length():
                r0, r1, s0, s1 = r1, r0, s1, s0
        # r0 == 1 now; s0 may have degree >= k only through the swaps, so reduce.
        return self._reduce(s0)

    def _reduce(self, x):
        k, mod = self.k, self.modulus
        while x.bit_length() > k:
            x ^= mod << (x.bit_length() - 1 - k)
        return x

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return r

    def random_nonzero(self, rng: random.Random):
        return rng.randrange(1, self.order)

    def coords(self, a) -> list[int]:
        return [(a >> i) & 1 for i in range(self.k)]

    def times_x(self, a):
        a <<= 1
        return a ^ self.modulus if a & self._top else a

    def __repr__(self):
        return f"GF(2^{self.k})"


class OddExtensionField:
    """GF(p^k) for odd p with elements as coefficient tuples (low degree first)."""

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        # modulus: monic, coefficients low..high with length k+1.
        self.modulus = modulus
        self._tail = [(i, (-c) % p) for i, c in enumerate(modulus[:k]) if c % p]
        self.order = p**k
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)
        # Kronecker slot width: room for k products of residues without carry.
        self._w = (2 * (p - 1).bit_length() + k.bit_length() + 1)

    def from_int(self, c: int):
        return ((c % self.p),) + (0,) * (self.k - 1)

    def from_scalar(self, c):
        return self.from_int(int(c))

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def _pack(self, a):
        w, v = self._w, 0
        for c in reversed(a):
            v = (v << w) | c
        return v

    def mul(self, a, b):
        p, k, w = self.p, self.k, self._w
        prod = self._pack(a) * self._pack(b)
        mask = (1 << w) - 1
        coeffs = []
        for _ in range(2 * k - 1):
            coeffs.append((prod & mask) % p)
            prod >>= w
        for i in range(2 * k - 2, k - 1, -1):
            c = coeffs[i]
            if c:
                base = i - k
                for j, t in self._tail:
                    coeffs[base + j] = (coeffs[base + j] + c * t) % p
        return tuple(coeffs[:k])

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return r

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)

    def random_nonzero(self, rng: random.Random):
        while True:
            a = tuple(rng.randrange(self.p) for _ in range(self.k))
            if any(a):
                return a

    def coords(self, a) -> list[int]:
        return list(a)

    def times_x(self, a):
        top = a[-1]
        out = [0] + list(a[:-1])
        if top:
            p = self.p
            for j, t in self._tail:
                out[j] = (out[j] + top * t) % p
        return tuple(out)

    def __repr__(self):
        return f"GF({self.p}^{self.k})"


# Polynomials over F_p as coefficient lists (low degree first), used only to
# find irreducible moduli.

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymulmod(a, b, f, p):
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    return _polymod(res, f, p)


def _polymod(a, f, p):
    a = _trim(list(a))
    k = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) > k:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - k
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _polygcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def _frobenius_power(f, p, times):
    """x^(p^times) mod f."""
    h = [0, 1]
    for _ in range(times):
        r, base, e = [1], h, p
        while e:
            if e & 1:
                r = _polymulmod(r, base, f, p)
            e >>= 1
            if e:
                base = _polymulmod(base, base, f, p)
        h = r
    return h


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f, p) -> bool:
    """Rabin's test for a monic polynomial f over F_p."""
    k = len(f) - 1
    x = [0, 1]
    if _polymod(_frobenius_power(f, p, k), f, p) != _polymod(x, f, p):
        return False
    for r in _prime_factors(k):
        h = _frobenius_power(f, p, k // r)
        diff = _trim([(a - b) % p for a, b in zip(h + [0] * 2, x + [0] * len(h))])
        g = _polygcd(f, diff, p)
        if len(g) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def sparse_irreducible(p: int, k: int) -> tuple[int, ...]:
    """The first irreducible trinomial x^k + a x^j + b over F_p, else a tetranomial."""
    for j in range(1, k):
        for a in range(1, p):
            for b in range(1, p):
                f = [0] * (k + 1)
                f[0], f[j], f[k] = b, a, 1
                if is_irreducible(f, p):
                    return tuple(f)
    for j in range(2, k):
        for i in range(1, j):
            for b in range(1, p):
                f = [0] * (k + 1)
                f[0], f[i], f[j], f[k] = b, 1, 1, 1
                if is_irreducible(f, p):
                    return tuple(f)
    raise RuntimeError(f"no sparse irreducible of degree {k} over F_{p}")


@lru_cache(maxsize=None)
def fingerprint_field(characteristic: int):
    """The evaluation field used for a given coefficient characteristic."""
    if characteristic == 0:
        return PrimeFingerprintField(Q_FINGERPRINT)
    p = characteristic
    if p > 2**61:
        return PrimeFingerprintField(p)
    k = 1
    while p**k <= 2**61:
        k += 1
    f = sparse_irreducible(p, k)
    if p == 2:
        return BinaryExtensionField(k, sum(1 << i for i, c in enumerate(f) if c))
    return OddExtensionField(p, k, f)


def multiplication_matrix(field, a) -> list[list[int]]:
    """Matrix over the prime subfield of x -> a*x on GF(p^k), columns = images of x^i."""
    cols, cur = [], a
    for i in range(field.k):
        cols.append(field.coords(cur))
        if i + 1 < field.k:
            cur = field.times_x(cur)
    return [[cols[c][r] for c in range(field.k)] for r in range(field.k)]


@dataclass(frozen=True)
class Fingerprint:
    """Values at the context's points; ``None`` marks a pole."""

    values: tuple

    @property
    def all_poles(self) -> bool:
        return all(v is None for v in self.values)

    def agrees_with(self, other: "Fingerprint") -> bool:
        return all(a == b for a, b in zip(self.values, other.values)
                   if a is not None and b is not None)


class FingerprintContext:
    """A fixed set of random evaluation points for one characteristic.

    The context is read-only after construction apart from memo tables of
    variable powers, which are safe to populate concurrently.
    """

    def __init__(self, field: CoefficientField, nvars: int, seed: int = 0,
                 npoints: int = NUM_POINTS):
        self.coefficient_field = field
        self.nvars = nvars
        self.seed = seed
        self.npoints = npoints
        self.fp = fingerprint_field(field.characteristic)
        rng = random.Random(f"fingerprint:{field.characteristic}:{nvars}:{seed}")
        self.points = [tuple(self.fp.random_nonzero(rng) for _ in range(nvars))
                       for _ in range(npoints)]
        self._powers = [[{0: self.fp.one, 1: pt[i]} for i in range(nvars)]
                        for pt in self.points]
        self._prime = isinstance(self.fp, PrimeFingerprintField)

    @classmethod
    def for_field(cls, field: CoefficientField, nvars: int, seed: int = 0):
        return cls(field, nvars, seed)

    def resampled(self) -> "FingerprintContext":
        return FingerprintContext(self.coefficient_field, self.nvars, self.seed + 1,
                                  self.npoints)

    def var_power(self, j: int, i: int, e: int):
        cache = self._powers[j][i]
        v = cache.get(e)
        if v is None:
            v = self.fp.pow(self.points[j][i], e)
            cache[e] = v
        return v

    def eval_laurent(self, poly: LaurentPoly, j: int):
        fp = self.fp
        if self._prime:
            q = fp.q
            total = 0
            for e, c in poly.terms.items():
                t = fp.from_scalar(c)
                if t is None:
                    return None
                for i, k in enumerate(e):
                    if k:
                        t = t * self.var_power(j, i, k) % q
                total += t
            return total % q
        total = fp.zero
        for e, c in poly.terms.items():
            t = fp.from_scalar(c)
            for i, k in enumerate(e):
                if k:
                    t = fp.mul(t, self.var_power(j, i, k))
            total = fp.add(total, t)
        return total

    def eval(self, rf, j: int):
        """Value of a rational function at point j, or None at a pole."""
        if isinstance(rf, LaurentPoly):
            return self.eval_laurent(rf, j)
        num = self.eval_laurent(rf.num, j)
        if rf.den.is_one():
            return num
        den = self.eval_laurent(rf.den, j)
        if num is None or den is None or den == self.fp.zero:
            return None
        return self.fp.mul(num, self.fp.inv(den))

    def fingerprint(self, rf) -> Fingerprint:
        return Fingerprint(tuple(self.eval(rf, j) for j in range(self.npoints)))

    def equal(self, a: RationalFunction, b: RationalFunction) -> bool:
        ctx = self
        for _ in range(_MAX_RESAMPLES):
            fa, fb = ctx.fingerprint(a), ctx.fingerprint(b)
            usable = [(x, y) for x, y in zip(fa.values, fb.values)
                      if x is not None and y is not None]
            if usable:
                return all(x == y for x, y in usable)
            ctx = ctx.resampled()
        raise AllPolesError("every evaluation point is a pole after resampling")
