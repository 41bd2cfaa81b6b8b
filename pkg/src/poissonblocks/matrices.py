"""Upper-triangular matrices over rational functions, group specs and measures.

Public coordinates (i, j) are 1-based, as in the usual matrix notation.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InvalidOrderError, PoissonBlocksError, UnknownGeneratorError
from .fields import CoefficientField
from .parsing import parse_rational
from .rational import RationalFunction

Letter = tuple[str, int]  # (generator name, +1 or -1)


class UTMatrix:
    """Invertible upper-triangular n x n matrix with RationalFunction entries."""

    __slots__ = ("n", "rows", "field", "nvars")

    def __init__(self, rows: Sequence[Sequence[RationalFunction]]):
        n = len(rows)
        self.n = n
        self.rows = tuple(tuple(r) for r in rows)
        first = self.rows[0][0]
        self.field, self.nvars = first.field, first.nvars
        for i, r in enumerate(self.rows):
            if len(r) != n:
                raise ValueError("matrix must be square")
            for j in range(i):
                if not r[j].is_zero():
                    raise ValueError(f"entry ({i + 1},{j + 1}) below the diagonal is nonzero")
            if r[i].is_zero():
                raise ZeroDivisionError(f"diagonal entry ({i + 1},{i + 1}) is zero")

    @classmethod
    def identity(cls, n, field, nvars):
        one, zero = RationalFunction.one(field, nvars), RationalFunction.zero(field, nvars)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[RationalFunction]):
        f, d = entries[0].field, entries[0].nvars
        zero = RationalFunction.zero(f, d)
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def elementary(cls, n, i, j, field, nvars, c=1):
        """I + c E_{i,j} with 1-based i < j."""
        rows = [list(r) for r in cls.identity(n, field, nvars).rows]
        rows[i - 1][j - 1] = c if isinstance(c, RationalFunction) else \
            RationalFunction.constant(field, nvars, c)
        return cls(rows)

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], field, nvars):
        return cls([[parse_rational(str(s), field, nvars) for s in r] for r in rows])

    def entry(self, i: int, j: int) -> RationalFunction:
        return self.rows[i - 1][j - 1]

    def diag(self) -> tuple[RationalFunction, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))

    def is_unipotent(self) -> bool:
        return all(self.rows[i][i].is_one() for i in range(self.n))

    def is_diagonal(self) -> bool:
        return all(self.rows[i][j].is_zero()
                   for i in range(self.n) for j in range(i + 1, self.n))

    def is_identity(self) -> bool:
        return self.is_unipotent() and self.is_diagonal()

    def upper_pairs(self):
        return [(i + 1, j + 1) for i in range(self.n) for j in range(i + 1, self.n)]

    def _check(self, other):
        if self.n != other.n:
            raise ValueError(f"size mismatch {self.n} vs {other.n}")
        self.field.check_same(other.field)

    def __matmul__(self, other: "UTMatrix") -> "UTMatrix":
        self._check(other)
        n = self.n
        a, b = self.rows, other.rows
        zero = RationalFunction.zero(self.field, self.nvars)
        out = []
        for i in range(n):
            row = [zero] * n
            for j in range(i, n):
                acc = None
                for k in range(i, j + 1):
                    x, y = a[i][k], b[k][j]
                    if x.is_zero() or y.is_zero():
                        continue
                    t = x * y
                    acc = t if acc is None else acc + t
                row[j] = acc if acc is not None else zero
            out.append(row)
        return UTMatrix(out)

    __mul__ = __matmul__

    def inverse(self) -> "UTMatrix":
        n = self.n
        a = self.rows
        zero = RationalFunction.zero(self.field, self.nvars)
        inv_diag = [a[i][i].inverse() for i in range(n)]
        b = [[zero] * n for _ in range(n)]
        for j in range(n):
            b[j][j] = inv_diag[j]
            for i in range(j - 1, -1, -1):
                acc = None
                for k in range(i + 1, j + 1):
                    if a[i][k].is_zero() or b[k][j].is_zero():
                        continue
                    t = a[i][k] * b[k][j]
                    acc = t if acc is None else acc + t
                b[i][j] = zero if acc is None else -(inv_diag[i] * acc)
        return UTMatrix(b)

    def __eq__(self, other):
        if not isinstance(other, UTMatrix) or self.n != other.n:
            return NotImplemented
        return all(x.exact_equal(y) for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    def __hash__(self):
        return hash(self.rows)

    def size(self) -> int:
        return sum(e.size() for r in self.rows for e in r)

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in r] for r in self.rows]

    def __str__(self):
        return "[" + "; ".join(", ".join(r) for r in self.to_strings()) + "]"

    __repr__ = __str__


def mat_mul(a: UTMatrix, b: UTMatrix) -> UTMatrix:
    return a @ b


def mat_inv(a: UTMatrix) -> UTMatrix:
    return a.inverse()


def parse_letter(token) -> Letter:
    """Accept ``name``, ``~name``, ``name^-1`` / ``name^{-1}``, or a (name, sign) pair."""
    if isinstance(token, tuple):
        name, sign = token
        return name, (1 if sign > 0 else -1)
    s = str(token).strip()
    if s.startswith("~"):
        return s[1:], -1
    m = re.fullmatch(r"(.+?)\^\{?-1\}?", s)
    if m:
        return m.group(1), -1
    return s, 1


def letter_str(letter: Letter) -> str:
    name, sign = letter
    return name if sign > 0 else "~" + name


def word_str(word: Sequence[Letter]) -> list[str]:
    return [letter_str(x) for x in word]


def invert_word(word: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple((n, -s) for n, s in reversed(word))


def free_reduce(word: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for x in word:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class GroupSpec:
    """Named generators (insertion ordered) sharing field, size and variables."""

    def __init__(self, field: CoefficientField, nvars: int, n: int,
                 generators: Mapping[str, UTMatrix]):
        if not generators:
            raise ValueError("a group needs at least one generator")
        self.field = field
        self.nvars = nvars
        self.n = n
        self.generators = dict(generators)
        for name, g in self.generators.items():
            if g.n != n or g.field != field or g.nvars != nvars:
                raise ValueError(f"generator {name} does not match the group's field/size/vars")
        self._inverses: dict[str, UTMatrix] = {}

    @property
    def names(self) -> list[str]:
        return list(self.generators)

    def letters(self) -> list[Letter]:
        """Generators and their inverses, in a fixed order."""
        out = []
        for name in self.generators:
            out.append((name, 1))
            out.append((name, -1))
        return out

    def matrix(self, letter: Letter) -> UTMatrix:
        name, sign = parse_letter(letter)
        if name not in self.generators:
            raise UnknownGeneratorError(name)
        if sign > 0:
            return self.generators[name]
        if name not in self._inverses:
            self._inverses[name] = self.generators[name].inverse()
        return self._inverses[name]

    def identity(self) -> UTMatrix:
        return UTMatrix.identity(self.n, self.field, self.nvars)

    def to_json(self) -> dict:
        return {
            "char": self.field.characteristic,
            "vars": self.nvars,
            "size": self.n,
            "generators": {k: g.to_strings() for k, g in self.generators.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        field = CoefficientField(int(obj["char"]))
        d, n = int(obj["vars"]), int(obj["size"])
        gens = {}
        for name, rows in obj["generators"].items():
            m = UTMatrix.from_strings(rows, field, d)
            if m.n != n:
                raise ValueError(f"generator {name} has size {m.n}, expected {n}")
            gens[name] = m
        return cls(field, d, n, gens)

    def __eq__(self, other):
        if not isinstance(other, GroupSpec):
            return NotImplemented
        return (self.field == other.field and self.nvars == other.nvars and self.n == other.n
                and list(self.generators) == list(other.generators)
                and all(self.generators[k] == other.generators[k] for k in self.generators))


def eval_word(spec: GroupSpec, word: Iterable) -> UTMatrix:
    """Left-to-right product of the letters; the empty word is the identity."""
    result = None
    for token in word:
        m = spec.matrix(parse_letter(token))
        result = m if result is None else result @ m
    return spec.identity() if result is None else result


def ut_part_and_diag(a: UTMatrix) -> tuple[tuple[RationalFunction, ...], UTMatrix]:
    """Split a = diag(a) * unip with unip unipotent (row i of a divided by a_ii)."""
    d = a.diag()
    unip = [[e / d[i] if not e.is_zero() else e for e in row] for i, row in enumerate(a.rows)]
    return d, UTMatrix(unip)


@dataclass(frozen=True)
class StepMeasure:
    """Finitely supported measure on words; ``lazy`` is the mass on the identity."""

    atoms: tuple[tuple[tuple[Letter, ...], float], ...]
    lazy: float = 0.0

    def __post_init__(self):
        if self.lazy < 0:
            raise ValueError("lazification mass must be non-negative")
        for word, p in self.atoms:
            if p <= 0:
                raise ValueError(f"atom {word_str(word)} has non-positive weight {p}")
        total = sum(p for _, p in self.atoms) + self.lazy
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {total}, expected 1")

    @classmethod
    def from_words(cls, weighted: Iterable[tuple[Iterable, float]], lazy: float = 0.0):
        atoms = tuple((tuple(parse_letter(x) for x in w), float(p)) for w, p in weighted)
        return cls(atoms, lazy)

    @classmethod
    def uniform(cls, words: Sequence[Iterable], lazy: float = 0.0):
        w = (1.0 - lazy) / len(words)
        return cls.from_words([(x, w) for x in words], lazy)

    def validate(self, spec: GroupSpec) -> None:
        for word, _ in self.atoms:
            for name, _sign in word:
                if name not in spec.generators:
                    raise UnknownGeneratorError(name)

    def is_symmetric(self) -> bool:
        weights: dict[tuple, float] = {}
        for w, p in self.atoms:
            weights[w] = weights.get(w, 0.0) + p
        return all(abs(weights.get(invert_word(w), 0.0) - p) < 1e-12 for w, p in weights.items())

    def to_json(self) -> dict:
        out = {"atoms": [{"word": word_str(w), "p": p} for w, p in self.atoms]}
        if self.lazy:
            out["lazy"] = self.lazy
        return out

    @classmethod
    def from_json(cls, obj) -> "StepMeasure":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_words([(a["word"], a["p"]) for a in obj["atoms"]],
                              float(obj.get("lazy", 0.0)))


def u_leq(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """(i,j) <=_U (i',j') iff i <= i' and j >= j'."""
    return a[0] <= b[0] and a[1] >= b[1]


class TOrder:
    """The partial order U or a total extension given as an ascending list."""

    def __init__(self, kind: str, ranked: Sequence[tuple[int, int]] | None = None):
        if kind not in ("U", "total"):
            raise InvalidOrderError(f"unknown order kind {kind!r}")
        self.kind = kind
        self.ranked = tuple(tuple(p) for p in ranked) if ranked is not None else None
        self._rank = ({p: k for k, p in enumerate(self.ranked)} if self.ranked else None)
        if kind == "total":
            self._validate()

    @classmethod
    def U(cls) -> "TOrder":
        return cls("U")

    @classmethod
    def row_major(cls, n: int) -> "TOrder":
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        return cls("total", sorted(pairs, key=lambda p: (p[0], -p[1])))

    @classmethod
    def col_major(cls, n: int) -> "TOrder":
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        return cls("total", sorted(pairs, key=lambda p: (-p[1], p[0])))

    @classmethod
    def from_ranked(cls, ranked: Sequence[Sequence[int]]) -> "TOrder":
        return cls("total", [tuple(p) for p in ranked])

    @classmethod
    def named(cls, name: str, n: int) -> "TOrder":
        if name == "U":
            return cls.U()
        if name == "rowmajor":
            return cls.row_major(n)
        if name == "colmajor":
            return cls.col_major(n)
        raise InvalidOrderError(f"unknown built-in order {name!r}")

    def _validate(self):
        ranked = self.ranked
        if len(set(ranked)) != len(ranked):
            raise InvalidOrderError("a pair is ranked twice")
        n = max(j for _, j in ranked)
        expected = {(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
        if set(ranked) != expected:
            raise InvalidOrderError("a total order must rank every pair (i, j), i < j, once")
        for a in ranked:
            for b in ranked:
                if a != b and u_leq(a, b) and self._rank[a] > self._rank[b]:
                    raise InvalidOrderError(f"order puts {a} above {b}, contradicting U")

    @property
    def is_total(self) -> bool:
        return self.kind == "total"

    def greater(self, a, b) -> bool:
        """a >_T b (strict)."""
        if a == b:
            return False
        if self.kind == "U":
            return u_leq(b, a)
        return self._rank[a] > self._rank[b]

    def geq(self, a, b) -> bool:
        return a == b or self.greater(a, b)

    def to_json(self):
        return "U" if self.kind == "U" else [list(p) for p in self.ranked]

    def __repr__(self):
        return "TOrder(U)" if self.kind == "U" else f"TOrder({list(self.ranked)})"


def nonzero_coordinates(u: UTMatrix) -> list[tuple[int, int]]:
    return [(i, j) for (i, j) in u.upper_pairs() if not u.entry(i, j).is_zero()]


def t_max_coordinate(u: UTMatrix, order: TOrder):
    """The T-maximal nonzero off-diagonal coordinate.

    Returns None for the identity.  For a total order this is a single pair;
    for U it is the frozenset of maximal nonzero coordinates.
    """
    nz = nonzero_coordinates(u)
    if not nz:
        return None
    if order.is_total:
        return max(nz, key=lambda p: order._rank[p])
    return frozenset(p for p in nz if not any(order.greater(q, p) for q in nz))


def in_NT(u: UTMatrix, i: int, j: int, order: TOrder) -> bool:
    """True iff u vanishes at every coordinate (i',j') >=_T (i,j)."""
    if not u.is_unipotent():
        raise PoissonBlocksError("in_NT expects a unipotent matrix")
    return all(u.entry(*p).is_zero() for p in u.upper_pairs() if order.geq(p, (i, j)))
