"""Basic-block decomposition: unipotent witnesses and 2x2 block generators.

For each pair (i, j), i < j, the block is valid when the group contains a
unipotent element whose (i, j) entry is nonzero and whose entries above
(i, j) in the chosen order vanish.  Witnesses are searched by breadth-first
enumeration of words on fingerprinted matrices, augmented with commutators of
the unipotent elements found, and every reported witness is confirmed by
exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Mapping, Sequence

from .dimension import ModuleSpec
from .errors import InvalidOrderError, TermCapExceeded
from .fingerprint import FingerprintContext
from .matrices import (
    GroupSpec, Letter, TOrder, UTMatrix, eval_word, invert_word, t_max_coordinate, word_str,
)
from .rational import RationalFunction, term_cap

DEFAULT_NODE_BUDGET = 6000
DEFAULT_COMMUTATOR_BUDGET = 20000
EXACT_TERM_CAP = 20000


def valid_wrt(u: UTMatrix, i: int, j: int, order: TOrder) -> bool:
    """m_ij != 0 and m_i'j' = 0 for every (i',j') >_T (i,j)."""
    if u.entry(i, j).is_zero():
        return False
    return all(u.entry(*p).is_zero() for p in u.upper_pairs() if order.greater(p, (i, j)))


class FingerprintGroup:
    """Group elements as tuples of evaluated matrices, one per sample point."""

    def __init__(self, spec: GroupSpec, seed: int = 0, npoints: int = 3):
        self.spec = spec
        self.n = spec.n
        ctx = FingerprintContext(spec.field, spec.nvars, seed=seed, npoints=npoints)
        for _ in range(8):
            gens = self._evaluate(ctx)
            if gens is not None:
                break
            ctx = ctx.resampled()
        else:
            raise RuntimeError("generators have poles at every sampled point set")
        self.ctx = ctx
        self.fp = ctx.fp
        self.letter_fp = gens
        one, zero = self.fp.one, self.fp.zero
        eye = tuple(one if r == c else zero for r in range(self.n) for c in range(self.n))
        self.identity = tuple(eye for _ in range(ctx.npoints))

    def _evaluate(self, ctx):
        out = {}
        for letter in self.spec.letters():
            m = self.spec.matrix(letter)
            per_point = []
            for j in range(ctx.npoints):
                vals = []
                for row in m.rows:
                    for e in row:
                        v = ctx.eval(e, j)
                        if v is None:
                            return None
                        vals.append(v)
                per_point.append(tuple(vals))
            out[letter] = tuple(per_point)
        return out

    def mul(self, a, b):
        n, fp = self.n, self.fp
        out = []
        for A, B in zip(a, b):
            C = []
            for r in range(n):
                for c in range(n):
                    if c < r:
                        C.append(fp.zero)
                        continue
                    acc = fp.zero
                    for k in range(r, c + 1):
                        x, y = A[r * n + k], B[k * n + c]
                        if x != fp.zero and y != fp.zero:
                            acc = fp.add(acc, fp.mul(x, y))
                    C.append(acc)
            out.append(tuple(C))
        return tuple(out)

    def word(self, word: Sequence[Letter]):
        acc = self.identity
        for x in word:
            acc = self.mul(acc, self.letter_fp[x])
        return acc

    def is_unipotent(self, a) -> bool:
        n, one = self.n, self.fp.one
        return all(M[r * n + r] == one for M in a for r in range(n))

    def entry_zero(self, a, i, j) -> bool:
        n, zero = self.n, self.fp.zero
        return all(M[(i - 1) * n + (j - 1)] == zero for M in a)

    def valid_pattern(self, a, i, j, order: TOrder) -> bool:
        if self.entry_zero(a, i, j):
            return False
        return all(self.entry_zero(a, *p) for p in _pairs(self.n) if order.greater(p, (i, j)))


def _pairs(n):
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


@dataclass
class PairStatus:
    pair: tuple[int, int]
    valid: bool
    witness: tuple[Letter, ...] | None
    searched_depth: int
    fingerprint_only: bool = False

    @property
    def label(self) -> str:
        return "Valid" if self.valid else f"NoWitnessUpToDepth({self.searched_depth})"

    def to_json(self):
        return {
            "pair": list(self.pair),
            "status": self.label,
            "witness": word_str(self.witness) if self.witness is not None else None,
            "fingerprint_only": self.fingerprint_only,
        }


@dataclass
class BlockReport:
    n: int
    depth: int
    order: TOrder
    pairs: dict[tuple[int, int], PairStatus]
    block_generators: dict[tuple[int, int], list[tuple[str, UTMatrix]]]
    phi_values: dict[tuple[int, int], list[tuple[str, RationalFunction]]]
    field_char: int = 0
    nvars: int = 0
    stats: dict = dc_field(default_factory=dict)

    def valid_pairs(self) -> list[tuple[int, int]]:
        return [p for p, s in self.pairs.items() if s.valid]

    def module_spec(self, pair) -> ModuleSpec:
        """The block's module: the phi-values act on k(X) with generator 1."""
        phis = tuple(v for _, v in self.phi_values[pair])
        return ModuleSpec(phis[0].field, phis[0].nvars, phis)

    def to_json(self) -> dict:
        return {
            "char": self.field_char,
            "vars": self.nvars,
            "size": self.n,
            "depth": self.depth,
            "order": self.order.to_json(),
            "pairs": [s.to_json() for s in self.pairs.values()],
            "blocks": [
                {
                    "pair": list(p),
                    "phi_values": {name: str(v) for name, v in self.phi_values[p]},
                    "generators": {name: m.to_strings() for name, m in self.block_generators[p]},
                }
                for p in self.pairs
            ],
            "stats": self.stats,
        }


def block_data(spec: GroupSpec, i: int, j: int):
    """2x2 block generators diag(g_ii, g_jj) plus delta, and phi = g_ii / g_jj."""
    field, d = spec.field, spec.nvars
    gens, phis = [], []
    for name, g in spec.generators.items():
        a, b = g.entry(i, i), g.entry(j, j)
        gens.append((name, UTMatrix.diagonal([a, b])))
        phis.append((name, a / b))
    one = RationalFunction.one(field, d)
    delta = UTMatrix([[one, one], [RationalFunction.zero(field, d), one]])
    gens.append(("block_delta", delta))
    return gens, phis


class _WitnessSearch:
    def __init__(self, spec: GroupSpec, seed=0, node_budget=DEFAULT_NODE_BUDGET,
                 commutator_budget=DEFAULT_COMMUTATOR_BUDGET):
        self.spec = spec
        self.fg = FingerprintGroup(spec, seed)
        self.node_budget = node_budget
        self.commutator_budget = commutator_budget

    def bfs_layers(self, L: int, stop: Callable[[list], bool] | None = None):
        """Yield (depth, new_nodes) with nodes = (word, fp, inverse fp)."""
        fg = self.fg
        seen = self.seen = {fg.identity}
        layer = [((), fg.identity, fg.identity)]
        self.complete_depth = 0
        total = 1
        for depth in range(1, L + 1):
            nxt = []
            exhausted = False
            for word, a, ainv in layer:
                for x in self.spec.letters():
                    if word and word[-1] == (x[0], -x[1]):
                        continue
                    b = fg.mul(a, fg.letter_fp[x])
                    if b in seen:
                        continue
                    if total >= self.node_budget:
                        exhausted = True
                        break
                    seen.add(b)
                    total += 1
                    binv = fg.mul(fg.letter_fp[(x[0], -x[1])], ainv)
                    nxt.append((word + (x,), b, binv))
                if exhausted:
                    break
            if not exhausted:
                self.complete_depth = depth
            yield depth, nxt
            layer = nxt
            if exhausted or not nxt:
                break

    def run(self, L: int, order: TOrder):
        fg = self.fg
        pairs = _pairs(self.spec.n)
        unipotent = []
        found: dict = {}

        def scan(nodes):
            for word, a, ainv in nodes:
                if fg.is_unipotent(a):
                    unipotent.append((word, a, ainv))
                    for p in pairs:
                        if p not in found and fg.valid_pattern(a, *p, order):
                            found[p] = word

        for depth, nodes in self.bfs_layers(L):
            scan(nodes)
            if len(found) == len(pairs):
                break
        seen = self.seen
        commutators = 0
        if len(found) < len(pairs):
            base = sorted(unipotent, key=lambda t: (len(t[0]), word_str(t[0])))
            extra = []
            for ia, (wa, a, ainv) in enumerate(base):
                for wb, b, binv in base[ia + 1:]:
                    if 2 * (len(wa) + len(wb)) > L or commutators >= self.commutator_budget:
                        continue
                    commutators += 1
                    c = fg.mul(fg.mul(a, b), fg.mul(ainv, binv))
                    if c in seen:
                        continue
                    seen.add(c)
                    extra.append((wa + wb + invert_word(wa) + invert_word(wb), c))
            extra.sort(key=lambda t: (len(t[0]), word_str(t[0])))
            for word, c in extra:
                for p in pairs:
                    if p not in found and fg.valid_pattern(c, *p, order):
                        found[p] = word
        self.stats = {"bfs_complete_depth": self.complete_depth, "nodes": len(seen),
                      "unipotent_found": len(unipotent), "commutators_tested": commutators}
        return found, unipotent


def decompose(spec: GroupSpec, depth: int = 8, order: TOrder | None = None, seed: int = 0,
              node_budget: int = DEFAULT_NODE_BUDGET) -> BlockReport:
    """Search witnesses for every pair and emit the 2x2 block data."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    order = order or TOrder.U()
    search = _WitnessSearch(spec, seed, node_budget)
    found, _ = search.run(depth, order)
    statuses = {}
    for p in _pairs(spec.n):
        word = found.get(p)
        if word is None:
            statuses[p] = PairStatus(p, False, None, depth)
            continue
        try:
            with term_cap(EXACT_TERM_CAP):
                u = eval_word(spec, word)
            ok = u.is_unipotent() and valid_wrt(u, *p, order)
            statuses[p] = PairStatus(p, ok, word if ok else None, depth)
        except TermCapExceeded:
            statuses[p] = PairStatus(p, True, word, depth, fingerprint_only=True)
    gens, phis = {}, {}
    for p in _pairs(spec.n):
        gens[p], phis[p] = block_data(spec, *p)
    return BlockReport(spec.n, depth, order, statuses, gens, phis,
                       spec.field.characteristic, spec.nvars, search.stats)


@dataclass
class ActionVerdict:
    acts: bool
    witness: tuple[Letter, ...] | None = None
    block: tuple[int, int] | None = None
    depth: int = 0

    @property
    def label(self) -> str:
        return "ActsNontrivially" if self.acts else f"NoEvidenceUpToDepth({self.depth})"

    def to_json(self):
        return {"verdict": self.label,
                "witness": word_str(self.witness) if self.witness is not None else None,
                "block": list(self.block) if self.block else None}


def act_nontrivially(spec: GroupSpec, g: Sequence, depth: int, order: TOrder,
                     dim_oracle: Mapping | Callable, seed: int = 0,
                     conj_budget: int = 400) -> ActionVerdict:
    """Look for h in the normal closure of g, unipotent, over a non-Liouville block.

    Candidates are conjugates x g^(+-1) x^-1 and products of two of them, of
    total length at most ``depth``.  ``dim_oracle`` maps a pair (i, j) to True
    when that block is classified non-Liouville.
    """
    if not order.is_total:
        raise InvalidOrderError("act_nontrivially needs a total order")
    from .matrices import parse_letter
    g = tuple(parse_letter(x) for x in g)
    nonliouville = dim_oracle if callable(dim_oracle) else (lambda p: bool(dim_oracle.get(p)))
    search = _WitnessSearch(spec, seed)
    fg = search.fg
    ginv = invert_word(g)
    half = max(0, (depth - len(g)) // 2)
    conjugators = [((), fg.identity, fg.identity)]
    for _, nodes in search.bfs_layers(half):
        conjugators.extend(nodes)
        if len(conjugators) >= conj_budget:
            break
    conjugators = conjugators[:conj_budget]
    fg_g, fg_ginv = fg.word(g), fg.word(ginv)
    conj = []
    seen = set()
    for word, x, xinv in conjugators:
        for w0, gg in ((g, fg_g), (ginv, fg_ginv)):
            c = fg.mul(fg.mul(x, gg), xinv)
            if c in seen:
                continue
            seen.add(c)
            conj.append((word + w0 + invert_word(word), c))
    cands = [(w, c) for w, c in conj if len(w) <= depth]
    for i, (w1, c1) in enumerate(conj):
        for w2, c2 in conj[i:]:
            if len(w1) + len(w2) <= depth:
                c = fg.mul(c1, c2)
                if c not in seen:
                    seen.add(c)
                    cands.append((w1 + w2, c))
    cands.sort(key=lambda t: (len(t[0]), word_str(t[0])))
    for word, c in cands:
        if c == fg.identity or not fg.is_unipotent(c):
            continue
        try:
            with term_cap(EXACT_TERM_CAP):
                h = eval_word(spec, word)
        except TermCapExceeded:
            continue
        if not h.is_unipotent() or h.is_identity():
            continue
        p = t_max_coordinate(h, order)
        if p is not None and nonliouville(p):
            return ActionVerdict(True, word, p, depth)
    return ActionVerdict(False, None, None, depth)
