"""Monte Carlo random walks on matrix groups and their abelian projections.

Two engines share one sampler.  Atom indices are drawn per chunk of walkers
from a Philox stream keyed by (seed, chunk index), so results do not depend
on thread count.  The projected engine works on integer exponent coordinates
of the diagonal (vectorized over walkers).  The full-group engine multiplies
fingerprinted matrices and identifies elements by their fingerprints.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from .abelian import MonomialCoordinates, NotMonomialError
from .blocks import FingerprintGroup
from .errors import AdmissibilityError, DeltaPairError, ProjectionError
from .matrices import GroupSpec, StepMeasure, TOrder, eval_word, parse_letter, t_max_coordinate

CHUNK = 16384
STATS = ("range", "genrange", "drift", "cautious", "return", "deltarank", "hits")


@dataclass
class WalkConfig:
    spec: GroupSpec
    measure: StepMeasure
    n: int
    walkers: int
    seed: int = 0
    checkpoints: Sequence[int] | None = None
    project: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.n < 1 or self.walkers < 1:
            raise ValueError("horizon and walker count must be positive")
        cps = sorted(set(int(t) for t in (self.checkpoints or [self.n])))
        if cps[0] < 1 or cps[-1] > self.n:
            raise ValueError(f"checkpoints must lie in [1, {self.n}]")
        self.checkpoints = tuple(cps)
        self.measure.validate(self.spec)


@dataclass(frozen=True)
class AdmissibleRelation:
    """``identity`` (plain range), ``conjugate_vector`` or ``plugin``.

    A plugin maps projected coordinates (free (W, F), torsion (W, T)) to
    integer class labels.
    """

    kind: str = "identity"
    block: tuple[int, int] | None = None
    plugin: Callable | None = None

    def __post_init__(self):
        if self.kind not in ("identity", "conjugate_vector", "plugin"):
            raise ValueError(f"unknown relation kind {self.kind!r}")
        if self.kind == "plugin" and self.plugin is None:
            raise ValueError("plugin relation needs a callable")


@dataclass
class WalkStats:
    checkpoints: tuple[int, ...]
    walkers: int
    range: dict = dc_field(default_factory=dict)
    gen_range: dict = dc_field(default_factory=dict)
    abelian_drift: dict = dc_field(default_factory=dict)
    cautious_prob: dict = dc_field(default_factory=dict)
    return_freq: dict = dc_field(default_factory=dict)
    delta_rank: dict = dc_field(default_factory=dict)
    hits: dict = dc_field(default_factory=dict)
    delta_colored: dict = dc_field(default_factory=dict)
    confidence: dict = dc_field(default_factory=dict)
    per_walker: dict = dc_field(default_factory=dict, repr=False)
    notes: list = dc_field(default_factory=list)

    _FIELDS = ("range", "gen_range", "abelian_drift", "cautious_prob", "return_freq",
               "delta_rank", "hits", "delta_colored")

    def to_json(self) -> dict:
        def keyed(d):
            return {",".join(map(str, k)) if isinstance(k, tuple) else str(k): v for k, v in d.items()}
        out = {"checkpoints": list(self.checkpoints), "walkers": self.walkers}
        for name in self._FIELDS:
            if getattr(self, name):
                out[name] = keyed(getattr(self, name))
        out["confidence"] = {k: keyed(v) for k, v in self.confidence.items()}
        if self.notes:
            out["notes"] = self.notes
        return out

    def csv_rows(self) -> list[tuple]:
        rows = [("stat", "cell", "value", "stderr")]
        for name in self._FIELDS:
            se = self.confidence.get(name, {})
            for k, v in getattr(self, name).items():
                cell = ";".join(map(str, k)) if isinstance(k, tuple) else str(k)
                rows.append((name, cell, v, se.get(k, "")))
        return rows


class DiagonalProjection:
    """Exponent coordinates of the diagonal part of a group element.

    Coordinates of all n diagonal slots are concatenated; columns that vanish
    on every generator are dropped.  The map is injective on the diagonal
    group, so equal coordinates mean equal diagonals.
    """

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        values = [g.entry(s, s) for g in spec.generators.values() for s in range(1, spec.n + 1)]
        try:
            mc = MonomialCoordinates.for_values(values)
            raw = {name: [mc.coords(g.entry(s, s)) for s in range(1, spec.n + 1)]
                   for name, g in spec.generators.items()}
        except NotMonomialError as exc:
            raise ProjectionError(str(exc)) from exc
        self.mc = mc
        nf, nt = mc.nfree, len(mc.torsion_moduli)
        free = {k: np.array([x for c in v for x in c[0]], dtype=np.int64) for k, v in raw.items()}
        tor = {k: np.array([x for c in v for x in c[1]], dtype=np.int64) for k, v in raw.items()}
        allf = np.array(list(free.values())).reshape(len(free), -1)
        allt = np.array(list(tor.values())).reshape(len(tor), -1)
        self.free_cols = np.flatnonzero(allf.any(axis=0)) if allf.size else np.array([], int)
        self.tor_cols = np.flatnonzero(allt.any(axis=0)) if allt.size else np.array([], int)
        self.moduli = np.array([mc.torsion_moduli[c % nt] for c in self.tor_cols], dtype=np.int64)
        self._free = {k: v[self.free_cols] for k, v in free.items()}
        self._tor = {k: v[self.tor_cols] for k, v in tor.items()}
        self._nf, self._nt = nf, nt

    @property
    def nfree(self) -> int:
        return len(self.free_cols)

    @property
    def ntor(self) -> int:
        return len(self.tor_cols)

    def word(self, word) -> tuple[np.ndarray, np.ndarray]:
        f = np.zeros(self.nfree, dtype=np.int64)
        t = np.zeros(self.ntor, dtype=np.int64)
        for token in word:
            name, sign = parse_letter(token)
            f += sign * self._free[name]
            t += sign * self._tor[name]
        if self.ntor:
            t %= self.moduli
        return f, t

    def phi_var_matrix(self, i: int, j: int) -> np.ndarray:
        """Integer matrix V with V @ free = variable exponents of g_ii / g_jj."""
        d = self.spec.nvars
        V = np.zeros((d, self.nfree), dtype=np.int64)
        for col_pos, col in enumerate(self.free_cols):
            slot, k = divmod(int(col), self._nf)
            if k >= d:
                continue
            if slot == i - 1:
                V[k, col_pos] += 1
            elif slot == j - 1:
                V[k, col_pos] -= 1
        return V


def _projection_or_none(spec):
    try:
        return DiagonalProjection(spec)
    except ProjectionError:
        return None


def _atom_table(measure: StepMeasure):
    words = [w for w, _ in measure.atoms]
    probs = [p for _, p in measure.atoms]
    if measure.lazy > 0:
        words.append(())
        probs.append(measure.lazy)
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    return words, cum


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, chunk])
    return np.random.Generator(np.random.Philox(ss))


def _sample(cum: np.ndarray, n: int, W: int, rng) -> np.ndarray:
    u = rng.random((n, W))
    idx = np.searchsorted(cum, u, side="right")
    return np.minimum(idx, len(cum) - 1).astype(np.int32)


def _encode(free: np.ndarray, tor: np.ndarray, bound: int, moduli) -> np.ndarray:
    """Exact int64 keys for integer rows when they fit, else a 64-bit mixing hash."""
    cols = [free[..., k] + bound for k in range(free.shape[-1])]
    sizes = [2 * bound + 1] * free.shape[-1]
    cols += [tor[..., k] for k in range(tor.shape[-1])]
    sizes += [int(m) for m in moduli]
    if not cols:
        return np.zeros(free.shape[:-1], dtype=np.int64)
    if math.prod(sizes) < 2**62:
        key = np.zeros(free.shape[:-1], dtype=np.int64)
        for c, s in zip(cols, sizes):
            key = key * s + c
        return key
    mult = np.random.default_rng(12345).integers(1, 2**63, size=len(cols), dtype=np.uint64) | np.uint64(1)
    key = np.zeros(free.shape[:-1], dtype=np.uint64)
    with np.errstate(over="ignore"):
        for c, m in zip(cols, mult):
            key = (key ^ (c.astype(np.uint64) * m)) * np.uint64(0x9E3779B97F4A7C15)
    return key.view(np.int64)


def cumulative_distinct(keys: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
    """counts[t, w] = number of distinct keys[:t+1, w] (restricted to mask)."""
    n, W = keys.shape
    t_idx = np.repeat(np.arange(n)[None, :], W, axis=0).ravel()
    w_idx = np.repeat(np.arange(W), n)
    k = keys.T.ravel()
    if mask is not None:
        sel = mask.T.ravel()
        t_idx, w_idx, k = t_idx[sel], w_idx[sel], k[sel]
    new = np.zeros((n, W), dtype=np.int64)
    if k.size:
        order = np.lexsort((t_idx, k, w_idx))
        ks, ws = k[order], w_idx[order]
        first = np.ones(ks.size, dtype=bool)
        first[1:] = (ks[1:] != ks[:-1]) | (ws[1:] != ws[:-1])
        np.add.at(new, (t_idx[order][first], ws[first]), 1)
    return np.cumsum(new, axis=0)


def _delta_setup(spec: GroupSpec, proj, words, delta, block):
    a, b = (tuple(parse_letter(x) for x in w) for w in delta)
    u = eval_word(spec, a).inverse() @ eval_word(spec, b)
    if not u.is_unipotent() or u.is_identity():
        raise DeltaPairError("delta atoms must differ by a nontrivial unipotent element")
    if block is None:
        block = t_max_coordinate(u, TOrder.row_major(spec.n))
    ids = [k for k, w in enumerate(words) if w in (a, b)]
    if not ids:
        raise DeltaPairError("delta atoms are not in the support of the measure")
    return np.array(ids), proj.word(a)[0], block


def _run_chunk(cfg: WalkConfig, proj, words, cum, chunk: int, W: int, want: set, opts: dict):
    rng = _chunk_rng(cfg.seed, chunk)
    n, cps = cfg.n, np.array(cfg.checkpoints) - 1
    idx = _sample(cum, n, W, rng)
    out: dict = {}
    if proj is not None:
        steps_f = np.array([proj.word(w)[0] for w in words]).reshape(len(words), proj.nfree)
        steps_t = np.array([proj.word(w)[1] for w in words]).reshape(len(words), proj.ntor)
        maxstep = int(np.abs(steps_f).max()) if steps_f.size else 0
        dtype = np.int32 if n * maxstep < 2**31 else np.int64
        pos = np.cumsum(steps_f[idx].astype(dtype), axis=0)  # (n, W, F)
        tor = np.cumsum(steps_t[idx], axis=0) % proj.moduli if proj.ntor else np.zeros((n, W, 0), np.int64)
        bound = n * maxstep
        if "range" in want and cfg.project:
            out["range"] = cumulative_distinct(_encode(pos, tor, bound, proj.moduli))[cps]
        if "return" in want and cfg.project:
            at0 = ~pos.any(axis=2) & ~tor.any(axis=2)
            out["return"] = at0.sum(axis=1)
        if "drift" in want or "cautious" in want:
            norm = np.abs(pos).sum(axis=2)
            if "drift" in want:
                out["drift"] = norm[cps].astype(float)
            if "cautious" in want:
                runmax = np.maximum.accumulate(norm, axis=0)[cps]
                f = np.sqrt if opts["f"] == "sqrt" else (lambda x: x)
                scale = f(np.array(cfg.checkpoints, dtype=float))[:, None]
                out["cautious"] = {eps: (runmax < eps * scale) for eps in opts["epsilons"]}
        if "hits" in want:
            gamma = np.zeros((n, proj.nfree), dtype=np.int64)
            if proj.nfree:
                gamma[:, 0] = np.round(opts["hit_drift"] * np.arange(1, n + 1))
            hit = (pos == gamma[:, None, :].astype(pos.dtype)).all(axis=2) & ~tor.any(axis=2)
            out["hits"] = np.cumsum(hit, axis=0)[cps]
        relation = opts["relation"]
        if "genrange" in want:
            if relation.kind == "identity":
                gkeys = _encode(pos, tor, bound, proj.moduli)
            elif relation.kind == "conjugate_vector":
                V = proj.phi_var_matrix(*opts["line_block"])
                lines = np.einsum("dk,twk->twd", V, pos.astype(np.int64))
                gkeys = _encode(lines, np.zeros(lines.shape[:2] + (0,), np.int64), bound * 2, [])
            else:
                gkeys = np.stack([np.asarray(relation.plugin(pos[t], tor[t]), dtype=np.int64)
                                  for t in range(n)])
            if relation.kind != "identity":
                _check_admissible(pos, tor, gkeys, bound, proj, opts["admissibility_samples"])
            out["genrange"] = cumulative_distinct(gkeys)[cps]
        if "deltarank" in want:
            ids, a_free, block = opts["delta"]
            V = proj.phi_var_matrix(*block)
            prev = np.concatenate([np.zeros((1, W, proj.nfree), pos.dtype), pos[:-1]], axis=0)
            lines = np.einsum("dk,twk->twd", V, (prev + a_free.astype(pos.dtype)).astype(np.int64))
            dkeys = _encode(lines, np.zeros(lines.shape[:2] + (0,), np.int64), bound * 2 + 2, [])
            mask = np.isin(idx, ids)
            out["deltarank"] = cumulative_distinct(dkeys, mask)[cps]
            out["deltasteps"] = np.cumsum(mask, axis=0)[cps]
            if opts.get("coloring"):
                colors = rng.random((n, W)) < 0.5
                out["colored"] = np.cumsum(mask & colors, axis=0)[cps]
    if not cfg.project and ("range" in want or "return" in want):
        r, ret = _full_group_chunk(cfg, words, idx, cps, opts["fg"])
        if "range" in want:
            out["range"] = r
        if "return" in want:
            out["return"] = ret
    return out


def _check_admissible(pos, tor, gkeys, bound, proj, samples):
    n = pos.shape[0]
    ekeys = _encode(pos, tor, bound, proj.moduli)
    for t in np.unique(np.linspace(0, n - 1, num=min(samples, n)).astype(int)):
        e, g = ekeys[t], gkeys[t]
        pairs = np.unique(np.stack([e, g], axis=1), axis=0)
        if len(np.unique(pairs[:, 1])) < len(pairs):
            raise AdmissibilityError(
                f"relation identifies distinct states at time {t + 1}")


def _full_group_chunk(cfg: WalkConfig, words, idx, cps, fg: FingerprintGroup):
    n, W = idx.shape
    step_fp = [fg.word(w) for w in words]
    rng_out = np.zeros((len(cps), W), dtype=np.int64)
    ret = np.zeros(n, dtype=np.int64)
    cp_set = {int(c): k for k, c in enumerate(cps)}
    for w in range(W):
        x = fg.identity
        seen = set()
        for t in range(n):
            x = fg.mul(x, step_fp[idx[t, w]])
            seen.add(x)
            if x == fg.identity:
                ret[t] += 1
            k = cp_set.get(t)
            if k is not None:
                rng_out[k, w] = len(seen)
    return rng_out, ret


def simulate(config: WalkConfig, relation: AdmissibleRelation | None = None,
             delta: tuple | None = None, stats: Sequence[str] | None = None,
             epsilons: Sequence[float] = (1.0,), f: str = "sqrt", hit_drift: float = 0.0,
             block: tuple[int, int] | None = None, coloring: bool = False,
             admissibility_samples: int = 16) -> WalkStats:
    """Run ``config.walkers`` independent walks and aggregate the requested statistics.

    ``delta`` is a pair of words (either may be empty, meaning the identity)
    whose quotient is unipotent; every step that picks one of them
    contributes the conjugate vector of that quotient by the current
    position, and ``delta_rank`` is the rank of the vectors collected so far.
    """
    relation = relation or AdmissibleRelation()
    stats = set(stats or (["range"] + (["deltarank"] if delta else [])))
    unknown = stats - set(STATS)
    if unknown:
        raise ValueError(f"unknown statistics {sorted(unknown)}")
    if f not in ("sqrt", "linear"):
        raise ValueError("f must be 'sqrt' or 'linear'")
    spec = config.spec
    proj = _projection_or_none(spec)
    if proj is not None and all(g.is_diagonal() for g in spec.generators.values()):
        config.project = True
    needs_proj = stats & {"genrange", "drift", "cautious", "deltarank", "hits"}
    if (needs_proj or config.project) and proj is None:
        raise ProjectionError("statistic needs monomial diagonal entries")
    words, cum = _atom_table(config.measure)
    opts = {"relation": relation, "epsilons": tuple(epsilons), "f": f, "hit_drift": hit_drift,
            "coloring": coloring, "admissibility_samples": admissibility_samples}
    if relation.kind == "conjugate_vector":
        opts["line_block"] = relation.block or block or (1, spec.n)
    if "deltarank" in stats:
        if delta is None:
            raise DeltaPairError("deltarank needs a delta pair")
        opts["delta"] = _delta_setup(spec, proj, words, delta, block)
    if not config.project and stats & {"range", "return"}:
        opts["fg"] = FingerprintGroup(spec, seed=config.seed & 0xFFFFFFFF)

    N = config.walkers
    chunks = [(c, min(CHUNK, N - c * CHUNK)) for c in range((N + CHUNK - 1) // CHUNK)]

    def job(cw):
        return _run_chunk(config, proj, words, cum, cw[0], cw[1], stats, opts)

    if config.threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(config.threads) as ex:
            parts = list(ex.map(job, chunks))
    else:
        parts = [job(c) for c in chunks]
    return _aggregate(config, parts, stats, tuple(epsilons), coloring)


def _aggregate(config: WalkConfig, parts, stats, epsilons, coloring) -> WalkStats:
    cps, N = config.checkpoints, config.walkers
    ws = WalkStats(cps, N)

    def cat(name):
        return np.concatenate([p[name] for p in parts], axis=1)

    def mean_se(arr):
        m = arr.mean(axis=1)
        se = arr.std(axis=1, ddof=1) / math.sqrt(N) if N > 1 else np.zeros_like(m)
        return ({t: float(v) for t, v in zip(cps, m)}, {t: float(v) for t, v in zip(cps, se)})

    for stat, attr in (("range", "range"), ("genrange", "gen_range"), ("drift", "abelian_drift"),
                       ("deltarank", "delta_rank"), ("hits", "hits")):
        if stat in stats:
            arr = cat(stat)
            ws.per_walker[attr] = arr
            vals, se = mean_se(arr)
            setattr(ws, attr, vals)
            ws.confidence[attr] = se
    if "deltarank" in stats:
        ws.per_walker["delta_steps"] = cat("deltasteps")
        if coloring:
            vals, se = mean_se(cat("colored"))
            ws.delta_colored = vals
            ws.confidence["delta_colored"] = se
    if "cautious" in stats:
        for eps in epsilons:
            hit = np.concatenate([p["cautious"][eps] for p in parts], axis=1)
            for t, row in zip(cps, hit):
                p = float(row.mean())
                ws.cautious_prob[(t, eps)] = p
                ws.confidence.setdefault("cautious_prob", {})[(t, eps)] = math.sqrt(p * (1 - p) / N)
    if "return" in stats:
        counts = sum(p["return"] for p in parts)
        ws.per_walker["return_counts"] = counts
        for t in range(1, config.n + 1):
            p = float(counts[t - 1]) / N
            ws.return_freq[t] = p
            ws.confidence.setdefault("return_freq", {})[t] = math.sqrt(p * (1 - p) / N)
    return ws


# ---------------------------------------------------------------------------
# probes and oracles


def fit_decay_exponent(ts: Sequence[int], ps: Sequence[float], t_min: int = 10) -> float | None:
    """Least-squares slope of -log p against log t over cells with p > 0, t >= t_min."""
    pts = [(math.log(t), math.log(p)) for t, p in zip(ts, ps) if t >= t_min and p and p > 0]
    if len(pts) < 3:
        return None
    x, y = np.array(pts).T
    return float(-np.polyfit(x, y, 1)[0])


def strong_transience_probe(config: WalkConfig, t_min: int = 10) -> dict:
    """Return frequencies, partial sums and a fitted decay exponent.

    Cells with no observed return are reported as missing and left out of the
    fit.  The flag is set when the fitted exponent exceeds 1.
    """
    ws = simulate(config, stats=["return"])
    ts = list(range(1, config.n + 1))
    freq = [ws.return_freq[t] for t in ts]
    cells = {t: (p if p > 0 else None) for t, p in zip(ts, freq)}
    partial = np.cumsum(freq).tolist()
    exponent = fit_decay_exponent(ts, freq, t_min)
    return {
        "return_freq": cells,
        "stderr": ws.confidence["return_freq"],
        "partial_sums": dict(zip(ts, partial)),
        "missing": [t for t, v in cells.items() if v is None],
        "fitted_exponent": exponent,
        "uniform_strong_transience_consistent": bool(exponent is not None and exponent > 1),
        "symmetric_measure": config.measure.is_symmetric(),
    }


def cautiousness_probe(config: WalkConfig, f: str = "sqrt", epsilons: Sequence[float] = (1.0,),
                       module=None, span_delta: float = 1.0) -> list[dict]:
    """Empirical P[max_{m<=t} |Y_m| < eps f(t)] with the span column when a module is given.

    |.| is the L1 norm of the projected exponent coordinates.  The span
    column reports span_dim at radius ceil(span_delta * f(t)) and, in char p,
    log(p) * span_dim / t, the exponential rate of the number of reachable
    module elements.
    """
    ws = simulate(config, stats=["cautious"], epsilons=epsilons, f=f)
    rows = []
    span_cache: dict = {}
    for (t, eps), p in sorted(ws.cautious_prob.items()):
        row = {"t": t, "epsilon": eps, "prob": p, "stderr": ws.confidence["cautious_prob"][(t, eps)]}
        if module is not None:
            from .dimension import span_dim
            scale = math.sqrt(t) if f == "sqrt" else t
            r = max(1, math.ceil(span_delta * scale))
            if r not in span_cache:
                span_cache[r] = span_dim(module, r)
            row["span_radius"] = r
            row["span_dim"] = span_cache[r]
            char = module.field.characteristic
            row["log_count_per_step"] = (span_cache[r] * math.log(char) / t) if char else None
        rows.append(row)
    return rows


def projected_steps(spec: GroupSpec, measure: StepMeasure):
    """(free vectors, torsion vectors, probabilities, moduli) of the projected step law."""
    proj = DiagonalProjection(spec)
    words, _ = _atom_table(measure)
    probs = [p for _, p in measure.atoms] + ([measure.lazy] if measure.lazy > 0 else [])
    fr = np.array([proj.word(w)[0] for w in words]).reshape(len(words), proj.nfree)
    tr = np.array([proj.word(w)[1] for w in words]).reshape(len(words), proj.ntor)
    return fr, tr, np.array(probs), proj.moduli


def exact_return_probabilities(spec: GroupSpec, measure: StepMeasure, t_max: int,
                               state_budget: int = 5_000_000) -> np.ndarray:
    """p[t] = P(projected walk at the origin at time t), t = 0..t_max, by propagation.

    The distribution lives on a box large enough to hold every reachable
    state; exceeding ``state_budget`` cells raises ValueError.
    """
    fr, tr, probs, moduli = projected_steps(spec, measure)
    F = fr.shape[1]
    reach = t_max * (int(np.abs(fr).max()) if fr.size else 0)
    shape = (2 * reach + 1,) * F + tuple(int(m) for m in moduli)
    if math.prod(shape) > state_budget:
        raise ValueError(f"{math.prod(shape)} states exceed the budget {state_budget}")
    dist = np.zeros(shape)
    origin = (reach,) * F + (0,) * len(moduli)
    dist[origin] = 1.0
    out = [1.0]
    for _ in range(t_max):
        new = np.zeros_like(dist)
        for v, w, p in zip(fr, tr, probs):
            if not dist.ndim:
                new += p * dist
                continue
            new += p * np.roll(dist, tuple(int(x) for x in v) + tuple(int(x) for x in w),
                               axis=tuple(range(F + len(moduli))))
        dist = new
        out.append(float(dist[origin]))
    return np.array(out)
