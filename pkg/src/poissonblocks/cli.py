"""Command-line entry point: catalog, blocks, dim, classify, simulate, pipeline.

Exit codes: 0 success, 2 usage, 3 computation error, 4 Unknown verdict.
Artifacts and a run manifest go to ``--out`` when given.  Simulation results
are cached under ``$POISSONBLOCKS_CACHE`` (or ``--cache``) keyed by a digest
of the configuration.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .blocks import decompose
from .catalog import build, default_measure, list_entries
from .classify import Outcome
from .dimension import DEFAULT_RADII, ModuleSpec, dimension_estimate, is_wreath_block
from .errors import PoissonBlocksError
from .matrices import GroupSpec, StepMeasure, TOrder, parse_letter
from .pipeline import analyze, derive_seed
from .walks import STATS, AdmissibleRelation, WalkConfig, simulate

CACHE_ENV = "POISSONBLOCKS_CACHE"
EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_UNKNOWN = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _read_input(source: str):
    """(parsed JSON or catalog entry, raw text) for a path, '-' or 'catalog:<name>'."""
    if source.startswith("catalog:"):
        try:
            entry = build(source[len("catalog:"):])
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        return entry, _canonical(entry.spec.to_json())
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise UsageError(f"{source}: not JSON ({exc})") from exc


def _group_spec(obj) -> GroupSpec:
    if hasattr(obj, "spec"):
        return obj.spec
    if isinstance(obj, dict) and "spec" in obj and "generators" not in obj:
        obj = obj["spec"]
    return GroupSpec.from_json(obj)


def _order(args, n: int) -> TOrder:
    if args.order == "file":
        if not args.order_file:
            raise UsageError("--order file needs --order-file")
        return TOrder.from_ranked(json.loads(Path(args.order_file).read_text()))
    return TOrder.named(args.order, n)


def _pairs_arg(text):
    i, j = (int(x) for x in text.split(","))
    return (i, j)


class Run:
    """Collects artifacts and writes them with a manifest."""

    def __init__(self, args, argv):
        self.args, self.argv = args, argv
        self.start = time.time()
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.paths: list[str] = []
        self.failed_stage: str | None = None

    def add_input(self, name, text):
        self.inputs[name] = _digest(text)

    def emit(self, name: str, payload, kind: str = "json"):
        text = payload if kind != "json" else json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"
        self.outputs[name] = _digest(text)
        if self.args.out:
            out = Path(self.args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / name).write_text(text)
            self.paths.append(str(out / name))
        return text

    def manifest(self) -> dict:
        flags = {k: v for k, v in vars(self.args).items() if k not in ("func",)}
        return {
            "subcommand": self.args.command,
            "argv": self.argv,
            "inputs": self.inputs,
            "seed": self.args.seed,
            "tool_version": __version__,
            "flags": flags,
            "outputs": self.outputs,
            "output_paths": self.paths,
            "failed_stage": self.failed_stage,
            "duration_s": round(time.time() - self.start, 3),
        }

    def finish(self):
        if self.args.out:
            Path(self.args.out).mkdir(parents=True, exist_ok=True)
            (Path(self.args.out) / "manifest.json").write_text(
                json.dumps(self.manifest(), indent=2, sort_keys=True, default=str) + "\n")


def _print(args, payload, text_lines=None):
    if args.format == "text" and text_lines is not None:
        print("\n".join(text_lines))
    else:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))


# ---------------------------------------------------------------------------
# subcommands


def cmd_catalog(args, run: Run) -> int:
    if args.action == "list":
        names = list_entries()
        run.emit("catalog.json", names)
        _print(args, names, names)
        return EXIT_OK
    if not args.name:
        raise UsageError("catalog build needs a name")
    entry = build(args.name)
    payload = entry.to_json() if args.full else entry.spec.to_json()
    run.emit("catalog_entry.json", payload)
    _print(args, payload)
    return EXIT_OK


def cmd_blocks(args, run: Run) -> int:
    obj, raw = _read_input(args.input)
    run.add_input(args.input, raw)
    spec = _group_spec(obj)
    report = decompose(spec, args.depth, _order(args, spec.n), seed=derive_seed(args.seed, "blocks") % 2**32)
    payload = report.to_json()
    run.emit("blocks.json", payload)
    lines = [f"({p[0]},{p[1]}) {s.label} witness={s.to_json()['witness']}"
             for p, s in report.pairs.items()]
    _print(args, payload, lines)
    return EXIT_OK


def _modules_from(obj, args):
    """[(label, ModuleSpec)] from a ModuleSpec, BlockReport, GroupSpec or catalog entry."""
    if isinstance(obj, dict) and "action" in obj:
        return [("module", ModuleSpec.from_json(obj))]
    if isinstance(obj, dict) and "pairs" in obj and "blocks" in obj:
        from .fields import CoefficientField
        field, nvars = CoefficientField(int(obj["char"])), int(obj["vars"])
        valid = {tuple(p["pair"]) for p in obj["pairs"] if p["status"] == "Valid"}
        out = []
        for b in obj["blocks"]:
            pair = tuple(b["pair"])
            if pair in valid:
                out.append((f"{pair[0]},{pair[1]}",
                            ModuleSpec.from_strings(field, nvars, list(b["phi_values"].values()))))
        return out
    spec = _group_spec(obj)
    report = decompose(spec, args.depth, TOrder.U(), seed=derive_seed(args.seed, "blocks") % 2**32)
    return [(f"{p[0]},{p[1]}", report.module_spec(p)) for p in report.valid_pairs()]


def cmd_dim(args, run: Run) -> int:
    obj, raw = _read_input(args.input)
    run.add_input(args.input, raw)
    radii = tuple(int(x) for x in args.radii.split(","))
    payload = {}
    lines = []
    for label, m in _modules_from(obj, args):
        rep = dimension_estimate(m, radii, seed=derive_seed(args.seed, "dim") % 2**32,
                                 rank_budget=args.rank_budget)
        entry = rep.to_json()
        if m.field.characteristic == 0 and rep.dimension == 2 and not m.relations:
            entry["wreath"] = is_wreath_block(None, m, args.exponent_bound).to_json()
        payload[label] = entry
        lines.append(f"{label}: dimension {rep.dimension} ({rep.provenance}), "
                     f"fitted {rep.fitted_exponent:.3f}{' AMBIGUOUS' if rep.ambiguous else ''}")
    run.emit("dimension.json", payload)
    _print(args, payload, lines)
    return EXIT_UNKNOWN if any(v["ambiguous"] for v in payload.values()) else EXIT_OK


def _analysis(args, run: Run):
    obj, raw = _read_input(args.input)
    run.add_input(args.input, raw)
    spec = _group_spec(obj)
    run.failed_stage = "analyze"
    a = analyze(spec, args.depth, _order(args, spec.n), seed=args.seed,
                radii=tuple(int(x) for x in args.radii.split(",")))
    run.failed_stage = None
    return obj, spec, a


def cmd_classify(args, run: Run) -> int:
    _, _, a = _analysis(args, run)
    payload = {"verdict": a.verdict.to_json(), "citations": a.verdict.citation_trail()}
    run.emit("verdict.json", payload)
    lines = [f"{a.verdict.outcome.value} ({a.verdict.moment_class.value})"] + \
        ["  " + c for c in a.verdict.citation_trail()]
    _print(args, payload, lines)
    return EXIT_UNKNOWN if a.verdict.outcome == Outcome.UNKNOWN else EXIT_OK


def _measure(args, obj, spec) -> StepMeasure:
    if args.measure_file:
        return StepMeasure.from_json(json.loads(Path(args.measure_file).read_text()))
    if hasattr(obj, "spec"):
        return default_measure(obj, args.measure)
    names = spec.names
    if args.measure == "lazy_uniform":
        return StepMeasure.uniform([[(g, s)] for g in names for s in (1, -1)], lazy=0.5)
    if args.measure == "base_plus_lamp":
        raise UsageError("base_plus_lamp needs a catalog entry or --measure-file")
    return StepMeasure.uniform([[(g, s)] for g in names for s in (1, -1)])


def _delta_arg(text):
    if not text:
        return None
    parts = text.split("|")
    if len(parts) != 2:
        raise UsageError("--delta expects 'word_a|word_b' (space separated letters, empty for identity)")
    return tuple([parse_letter(x) for x in p.split()] for p in parts)


def _run_simulation(args, obj, spec, run: Run, label: str = "simulate"):
    measure = _measure(args, obj, spec)
    cps = [int(x) for x in args.checkpoints.split(",")] if args.checkpoints else None
    seed = derive_seed(args.seed, label)
    cfg = WalkConfig(spec, measure, args.n, args.walkers, seed, cps, project=args.project,
                     threads=args.threads)
    stats = args.stat or ["range"]
    relation = AdmissibleRelation(args.relation)
    delta = _delta_arg(args.delta)
    key = _digest(_canonical({"spec": spec.to_json(), "measure": measure.to_json(), "n": args.n,
                              "walkers": args.walkers, "seed": seed, "checkpoints": cfg.checkpoints,
                              "project": cfg.project, "stats": sorted(stats),
                              "relation": args.relation, "delta": args.delta,
                              "epsilons": args.epsilons, "f": args.f, "version": __version__}))
    cache_dir = args.cache or os.environ.get(CACHE_ENV)
    cached = Path(cache_dir) / f"{key}.json" if cache_dir else None
    if cached is not None and cached.exists():
        return json.loads(cached.read_text()), None, key
    ws = simulate(cfg, relation, delta, stats,
                  epsilons=[float(x) for x in args.epsilons.split(",")], f=args.f)
    payload = ws.to_json()
    if cached is not None:
        cached.parent.mkdir(parents=True, exist_ok=True)
        cached.write_text(json.dumps(payload, sort_keys=True))
    return payload, ws, key


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_simulate(args, run: Run) -> int:
    obj, raw = _read_input(args.input)
    run.add_input(args.input, raw)
    spec = _group_spec(obj)
    run.failed_stage = "simulate"
    payload, ws, key = _run_simulation(args, obj, spec, run)
    run.failed_stage = None
    payload = json.loads(json.dumps(payload, default=str))
    run.emit("walkstats.json", payload)
    rows = ws.csv_rows() if ws is not None else [("stat", "cell", "value")] + [
        (k, c, v) for k, d in payload.items() if isinstance(d, dict) and k != "confidence"
        for c, v in d.items()]
    run.emit("walkstats.csv", _csv_text(rows), kind="csv")
    _print(args, payload, [",".join(map(str, r)) for r in rows])
    return EXIT_OK


def cmd_pipeline(args, run: Run) -> int:
    obj, spec, a = _analysis(args, run)
    report = a.to_json()
    run.emit("blocks.json", report["blocks"])
    run.emit("dimension.json", report["dimensions"])
    if not args.no_simulate:
        run.failed_stage = "simulate"
        sim, _, _ = _run_simulation(args, obj, spec, run, label="pipeline.simulate")
        report["simulation"] = json.loads(json.dumps(sim, default=str))
        run.failed_stage = None
    run.emit("verdict.json", {"verdict": report["verdict"], "citations": report["citations"]})
    run.emit("report.json", report)
    lines = [f"verdict: {a.verdict.outcome.value} ({a.verdict.moment_class.value})"]
    for p, d in a.dims.items():
        w = a.wreath.get(p)
        lines.append(f"  block ({p[0]},{p[1]}): dimension {d.dimension} [{d.provenance}]"
                     + (f", wreath={w.ok}" if w is not None else ""))
    lines += ["  " + c for c in a.verdict.citation_trail()]
    _print(args, report, lines)
    return EXIT_UNKNOWN if a.verdict.outcome == Outcome.UNKNOWN else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", help="directory for artifacts and the run manifest")
    common.add_argument("--format", choices=["json", "text"], default="json")

    def analysis_flags(p):
        p.add_argument("--depth", type=int, default=8)
        p.add_argument("--order", choices=["U", "rowmajor", "colmajor", "file"], default="U")
        p.add_argument("--order-file")
        p.add_argument("--radii", default=",".join(map(str, DEFAULT_RADII)))

    def sim_flags(p):
        p.add_argument("--n", type=int, default=1000)
        p.add_argument("--walkers", type=int, default=100)
        p.add_argument("--checkpoints")
        p.add_argument("--stat", action="append", choices=STATS)
        p.add_argument("--delta", help="'word_a|word_b', e.g. '|delta'")
        p.add_argument("--relation", choices=["identity", "conjugate_vector"], default="identity")
        p.add_argument("--measure", choices=["uniform_symmetric", "base_plus_lamp", "lazy_uniform"],
                       default="uniform_symmetric")
        p.add_argument("--measure-file")
        p.add_argument("--project", action="store_true", help="range and returns on the diagonal projection")
        p.add_argument("--epsilons", default="1.0")
        p.add_argument("--f", choices=["sqrt", "linear"], default="sqrt")
        p.add_argument("--cache", help=f"cache directory (default ${CACHE_ENV})")

    parser = argparse.ArgumentParser(prog="poissonblocks", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common], help="list or build named example groups")
    p.add_argument("action", choices=["list", "build"])
    p.add_argument("name", nargs="?")
    p.add_argument("--full", action="store_true", help="include expected dimensions and verdict")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("blocks", parents=[common], help="basic-block decomposition")
    p.add_argument("input", help="GroupSpec JSON path, '-' or catalog:<name>")
    analysis_flags(p)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("dim", parents=[common], help="module dimension of blocks")
    p.add_argument("input", help="ModuleSpec, BlockReport or GroupSpec JSON, or catalog:<name>")
    p.add_argument("--radii", default=",".join(map(str, DEFAULT_RADII)))
    p.add_argument("--exponent-bound", type=int, default=3)
    p.add_argument("--rank-budget", type=int, default=2000)
    p.add_argument("--depth", type=int, default=8)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("classify", parents=[common], help="boundary verdict")
    p.add_argument("input")
    analysis_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo walk statistics")
    p.add_argument("input")
    sim_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pipeline", parents=[common], help="blocks, dimension, verdict and simulation")
    p.add_argument("input")
    analysis_flags(p)
    sim_flags(p)
    p.add_argument("--no-simulate", action="store_true")
    p.set_defaults(func=cmd_pipeline, project=True)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    run = Run(args, argv)
    try:
        code = args.func(args, run)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    except (PoissonBlocksError, ValueError, NotImplementedError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        run.failed_stage = run.failed_stage or args.command
        code = EXIT_COMPUTE
    run.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
