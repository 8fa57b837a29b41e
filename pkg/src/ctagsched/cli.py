"""Command-line front end: schedule, bench, verify.

Exit codes: 0 success, 1 semantic failure (bad value, too-small architecture,
failed verification), 2 malformed input (reported with a line number where
available).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from time import perf_counter

from ctagsched.graphs import (
    GraphFormatError,
    load_problem_graph,
    make_architecture,
    random_graph,
)
from ctagsched.pattern import from_json_dict, to_json_dict, to_text
from ctagsched.scheduler import STRATEGIES, SchedulerConfig, schedule, _circuit_key
from ctagsched.verify import metrics, verify

CLI_STRATEGIES = STRATEGIES + ("ctag",)

CSV_COLUMNS = (
    "n",
    "density",
    "seed",
    "architecture",
    "strategy",
    "abstract_depth",
    "decomposed_depth",
    "cphase_count",
    "swap_count",
    "compile_time_ms",
    "verified",
)


@dataclass(frozen=True)
class BenchRow:
    n: int
    density: float
    seed: int
    architecture: str
    strategy: str
    abstract_depth: int
    decomposed_depth: int
    cphase_count: int
    swap_count: int
    compile_time_ms: float
    verified: bool

    def as_record(self) -> dict:
        return {
            "n": self.n,
            "density": format(self.density, "g"),
            "seed": self.seed,
            "architecture": self.architecture,
            "strategy": self.strategy,
            "abstract_depth": self.abstract_depth,
            "decomposed_depth": self.decomposed_depth,
            "cphase_count": self.cphase_count,
            "swap_count": self.swap_count,
            "compile_time_ms": f"{self.compile_time_ms:.3f}",
            "verified": "true" if self.verified else "false",
        }


def _compile(g, arch, strategy: str, cfg: SchedulerConfig):
    """Run one strategy; "ctag" takes the better of ctag-i-astar and ctag-h.

    Returns (circuit, compile seconds); timing covers scheduling only.
    """
    if strategy == "ctag":
        total = 0.0
        picks = []
        for s in ("ctag-i-astar", "ctag-h"):
            t0 = perf_counter()
            picks.append(schedule(g, arch, replace(cfg, strategy=s)))
            total += perf_counter() - t0
        return min(picks, key=_circuit_key), total
    t0 = perf_counter()
    c = schedule(g, arch, replace(cfg, strategy=strategy))
    return c, perf_counter() - t0


def cmd_schedule(
    graph_file: str,
    arch_spec: str,
    strategy: str,
    cfg: SchedulerConfig,
    out: str | None,
    fmt: str,
) -> int:
    g = load_problem_graph(graph_file)
    arch = make_architecture(arch_spec)
    c, secs = _compile(g, arch, strategy, cfg)
    report = verify(c, g, arch)
    mx = metrics(c, g.n)

    prefix = out if out is not None else os.path.splitext(graph_file)[0]
    text_path = prefix + ".sched.txt"
    json_path = prefix + ".sched.json"
    metrics_path = prefix + ".metrics.json"
    with open(text_path, "w") as fh:
        fh.write(to_text(c))
    with open(json_path, "w") as fh:
        json.dump(to_json_dict(c), fh, indent=2)
        fh.write("\n")
    doc = mx.to_json_dict() | {
        "strategy": strategy,
        "compile_time_ms": round(secs * 1000, 3),
        "verified": report.ok,
    }
    with open(metrics_path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")

    if fmt == "json":
        print(json.dumps(doc | {"files": [text_path, json_path, metrics_path]}, indent=2))
    else:
        print(f"strategy: {strategy}")
        for key in (
            "abstract_depth",
            "decomposed_depth",
            "cphase_count",
            "swap_count",
            "decomposed_gate_count",
        ):
            print(f"{key}: {doc[key]}")
        print(f"compile_time_ms: {doc['compile_time_ms']}")
        print(f"verified: {'true' if report.ok else 'false'}")
    if not report.ok:
        print(f"verification failed: {_report_summary(report)}", file=sys.stderr)
        return 1
    return 0


def _report_summary(report) -> str:
    parts = []
    if report.missing:
        parts.append(f"{len(report.missing)} missing")
    if report.duplicated:
        parts.append(f"{len(report.duplicated)} duplicated")
    if report.illegal_gates:
        parts.append(f"{len(report.illegal_gates)} illegal")
    return ", ".join(parts) if parts else "ok"


def cmd_verify(schedule_file: str, graph_file: str, arch_spec: str, fmt: str) -> int:
    g = load_problem_graph(graph_file)
    arch = make_architecture(arch_spec)
    try:
        with open(schedule_file) as fh:
            doc = json.load(fh)
        circ = from_json_dict(doc, arch)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"not valid JSON: {exc.msg}", exc.lineno) from None
    except ValueError as exc:
        # malformed document is a format error, not a semantic failure
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = verify(circ, g, arch)
    if fmt == "json":
        print(json.dumps(report.to_json_dict(), indent=2))
    else:
        print(f"ok: {'true' if report.ok else 'false'}")
        print(f"executed: {len(report.executed_pairs)}")
        print(f"missing: {sorted(report.missing)}")
        print(f"duplicated: {sorted(report.duplicated)}")
        for cyc, kind, a, b, reason in report.illegal_gates:
            print(f"illegal: cycle {cyc} {kind}({a},{b}): {reason}")
    return 0 if report.ok else 1


def _bench_cell(cell) -> BenchRow:
    n, dens, seed, arch_spec, strategy, cfg_kw = cell
    try:
        g = random_graph(n, dens, seed)
        arch = make_architecture(arch_spec)
        cfg = SchedulerConfig(seed=seed, **cfg_kw)
        c, secs = _compile(g, arch, strategy, cfg)
        ok = verify(c, g, arch).ok
        mx = metrics(c, g.n)
        return BenchRow(
            n, dens, seed, arch_spec, strategy,
            mx.abstract_depth, mx.decomposed_depth,
            mx.cphase_count, mx.swap_count, secs * 1000, ok,
        )
    except Exception:
        return BenchRow(n, dens, seed, arch_spec, strategy, -1, -1, -1, -1, 0.0, False)


def _parse_list(text: str, conv, flag: str) -> list:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            out.append(conv(tok))
        except ValueError:
            raise ValueError(f"bad {flag} value: {tok!r}") from None
    if not out:
        raise ValueError(f"empty {flag} list")
    return out


def cmd_bench(args) -> int:
    ns = _parse_list(args.n, int, "--n")
    densities = _parse_list(args.density, float, "--density")
    seeds = _parse_list(args.seed, int, "--seed")
    arch_specs = _parse_list(args.arch, str, "--arch")
    strategies = _parse_list(args.strategy, str, "--strategy")
    for s in strategies:
        if s not in CLI_STRATEGIES:
            raise ValueError(f"unknown strategy {s!r}")
    cfg_kw = {"threshold": args.threshold, "beam": args.beam}

    cells = []
    for n in ns:
        for dens in densities:
            for seed in seeds:
                for spec in arch_specs:
                    # bare "linear" sizes the chain to the instance
                    resolved = f"linear:{n}" if spec == "linear" else spec
                    for strat in strategies:
                        cells.append((n, dens, seed, resolved, strat, cfg_kw))

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_cell, cells))
    else:
        rows = [_bench_cell(c) for c in cells]
    rows.sort(key=lambda r: (r.n, r.density, r.seed, r.strategy))

    records = [r.as_record() for r in rows]
    if args.format == "json":
        body = json.dumps(records, indent=2) + "\n"
    elif args.format == "text":
        widths = {c: max(len(c), *(len(str(r[c])) for r in records)) for c in CSV_COLUMNS}
        lines = ["  ".join(c.ljust(widths[c]) for c in CSV_COLUMNS)]
        for r in records:
            lines.append("  ".join(str(r[c]).ljust(widths[c]) for c in CSV_COLUMNS))
        body = "\n".join(lines) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(records)
        body = buf.getvalue()

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return 0 if all(r.verified for r in rows) else 1


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ctagsched",
        description="Commutativity-aware QAOA circuit scheduling.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("schedule", help="schedule one problem graph")
    ps.add_argument("--graph", required=True, help="problem graph file")
    ps.add_argument("--arch", required=True,
                    help="linear:N | grid:RxC | ibm20 | ibm27 | file:PATH")
    ps.add_argument("--strategy", default="ctag-h", choices=CLI_STRATEGIES)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--threshold", type=float, default=0.5)
    ps.add_argument("--beam", type=int, default=8)
    ps.add_argument("--out", help="output prefix (default: graph file stem)")
    ps.add_argument("--format", choices=("text", "json"), default="text")

    pb = sub.add_parser("bench", help="run a benchmark grid, emit one row per cell")
    pb.add_argument("--n", required=True, help="comma-separated vertex counts")
    pb.add_argument("--density", required=True, help="comma-separated densities in (0,1]")
    pb.add_argument("--seed", default="1", help="comma-separated seeds")
    pb.add_argument("--arch", required=True,
                    help="comma-separated arch specs; bare 'linear' sizes to n")
    pb.add_argument("--strategy", default="ctag-h", help="comma-separated strategies")
    pb.add_argument("--threshold", type=float, default=0.5)
    pb.add_argument("--beam", type=int, default=8)
    pb.add_argument("--jobs", type=int, default=1)
    pb.add_argument("--out", help="CSV output path (default: stdout)")
    pb.add_argument("--format", choices=("csv", "json", "text"), default="csv")

    pv = sub.add_parser("verify", help="verify a schedule JSON against graph and arch")
    pv.add_argument("--schedule", required=True)
    pv.add_argument("--graph", required=True)
    pv.add_argument("--arch", required=True)
    pv.add_argument("--format", choices=("text", "json"), default="text")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "schedule":
            cfg = SchedulerConfig(
                threshold=args.threshold, beam=args.beam, seed=args.seed
            )
            return cmd_schedule(
                args.graph, args.arch, args.strategy, cfg, args.out, args.format
            )
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_verify(args.schedule, args.graph, args.arch, args.format)
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
