"""Command-line harness: bench, fuzz, validate and dump for every method.

Exit codes: 0 ok, 1 divergence or invariant violation, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from collections import Counter
from pathlib import Path

from .arena import FILL_POLICIES as FILLS
from .extensions import block_size, iter_written_blocks
from .oracle import check_equivalence, format_ops, generate_ops, parse_ops
from .registry import METHODS, ALIASES, Params, UsageError, cells, initial_values, make, resolve

OK, DIVERGED, USAGE = 0, 1, 2
CASE_KEYS = ("case1", "case2", "case3", "case4", "case5")


def _percentiles(values: list, qs=(50, 90, 99)) -> dict:
    if not values:
        return {f"p{q}": 0 for q in qs} | {"max": 0}
    s = sorted(values)
    out = {f"p{q}": s[min(len(s) - 1, (len(s) * q) // 100)] for q in qs}
    out["max"] = s[-1]
    return out


def _params(args) -> Params:
    method = resolve(args.method)
    p = Params(method, args.n, args.w, args.t, args.b, args.h)
    cells(p)  # surfaces bad combinations as usage errors before any work
    return p


def _fills(text: str) -> list[str]:
    fills = [f.strip() for f in text.split(",") if f.strip()]
    for f in fills:
        if f not in FILLS:
            raise UsageError(f"unknown fill {f!r}; choose from {', '.join(FILLS)}")
    return fills


def _emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row, sort_keys=True) + "\n")
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    out.write(buf.getvalue())


def cmd_bench(args, out) -> int:
    p = _params(args)
    rows = []
    for fill in _fills(args.fill):
        t0 = time.perf_counter()
        array = make(p, fill, args.seed)
        init_time = time.perf_counter() - t0
        arena = array.region.arena
        init_writes = arena.writes
        ops = generate_ops(p.n, args.ops, args.dist, args.seed, p.entry_bits)
        probes = {"R": [], "W": []}
        times = {"R": [], "W": []}
        for op in ops:
            before = arena.reads + arena.writes
            t0 = time.perf_counter()
            if op[0] == "W":
                array.write(op[1], op[2])
            else:
                array.read(op[1])
            times[op[0]].append(time.perf_counter() - t0)
            probes[op[0]].append(arena.reads + arena.writes - before)
        row = {
            "method": p.method, "n": p.n, "w": p.w, "t": p.t, "b": p.b, "h": p.h,
            "dist": args.dist, "fill": fill, "seed": args.seed, "ops": len(ops),
            "init_write_probes": init_writes,
            "space_bits": array.space_bits(), "redundancy": array.redundancy(),
        }
        for kind, label in (("R", "read"), ("W", "write")):
            for key, val in _percentiles(probes[kind]).items():
                row[f"{label}_probes_{key}"] = val
        if args.timing:
            row["init_seconds"] = f"{init_time:.6f}"
            for kind, label in (("R", "read"), ("W", "write")):
                for key, val in _percentiles(times[kind]).items():
                    row[f"{label}_seconds_{key}"] = f"{val:.9f}"
        rows.append(row)
    _emit(rows, args.format, out)
    return OK


def _artifact(args, p: Params, fill: str, seed: int, ops: list, verdict) -> None:
    if not args.artifact_dir:
        return
    d = Path(args.artifact_dir)
    d.mkdir(parents=True, exist_ok=True)
    stem = f"{p.method}-n{p.n}-{fill}-s{seed}"
    upto = ops[: verdict.divergence["op"] + 1]
    (d / f"{stem}.ops").write_text(format_ops(upto))
    record = {"method": p.method, "n": p.n, "w": p.w, "t": p.t, "b": p.b, "h": p.h,
              "fill": fill, "seed": seed, "dist": args.dist, "ops_file": f"{stem}.ops",
              "divergence": verdict.divergence}
    (d / f"{stem}.json").write_text(json.dumps(record, sort_keys=True, indent=1) + "\n")


def cmd_fuzz(args, out) -> int:
    p = _params(args)
    init = initial_values(p)
    cases: Counter = Counter()
    runs = 0
    for seed in range(args.seed, args.seed + args.seeds):
        ops = generate_ops(p.n, args.ops, args.dist, seed, p.entry_bits)
        for fill in _fills(args.fill):
            verdict = check_equivalence(lambda: make(p, fill, seed), p.n, ops, initial=init,
                                        validate=args.validate)
            runs += 1
            cases.update(verdict.cases)
            if not verdict.ok:
                out.write(verdict.report(method=p.method, n=p.n, t=p.t, b=p.b, h=p.h,
                                         fill=fill, seed=seed, dist=args.dist) + "\n")
                _artifact(args, p, fill, seed, ops, verdict)
                return DIVERGED
    summary = {"method": p.method, "n": p.n, "runs": runs, "ok": True}
    if cases:
        summary["cases"] = {k: cases.get(k, 0) for k in CASE_KEYS} | {
            k: v for k, v in sorted(cases.items()) if k not in CASE_KEYS}
    out.write(json.dumps(summary, sort_keys=True) + "\n")
    return OK


def _load_ops(path: str) -> list[tuple]:
    try:
        return parse_ops(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def cmd_validate(args, out) -> int:
    p = _params(args)
    ops = _load_ops(args.ops_file)
    fill = _fills(args.fill)[0]
    verdict = check_equivalence(lambda: make(p, fill, args.seed), p.n, ops, initial=initial_values(p),
                                validate=True, check_range=False)
    out.write(verdict.report(method=p.method, n=p.n, ops=len(ops), ops_run=verdict.ops_run) + "\n")
    return OK if verdict.ok else DIVERGED


def cmd_dump(args, out) -> int:
    p = _params(args)
    fill = _fills(args.fill)[0]
    array = make(p, fill, args.seed)
    if args.ops_file:
        ops = _load_ops(args.ops_file)
    else:
        ops = generate_ops(p.n, args.ops, args.dist, args.seed, p.entry_bits)
    for idx, op in enumerate(ops):
        if not 0 <= op[1] < p.n:
            raise UsageError(f"op {idx}: index {op[1]} outside [0, {p.n})")
        if op[0] == "W":
            array.write(op[1], op[2])
    blocks = sorted(iter_written_blocks(array))
    size = block_size(array)
    if args.format == "json":
        out.write(json.dumps({"method": p.method, "n": p.n, "block_size": size, "blocks": blocks}) + "\n")
    else:
        out.write("block,first,last\n")
        for k in blocks:
            out.write(f"{k},{k * size},{min(p.n, k * size + size) - 1}\n")
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clearable", description="Clearable array harness")
    sub = ap.add_subparsers(dest="command", required=True)
    names = sorted(set(METHODS) | set(ALIASES))

    def common(sp, fill_default):
        sp.add_argument("--method", default="clearable-array", choices=names)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--t", type=int, default=None, help="tree height parameter")
        sp.add_argument("--b", type=int, default=None, help="bits per entry")
        sp.add_argument("--h", type=int, default=None, help="Navarro truncation height")
        sp.add_argument("--w", type=int, default=64, choices=(8, 16, 32, 64), help="word size")
        sp.add_argument("--ops", type=int, default=10_000)
        sp.add_argument("--dist", default="uniform", choices=("uniform", "zipf", "crafted", "write-once"))
        sp.add_argument("--fill", default=fill_default, help="fill policy, or a comma list")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", default="csv", choices=("csv", "json"))

    bench = sub.add_parser("bench", help="probe counts and space for one method")
    common(bench, "zeros")
    bench.add_argument("--timing", action="store_true", help="also report wall time (not reproducible)")
    fuzz = sub.add_parser("fuzz", help="differential test against the reference model")
    common(fuzz, ",".join(FILLS))
    fuzz.add_argument("--seeds", type=int, default=5)
    fuzz.add_argument("--validate", action="store_true", help="run the invariant checker after every write")
    fuzz.add_argument("--artifact-dir", default=None, help="where to write failing traces")
    val = sub.add_parser("validate", help="replay an ops file with invariant checks")
    common(val, "zeros")
    val.add_argument("ops_file")
    dump = sub.add_parser("dump", help="sorted indices of written blocks")
    common(dump, "zeros")
    dump.add_argument("--ops-file", default=None)
    return ap


COMMANDS = {"bench": cmd_bench, "fuzz": cmd_fuzz, "validate": cmd_validate, "dump": cmd_dump}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"clearable {args.command}: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
