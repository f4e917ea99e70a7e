"""Command-line entry point.

Exit codes: 0 success, 1 usage or I/O error, 2 infeasible / no solution.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .admission import ALGORITHMS, min_displacement
from .bench import REGIMES, BenchMismatch, run_bench, write_mismatch
from .envelope import StreamEnvelope, sum_envelopes
from .generate import random_envelope
from .multistream import (
    DEFAULT_BUDGET,
    OBJECTIVES,
    InfeasibleStreamError,
    MultiInstance,
    MultiScheduleResult,
    exact_small,
    greedy_sequential,
    verify_schedule,
)
from .reductions import (
    pack_via_mss,
    recover_colors,
    scp_brute,
    scp_via_2ss,
    self_aligning,
    stringpack_brute,
    verify_self_aligning,
    vertex_color_brute,
)

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


class CliError(Exception):
    pass


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _select(env_file: io.EnvelopeFile, ids) -> list[tuple[str, StreamEnvelope]]:
    if not ids:
        return list(env_file.streams.items())
    missing = [i for i in ids if i not in env_file.streams]
    if missing:
        raise CliError(f"unknown stream id(s): {', '.join(missing)}")
    return [(i, env_file.streams[i]) for i in ids]


def cmd_admit(args) -> int:
    f = io.read_envelope_file(args.file)
    bw = args.bandwidth or f.bandwidth
    if args.request not in f.streams:
        raise CliError(f"unknown request stream {args.request!r}")
    committed_ids = args.committed if args.committed is not None else [k for k in f.streams if k != args.request]
    committed = sum_envelopes(*(env for _, env in _select(f, committed_ids))) if committed_ids else StreamEnvelope()
    res = min_displacement(committed, f.streams[args.request], bw, args.algorithm)
    _emit(res.to_json())
    if not res.feasible:
        print(f"infeasible: {res.reason}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _multi(args) -> tuple[MultiInstance, io.EnvelopeFile]:
    f = io.read_envelope_file(args.file)
    chosen = _select(f, args.ids)
    bw = args.bandwidth or f.bandwidth
    return MultiInstance(tuple(e for _, e in chosen), bw, tuple(i for i, _ in chosen)), f


def cmd_schedule(args) -> int:
    inst, _ = _multi(args)
    try:
        if args.method == "greedy":
            res = greedy_sequential(inst, args.order)
        else:
            res = exact_small(inst, args.objective, args.budget)
    except InfeasibleStreamError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    out = res.to_json()
    out["ids"] = list(inst.ids)
    _emit(out, args.output)
    if args.method == "exact" and not res.optimal:
        print(f"search budget of {args.budget} nodes exhausted; reporting best schedule found", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst, _ = _multi(args)
    try:
        data = json.loads(Path(args.schedule).read_text())
        disp = tuple(int(x) for x in data["displacements"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CliError(f"{args.schedule}: cannot read schedule ({exc})") from exc
    if len(disp) == len(inst) and ("makespan" not in data or "last_displacement" not in data):
        res = MultiScheduleResult.from_displacements(inst, disp)
    else:
        res = MultiScheduleResult(disp, int(data.get("makespan", 0)), int(data.get("last_displacement", 0)))
    problems = verify_schedule(inst, res)
    _emit({"ok": not problems, "violations": [str(p) for p in problems]})
    return EXIT_OK if not problems else EXIT_INFEASIBLE


def cmd_gen(args) -> int:
    for name in ("peaks", "max_height", "max_len", "streams"):
        if getattr(args, name) <= 0:
            raise CliError(f"--{name.replace('_', '-')} must be positive")
    rng = np.random.default_rng(args.seed)
    streams = {f"s{k}": random_envelope(rng, args.peaks, args.max_height, args.max_len) for k in range(args.streams)}
    f = io.EnvelopeFile(args.bandwidth or args.max_height, streams)
    text = io.dumps(f.to_json())
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        report = run_bench(args.sizes, args.trials, args.seed, args.regime, args.bandwidth, args.algorithms)
    except BenchMismatch as exc:
        path = write_mismatch(args.mismatch_out, exc)
        print(f"error: {exc}; instance written to {path}", file=sys.stderr)
        return EXIT_ERROR
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            report.write_csv(fh)
    else:
        report.write_csv(sys.stdout)
    print(report.summary(), file=sys.stderr)
    return EXIT_OK


def cmd_reduce_scp(args) -> int:
    scp = io.read_scp(args.file)
    u, res, red = scp_via_2ss(scp, args.algorithm)
    brute = scp_brute(scp)
    out = {
        "threshold": red.threshold,
        "possible": red.possible,
        "displacement": res.displacement,
        "translation": u,
        "brute_translation": brute,
    }
    _emit(out)
    if (u is None) != (brute is None) or (u is not None and not scp.contains(u)):
        print("error: reduction and brute force disagree", file=sys.stderr)
        return EXIT_ERROR
    if u is None:
        print(f"no translation: minimal displacement {res.displacement} is not below threshold {red.threshold}",
              file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_reduce_stringpack(args) -> int:
    sp = io.read_stringpack(args.file)
    length, res = pack_via_mss(sp, args.budget)
    out = {"packing_length": length, "offsets": list(res.displacements), "optimal": res.optimal}
    if args.brute:
        out["brute_length"] = stringpack_brute(sp)
    _emit(out)
    return EXIT_OK


def cmd_reduce_coloring(args) -> int:
    g = io.read_graph(args.file)
    colors, packing, red = recover_colors(g, args.l)
    out = {
        "colors": colors,
        "span": packing.span,
        "string_length": red.string_length,
        "slack": red.slack,
        "groups": [list(grp) for grp in packing.groups],
    }
    if g.vertices <= 10:
        out["chromatic_number"] = vertex_color_brute(g)
    _emit(out)
    return EXIT_OK


def cmd_verify_sa(args) -> int:
    sa = self_aligning(args.n, args.l)
    bad = verify_self_aligning(sa)
    _emit({
        "ok": bad is None,
        "n": sa.n,
        "l": args.l,
        "length": sa.length,
        "slack": sa.slack,
        "counterexample": None if bad is None else {"i": bad[0], "j": bad[1], "shift": bad[2]},
    })
    return EXIT_OK if bad is None else EXIT_INFEASIBLE


def cmd_scale(args) -> int:
    try:
        data = json.loads(Path(args.file).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"{args.file}: {exc}") from exc
    scaled = io.scale_envelope_json(data, args.time_factor, args.rate_factor)
    io.envelope_file_from_json(scaled, args.file)
    _emit(scaled, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vbrcac", description="Call admission control for pre-smoothed VBR streams.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("admit", help="minimal displacement of one stream against committed traffic")
    a.add_argument("file")
    a.add_argument("request", help="id of the requested stream")
    a.add_argument("--committed", nargs="*", default=None, help="committed stream ids (default: all others)")
    a.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="morph")
    a.add_argument("--bandwidth", type=int, default=None, help="override the file's bandwidth")
    a.set_defaults(func=cmd_admit)

    for name, func, helptext in (
        ("schedule", cmd_schedule, "displacements for several streams on one channel"),
        ("verify", cmd_verify, "check a multi-stream schedule"),
    ):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("file")
        if name == "verify":
            s.add_argument("schedule", help="JSON with a displacements list")
        s.add_argument("--ids", nargs="*", default=None)
        s.add_argument("--bandwidth", type=int, default=None)
        if name == "schedule":
            s.add_argument("--method", choices=("exact", "greedy"), default="exact")
            s.add_argument("--objective", choices=OBJECTIVES, default="makespan")
            s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
            s.add_argument("--order", type=_int_list, default=None, help="greedy order as stream positions, e.g. 2,0,1")
            s.add_argument("-o", "--output", default=None)
        s.set_defaults(func=func)

    g = sub.add_parser("gen", help="seeded random envelope file")
    g.add_argument("--peaks", type=int, required=True)
    g.add_argument("--max-height", type=int, default=10)
    g.add_argument("--max-len", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--streams", type=int, default=1)
    g.add_argument("--bandwidth", type=int, default=None, help="default: --max-height")
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time naive, morph and oracle solvers")
    b.add_argument("--sizes", type=_int_list, default=[100, 1000])
    b.add_argument("--trials", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--regime", choices=REGIMES, default="mixed")
    b.add_argument("--bandwidth", type=int, default=20)
    b.add_argument("--algorithms", type=lambda t: [x for x in t.split(",") if x], default=["naive", "morph", "oracle"])
    b.add_argument("--csv", default=None, help="CSV output path (default: stdout)")
    b.add_argument("--mismatch-out", default="bench-mismatch.json")
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("reduce-scp", help="answer a segments-containing-points instance via admission")
    r.add_argument("file")
    r.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="morph")
    r.set_defaults(func=cmd_reduce_scp)

    r = sub.add_parser("reduce-stringpack", help="optimal string packing via multi-stream scheduling")
    r.add_argument("file")
    r.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    r.add_argument("--brute", action="store_true", help="also run the exhaustive packer")
    r.set_defaults(func=cmd_reduce_stringpack)

    r = sub.add_parser("reduce-coloring", help="recover a color count from a flanked string packing")
    r.add_argument("file")
    r.add_argument("--l", type=int, default=None, help="identity repetitions in the flanks (default n^4)")
    r.set_defaults(func=cmd_reduce_coloring)

    v = sub.add_parser("verify-sa", help="exhaustively check a self-aligning string set")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--l", type=int, required=True)
    v.set_defaults(func=cmd_verify_sa)

    s = sub.add_parser("scale", help="rescale a fractional envelope file to integer ticks and rates")
    s.add_argument("file")
    s.add_argument("--time-factor", type=int, default=None)
    s.add_argument("--rate-factor", type=int, default=None)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_scale)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (CliError, io.InstanceFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
