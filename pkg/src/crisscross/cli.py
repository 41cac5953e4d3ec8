"""``crisscross`` command line.

Exit codes: 0 ok, 1 selftest failure, 2 invalid parameters, 3 decode
failure, 4 I/O or format error, 5 equivalence counterexample.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from itertools import combinations
from typing import Iterator, TextIO

import numpy as np

from . import analysis, codec, gabidulin
from .channel import DELETION, INSERTION, ChannelPattern, all_deletion_patterns, apply, splits
from .core import BitArray2D
from .errors import CrissCrossError, FormatError, InvalidParams, TooLarge

EXIT_OK, EXIT_SELFTEST, EXIT_PARAMS, EXIT_DECODE, EXIT_IO, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3, 4, 5
EXHAUSTIVE_LIMIT = 10**6


class _Exit(Exception):
    def __init__(self, code: int, msg: str) -> None:
        super().__init__(msg)
        self.code = code


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def _params(args) -> codec.CodeParams:
    try:
        return codec.make_params(args.n, args.t, args.ell)
    except InvalidParams as exc:
        raise _Exit(EXIT_PARAMS, f"{type(exc).__name__}: {exc}") from exc


# ---------------------------------------------------------------------------


def cmd_params(args, out: TextIO) -> int:
    p = _params(args)
    summary = p.summary()
    summary["redundancy"] = codec.redundancy_accounting(p)
    if args.format == "json":
        out.write(_dump(summary) + "\n")
        return EXIT_OK
    out.write(f"n={p.n} t={p.t} ell={p.ell} w={p.w} r_w={p.r_w} s_L={p.s_L} s_T={p.s_T}\n")
    out.write(f"row code: {p.row_cfg.mode}, {p.row_cfg.payload_bits} payload bits x {p.t + 1} copies\n")
    out.write(f"message capacity: {summary['message_capacity']} bits; redundancy {summary['redundancy']['total_actual']} bits\n")
    out.write(f"{'region':<8}{'rows':>12}{'cols':>12}\n")
    for name, r in p.regions.rects.items():
        out.write(f"{name:<8}{f'[{r.r0},{r.r1})':>12}{f'[{r.c0},{r.c1})':>12}\n")
    out.write(f"parity cells: {len(p.regions.parity_cells)}\n")
    return EXIT_OK


def _insertion_positions(shape, t) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    rows, cols = shape
    for t_r, t_c in splits(shape, t, INSERTION):
        for R in combinations(range(rows + t_r), t_r):
            for C in combinations(range(cols + t_c), t_c):
                yield R, C


def _pattern_space(n: int, t: int, mode: str) -> int:
    total = 0
    for t_r in range(t + 1):
        t_c = t - t_r
        if mode == DELETION:
            total += math.comb(n, t_r) * math.comb(n, t_c)
        else:
            total += math.comb(n + t_r, t_r) * math.comb(n + t_c, t_c)
    return total


def _patterns(args, n: int, t: int, mode: str) -> Iterator[ChannelPattern]:
    if args.pattern_source == "file":
        if not args.patterns:
            raise _Exit(EXIT_PARAMS, "--pattern-source file needs --patterns FILE")
        try:
            with open(args.patterns, encoding="utf-8") as fh:
                lines = [ln for ln in fh.read().splitlines() if ln.strip()]
        except OSError as exc:
            raise _Exit(EXIT_IO, f"cannot read patterns: {exc}") from exc
        for ln in lines:
            try:
                p = ChannelPattern.from_json(ln)
            except FormatError as exc:
                raise _Exit(EXIT_IO, f"bad pattern line: {exc}") from exc
            if p.mode == mode:
                yield p
        return
    if args.pattern_source == "exhaustive":
        if _pattern_space(n, t, mode) > EXHAUSTIVE_LIMIT:
            raise _Exit(EXIT_PARAMS, "pattern space exceeds the exhaustive limit")
        if mode == DELETION:
            yield from all_deletion_patterns((n, n), t)
            return
        rng = np.random.default_rng([args.seed, 1])
        for R, C in _insertion_positions((n, n), t):
            rops = [(i, rng.integers(0, 2, n).tolist()) for i in R]
            cops = [(j, rng.integers(0, 2, n + len(R)).tolist()) for j in C]
            yield ChannelPattern(INSERTION, rops, cops)
        return
    from .channel import random_pattern

    for k in range(args.trials):
        yield random_pattern((n, n), t, mode, (args.seed * 1_000_003 + k) & 0xFFFFFFFF)


def cmd_roundtrip(args, out: TextIO) -> int:
    p = _params(args)
    gab = gabidulin.build(p.n, p.t)
    cap = codec.message_capacity(p)
    fixed = None
    if args.codeword:
        try:
            fixed = BitArray2D.load(args.codeword)
        except (OSError, FormatError) as exc:
            raise _Exit(EXIT_IO, f"cannot load codeword: {exc}") from exc
        if fixed.shape != (p.n, p.n) or not gabidulin.is_codeword(gab, fixed) or not codec.validate_locator_set_membership(p, fixed).ok:
            raise _Exit(EXIT_IO, "codeword file does not hold a codeword of this code")
    report_fh = None
    if args.report:
        try:
            report_fh = open(args.report, "w", encoding="utf-8")
        except OSError as exc:
            raise _Exit(EXIT_IO, f"cannot open report: {exc}") from exc

    def emit(obj) -> None:
        line = _dump(obj) + "\n"
        out.write(line)
        out.flush()
        if report_fh:
            report_fh.write(line)

    modes = [DELETION, INSERTION] if args.mode == "both" else [args.mode]
    trials = ok = max_erasures = 0
    try:
        for mode in modes:
            for pattern in _patterns(args, p.n, p.t, mode):
                if fixed is not None:
                    X = fixed
                else:
                    msg = np.random.default_rng([args.seed, 0, trials]).integers(0, 2, cap, dtype=np.uint8)
                    X = codec.encode(p, gab, msg)
                try:
                    received = apply(X, pattern)
                    C, m, rep = codec.decode(p, gab, received)
                    success = C == X
                    rep_d = rep.to_dict()
                    rep_d["success"] = bool(success)
                    max_erasures = max(max_erasures, rep.erasures_used)
                except CrissCrossError as exc:
                    success = False
                    rep_d = {"mode": mode, "success": False, "error": f"{type(exc).__name__}: {exc}"}
                emit({"trial": trials, "pattern": pattern.to_dict(), "success": bool(success), "report": rep_d})
                trials += 1
                ok += bool(success)
        rate = ok / trials if trials else 0.0
        emit({"summary": True, "n": p.n, "t": p.t, "trials": trials, "successes": ok, "success_rate": rate, "max_erasures_used": max_erasures})
    finally:
        if report_fh:
            report_fh.close()
    if trials == 0:
        raise _Exit(EXIT_PARAMS, "no trials to run")
    return EXIT_OK if ok == trials else EXIT_DECODE


def _int_list(text: str, name: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise _Exit(EXIT_PARAMS, f"malformed {name}: {text!r}") from exc
    if not vals:
        raise _Exit(EXIT_PARAMS, f"empty {name}")
    return vals


def cmd_bounds(args, out: TextIO) -> int:
    ns = _int_list(args.n_list, "--n-list")
    ts = _int_list(args.t_list, "--t-list")
    try:
        recs = [analysis.bounds_record(n, t) for n in ns for t in ts]
    except InvalidParams as exc:
        raise _Exit(EXIT_PARAMS, str(exc)) from exc
    if args.format == "json":
        for r in recs:
            out.write(_dump(r.__dict__) + "\n")
    else:
        out.write(analysis.bounds_csv(recs))
    return EXIT_OK


def _shape(text: str) -> tuple[int, int]:
    try:
        r, c = (int(v) for v in text.lower().split("x"))
    except ValueError as exc:
        raise _Exit(EXIT_PARAMS, f"malformed shape {text!r}; use RxC") from exc
    if r < 1 or c < 1:
        raise _Exit(EXIT_PARAMS, "shape must be positive")
    return r, c


def cmd_equivalence(args, out: TextIO) -> int:
    shape = _shape(args.shape)
    if args.pairs is not None and args.pairs < 1:
        raise _Exit(EXIT_PARAMS, "pairs must be >= 1")
    try:
        if args.exhaustive:
            cells = shape[0] * shape[1]
            if cells > 20 or 4**cells > EXHAUSTIVE_LIMIT * 16:
                raise TooLarge(f"exhaustive pairs over {shape[0]}x{shape[1]} exceed the limit")
            pairs = tested = bad = 0
            arrays = [np.array([(v >> k) & 1 for k in range(cells)], dtype=np.uint8).reshape(shape) for v in range(1 << cells)]
            for i in range(len(arrays)):
                for j in range(i, len(arrays)):
                    tested += 1
                    bad += not analysis.equivalence_check(arrays[i], arrays[j], args.t)
            summary = {"shape": list(shape), "t": args.t, "pairs_tested": tested, "counterexamples": bad}
        else:
            s = analysis.equivalence_sweep(shape, args.t, args.pairs or 1000, args.seed)
            summary = s.to_dict()
    except (TooLarge, InvalidParams) as exc:
        raise _Exit(EXIT_PARAMS, f"{type(exc).__name__}: {exc}") from exc
    out.write(_dump(summary) + "\n")
    return EXIT_COUNTEREXAMPLE if summary["counterexamples"] else EXIT_OK


def cmd_selftest(args, out: TextIO) -> int:
    from .core import FieldContext, gf_inv, gf_mul
    from .window import rank, unrank

    checks = {}
    ctx = FieldContext.default(3)
    checks["field"] = gf_mul(0b010, 0b011, ctx) == 0b110 and gf_inv(0b010, ctx) == 0b101
    checks["window"] = all(rank(unrank(m, 3, 1, 4)) == m for m in range(2401))
    g = gabidulin.build(8, 2)
    rng = np.random.default_rng(args.seed)
    X = gabidulin.encode(g, rng.integers(0, 2, g.message_bits))
    checks["gabidulin"] = all(
        gabidulin.erasure_decode(g, X, rows, cols) == X for rows, cols in [((1, 5), ()), ((2,), (7,)), ((), (0, 3))]
    )
    checks["equivalence"] = analysis.equivalence_sweep((3, 3), 1, 200, args.seed).counterexamples == 0
    p = codec.make_params(64, 1)
    gab = gabidulin.build(64, 1)
    msg = rng.integers(0, 2, codec.message_capacity(p))
    C = codec.encode(p, gab, msg)
    ok = True
    for k in (0, 17, 63):
        for pat in (ChannelPattern(DELETION, [k], []), ChannelPattern(DELETION, [], [k])):
            D, m, _ = codec.decode(p, gab, apply(C, pat))
            ok &= D == C and bool(np.array_equal(m, msg))
    checks["roundtrip"] = ok
    out.write(_dump({"checks": checks, "passed": all(checks.values())}) + "\n")
    return EXIT_OK if all(checks.values()) else EXIT_SELFTEST


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=64)
    common.add_argument("--t", type=int, default=1)
    common.add_argument("--ell", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--mode", choices=["deletion", "insertion", "both"], default="deletion")
    common.add_argument("--pattern-source", choices=["random", "exhaustive", "file"], default="random")
    common.add_argument("--report", default=None, help="also write the JSON-lines stream to this path")
    common.add_argument("--format", choices=["json", "csv", "text"], default=None)

    parser = argparse.ArgumentParser(prog="crisscross", description="Criss-cross indel array codes.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("params", parents=[common], help="show layout parameters")
    rt = sub.add_parser("roundtrip", parents=[common], help="encode, corrupt and decode")
    rt.add_argument("--patterns", default=None, help="JSON-lines file of channel patterns")
    rt.add_argument("--codeword", default=None, help="array text file holding a codeword")
    b = sub.add_parser("bounds", parents=[common], help="redundancy bound table")
    b.add_argument("--n-list", default="64,128,256")
    b.add_argument("--t-list", default="1,2")
    e = sub.add_parser("equivalence", parents=[common], help="sample the insertion/deletion ball equivalence")
    e.add_argument("--shape", default="3x3")
    e.add_argument("--pairs", type=int, default=None)
    e.add_argument("--exhaustive", action="store_true")
    sub.add_parser("selftest", parents=[common], help="quick internal checks")
    return parser


COMMANDS = {
    "params": cmd_params,
    "roundtrip": cmd_roundtrip,
    "bounds": cmd_bounds,
    "equivalence": cmd_equivalence,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARAMS if exc.code else EXIT_OK
    if args.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_PARAMS
    try:
        return COMMANDS[args.command](args, out)
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


def main_entry() -> None:
    try:
        code = main()
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    main_entry()
