"""Command line front end.

Exit codes: 0 success, 1 verification mismatch, 2 unreadable, malformed or
singular input, 3 unsupported dimension.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import harness, plotting
from .aecm import DETERMINISTIC, RANDOM, aecm
from .gf2 import (
    Circuit,
    ParseError,
    SingularMatrix,
    SynthState,
    format_matrix,
    parse_matrix,
    random_invertible,
)
from .methods import METHODS, RANDOMIZED, VerificationError, best_of, verify
from .oracle import DimensionTooLarge, MAX_N, exact_min_count, get_table, peephole_optimize

log = logging.getLogger("cnot_forge")

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_DIMENSION = 0, 1, 2, 3


def _read_matrix(path):
    return parse_matrix(Path(path).read_text())


def _read_circuit(path, n):
    return Circuit.from_text(Path(path).read_text(), n)


def _infer_lines(text: str) -> int:
    top = 0
    for raw in text.splitlines():
        parts = raw.split()
        if parts and parts[0] == "cnot":
            top = max(top, *(int(p) + 1 for p in parts[1:]))
        elif parts and parts[0] == "perm":
            top = max(top, len(parts) - 1)
    return top


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# commands ----------------------------------------------------------------------------


def cmd_synth(args) -> int:
    m = _read_matrix(args.matrix)
    if args.threshold < 0:
        raise SystemExit("--threshold must be >= 0")
    start = time.perf_counter()
    if args.threshold > 0:
        if args.method not in ("aecm", "aecmp"):
            raise SystemExit("--threshold only applies to aecm and aecmp")
        state = SynthState.from_matrix(m)
        tie = RANDOM if args.method == "aecmp" else DETERMINISTIC
        rng = np.random.default_rng(args.seed) if tie == RANDOM else None
        residual, _ = aecm(state, args.threshold, tie, rng, args.stage1_threshold)
        print(
            f"method={args.method} partial residual_cost={residual} "
            f"input_gates={len(state.inputgates)} output_gates={len(state.outputgates)}"
        )
        _emit(format_matrix(state.m), args.out)
        return EXIT_OK
    res = best_of(
        args.method, m, args.passes, args.seed,
        stage1_threshold=args.stage1_threshold, section_size=args.section_size,
    )
    elapsed = time.perf_counter() - start
    if not args.no_verify:
        verify(m, res.circuit)
    _emit(res.circuit.to_text(), args.out)
    conv = "" if res.convergent is None else f" convergent={str(res.convergent).lower()}"
    summary = f"method={args.method} gates={res.gate_count}{conv}"
    print(summary, file=sys.stdout if args.out else sys.stderr)
    log.info("elapsed %.3fs", elapsed)
    return EXIT_OK


def cmd_verify(args) -> int:
    m = _read_matrix(args.matrix)
    c = _read_circuit(args.circuit, m.n)
    try:
        verify(m, c)
    except VerificationError as exc:
        print(f"FAIL: {exc}")
        return EXIT_MISMATCH
    print(f"PASS: {len(c)} gates reproduce the {m.n}-line function")
    return EXIT_OK


def _check_dim(n: int) -> None:
    if not 2 <= n <= MAX_N:
        raise DimensionTooLarge(f"exact tables cover 2..{MAX_N} lines, got {n}")


def cmd_oracle(args) -> int:
    if args.oracle_cmd == "build":
        _check_dim(args.lines)
        table = get_table(args.lines)
        out = args.out or f"gl{args.lines}_distances.bin"
        table.save(out)
        print(f"wrote {out}: {len(table)} invertible matrices")
    elif args.oracle_cmd == "hist":
        _check_dim(args.lines)
        hist = get_table(args.lines).histogram()
        _emit(harness.histogram_csv(hist), args.out)
        if args.figure:
            plotting.plot_histogram(hist, args.figure)
    elif args.oracle_cmd == "min":
        m = _read_matrix(args.matrix)
        _check_dim(m.n)
        print(exact_min_count(m, get_table(m.n)))
    elif args.oracle_cmd == "peephole":
        text = Path(args.circuit).read_text()
        n = args.lines or _infer_lines(text)
        c = Circuit.from_text(text, n)
        table = get_table(min(MAX_N, max(2, n)))
        new = peephole_optimize(c, table)
        _emit(new.to_text(), args.out)
        print(f"peephole: {len(c)} -> {len(new)} gates", file=sys.stderr)
    return EXIT_OK


def _write_report(prefix, csv_text, md_text, plot=None) -> None:
    if not prefix:
        sys.stdout.write(csv_text)
        return
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    prefix.with_suffix(".csv").write_text(csv_text)
    prefix.with_suffix(".md").write_text(md_text)
    if plot is not None:
        plot(prefix.with_suffix(".png"))


def cmd_bench(args) -> int:
    if args.bench_cmd == "table1":
        recs = harness.run_table1(
            args.lines, args.trials, args.seed, args.line_cap, args.section_size,
            workers=args.workers, timing=args.timing,
        )
        _write_report(
            args.out, harness.records_to_csv(recs), harness.table1_markdown(recs),
            lambda p: plotting.plot_table1(recs, p),
        )
    elif args.bench_cmd == "hitrates":
        samples = None if args.samples == "all" else int(args.samples)
        if samples == 0:
            rates, extra = [], {}
        else:
            rates, extra = harness.run_hit_rates(get_table(5), samples, args.seed)
        md = harness.hit_rates_markdown(rates)
        if extra:
            md += "\n" + "".join(f"- {k}: {v}\n" for k, v in extra.items())
        _write_report(
            args.out, harness.records_to_csv(rates), md,
            (lambda p: plotting.plot_hit_rates(rates, p)) if rates else None,
        )
    elif args.bench_cmd == "table3":
        matrix = _read_matrix(args.matrix) if args.matrix else None
        recs, counts = harness.run_table3(
            args.trials, args.seed, matrix, workers=args.workers, timing=args.timing
        )
        _write_report(
            args.out, harness.records_to_csv(list(recs)), harness.table3_markdown(recs),
            lambda p: plotting.plot_table3(counts, p),
        )
    return EXIT_OK


def cmd_random(args) -> int:
    _emit(format_matrix(random_invertible(args.lines, args.seed)), args.out)
    return EXIT_OK


# parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cnot-forge", description="CNOT circuit synthesis over GF(2)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize a circuit for a matrix file")
    s.add_argument("matrix")
    s.add_argument("--method", choices=METHODS, default="mcg")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threshold", type=int, default=0,
                   help="aecm/aecmp only: stop at this remainder cost and print the remainder")
    s.add_argument("--stage1-threshold", type=int, default=2)
    s.add_argument("--section-size", type=int, default=None)
    s.add_argument("--passes", type=int, default=1,
                   help=f"best of this many runs for {', '.join(sorted(RANDOMIZED))}")
    s.add_argument("--no-verify", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", help="check a circuit file against a matrix file")
    v.add_argument("matrix")
    v.add_argument("circuit")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="exact minimum tables (up to 5 lines)")
    osub = o.add_subparsers(dest="oracle_cmd", required=True)
    ob = osub.add_parser("build")
    ob.add_argument("-n", "--lines", type=int, default=5)
    ob.add_argument("--out")
    oh = osub.add_parser("hist")
    oh.add_argument("-n", "--lines", type=int, default=5)
    oh.add_argument("--out")
    oh.add_argument("--figure")
    om = osub.add_parser("min")
    om.add_argument("matrix")
    op = osub.add_parser("peephole")
    op.add_argument("circuit")
    op.add_argument("-n", "--lines", type=int, default=None)
    op.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="benchmark reports (CSV, Markdown and PNG with --out)")
    bsub = b.add_subparsers(dest="bench_cmd", required=True)
    t1 = bsub.add_parser("table1")
    t1.add_argument("-n", "--lines", type=int, nargs="+", default=[8, 12, 16])
    t1.add_argument("--trials", type=int, default=100)
    t1.add_argument("--line-cap", type=int, default=40)
    t1.add_argument("--section-size", type=int, default=None)
    hr = bsub.add_parser("hitrates")
    hr.add_argument("--samples", default="10000", help="sample size, or 'all'")
    t3 = bsub.add_parser("table3")
    t3.add_argument("--trials", type=int, default=1000)
    t3.add_argument("--matrix", default=None, help="defaults to the bundled 16-line function")
    for sp in (t1, hr, t3):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="report prefix; writes .csv, .md and .png")
    for sp in (t1, t3):
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--timing", action="store_true",
                        help="fill the seconds column (makes reports non-reproducible)")
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("random", help="write a random invertible matrix")
    r.add_argument("-n", "--lines", type=int, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except DimensionTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (ParseError, SingularMatrix, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
