"""Benchmark runs: method comparison on random functions, exact-minimum hit
rates on five lines, and repeated random-tie runs on one fixed function.

Every circuit is verified before it is counted.  Per-trial seeds are
spawned from one master seed, so a report depends only on its arguments.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .fixtures import load_fixture
from .gf2 import random_invertible
from .methods import synthesize, verify
from .oracle import DistanceTable, decode

log = logging.getLogger(__name__)

TABLE1_METHODS = ("aecm", "algorithm1", "mcg")


@dataclass
class BenchRecord:
    method: str
    n: int
    trials: int
    mean: float
    median: float
    min: int
    max: int
    stddev: float
    nonconvergent: int | None
    seconds: float | None

    @classmethod
    def from_counts(cls, method, n, counts, nonconvergent=None, seconds=None) -> BenchRecord:
        if not counts:
            raise ValueError("need at least one trial")
        a = np.asarray(counts, dtype=float)
        sd = float(a.std(ddof=1)) if len(a) > 1 else 0.0
        return cls(
            method, n, len(a), float(a.mean()), float(np.median(a)),
            int(a.min()), int(a.max()), sd, nonconvergent, seconds,
        )


@dataclass
class HitRate:
    method: str
    n: int
    samples: int
    hits: int
    rate: float


def _run_one(args):
    method, m, seed, section_size = args
    res = synthesize(method, m, seed, section_size=section_size)
    verify(m, res.circuit)
    return res.gate_count, res.convergent


def _map(fn, jobs, workers: int):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [fn(j) for j in jobs]


def _bench(method, n, matrices, seeds, section_size, workers, timing) -> BenchRecord:
    start = time.perf_counter()
    out = _map(_run_one, [(method, m, s, section_size) for m, s in zip(matrices, seeds)], workers)
    elapsed = time.perf_counter() - start
    counts = [c for c, _ in out]
    nonconv = sum(conv is False for _, conv in out) if method.startswith("mcg") else None
    rec = BenchRecord.from_counts(method, n, counts, nonconv, elapsed if timing else None)
    log.info("%s n=%d trials=%d mean=%.2f (%.1fs)", method, n, rec.trials, rec.mean, elapsed)
    return rec


def run_table1(
    lines,
    trials: int = 100,
    seed: int = 0,
    line_cap: int = 40,
    section_size: int | None = None,
    methods=TABLE1_METHODS,
    workers: int = 1,
    timing: bool = False,
) -> list[BenchRecord]:
    """Mean gate counts per method over ``trials`` random functions per line count."""
    records = []
    for n in lines:
        children = np.random.SeedSequence([seed, n]).spawn(trials)
        matrices = [random_invertible(n, c) for c in children]
        for method in methods:
            if method.startswith("mcg") and n > line_cap:
                continue
            records.append(
                _bench(method, n, matrices, [None] * trials, section_size, workers, timing)
            )
    return records


def sample_gl5(table: DistanceTable, sample_size: int | None, seed: int = 0) -> np.ndarray:
    """Codes of uniformly sampled invertible matrices (all of them when ``sample_size`` is None).

    Rejection sampling: random ``n*n``-bit codes are kept when invertible.
    """
    if sample_size is None:
        return table.invertible_codes()
    rng = np.random.default_rng(seed)
    out: list[np.ndarray] = []
    have = 0
    while have < sample_size:
        draw = rng.integers(0, 1 << (table.n * table.n), size=2 * (sample_size - have) + 16)
        keep = draw[table.distances[draw] != 255]
        out.append(keep)
        have += keep.size
    return np.concatenate(out)[:sample_size].astype(np.uint32) if out else np.zeros(0, np.uint32)


def run_hit_rates(
    table: DistanceTable,
    sample_size: int | None = 10_000,
    seed: int = 0,
    methods=("mcg", "aecm", "algorithm1"),
    codes: np.ndarray | None = None,
    section_size: int | None = None,
) -> tuple[list[HitRate], dict]:
    """Fraction of sampled functions each method synthesizes at the exact minimum.

    Also returns MCG nonconvergence details: how many runs fell back and how
    many of those stayed above the minimum.
    """
    if codes is None:
        codes = sample_gl5(table, sample_size, seed)
    hits = dict.fromkeys(methods, 0)
    nonconv = above = 0
    for code in codes.tolist():
        m = decode(code, table.n)
        best = int(table.distances[code])
        for method in methods:
            res = synthesize(method, m, section_size=section_size)
            verify(m, res.circuit)
            hits[method] += res.gate_count == best
            if method == "mcg" and res.convergent is False:
                nonconv += 1
                above += res.gate_count > best
    total = len(codes)
    rates = [HitRate(k, table.n, total, hits[k], hits[k] / total if total else 0.0) for k in methods]
    return rates, {"mcg_nonconvergent": nonconv, "mcg_nonconvergent_above_min": above}


def run_table3(
    trials: int = 1000,
    seed: int = 0,
    matrix=None,
    workers: int = 1,
    timing: bool = False,
) -> tuple[tuple[BenchRecord, BenchRecord], dict[str, list[int]]]:
    """Repeated random-tie runs of MCGP and AECMP on one function (default: the 16-line fixture)."""
    m = matrix if matrix is not None else load_fixture("bench16")
    counts = {}
    records = []
    for k, method in enumerate(("mcgp", "aecmp")):
        seeds = np.random.SeedSequence([seed, k]).spawn(trials)
        start = time.perf_counter()
        out = _map(_run_one, [(method, m, s, None) for s in seeds], workers)
        elapsed = time.perf_counter() - start
        counts[method] = [c for c, _ in out]
        nonconv = sum(conv is False for _, conv in out) if method == "mcgp" else None
        records.append(
            BenchRecord.from_counts(
                method, m.n, counts[method], nonconv, elapsed if timing else None
            )
        )
    return (records[0], records[1]), counts


# report writers -------------------------------------------------------------------


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def records_to_csv(records) -> str:
    if not records:
        return ""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = [f.name for f in fields(records[0])]
    w.writerow(names)
    for r in records:
        d = asdict(r)
        w.writerow([_fmt(d[k]) for k in names])
    return buf.getvalue()


def table1_markdown(records: list[BenchRecord]) -> str:
    by_n: dict[int, dict[str, BenchRecord]] = {}
    for r in records:
        by_n.setdefault(r.n, {})[r.method] = r
    out = [
        "| Lines | AECM | Algorithm 1 | MCG | MCG Nonconvergent functions |",
        "|---|---|---|---|---|",
    ]
    for n in sorted(by_n):
        row = by_n[n]

        def cell(k):
            return f"{row[k].mean:.2f}" if k in row else ""

        nc = row["mcg"].nonconvergent if "mcg" in row else ""
        out.append(f"| {n} | {cell('aecm')} | {cell('algorithm1')} | {cell('mcg')} | {nc} |")
    return "\n".join(out) + "\n"


def table3_markdown(records) -> str:
    out = [
        "| | Maximum | Minimum | Average | Median | Standard Deviation |",
        "|---|---|---|---|---|---|",
    ]
    for r in records:
        out.append(
            f"| {r.method.upper()} | {r.max} | {r.min} | {r.mean:.2f} | {r.median:g} | {r.stddev:.4f} |"
        )
    return "\n".join(out) + "\n"


def hit_rates_markdown(rates: list[HitRate]) -> str:
    out = ["| Method | Samples | Exact minimum hits | Rate |", "|---|---|---|---|"]
    for r in rates:
        out.append(f"| {r.method} | {r.samples} | {r.hits} | {r.rate:.4f} |")
    return "\n".join(out) + "\n"


def histogram_csv(hist: list[int]) -> str:
    return "gates,functions\n" + "".join(f"{k},{v}\n" for k, v in enumerate(hist))
