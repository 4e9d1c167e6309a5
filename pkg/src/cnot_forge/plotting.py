"""Figures for the benchmark reports, written next to the CSV output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from . import reference  # noqa: E402

COLORS = {"aecm": "C0", "algorithm1": "C2", "mcg": "C3", "mcgp": "C3", "aecmp": "C0"}
LABELS = {"aecm": "AECM", "algorithm1": "Algorithm 1", "mcg": "MCG", "mcgp": "MCGP", "aecmp": "AECMP"}


def _figure(width=6.0, height=None):
    golden = (5**0.5 - 1) / 2
    fig, ax = plt.subplots(figsize=(width, height or width * golden))
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    return fig, ax


def _save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def plot_table1(records, path) -> None:
    fig, ax = _figure()
    methods = sorted({r.method for r in records}, key=list(LABELS).index)
    for k, method in enumerate(methods):
        rows = sorted((r for r in records if r.method == method), key=lambda r: r.n)
        ns = [r.n for r in rows]
        ax.plot(ns, [r.mean for r in rows], "o-", color=COLORS[method], label=LABELS[method])
        ref = [(n, reference.TABLE1[n][("aecm", "algorithm1", "mcg").index(method)])
               for n in ns if n in reference.TABLE1]
        ref = [(n, v) for n, v in ref if v is not None]
        if ref:
            ax.plot(*zip(*ref), "x--", color=COLORS[method], alpha=0.6,
                    label=f"{LABELS[method]} (reference)")
    ax.set_xlabel("lines")
    ax.set_ylabel("mean CNOT count")
    ax.legend(frameon=False, fontsize=8)
    _save(fig, path)


def plot_histogram(hist, path) -> None:
    fig, ax = _figure()
    xs = range(len(hist))
    ax.bar(xs, hist, color="C0", label="BFS table")
    if len(hist) == len(reference.TABLE2):
        ax.plot(range(len(reference.TABLE2)), reference.TABLE2, "k_", markersize=14,
                label="reference")
    ax.set_yscale("log")
    ax.set_xlabel("minimum CNOT count")
    ax.set_ylabel("functions")
    ax.legend(frameon=False, fontsize=8)
    _save(fig, path)


def plot_hit_rates(rates, path) -> None:
    fig, ax = _figure()
    names = [r.method for r in rates]
    ax.bar(names, [r.rate for r in rates], color=[COLORS.get(n, "C7") for n in names])
    for k, name in enumerate(names):
        if name in reference.HIT_RATES:
            ax.plot([k - 0.35, k + 0.35], [reference.HIT_RATES[name]] * 2, "k--", lw=1)
    ax.set_ylim(0, 1)
    ax.set_ylabel("exact-minimum rate")
    _save(fig, path)


def plot_table3(counts: dict[str, list[int]], path) -> None:
    fig, ax = _figure()
    lo = min(min(v) for v in counts.values())
    hi = max(max(v) for v in counts.values())
    bins = range(lo, hi + 2)
    for method, vals in counts.items():
        ax.hist(vals, bins=bins, alpha=0.55, color=COLORS.get(method, "C7"),
                label=LABELS.get(method, method), align="left")
    ax.set_xlabel("CNOT count")
    ax.set_ylabel("runs")
    ax.legend(frameon=False, fontsize=8)
    _save(fig, path)
