import csv
import io

import numpy as np
import pytest

from cnot_forge.gf2 import Circuit, random_invertible
from cnot_forge.harness import (
    BenchRecord,
    HitRate,
    hit_rates_markdown,
    histogram_csv,
    records_to_csv,
    run_hit_rates,
    run_table1,
    run_table3,
    sample_gl5,
    table1_markdown,
    table3_markdown,
)
from cnot_forge.methods import (
    METHODS,
    VerificationError,
    best_of,
    first_difference,
    synthesize,
    verify,
)


def test_record_single_trial():
    r = BenchRecord.from_counts("mcg", 8, [17])
    assert r.min == r.max == r.mean == r.median == 17
    assert r.stddev == 0.0


def test_record_stats():
    r = BenchRecord.from_counts("aecm", 4, [1, 2, 3, 6])
    assert r.mean == 3 and r.median == 2.5 and r.min == 1 and r.max == 6
    assert r.stddev == pytest.approx(np.std([1, 2, 3, 6], ddof=1))
    with pytest.raises(ValueError):
        BenchRecord.from_counts("aecm", 4, [])


def test_csv_schema():
    recs = run_table1([4], trials=3, seed=1)
    rows = list(csv.DictReader(io.StringIO(records_to_csv(recs))))
    assert list(rows[0]) == [
        "method", "n", "trials", "mean", "median", "min", "max", "stddev", "nonconvergent", "seconds",
    ]
    assert [r["method"] for r in rows] == ["aecm", "algorithm1", "mcg"]
    assert rows[0]["seconds"] == "" and rows[0]["nonconvergent"] == ""
    assert rows[2]["nonconvergent"] == "0"


def test_table1_line_cap():
    recs = run_table1([5, 6], trials=2, line_cap=5)
    assert [(r.method, r.n) for r in recs] == [
        ("aecm", 5), ("algorithm1", 5), ("mcg", 5), ("aecm", 6), ("algorithm1", 6),
    ]


def test_table1_reproducible():
    a = records_to_csv(run_table1([6], trials=5, seed=3))
    assert a == records_to_csv(run_table1([6], trials=5, seed=3))
    assert a != records_to_csv(run_table1([6], trials=5, seed=4))


def test_table1_timing_column():
    recs = run_table1([4], trials=2, timing=True, methods=("aecm",))
    assert recs[0].seconds is not None and recs[0].seconds >= 0


def test_markdown_tables():
    recs = run_table1([4], trials=2)
    md = table1_markdown(recs)
    assert md.splitlines()[0].startswith("| Lines | AECM | Algorithm 1 | MCG")
    assert md.splitlines()[2].startswith("| 4 |")
    t3 = table3_markdown([BenchRecord.from_counts("mcgp", 16, [60, 70])])
    assert "| MCGP | 70 | 60 | 65.00 | 65 |" in t3
    hr = hit_rates_markdown([HitRate("mcg", 5, 10, 7, 0.7)])
    assert "| mcg | 10 | 7 | 0.7000 |" in hr
    assert histogram_csv([1, 2]) == "gates,functions\n0,1\n1,2\n"


def test_sample_gl5(table5):
    codes = sample_gl5(table5, 500, seed=2)
    assert len(codes) == 500
    assert (table5.distances[codes] != 255).all()
    assert (codes == sample_gl5(table5, 500, seed=2)).all()


def test_hit_rates_small(table5):
    rates, extra = run_hit_rates(table5, 60, seed=1)
    assert [r.method for r in rates] == ["mcg", "aecm", "algorithm1"]
    assert all(0 <= r.rate <= 1 and r.samples == 60 for r in rates)
    assert set(extra) == {"mcg_nonconvergent", "mcg_nonconvergent_above_min"}


def test_table3_small(stuck5):
    (mcgp, aecmp), counts = run_table3(trials=6, seed=0, matrix=stuck5)
    assert mcgp.trials == aecmp.trials == 6
    assert len(counts["mcgp"]) == 6 and min(counts["aecmp"]) == aecmp.min


@pytest.mark.parametrize("method", METHODS)
def test_every_method_round_trips(method):
    for seed in range(5):
        m = random_invertible(7, seed)
        verify(m, synthesize(method, m, seed).circuit)


def test_unknown_method():
    with pytest.raises(ValueError):
        synthesize("nope", random_invertible(3, 0))


def test_verify_reports_difference():
    m = random_invertible(6, 1)
    c = synthesize("mcg", m).circuit
    bad = Circuit(6, c.gates[1:])
    with pytest.raises(VerificationError, match=r"entry \(\d, \d\)"):
        verify(m, bad)
    assert first_difference(m, m) is None


def test_best_of_not_worse():
    m = random_invertible(12, 4)
    single = best_of("aecmp", m, 1, seed=5).gate_count
    multi = best_of("aecmp", m, 6, seed=5).gate_count
    assert multi <= single
    with pytest.raises(ValueError):
        best_of("aecmp", m, 0)
