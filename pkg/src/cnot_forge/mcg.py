"""Multiple CNOT gate (MCG) synthesis.

Every iteration scores all ordered pairs of distinct gates (both sides,
all control/target pairs) against the current remainder and commits the
cheapest pair if it lowers the cost.  When no pair helps, AECM runs until
the cost falls below the stuck value, and the run is flagged nonconvergent.

The pair scan is vectorized: rows and columns of the remainder are kept
as bit masks, the masks after each first gate are built as one stack, and
the cost change of every second gate is a difference of popcounts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .aecm import DETERMINISTIC, RANDOM, aecm, aecm_step
from .gf2 import (
    BitMatrix,
    Circuit,
    CNOTGate,
    Side,
    SynthState,
    apply_cnot,
    cost_eq2,
    input_gate,
)

EQ1 = "eq1"
EQ2 = "eq2"
NO_PAIR = np.iinfo(np.int32).max  # pair score for a gate followed by itself


@dataclass(frozen=True)
class TwoGateCandidate:
    first: CNOTGate
    second: CNOTGate

    @property
    def category(self) -> str:
        sides = {self.first.side, self.second.side}
        if len(sides) == 2:
            return "mixed"
        return "output-output" if Side.OUTPUT in sides else "input-input"


@dataclass
class McgResult:
    circuit: Circuit
    convergent: bool
    cost_trace: list[int] = field(default_factory=list)
    fallback_steps: list[int] = field(default_factory=list)  # trace indices reached via AECM


def enumerate_gates(n: int) -> list[CNOTGate]:
    """All ``2 n (n - 1)`` gates: output side first, then input; control then target ascending."""
    if n < 2:
        raise ValueError("need at least two lines")
    gates = []
    for side in (Side.OUTPUT, Side.INPUT):
        for c in range(n):
            for t in range(n):
                if c != t:
                    gates.append(CNOTGate(c, t, side))
    return gates


@lru_cache(maxsize=None)
def _gate_index(n: int):
    gates = enumerate_gates(n)
    half = len(gates) // 2
    ctl = np.array([g.control for g in gates[:half]])
    tgt = np.array([g.target for g in gates[:half]])
    return gates, half, ctl, tgt


def _mask_dtype(n: int):
    for dt in (np.uint8, np.uint16, np.uint32, np.uint64):
        if n <= np.iinfo(dt).bits:
            return dt
    raise ValueError(f"pair scan supports at most 64 lines, got {n}")


def _packed(state: SynthState) -> np.ndarray:
    """Rows and columns of m and mi as bit masks, shape (4, 1, n): R, C, RI, CI."""
    dt = _mask_dtype(state.n)
    return np.array([state.m.rows, state.m.cols, state.mi.rows, state.mi.cols], dtype=dt)[:, None]


def _flip(masks: np.ndarray, src: np.ndarray, bit: np.ndarray) -> np.ndarray:
    """XOR ``1 << bit[k]`` into ``masks[k, j]`` wherever bit ``j`` of ``src[k]`` is set."""
    n = masks.shape[1]
    dt = masks.dtype.type
    j = np.arange(n, dtype=masks.dtype)
    hit = (src[:, None] >> j) & dt(1)
    return masks ^ (hit << bit.astype(masks.dtype)[:, None])


def _after_first_gate(P: np.ndarray) -> np.ndarray:
    """Packed (R, C, RI, CI) stacks after each enumerated gate, in enumeration order."""
    R, C, RI, CI = (x[0] for x in P)
    n = R.shape[0]
    _, half, ctl, tgt = _gate_index(n)
    ko = np.arange(half)
    out = np.broadcast_to(P, (4, 2 * half, n)).copy()
    Ro, Co, RIo, CIo = (x[:half] for x in out)
    Ri, Ci, RIi, CIi = (x[half:] for x in out)
    # output (c, t): m row t ^= row c ; mi col c ^= col t
    Ro[ko, tgt] ^= R[ctl]
    Co[:] = _flip(Co, R[ctl], tgt)
    CIo[ko, ctl] ^= CI[tgt]
    RIo[:] = _flip(RIo, CI[tgt], ctl)
    # input (c, t): m col c ^= col t ; mi row t ^= row c
    Ci[ko, ctl] ^= C[tgt]
    Ri[:] = _flip(Ri, C[tgt], ctl)
    RIi[ko, tgt] ^= RI[ctl]
    CIi[:] = _flip(CIi, RI[ctl], tgt)
    return out


def _single_gate_deltas(P: np.ndarray, metric: str) -> np.ndarray:
    """Cost change of every enumerated gate applied to every packed state in ``P``.

    Returns shape (K, G) with the enumeration order of ``enumerate_gates``.
    A gate XORs one source row (or column) into a target one, so the change
    is ``|X_t ^ src| - |X_t|`` where ``X`` is the cost-counting view of the
    target: the entries differing from I for the identity-distance cost, the
    entries themselves for the sparseness cost.
    """
    R, C, RI, CI = P
    n = R.shape[1]
    _, _, ctl, tgt = _gate_index(n)
    if metric == EQ1:
        unit = np.left_shift(1, np.arange(n, dtype=np.uint64)).astype(R.dtype)
        XR, XC, XRI, XCI = R ^ unit, C ^ unit, RI ^ unit, CI ^ unit
    else:
        XR, XC, XRI, XCI = R, C, RI, CI
    pc = np.bitwise_count

    def delta(x, src):
        return pc(x ^ src).astype(np.int16) - pc(x)

    # output (c, t): m row t ^= row c ; mi col c ^= col t
    out = delta(XR[:, tgt], R[:, ctl]) + delta(XCI[:, ctl], CI[:, tgt])
    # input (c, t): m col c ^= col t ; mi row t ^= row c
    inp = delta(XC[:, ctl], C[:, tgt]) + delta(XRI[:, tgt], RI[:, ctl])
    return np.concatenate([out, inp], axis=1)


def _metric_cost(state: SynthState, metric: str) -> int:
    return state.cost if metric == EQ1 else cost_eq2(state.m, state.mi)


def pair_scan(state: SynthState, metric: str = EQ1):
    """Score every ordered pair of distinct gates on ``state``.

    Returns ``(single, pairs, done)``: the cost after each single gate
    (shape G), after each pair (shape G x G, diagonal set to ``NO_PAIR``), and a
    mask of single gates that finish the synthesis on their own (remainder
    becomes I, or a permutation for the sparseness cost).  ``state`` is not
    modified.
    """
    P = _packed(state)
    base = _metric_cost(state, metric)
    stacks = _after_first_gate(P)
    single = base + _single_gate_deltas(P, metric)[0].astype(np.int32)
    pairs = single[:, None] + _single_gate_deltas(stacks, metric)
    np.fill_diagonal(pairs, NO_PAIR)
    if metric == EQ1:
        unit = np.left_shift(1, np.arange(state.n, dtype=np.uint64)).astype(P.dtype)
        done = (stacks[0] == unit).all(axis=1)
    else:
        done = single == 0
    return single, pairs, done


def _pick(costs: np.ndarray, target: int, tie_break: str, rng) -> int:
    flat = costs.ravel()
    if tie_break == RANDOM:
        hits = np.flatnonzero(flat == target)
        return int(hits[rng.integers(len(hits))])
    return int(np.argmax(flat == target))


def _descend(
    m: BitMatrix,
    metric: str,
    tie_break: str,
    rng,
    stage1_threshold: int,
) -> tuple[SynthState, bool, list[int], list[int]]:
    state = SynthState.from_matrix(m)
    n = state.n
    convergent = True
    trace = [_metric_cost(state, metric)]
    fallback: list[int] = []
    if n < 2:
        return state, convergent, trace, fallback
    gates = _gate_index(n)[0]
    G = len(gates)
    while trace[-1] > 0:
        c1 = trace[-1]
        _, pairs, done = pair_scan(state, metric)
        if done.any():
            # kept on its own side: with a permutation remainder the side matters
            g = gates[int(np.argmax(done))]
            apply_cnot(g, state)
            (state.outputgates if g.side is Side.OUTPUT else state.inputgates).append(g)
            trace.append(_metric_cost(state, metric))
            break
        c2 = pairs.min()
        if c2 < c1:
            k = _pick(pairs, c2, tie_break, rng)
            for g in (gates[k // G], gates[k % G]):
                (state.outputgates if g.side is Side.OUTPUT else state.inputgates).append(g)
                apply_cnot(g, state)
            trace.append(_metric_cost(state, metric))
            continue
        convergent = False
        if metric == EQ1:
            aecm(state, c1 - 1, tie_break, rng, stage1_threshold)
        else:
            while cost_eq2(state.m, state.mi) >= c1:
                aecm_step(state, 0, tie_break, rng, stage1_threshold)
        fallback.append(len(trace))
        trace.append(_metric_cost(state, metric))
    return state, convergent, trace, fallback


def mcg(
    m: BitMatrix,
    tie_break: str = DETERMINISTIC,
    seed=None,
    stage1_threshold: int = 2,
) -> McgResult:
    """Synthesize ``m`` by descending the identity-distance cost two gates at a time."""
    rng = np.random.default_rng(seed) if tie_break == RANDOM else None
    state, convergent, trace, fallback = _descend(m, EQ1, tie_break, rng, stage1_threshold)
    return McgResult(state.finalize(), convergent, trace, fallback)


def mcg_line_reordering(
    m: BitMatrix,
    tie_break: str = DETERMINISTIC,
    seed=None,
    stage1_threshold: int = 2,
) -> McgResult:
    """Like :func:`mcg` but descends the sparseness cost down to a permutation.

    The permutation left over is moved to the output end: each output-side
    gate is relabelled through it as it crosses.
    """
    rng = np.random.default_rng(seed) if tie_break == RANDOM else None
    state, convergent, trace, fallback = _descend(m, EQ2, tie_break, rng, stage1_threshold)
    rem = state.m
    if not rem.is_permutation():
        raise AssertionError("sparseness descent stopped before reaching a permutation")
    perm = tuple(r.bit_length() - 1 for r in rem.rows)
    gates = [input_gate(g.control, g.target) for g in state.inputgates]
    gates += [conjugate_through(g, perm) for g in reversed(state.outputgates)]
    return McgResult(Circuit(m.n, gates, perm), convergent, trace, fallback)


def conjugate_through(g: CNOTGate, perm: tuple[int, ...]) -> CNOTGate:
    """The gate that, placed before the output permutation, equals ``g`` after it."""
    return input_gate(perm[g.control], perm[g.target])


@dataclass
class CensusResult:
    n: int
    trials: int
    mean_gates: float
    nonconvergent: int
    counts: list[int]


def nonconvergence_census(n: int, trials: int, seed=0) -> CensusResult:
    from .gf2 import random_invertible

    seeds = np.random.SeedSequence(seed).spawn(trials)
    counts, bad = [], 0
    for s in seeds:
        res = mcg(random_invertible(n, s))
        counts.append(len(res.circuit))
        bad += not res.convergent
    mean = float(np.mean(counts)) if counts else 0.0
    return CensusResult(n, trials, mean, bad, counts)
