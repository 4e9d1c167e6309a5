"""Alternating elimination with cost minimization (AECM) and its random-tie variant.

Each outer step tries to diagonalize every unsolved line on a copy of the
state and keeps the attempt with the best cost drop per added gate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .gf2 import (
    BitMatrix,
    Circuit,
    InconsistentState,
    Side,
    SynthState,
    apply_cnot,
    cancel_redundant,
    improvement_from_cnot,
    input_gate,
    output_gate,
)

DETERMINISTIC = "deterministic"
RANDOM = "seeded-random"


@dataclass
class DiagonalizeOutcome:
    state: SynthState
    gates_added: int
    cost_after: int
    gain: Fraction | None
    trace: list[tuple[int, object, int]]  # (stage, gate, improvement)


def diagonal_solved(m: BitMatrix, i: int) -> bool:
    """Row ``i`` and column ``i`` are both the unit vector ``e_i``."""
    return m.rows[i] == 1 << i and m.cols[i] == 1 << i


def _side_list(state: SynthState, g) -> list:
    return state.outputgates if g.side is Side.OUTPUT else state.inputgates


def _commit(state: SynthState, g, imp: int, trace: list, stage: int) -> None:
    _side_list(state, g).append(g)
    apply_cnot(g, state)
    trace.append((stage, g, imp))


class _Best:
    """Running maximum; ties kept only when a generator is given (uniform pick)."""

    def __init__(self, rng: np.random.Generator | None):
        self.rng = rng
        self.items: list = []
        self.score = None

    def offer(self, item, score) -> None:
        if self.score is None or score > self.score:
            self.items, self.score = [item], score
        elif score == self.score and self.rng is not None:
            self.items.append(item)

    def pick(self):
        if len(self.items) > 1:
            return self.items[int(self.rng.integers(len(self.items)))]
        return self.items[0]


def diagonalize(
    state: SynthState,
    threshold: int,
    diagonal: int,
    stage1_threshold: int = 2,
    rng: np.random.Generator | None = None,
    debug: bool = False,
) -> DiagonalizeOutcome:
    """Solve row and column ``diagonal`` of the remainder in place.

    Stages: greedy forward substitutions that each save at least
    ``stage1_threshold``; a forward substitution putting a 1 on the diagonal
    if it is still 0; row eliminations of the column; column eliminations of
    the row.  Returns early as soon as the cost is at most ``threshold``.

    Equal-improvement candidates go to the earliest one, or to a uniform
    random pick when ``rng`` is given.
    """
    n = state.n
    d = diagonal
    start_cost = state.cost
    start_gates = state.gate_count
    trace: list = []

    def outcome() -> DiagonalizeOutcome:
        if debug:
            state.check()
        added = state.gate_count - start_gates
        gain = Fraction(start_cost - state.cost, added) if added > 0 else None
        return DiagonalizeOutcome(state, added, state.cost, gain, trace)

    if state.cost <= threshold:
        return outcome()

    # stage 1
    for i in range(n):
        if i == d:
            continue
        for g in (output_gate(i, d), input_gate(d, i)):
            imp = improvement_from_cnot(state, g)
            if imp >= stage1_threshold:
                _commit(state, g, imp, trace, 1)
                if state.cost <= threshold:
                    return outcome()

    # stage 2
    m = state.m
    dbit = 1 << d
    if not m.rows[d] & dbit:
        pool = _Best(rng)
        for i in range(n):
            if i == d:
                continue
            if m.rows[i] & dbit:
                g = output_gate(i, d)
                pool.offer(g, improvement_from_cnot(state, g))
            if m.rows[d] >> i & 1:
                g = input_gate(d, i)
                pool.offer(g, improvement_from_cnot(state, g))
        if not pool.items:
            raise InconsistentState(f"line {d} has no forward substitution; matrix is singular")
        best, best_imp = pool.pick(), pool.score
        cancel_redundant(_side_list(state, best), best)
        apply_cnot(best, state)
        trace.append((2, best, best_imp))
        if state.cost <= threshold:
            return outcome()

    # stage 3: clear column d with row additions
    for i in range(n):
        if i == d or not m.rows[i] & dbit:
            continue
        pool = _Best(rng)
        g = output_gate(d, i)
        pool.offer(g, improvement_from_cnot(state, g))
        for j in range(i + 1, n):
            if j != d and m.rows[j] & dbit:
                g = output_gate(j, i)
                pool.offer(g, improvement_from_cnot(state, g))
        _commit(state, pool.pick(), pool.score, trace, 3)
        if state.cost <= threshold:
            return outcome()

    # stage 4: clear row d with column additions
    for i in range(n):
        if i == d or not m.rows[d] >> i & 1:
            continue
        pool = _Best(rng)
        g = input_gate(i, d)
        pool.offer(g, improvement_from_cnot(state, g))
        for j in range(i + 1, n):
            if j != d and m.rows[d] >> j & 1:
                g = input_gate(i, j)
                pool.offer(g, improvement_from_cnot(state, g))
        _commit(state, pool.pick(), pool.score, trace, 4)
        if state.cost <= threshold:
            return outcome()

    return outcome()


def aecm_step(
    state: SynthState,
    threshold: int,
    tie_break: str = DETERMINISTIC,
    rng: np.random.Generator | None = None,
    stage1_threshold: int = 2,
) -> DiagonalizeOutcome:
    """Try every unsolved diagonal on a copy; commit the best gain into ``state``."""
    if tie_break == RANDOM and rng is None:
        raise ValueError("seeded-random tie break needs an rng")
    inner_rng = rng if tie_break == RANDOM else None
    pool = _Best(inner_rng)
    for i in range(state.n):
        if diagonal_solved(state.m, i):
            continue
        out = diagonalize(state.copy(), threshold, i, stage1_threshold, inner_rng)
        if out.gates_added <= 0:
            raise InconsistentState(f"diagonal {i} unsolved but no gate was added")
        pool.offer(out, out.gain)
    if not pool.items:
        raise InconsistentState("cost above threshold but every diagonal is solved")
    chosen = pool.pick()
    new = chosen.state
    state.m, state.mi = new.m, new.mi
    state.inputgates, state.outputgates = new.inputgates, new.outputgates
    state.cost = new.cost
    chosen.state = state
    return chosen


def aecm(
    state: SynthState,
    threshold: int = 0,
    tie_break: str = DETERMINISTIC,
    rng: np.random.Generator | None = None,
    stage1_threshold: int = 2,
    until: Callable[[SynthState], bool] | None = None,
) -> tuple[int, Circuit | None]:
    """Run AECM on ``state`` in place until its cost is at most ``threshold``.

    ``until`` optionally adds another stopping test, checked after each
    committed diagonalization.  With ``threshold == 0`` the gate lists are
    merged into a finished circuit, which is returned as the second element.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    while state.cost > threshold:
        aecm_step(state, threshold, tie_break, rng, stage1_threshold)
        if until is not None and until(state):
            break
    if threshold == 0 and state.cost == 0:
        return 0, state.finalize()
    return state.cost, None


def synthesize_aecm(
    m: BitMatrix,
    tie_break: str = DETERMINISTIC,
    seed=None,
    stage1_threshold: int = 2,
) -> Circuit:
    rng = np.random.default_rng(seed) if tie_break == RANDOM else None
    state = SynthState.from_matrix(m)
    _, circuit = aecm(state, 0, tie_break, rng, stage1_threshold)
    return circuit
