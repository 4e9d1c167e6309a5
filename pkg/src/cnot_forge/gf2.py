"""GF(2) matrices with packed-bit rows, CNOT gates and synthesis state.

A matrix ``m`` of size ``n`` describes the linear reversible function
``y = m x``.  Entry ``(i, j)`` is bit ``j`` of ``m.rows[i]``.  Every matrix
also keeps its columns packed (bit ``i`` of ``m.cols[j]``) so that both row
and column additions, and the cost deltas built on them, stay cheap.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

MAXLINES = 64


class SingularMatrix(ValueError):
    """Raised when a matrix has rank below its dimension."""


class ParseError(ValueError):
    """Raised for malformed matrix or circuit text."""


class DimensionMismatch(ValueError):
    """Raised when two objects disagree on the line count."""


class InconsistentState(RuntimeError):
    """Raised when a synthesis state's matrix and inverse drift apart."""


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class BitMatrix:
    """Square GF(2) matrix stored as packed rows and packed columns."""

    __slots__ = ("n", "rows", "cols")

    def __init__(self, n: int, rows: Sequence[int], cols: Sequence[int] | None = None):
        if not 1 <= n <= MAXLINES:
            raise ValueError(f"line count must be in [1, {MAXLINES}], got {n}")
        if len(rows) != n:
            raise DimensionMismatch(f"expected {n} rows, got {len(rows)}")
        mask = (1 << n) - 1
        self.n = n
        self.rows = [int(r) for r in rows]
        if any(r & ~mask for r in self.rows):
            raise ValueError("row has bits outside the matrix width")
        self.cols = list(cols) if cols is not None else _transpose_rows(self.rows, n)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        rows = [1 << i for i in range(n)]
        return cls(n, rows, list(rows))

    @classmethod
    def from_array(cls, arr) -> BitMatrix:
        a = np.asarray(arr, dtype=np.uint8)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        n = a.shape[0]
        weights = 1 << np.arange(n, dtype=object)
        rows = [int(np.dot(a[i].astype(object), weights)) for i in range(n)]
        return cls(n, rows)

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> BitMatrix:
        lines = list(lines)
        n = len(lines)
        rows = []
        for line in lines:
            if len(line) != n or set(line) - {"0", "1"}:
                raise ParseError(f"bad matrix row {line!r}")
            rows.append(sum(1 << j for j, ch in enumerate(line) if ch == "1"))
        return cls(n, rows)

    def copy(self) -> BitMatrix:
        return BitMatrix(self.n, self.rows[:], self.cols[:])

    def to_array(self) -> np.ndarray:
        shifts = np.arange(self.n, dtype=np.uint64)
        packed = np.array(self.rows, dtype=np.uint64)
        return ((packed[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)

    def to_strings(self) -> list[str]:
        return ["".join("1" if (r >> j) & 1 else "0" for j in range(self.n)) for r in self.rows]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    __hash__ = None  # mutable

    def __repr__(self) -> str:
        return f"BitMatrix({self.n}, {self.to_strings()})"

    # elementary operations -------------------------------------------------

    def add_row(self, target: int, control: int) -> None:
        """row[target] ^= row[control]."""
        src = self.rows[control]
        self.rows[target] ^= src
        bit = 1 << target
        cols = self.cols
        for j in _bits(src):
            cols[j] ^= bit

    def add_col(self, target: int, control: int) -> None:
        """col[target] ^= col[control]."""
        src = self.cols[control]
        self.cols[target] ^= src
        bit = 1 << target
        rows = self.rows
        for i in _bits(src):
            rows[i] ^= bit

    def swap_rows(self, a: int, b: int) -> None:
        if a == b:
            return
        self.rows[a], self.rows[b] = self.rows[b], self.rows[a]
        self.cols = _transpose_rows(self.rows, self.n)

    # algebra -----------------------------------------------------------------

    def transpose(self) -> BitMatrix:
        return BitMatrix(self.n, self.cols[:], self.rows[:])

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")
        rows = []
        for r in self.rows:
            acc = 0
            for k in _bits(r):
                acc ^= other.rows[k]
            rows.append(acc)
        return BitMatrix(self.n, rows)

    def weight(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def distance_from_identity(self) -> int:
        return sum((r ^ (1 << i)).bit_count() for i, r in enumerate(self.rows))

    def is_identity(self) -> bool:
        return all(r == 1 << i for i, r in enumerate(self.rows))

    def is_permutation(self) -> bool:
        return all(r.bit_count() == 1 for r in self.rows) and all(
            c.bit_count() == 1 for c in self.cols
        )

    def rank(self) -> int:
        work = self.rows[:]
        rank = 0
        for col in range(self.n):
            bit = 1 << col
            pivot = next((r for r in range(rank, self.n) if work[r] & bit), None)
            if pivot is None:
                continue
            work[rank], work[pivot] = work[pivot], work[rank]
            for r in range(self.n):
                if r != rank and work[r] & bit:
                    work[r] ^= work[rank]
            rank += 1
        return rank

    def inverse(self) -> BitMatrix:
        return gf2_inverse(self)


def _transpose_rows(rows: Sequence[int], n: int) -> list[int]:
    cols = [0] * n
    for i, r in enumerate(rows):
        bit = 1 << i
        for j in _bits(r):
            cols[j] |= bit
    return cols


def gf2_inverse(m: BitMatrix) -> BitMatrix:
    """Gauss-Jordan inversion over GF(2); raises SingularMatrix."""
    n = m.n
    work = [(r << n) | (1 << i) for i, r in enumerate(m.rows)]
    low = (1 << n) - 1
    for col in range(n):
        bit = 1 << (n + col)
        pivot = next((r for r in range(col, n) if work[r] & bit), None)
        if pivot is None:
            raise SingularMatrix(f"matrix has rank < {n}")
        work[col], work[pivot] = work[pivot], work[col]
        p = work[col]
        for r in range(n):
            if r != col and work[r] & bit:
                work[r] ^= p
    return BitMatrix(n, [w & low for w in work])


# gates ---------------------------------------------------------------------------


class Side(enum.Enum):
    OUTPUT = "output"
    INPUT = "input"


class CNOTGate(NamedTuple):
    """One CNOT.  Output-side gates act as row additions on the remainder,
    input-side gates as column additions.  As a circuit element both mean
    ``x[target] ^= x[control]``."""

    control: int
    target: int
    side: Side = Side.INPUT

    def check(self, n: int) -> None:
        if self.control == self.target:
            raise ValueError(f"control equals target in {self}")
        if not (0 <= self.control < n and 0 <= self.target < n):
            raise ValueError(f"{self} out of range for {n} lines")

    def touches(self, line: int) -> bool:
        return line == self.control or line == self.target


def output_gate(control: int, target: int) -> CNOTGate:
    return CNOTGate(control, target, Side.OUTPUT)


def input_gate(control: int, target: int) -> CNOTGate:
    return CNOTGate(control, target, Side.INPUT)


# costs ------------------------------------------------------------------------


def cost_eq1(m: BitMatrix, mi: BitMatrix) -> int:
    """Entries of ``m`` and ``mi`` that differ from the identity."""
    if m.n != mi.n:
        raise DimensionMismatch(f"{m.n} vs {mi.n}")
    return m.distance_from_identity() + mi.distance_from_identity()


def cost_eq2(m: BitMatrix, mi: BitMatrix) -> int:
    """Sparseness cost: ones in ``m`` and ``mi`` minus ``2n``; zero iff ``m`` is a permutation."""
    if m.n != mi.n:
        raise DimensionMismatch(f"{m.n} vs {mi.n}")
    return m.weight() + mi.weight() - 2 * m.n


@dataclass
class SynthState:
    """Remainder function, its inverse and the gates synthesized so far."""

    m: BitMatrix
    mi: BitMatrix
    inputgates: list[CNOTGate] = field(default_factory=list)
    outputgates: list[CNOTGate] = field(default_factory=list)
    cost: int = -1

    def __post_init__(self):
        if self.cost < 0:
            self.cost = cost_eq1(self.m, self.mi)

    @classmethod
    def from_matrix(cls, m: BitMatrix) -> SynthState:
        return cls(m.copy(), gf2_inverse(m))

    @property
    def n(self) -> int:
        return self.m.n

    @property
    def gate_count(self) -> int:
        return len(self.inputgates) + len(self.outputgates)

    def copy(self) -> SynthState:
        return SynthState(
            self.m.copy(), self.mi.copy(), self.inputgates[:], self.outputgates[:], self.cost
        )

    def check(self) -> None:
        if not (self.m @ self.mi).is_identity():
            raise InconsistentState("m * mi != I")
        if self.cost != cost_eq1(self.m, self.mi):
            raise InconsistentState(f"cached cost {self.cost} != {cost_eq1(self.m, self.mi)}")

    def finalize(self) -> Circuit:
        """Input gates, then output gates in reverse, all in input->output order."""
        gates = [input_gate(g.control, g.target) for g in self.inputgates]
        gates += [input_gate(g.control, g.target) for g in reversed(self.outputgates)]
        return Circuit(self.n, gates)


def improvement_from_cnot(state: SynthState, g: CNOTGate) -> int:
    """Drop in ``cost_eq1`` that applying ``g`` would cause (negative if it grows).

    Only the touched row of one matrix and the touched column of the other
    change, so this is a handful of popcounts.
    """
    m, mi = state.m, state.mi
    c, t = g.control, g.target
    if g.side is Side.OUTPUT:
        row, src = m.rows[t], m.rows[c]
        col, csrc = mi.cols[c], mi.cols[t]
        eye_r, eye_c = 1 << t, 1 << c
    else:
        col, csrc = m.cols[c], m.cols[t]
        row, src = mi.rows[t], mi.rows[c]
        eye_c, eye_r = 1 << c, 1 << t
    before = (row ^ eye_r).bit_count() + (col ^ eye_c).bit_count()
    after = (row ^ src ^ eye_r).bit_count() + (col ^ csrc ^ eye_c).bit_count()
    return before - after


def improvement_eq2(state: SynthState, g: CNOTGate) -> int:
    """Drop in ``cost_eq2`` that applying ``g`` would cause."""
    m, mi = state.m, state.mi
    c, t = g.control, g.target
    if g.side is Side.OUTPUT:
        row, src, col, csrc = m.rows[t], m.rows[c], mi.cols[c], mi.cols[t]
    else:
        col, csrc, row, src = m.cols[c], m.cols[t], mi.rows[t], mi.rows[c]
    before = row.bit_count() + col.bit_count()
    after = (row ^ src).bit_count() + (col ^ csrc).bit_count()
    return before - after


def apply_cnot(g: CNOTGate, state: SynthState) -> SynthState:
    """Apply ``g`` to the remainder in place (no gate list is touched)."""
    state.cost -= improvement_from_cnot(state, g)
    if g.side is Side.OUTPUT:
        state.m.add_row(g.target, g.control)
        state.mi.add_col(g.control, g.target)
    else:
        state.m.add_col(g.control, g.target)
        state.mi.add_row(g.target, g.control)
    return state


def cancel_redundant(gates: list[CNOTGate], g: CNOTGate) -> tuple[list[CNOTGate], bool]:
    """Append ``g`` unless an earlier copy of it can be cancelled.

    Walks back through ``gates``; a gate touching neither of ``g``'s lines
    commutes with it and is skipped.  The list is modified in place.
    """
    for k in range(len(gates) - 1, -1, -1):
        h = gates[k]
        if h == g:
            del gates[k]
            return gates, True
        if h.touches(g.control) or h.touches(g.target):
            break
    gates.append(g)
    return gates, False


# circuits ----------------------------------------------------------------------------


@dataclass
class Circuit:
    """CNOT list in input->output order, optionally followed by an output permutation.

    With permutation ``p``, output line ``i`` carries what the gates left on
    line ``p[i]``.
    """

    n: int
    gates: list[CNOTGate] = field(default_factory=list)
    permutation: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.gates)

    def to_text(self) -> str:
        lines = []
        if self.permutation is not None:
            lines.append("perm " + " ".join(str(p) for p in self.permutation))
        lines += [f"cnot {g.control} {g.target}" for g in self.gates]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n: int) -> Circuit:
        perm = None
        gates = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            parts = raw.split()
            if not parts:
                continue
            try:
                if parts[0] == "perm" and perm is None and not gates:
                    perm = tuple(int(p) for p in parts[1:])
                    if sorted(perm) != list(range(n)):
                        raise ValueError(f"not a permutation of {n} lines")
                elif parts[0] == "cnot" and len(parts) == 3:
                    g = input_gate(int(parts[1]), int(parts[2]))
                    g.check(n)
                    gates.append(g)
                else:
                    raise ValueError("unrecognized line")
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {raw!r}: {exc}") from None
        return cls(n, gates, perm)


def circuit_to_matrix(c: Circuit) -> BitMatrix:
    """Replay the gates as row additions on I, then permute rows."""
    m = BitMatrix.identity(c.n)
    for g in c.gates:
        m.add_row(g.target, g.control)
    if c.permutation is not None:
        m = BitMatrix(c.n, [m.rows[p] for p in c.permutation])
    return m


# random instances and text format -----------------------------------------------------


def random_invertible(n: int, seed, swap_probability: float = 0.5) -> BitMatrix:
    """Apply ``2 n^2`` random CNOT row additions or row swaps to the identity.

    Each operation picks an ordered pair of distinct lines uniformly; no
    adjacency constraint applies.
    """
    if not 1 <= n <= MAXLINES:
        raise ValueError(f"line count must be in [1, {MAXLINES}], got {n}")
    rows = [1 << i for i in range(n)]
    if n == 1:
        return BitMatrix(1, rows)
    rng = np.random.default_rng(seed)
    ops = 2 * n * n
    kinds = rng.random(ops) < swap_probability
    a = rng.integers(0, n, size=ops)
    b = rng.integers(0, n - 1, size=ops)
    b = b + (b >= a)
    for swap, c, t in zip(kinds.tolist(), a.tolist(), b.tolist()):
        if swap:
            rows[c], rows[t] = rows[t], rows[c]
        else:
            rows[t] ^= rows[c]
    return BitMatrix(n, rows)


def parse_matrix(text: str) -> BitMatrix:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty matrix file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError(f"first line must be the line count, got {lines[0]!r}") from None
    if not 1 <= n <= MAXLINES:
        raise ParseError(f"line count {n} outside [1, {MAXLINES}]")
    body = [line.rstrip() for line in lines[1:]]
    if len(body) != n:
        raise ParseError(f"expected {n} matrix rows, got {len(body)}")
    return BitMatrix.from_strings(body)


def format_matrix(m: BitMatrix) -> str:
    return "\n".join([str(m.n), *m.to_strings()]) + "\n"
