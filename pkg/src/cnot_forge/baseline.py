"""Elimination-based reference synthesizers.

Both work on packed rows with row additions only.  A row addition
``row[t] ^= row[c]`` is recorded as the pair ``(c, t)``, which is also the
CNOT (control ``c``, target ``t``) it stands for.
"""

from __future__ import annotations

import math

from .gf2 import BitMatrix, Circuit, SingularMatrix, input_gate


def default_section_size(n: int) -> int:
    """Half of log2(n), rounded half up, but never below 2 (nor above n)."""
    if n < 2:
        return 1
    return min(n, max(2, math.floor(math.log2(n) / 2 + 0.5)))


def _ops_to_circuit(n: int, upper_ops, lower_ops) -> Circuit:
    # lower_ops took M to U; upper_ops took U^T to I.  Transposing a row
    # addition swaps its control and target.
    gates = [input_gate(t, c) for c, t in upper_ops]
    gates += [input_gate(c, t) for c, t in reversed(lower_ops)]
    return Circuit(n, gates)


def gaussian_synthesis(m: BitMatrix) -> Circuit:
    """Forward substitution to upper-triangular form, then back substitution.

    The pivot for a zero diagonal is the lowest-index row below it with a 1
    in that column.  Rows below are cleared with the pivot row before it is
    moved up onto the diagonal.
    """
    n = m.n
    rows = m.rows[:]
    ops = []
    for c in range(n):
        bit = 1 << c
        if rows[c] & bit:
            p = c
        else:
            p = next((r for r in range(c + 1, n) if rows[r] & bit), None)
            if p is None:
                raise SingularMatrix(f"no pivot in column {c}")
        for r in range(c + 1, n):
            if r != p and rows[r] & bit:
                rows[r] ^= rows[p]
                ops.append((p, r))
        if p != c:
            rows[c] ^= rows[p]
            ops.append((p, c))
            rows[p] ^= rows[c]
            ops.append((c, p))
    for c in range(n - 1, -1, -1):
        bit = 1 << c
        for r in range(c):
            if rows[r] & bit:
                rows[r] ^= rows[c]
                ops.append((c, r))
    return Circuit(n, [input_gate(c, t) for c, t in reversed(ops)])


def _lower_pass(rows: list[int], n: int, section_size: int) -> list[tuple[int, int]]:
    ops = []
    for start in range(0, n, section_size):
        stop = min(start + section_size, n)
        mask = ((1 << (stop - start)) - 1) << start
        seen: dict[int, int] = {}
        for r in range(start, n):
            pattern = rows[r] & mask
            if not pattern:
                continue
            if pattern in seen:
                rows[r] ^= rows[seen[pattern]]
                ops.append((seen[pattern], r))
            else:
                seen[pattern] = r
        for c in range(start, stop):
            bit = 1 << c
            diag = rows[c] & bit
            for r in range(c + 1, n):
                if rows[r] & bit:
                    if not diag:
                        rows[c] ^= rows[r]
                        ops.append((r, c))
                        diag = 1
                    rows[r] ^= rows[c]
                    ops.append((c, r))
            if not diag:
                raise SingularMatrix(f"no pivot in column {c}")
    return ops


def algorithm1_synthesis(m: BitMatrix, section_size: int | None = None) -> Circuit:
    """Multi-column elimination: duplicate sub-rows inside each column
    section are removed before per-column elimination, once on the matrix
    and once on the transpose of the resulting triangular factor."""
    n = m.n
    if section_size is None:
        section_size = default_section_size(n)
    if not 1 <= section_size <= n:
        raise ValueError(f"section_size must be in [1, {n}], got {section_size}")
    rows = m.rows[:]
    lower_ops = _lower_pass(rows, n, section_size)
    upper = BitMatrix(n, rows).transpose().rows
    upper_ops = _lower_pass(upper, n, section_size)
    return _ops_to_circuit(n, upper_ops, lower_ops)
