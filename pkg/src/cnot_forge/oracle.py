"""Exact minimum CNOT counts for up to five lines.

Breadth-first search over GL(n, 2) from the identity, stepping by row
additions.  Distances live in a dense ``2**(n*n)``-slot uint8 array indexed
by the row-major matrix code (bit ``n*i + j`` is entry ``(i, j)``); codes of
singular matrices keep the sentinel 255.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .gf2 import BitMatrix, Circuit, DimensionMismatch, circuit_to_matrix, input_gate

MAX_N = 5
UNREACHED = 255
MAGIC = b"CNOTDIST"
TABLE_DIR_ENV = "CNOT_FORGE_TABLE_DIR"


class DimensionTooLarge(ValueError):
    pass


def encode(m: BitMatrix) -> int:
    n = m.n
    code = 0
    for i, r in enumerate(m.rows):
        code |= r << (n * i)
    return code


def decode(code: int, n: int) -> BitMatrix:
    mask = (1 << n) - 1
    return BitMatrix(n, [(code >> (n * i)) & mask for i in range(n)])


def _generators(n: int) -> list[tuple[int, int]]:
    return [(c, t) for c in range(n) for t in range(n) if c != t]


def _apply_row_op(codes: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    mask = np.uint32((1 << n) - 1)
    src = (codes >> np.uint32(n * control)) & mask
    return codes ^ (src << np.uint32(n * target))


@dataclass
class DistanceTable:
    n: int
    distances: np.ndarray  # uint8, length 2**(n*n)

    def __getitem__(self, m: BitMatrix) -> int:
        if m.n != self.n:
            raise DimensionMismatch(f"table is for {self.n} lines, matrix has {m.n}")
        d = int(self.distances[encode(m)])
        if d == UNREACHED:
            raise ValueError("matrix is singular")
        return d

    def __len__(self) -> int:
        return int(np.count_nonzero(self.distances != UNREACHED))

    def histogram(self) -> list[int]:
        counts = np.bincount(self.distances[self.distances != UNREACHED])
        return counts.tolist()

    def invertible_codes(self) -> np.ndarray:
        return np.flatnonzero(self.distances != UNREACHED).astype(np.uint32)

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(MAGIC + struct.pack("<BB", self.n, 1))
            fh.write(self.distances.tobytes())

    @classmethod
    def load(cls, path) -> DistanceTable:
        with open(path, "rb") as fh:
            head = fh.read(len(MAGIC) + 2)
            if head[: len(MAGIC)] != MAGIC:
                raise ValueError(f"{path} is not a distance table")
            n, width = struct.unpack("<BB", head[len(MAGIC):])
            if width != 1:
                raise ValueError(f"unsupported entry width {width}")
            data = np.frombuffer(fh.read(), dtype=np.uint8).copy()
        if data.size != 1 << (n * n):
            raise ValueError(f"{path} is truncated")
        return cls(n, data)


def build_distance_table(n: int) -> DistanceTable:
    """BFS from I over the ``n (n - 1)`` row additions."""
    if n > MAX_N:
        raise DimensionTooLarge(f"exact tables only go up to {MAX_N} lines")
    if n < 1:
        raise ValueError("n must be positive")
    dist = np.full(1 << (n * n), UNREACHED, dtype=np.uint8)
    frontier = np.array([encode(BitMatrix.identity(n))], dtype=np.uint32)
    dist[frontier] = 0
    gens = _generators(n)
    depth = 0
    while frontier.size:
        depth += 1
        found = []
        for c, t in gens:
            nxt = _apply_row_op(frontier, n, c, t)
            nxt = nxt[dist[nxt] == UNREACHED]
            dist[nxt] = depth
            found.append(nxt)
        frontier = np.unique(np.concatenate(found)) if found else frontier[:0]
    return DistanceTable(n, dist)


def _table_path(n: int) -> Path | None:
    root = os.environ.get(TABLE_DIR_ENV)
    if not root:
        return None
    return Path(root) / f"gl{n}_distances.bin"


@lru_cache(maxsize=None)
def get_table(n: int) -> DistanceTable:
    """Cached table; read from / written to ``$CNOT_FORGE_TABLE_DIR`` when set."""
    path = _table_path(n)
    if path is not None and path.exists():
        table = DistanceTable.load(path)
        if table.n == n:
            return table
    table = build_distance_table(n)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        table.save(tmp)
        tmp.replace(path)
    return table


def exact_min_count(m: BitMatrix, table: DistanceTable) -> int:
    return table[m]


def exact_min_circuit(m: BitMatrix, table: DistanceTable) -> Circuit:
    """Walk down the distance table one row addition at a time."""
    if m.n != table.n:
        raise DimensionMismatch(f"table is for {table.n} lines, matrix has {m.n}")
    n = m.n
    code = np.array([encode(m)], dtype=np.uint32)
    d = int(table.distances[code[0]])
    if d == UNREACHED:
        raise ValueError("matrix is singular")
    ops = []
    gens = _generators(n)
    while d:
        for c, t in gens:
            nxt = _apply_row_op(code, n, c, t)
            if table.distances[nxt[0]] == d - 1:
                ops.append((c, t))
                code, d = nxt, d - 1
                break
        else:
            raise AssertionError("distance table is not a BFS table")
    # ops took m to I, so m is their product in reverse application order
    return Circuit(n, [input_gate(c, t) for c, t in reversed(ops)])


def _window_matrix(gates, lines: list[int]) -> BitMatrix:
    local = {line: k for k, line in enumerate(lines)}
    sub = Circuit(len(lines), [input_gate(local[g.control], local[g.target]) for g in gates])
    return circuit_to_matrix(sub)


def _peephole_pass(c: Circuit, table: DistanceTable, width: int) -> list:
    out = []
    gates = c.gates
    i = 0
    while i < len(gates):
        lines: list[int] = []
        j = i
        while j < len(gates):
            new = [x for x in (gates[j].control, gates[j].target) if x not in lines]
            if len(lines) + len(new) > width:
                break
            lines += new
            j += 1
        run = gates[i:j]
        if len(run) > 1:
            pad = [x for x in range(c.n) if x not in lines][: width - len(lines)]
            window = sorted(lines + pad)
            best = exact_min_circuit(_window_matrix(run, window), table)
            if len(best) < len(run):
                run = [input_gate(window[g.control], window[g.target]) for g in best.gates]
        out.extend(run)
        i = j
    return out


def peephole_optimize(c: Circuit, table: DistanceTable) -> Circuit:
    """Resynthesize maximal runs of consecutive gates touching at most ``table.n`` lines.

    A run is replaced by an exact minimum circuit only when that is strictly
    shorter; passes repeat until one changes nothing.  Runs on fewer lines
    are padded with other circuit lines.  Circuits narrower than the table
    use the exact table of their own width.
    """
    width = table.n
    if c.n < width:
        width = c.n
        table = get_table(width) if width >= 2 else None
    gates = list(c.gates)
    if table is not None:
        while True:
            new = _peephole_pass(Circuit(c.n, gates), table, width)
            if len(new) >= len(gates):
                break
            gates = new
    return Circuit(c.n, gates, c.permutation)
