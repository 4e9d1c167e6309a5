"""One entry point over every synthesis method, with round-trip verification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aecm import DETERMINISTIC, RANDOM, synthesize_aecm
from .baseline import algorithm1_synthesis, gaussian_synthesis
from .gf2 import BitMatrix, Circuit, circuit_to_matrix
from .mcg import mcg, mcg_line_reordering

METHODS = ("aecm", "mcg", "mcg-reorder", "gaussian", "algorithm1", "aecmp", "mcgp")
RANDOMIZED = {"aecmp", "mcgp"}


class VerificationError(AssertionError):
    """A synthesized circuit does not reproduce its specification."""


@dataclass
class SynthesisResult:
    method: str
    circuit: Circuit
    convergent: bool | None = None  # only meaningful for the MCG family

    @property
    def gate_count(self) -> int:
        return len(self.circuit)


def synthesize(
    method: str,
    m: BitMatrix,
    seed=None,
    stage1_threshold: int = 2,
    section_size: int | None = None,
) -> SynthesisResult:
    if method == "gaussian":
        return SynthesisResult(method, gaussian_synthesis(m))
    if method == "algorithm1":
        return SynthesisResult(method, algorithm1_synthesis(m, section_size))
    if method in ("aecm", "aecmp"):
        tie = RANDOM if method == "aecmp" else DETERMINISTIC
        return SynthesisResult(method, synthesize_aecm(m, tie, seed, stage1_threshold))
    if method in ("mcg", "mcgp", "mcg-reorder"):
        tie = RANDOM if method == "mcgp" else DETERMINISTIC
        run = mcg_line_reordering if method == "mcg-reorder" else mcg
        res = run(m, tie, seed, stage1_threshold)
        return SynthesisResult(method, res.circuit, res.convergent)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def verify(m: BitMatrix, circuit: Circuit) -> None:
    got = circuit_to_matrix(circuit)
    if got != m:
        i, j = first_difference(m, got)
        raise VerificationError(f"circuit differs from specification at entry ({i}, {j})")


def first_difference(a: BitMatrix, b: BitMatrix) -> tuple[int, int] | None:
    for i, (ra, rb) in enumerate(zip(a.rows, b.rows)):
        if ra != rb:
            return i, ((ra ^ rb) & -(ra ^ rb)).bit_length() - 1
    return None


def best_of(method: str, m: BitMatrix, passes: int = 1, seed=0, **opts) -> SynthesisResult:
    """Run ``passes`` times (independent child seeds) and keep the shortest circuit.

    Deterministic methods ignore ``passes``.
    """
    if passes < 1:
        raise ValueError("passes must be >= 1")
    if method not in RANDOMIZED:
        passes = 1
    best = None
    for child in np.random.SeedSequence(seed).spawn(passes):
        res = synthesize(method, m, child, **opts)
        verify(m, res.circuit)
        if best is None or res.gate_count < best.gate_count:
            best = res
    return best
