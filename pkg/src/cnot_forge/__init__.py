"""Synthesis of CNOT-only (linear reversible) circuits from invertible GF(2) matrices."""

from .aecm import aecm, diagonal_solved, diagonalize, synthesize_aecm
from .baseline import algorithm1_synthesis, gaussian_synthesis
from .gf2 import (
    BitMatrix,
    Circuit,
    CNOTGate,
    Side,
    SingularMatrix,
    SynthState,
    apply_cnot,
    circuit_to_matrix,
    cost_eq1,
    cost_eq2,
    gf2_inverse,
    random_invertible,
)
from .mcg import enumerate_gates, mcg, mcg_line_reordering
from .methods import synthesize, verify
from .oracle import build_distance_table, exact_min_circuit, exact_min_count, peephole_optimize

__all__ = [
    "BitMatrix",
    "CNOTGate",
    "Circuit",
    "Side",
    "SingularMatrix",
    "SynthState",
    "aecm",
    "algorithm1_synthesis",
    "apply_cnot",
    "build_distance_table",
    "circuit_to_matrix",
    "cost_eq1",
    "cost_eq2",
    "diagonal_solved",
    "diagonalize",
    "enumerate_gates",
    "exact_min_circuit",
    "exact_min_count",
    "gaussian_synthesis",
    "gf2_inverse",
    "mcg",
    "mcg_line_reordering",
    "peephole_optimize",
    "random_invertible",
    "synthesize",
    "synthesize_aecm",
    "verify",
]

__version__ = "0.1.0"
