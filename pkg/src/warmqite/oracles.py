"""Dense-operator reference evaluations, independent of the closed forms.

Only meant for small n (a few qubits): operators are materialized as
2^n x 2^n complex matrices.
"""

from __future__ import annotations

from functools import lru_cache, reduce

import numpy as np

from .instances import Graph
from .statevector import Statevector, canonical_pairs

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_operator(n: int, terms: dict[int, str]) -> np.ndarray:
    """Dense Pauli string; qubit 0 is the least significant tensor factor."""
    return _pauli_cached(n, tuple(sorted(terms.items()))).copy()


@lru_cache(maxsize=512)
def _pauli_cached(n: int, terms: tuple[tuple[int, str], ...]) -> np.ndarray:
    lookup = dict(terms)
    factors = [PAULI[lookup.get(q, "I")] for q in reversed(range(n))]
    op = reduce(np.kron, factors)
    op.flags.writeable = False
    return op


def hamiltonian(graph: Graph) -> np.ndarray:
    n = graph.n
    h = np.zeros((1 << n, 1 << n), dtype=complex)
    for i, j in graph.edges:
        h += pauli_operator(n, {i: "Z", j: "Z"})
    return h


@lru_cache(maxsize=256)
def _generator_cached(n: int, i: int, j: int) -> np.ndarray:
    op = _pauli_cached(n, ((i, "Z"), (j, "Y"))) + _pauli_cached(n, ((i, "Y"), (j, "Z")))
    op.flags.writeable = False
    return op


def generator(n: int, i: int, j: int) -> np.ndarray:
    return _generator_cached(n, i, j).copy()


def _expect(psi: np.ndarray, op: np.ndarray) -> complex:
    return complex(np.vdot(psi, op @ psi))


def dense_g(graph: Graph, state: Statevector) -> np.ndarray:
    """-(1/2) <i [Z_k Z_l, G_ij]> for every edge row and pair column.

    With Hermitian P and G, <[P, G]> = <P psi|G psi> - <G psi|P psi>.
    """
    n = graph.n
    psi = np.asarray(state.amplitudes, dtype=complex)
    g_psi = [_generator_cached(n, i, j) @ psi for i, j in canonical_pairs(n)]
    out = np.zeros((graph.m, len(g_psi)))
    for row, (k, l) in enumerate(graph.edges):
        p_psi = _pauli_cached(n, ((k, "Z"), (l, "Z"))) @ psi
        for col, gp in enumerate(g_psi):
            comm = np.vdot(p_psi, gp) - np.vdot(gp, p_psi)
            out[row, col] = (-0.5 * 1j * comm).real
    return out


def dense_d(graph: Graph, state: Statevector) -> np.ndarray:
    """-(1/2) <{Z_k Z_l, H - <H>}> for every edge row."""
    n = graph.n
    psi = np.asarray(state.amplitudes, dtype=complex)
    h = hamiltonian(graph)
    shifted = h - _expect(psi, h).real * np.eye(1 << n)
    s_psi = shifted @ psi
    out = np.zeros(graph.m)
    for row, (k, l) in enumerate(graph.edges):
        p_psi = _pauli_cached(n, ((k, "Z"), (l, "Z"))) @ psi
        anti = np.vdot(p_psi, s_psi) + np.vdot(s_psi, p_psi)
        out[row] = (-0.5 * anti).real
    return out


def dense_expectation(state: Statevector, terms: dict[int, str]) -> float:
    psi = np.asarray(state.amplitudes, dtype=complex)
    return _expect(psi, pauli_operator(state.n, terms)).real
