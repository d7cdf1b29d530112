"""Analytic linear system for one leading-order QITE step on a warm-start state.

Rows are the edges (k, l) of the cost Hamiltonian, columns the pairs (i, j)
of the pairwise ansatz. For the product warm-start state every entry follows
from single-qubit expectations, so nothing here touches a statevector.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .instances import Graph
from .statevector import ThetaMap, WarmStartState, canonical_pairs, pair_index

SVD_CUTOFF = 1e-10


@dataclass(frozen=True)
class PauliProfile:
    z_expect: np.ndarray
    x_expect: np.ndarray

    @property
    def n(self) -> int:
        return self.z_expect.size


def pauli_profile(ws: WarmStartState) -> PauliProfile:
    """<Z_i> = (-1)^{z_i} cos 2phi and <X_i> = sin 2phi on the warm-start state."""
    signs = 1.0 - 2.0 * np.asarray(ws.incumbent, dtype=float)
    return PauliProfile(
        z_expect=signs * math.cos(2.0 * ws.phi),
        x_expect=np.full(ws.n, math.sin(2.0 * ws.phi)),
    )


@dataclass(frozen=True)
class QiteSystem:
    g: np.ndarray
    d: np.ndarray
    edges: tuple[tuple[int, int], ...]
    n: int


def build_g(graph: Graph, profile: PauliProfile) -> np.ndarray:
    """Matrix Re<psi| Z_k Z_l d/dtheta_ij |psi> at theta = 0.

    Same pair: -<X_k> - <X_l>. One shared qubit s, with the other qubits a
    (from the row) and b (from the column): -<X_s><Z_a><Z_b>. Disjoint: 0.
    """
    if profile.n != graph.n:
        raise ValueError(f"profile has {profile.n} qubits, graph has {graph.n}")
    n = graph.n
    zx, xx = profile.z_expect, profile.x_expect
    g = np.zeros((graph.m, n * (n - 1) // 2))
    for row, (k, l) in enumerate(graph.edges):
        g[row, pair_index(k, l, n)] = -xx[k] - xx[l]
        for shared, other in ((k, l), (l, k)):
            for b in range(n):
                if b == k or b == l:
                    continue
                col = pair_index(min(shared, b), max(shared, b), n)
                g[row, col] = -xx[shared] * zx[other] * zx[b]
    return g


def build_d(graph: Graph, profile: PauliProfile) -> np.ndarray:
    """Vector -(1/2)<{Z_k Z_l, H - <H>}> for the product warm-start state."""
    if profile.n != graph.n:
        raise ValueError(f"profile has {profile.n} qubits, graph has {graph.n}")
    z = profile.z_expect
    nbrs = graph.neighbors()
    d = np.empty(graph.m)
    for row, (k, l) in enumerate(graph.edges):
        around_l = sum(z[i] for i in nbrs[l] if i != k)
        around_k = sum(z[i] for i in nbrs[k] if i != l)
        d[row] = (
            z[k] ** 2 * z[l] ** 2
            - 1.0
            - z[k] * (1.0 - z[l] ** 2) * around_l
            - z[l] * (1.0 - z[k] ** 2) * around_k
        )
    return d


def build_system(graph: Graph, ws: WarmStartState) -> QiteSystem:
    if ws.n != graph.n:
        raise ValueError(f"warm start has {ws.n} bits, graph has {graph.n} vertices")
    profile = pauli_profile(ws)
    return QiteSystem(build_g(graph, profile), build_d(graph, profile), graph.edges, graph.n)


@dataclass(frozen=True)
class ThetaDot:
    n: int
    values: np.ndarray
    residual_norm: float
    rank: int
    degenerate: bool = False


def solve(system: QiteSystem, svd_cutoff: float = SVD_CUTOFF) -> ThetaDot:
    """Minimum-norm least-squares solution of g @ theta_dot = d.

    Singular values below ``svd_cutoff`` times the largest one are dropped.
    An all-zero ``g`` (phi = 0) gives theta_dot = 0 and is flagged degenerate.
    """
    g, d = system.g, system.d
    n_cols = g.shape[1]
    if g.size == 0 or not np.any(g):
        return ThetaDot(system.n, np.zeros(n_cols), float(np.linalg.norm(d)), 0, degenerate=True)
    u, s, vt = np.linalg.svd(g, full_matrices=False)
    keep = s > svd_cutoff * s[0]
    coeff = (u[:, keep].T @ d) / s[keep]
    theta_dot = vt[keep].T @ coeff
    residual = float(np.linalg.norm(g @ theta_dot - d))
    return ThetaDot(system.n, theta_dot, residual, int(keep.sum()))


def thetas(td: ThetaDot, delta_tau: float) -> ThetaMap:
    if not delta_tau > 0:
        raise ValueError(f"delta_tau must be positive, got {delta_tau}")
    return ThetaMap(td.n, delta_tau * td.values)


def diagnostic_record(system: QiteSystem, td: ThetaDot, **extra) -> str:
    """One-line JSON record of (g, d, theta_dot, residual) for debugging dumps."""
    rec = {
        "n": system.n,
        "edges": [list(e) for e in system.edges],
        "pairs": [list(p) for p in canonical_pairs(system.n)],
        "g": system.g.tolist(),
        "d": system.d.tolist(),
        "theta_dot": td.values.tolist(),
        "residual_norm": td.residual_norm,
        "rank": td.rank,
        "degenerate": td.degenerate,
    }
    rec.update(extra)
    return json.dumps(rec)
