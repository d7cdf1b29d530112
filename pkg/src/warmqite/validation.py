"""Self-checks behind ``warmqite validate``.

Each check compares a fast path against an independent reference and reports
the worst deviation. ``build_g``/``build_d`` can be swapped out so that the
checks themselves can be tested against a deliberately broken system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracles, qite_system
from .instances import generate_3regular
from .statevector import (
    Statevector,
    ThetaMap,
    WarmStartState,
    apply_qite_circuit,
    apply_zyyz_rotation,
    expectation_x,
    expectation_z,
    init_warm_start,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_warm_start(rng, sizes=(4, 6, 8)):
    n = int(rng.choice(sizes))
    graph = generate_3regular(n, rng)
    z = tuple(int(b) for b in rng.integers(0, 2, n))
    phi = float(rng.uniform(0.0, math.pi / 4))
    if phi == 0.0:
        phi = math.pi / 4
    return graph, WarmStartState(z, phi)


def check_oracle(trials: int, rng, build_g: Callable, build_d: Callable, tol: float = 1e-10):
    worst_g = worst_d = 0.0
    for _ in range(trials):
        graph, ws = _random_warm_start(rng)
        profile = qite_system.pauli_profile(ws)
        state = init_warm_start(ws)
        worst_g = max(worst_g, float(np.abs(build_g(graph, profile) - oracles.dense_g(graph, state)).max()))
        worst_d = max(worst_d, float(np.abs(build_d(graph, profile) - oracles.dense_d(graph, state)).max()))
    return [
        CheckResult("oracle-g", worst_g <= tol, f"max |dG| = {worst_g:.2e} over {trials} warm starts"),
        CheckResult("oracle-d", worst_d <= tol, f"max |dD| = {worst_d:.2e} over {trials} warm starts"),
    ]


def check_pauli_forms(trials: int, rng, tol: float = 1e-12):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 11))
        ws = WarmStartState(tuple(rng.integers(0, 2, n)), float(rng.uniform(0.0, math.pi / 4)))
        profile = qite_system.pauli_profile(ws)
        state = init_warm_start(ws)
        for i in range(ws.n):
            worst = max(worst, abs(profile.z_expect[i] - expectation_z(state, i)),
                        abs(profile.x_expect[i] - expectation_x(state, i)))
    return CheckResult("pauli-closed-forms", worst <= tol, f"max deviation {worst:.2e}")


def check_unitarity(rng, n: int = 10, tol: float = 1e-10):
    state = init_warm_start(WarmStartState(tuple(rng.integers(0, 2, n)), float(rng.uniform(0, math.pi / 4))))
    apply_qite_circuit(state, ThetaMap(n, rng.normal(size=n * (n - 1) // 2)))
    dev = abs(state.norm() - 1.0)
    return CheckResult("unitarity", dev <= tol, f"|norm - 1| = {dev:.2e} at n={n}")


def check_rotation(rng, tol: float = 1e-12):
    n = 3
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    state = Statevector(n, amps / np.linalg.norm(amps))
    theta = float(rng.normal())
    w, v = np.linalg.eigh(oracles.generator(n, 0, 2))
    expected = v @ (np.exp(-1j * theta * w) * (v.conj().T @ state.amplitudes))
    apply_zyyz_rotation(state, 0, 2, theta)
    dev = float(np.abs(state.amplitudes - expected).max())
    return CheckResult("rotation-kernel", dev <= tol, f"max deviation from dense exponential {dev:.2e}")


def check_first_iteration(rng, delta_tau: float = 0.1, tol: float = 1e-12):
    worst = 0.0
    for n in (4, 8, 12):
        graph = generate_3regular(n, rng)
        ws = WarmStartState(tuple(rng.integers(0, 2, n)), math.pi / 4)
        td = qite_system.solve(qite_system.build_system(graph, ws))
        theta = qite_system.thetas(td, delta_tau)
        edges = set(graph.edges)
        for pair, t in theta:
            worst = max(worst, abs(t - (delta_tau / 2 if pair in edges else 0.0)))
    return CheckResult("first-iteration", worst <= tol, f"max |theta - closed form| = {worst:.2e}")


def run_checks(trials: int = 100, seed: int = 2024,
               build_g: Callable = qite_system.build_g,
               build_d: Callable = qite_system.build_d) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = check_oracle(trials, rng, build_g, build_d)
    results.append(check_pauli_forms(trials, rng))
    results.append(check_unitarity(rng))
    results.append(check_rotation(rng))
    results.append(check_first_iteration(rng))
    return results
