"""The iterative warm-start loop and its two sampling baselines."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import qite_system, statevector
from .instances import Assignment, Graph, batch_cost
from .statevector import SIMULATOR_CEILING, WarmStartState

METHODS = ("qite", "classical", "random")


@dataclass(frozen=True)
class RunConfig:
    n_it: int = 10
    shots_per_it: int = 10
    delta_tau: float = 0.1
    method: str = "qite"
    seed: int = 0
    phi_initial: float = math.pi / 4
    svd_cutoff: float = qite_system.SVD_CUTOFF
    phi_endpoint: str = "exclusive"
    max_qubits: int = SIMULATOR_CEILING

    def __post_init__(self):
        if self.n_it < 1:
            raise ValueError("n_it must be at least 1")
        if self.shots_per_it < 1:
            raise ValueError("shots_per_it must be at least 1")
        if not self.delta_tau > 0:
            raise ValueError("delta_tau must be positive")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.phi_endpoint not in ("exclusive", "inclusive"):
            raise ValueError("phi_endpoint must be 'exclusive' or 'inclusive'")

    @property
    def total_shots(self) -> int:
        return self.n_it * self.shots_per_it

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)


@dataclass
class RunResult:
    best: Assignment
    best_cost: int
    cost_trace: list[int]
    samples_used: int
    phis: list[float] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)
    wallclock_ms: float = 0.0


def phi_schedule(s: int, n_it: int, phi_initial: float = math.pi / 4, endpoint: str = "exclusive") -> float:
    """Linear ramp from ``phi_initial``.

    ``exclusive`` stops one step short of zero (last angle phi_initial/n_it);
    ``inclusive`` reaches exactly zero on the last iteration.
    """
    if not 0 <= s < n_it:
        raise ValueError(f"iteration {s} outside 0..{n_it - 1}")
    if endpoint == "inclusive":
        return phi_initial if n_it == 1 else phi_initial * (1.0 - s / (n_it - 1))
    return phi_initial * (1.0 - s / n_it)


# A sampler takes (iteration, phi, incumbent bits) and returns a (shots, n) bit array.
Sampler = Callable[[int, float, np.ndarray], np.ndarray]


def _iterate(graph: Graph, config: RunConfig, sampler: Sampler, phis: list[float] | None) -> RunResult:
    start = time.perf_counter()
    incumbent = np.zeros(graph.n, dtype=np.uint8)
    best_cost = graph.m  # cost of the all-zeros start
    trace: list[int] = []
    for s in range(config.n_it):
        phi = phis[s] if phis is not None else math.nan
        bits = sampler(s, phi, incumbent)
        costs = batch_cost(graph, bits)
        k = int(np.argmin(costs))  # first occurrence = earliest drawn
        if costs[k] < best_cost:
            best_cost = int(costs[k])
            incumbent = bits[k].astype(np.uint8)
        trace.append(best_cost)
    return RunResult(
        best=tuple(int(b) for b in incumbent),
        best_cost=best_cost,
        cost_trace=trace,
        samples_used=config.n_it * config.shots_per_it,
        phis=list(phis) if phis is not None else [],
        wallclock_ms=(time.perf_counter() - start) * 1e3,
    )


def _phis(config: RunConfig) -> list[float]:
    return [phi_schedule(s, config.n_it, config.phi_initial, config.phi_endpoint) for s in range(config.n_it)]


def qite_state(graph: Graph, ws: WarmStartState, config: RunConfig):
    """Warm-start state after one QITE circuit; also returns the solved system."""
    system = qite_system.build_system(graph, ws)
    td = qite_system.solve(system, config.svd_cutoff)
    state = statevector.init_warm_start(ws, config.max_qubits)
    if not td.degenerate:
        statevector.apply_qite_circuit(state, qite_system.thetas(td, config.delta_tau))
    return state, system, td


def run_qite(graph: Graph, config: RunConfig, rng: np.random.Generator) -> RunResult:
    statevector.check_capacity(graph.n, config.max_qubits)
    residuals: list[float] = []

    def sampler(s, phi, incumbent):
        ws = WarmStartState(tuple(incumbent.tolist()), phi)
        state, _, td = qite_state(graph, ws, config)
        residuals.append(td.residual_norm)
        return statevector.sample_bits(state, config.shots_per_it, rng)

    result = _iterate(graph, config, sampler, _phis(config))
    result.residuals = residuals
    return result


def run_classical(graph: Graph, config: RunConfig, rng: np.random.Generator) -> RunResult:
    """Same loop, sampling the unentangled warm-start product state directly."""

    def sampler(s, phi, incumbent):
        flips = rng.random((config.shots_per_it, graph.n)) < math.sin(phi) ** 2
        return (incumbent[None, :] ^ flips).astype(np.uint8)

    return _iterate(graph, config, sampler, _phis(config))


def run_random(graph: Graph, config: RunConfig, rng: np.random.Generator) -> RunResult:
    def sampler(s, phi, incumbent):
        return rng.integers(0, 2, size=(config.shots_per_it, graph.n), dtype=np.uint8)

    return _iterate(graph, config, sampler, None)


_RUNNERS = {"qite": run_qite, "classical": run_classical, "random": run_random}


def run(graph: Graph, config: RunConfig, rng: np.random.Generator | None = None) -> RunResult:
    """Dispatch on ``config.method``; the rng defaults to one seeded by ``config.seed``."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    return _RUNNERS[config.method](graph, config, rng)
