"""Iterative warm-start QITE for MaxCut on dense statevectors."""

from .instances import (
    CostSummary,
    Graph,
    brute_force_summary,
    cost,
    generate_3regular,
    normalized_cost,
)
from .optimizer import RunConfig, RunResult, phi_schedule, run, run_classical, run_qite, run_random
from .qite_system import QiteSystem, ThetaDot, build_d, build_g, build_system, pauli_profile, solve, thetas
from .statevector import (
    Statevector,
    ThetaMap,
    WarmStartState,
    apply_qite_circuit,
    apply_zyyz_rotation,
    exact_imaginary_time,
    init_warm_start,
    sample,
)

__version__ = "0.1.0"
