"""Dense statevector simulation of the warm-start QITE circuit.

Index convention: qubit ``i`` is bit ``i`` of the basis index (little-endian),
identical to :func:`warmqite.instances.bits_to_index`.

Every gate in the circuit is real orthogonal and the warm-start state is real,
so warm-start states are stored as float64. Complex states are accepted too.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .instances import Assignment, Graph, cost_table, index_to_bits

SIMULATOR_CEILING = 24
THETA_SKIP = 1e-14


class SimulatorCeilingError(ValueError):
    pass


def check_capacity(n: int, ceiling: int = SIMULATOR_CEILING, itemsize: int = 8) -> None:
    """Refuse qubit counts above ``ceiling`` or beyond physical memory."""
    if n > ceiling:
        raise SimulatorCeilingError(f"n={n} exceeds the simulator ceiling of {ceiling} qubits")
    need = 3 * itemsize * (1 << n)  # state + cumulative distribution + scratch
    try:
        total = os.sysconf("SC_PAGE_SIZE") * os.sysconf("SC_PHYS_PAGES")
    except (ValueError, OSError, AttributeError):
        return
    if need > total:
        raise SimulatorCeilingError(
            f"n={n} needs about {need / 2**30:.1f} GiB, machine has {total / 2**30:.1f} GiB"
        )


@dataclass
class Statevector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes, got {self.amplitudes.shape}")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return a * a if not np.iscomplexobj(a) else (a.real**2 + a.imag**2)

    def copy(self) -> "Statevector":
        return Statevector(self.n, self.amplitudes.copy())

    @classmethod
    def basis(cls, z: Sequence[int]) -> "Statevector":
        n = len(z)
        amps = np.zeros(1 << n)
        amps[sum(int(b) << i for i, b in enumerate(z))] = 1.0
        return cls(n, amps)


@dataclass(frozen=True)
class WarmStartState:
    incumbent: Assignment
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.phi <= math.pi / 4 + 1e-15):
            raise ValueError(f"phi must lie in [0, pi/4], got {self.phi}")
        object.__setattr__(self, "incumbent", tuple(int(b) for b in self.incumbent))
        if any(b not in (0, 1) for b in self.incumbent):
            raise ValueError("incumbent bits must be 0 or 1")

    @property
    def n(self) -> int:
        return len(self.incumbent)


def pair_index(i: int, j: int, n: int) -> int:
    """Position of pair (i, j), i < j, in lexicographic order."""
    return i * n - i * (i + 1) // 2 + (j - i - 1)


@lru_cache(maxsize=None)
def canonical_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@dataclass(frozen=True)
class ThetaMap:
    """Rotation angle for every pair i < j, stored in canonical pair order."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.n * (self.n - 1) // 2,):
            raise ValueError(f"need {self.n * (self.n - 1) // 2} angles, got {values.shape}")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, n: int) -> "ThetaMap":
        return cls(n, np.zeros(n * (n - 1) // 2))

    @classmethod
    def from_dict(cls, n: int, thetas: dict[tuple[int, int], float]) -> "ThetaMap":
        values = np.zeros(n * (n - 1) // 2)
        for (i, j), t in thetas.items():
            i, j = min(i, j), max(i, j)
            values[pair_index(i, j, n)] = t
        return cls(n, values)

    def __getitem__(self, pair: tuple[int, int]) -> float:
        i, j = pair
        return float(self.values[pair_index(min(i, j), max(i, j), self.n)])

    def __iter__(self) -> Iterator[tuple[tuple[int, int], float]]:
        return zip(canonical_pairs(self.n), self.values.tolist())

    def __len__(self) -> int:
        return self.values.size


def product_state(columns: Sequence[tuple[float, float]]) -> np.ndarray:
    """Kronecker product of per-qubit (amp0, amp1) with qubit 0 as the lowest bit."""
    state = np.ones(1)
    for a0, a1 in columns:
        state = np.outer(np.array([a0, a1]), state).ravel()
    return state


def init_warm_start(ws: WarmStartState, ceiling: int = SIMULATOR_CEILING) -> Statevector:
    """Product state with amplitude cos(phi) on the incumbent bit and sin(phi) on its flip."""
    check_capacity(ws.n, ceiling)
    c, s = math.cos(ws.phi), math.sin(ws.phi)
    cols = [(c, s) if b == 0 else (s, c) for b in ws.incumbent]
    return Statevector(ws.n, product_state(cols))


def _check_qubit(state: Statevector, q: int) -> None:
    if not 0 <= q < state.n:
        raise IndexError(f"qubit {q} out of range for {state.n} qubits")


def zyyz_matrix(theta: float) -> np.ndarray:
    """exp(-i theta (Z_a Y_b + Y_a Z_b)) on basis |x_a x_b> ordered 00, 01, 10, 11."""
    c, s = math.cos(theta), math.sin(theta)
    c2, cs, s2 = c * c, c * s, s * s
    return np.array(
        [
            [c2, -cs, -cs, -s2],
            [cs, c2, -s2, cs],
            [cs, -s2, c2, cs],
            [-s2, -cs, -cs, c2],
        ]
    )


def _run_tile(state: Statevector, qubits: list[int], pairs: list[tuple[int, int]], angles) -> None:
    local = {q: t for t, q in enumerate(qubits)}
    # loc_a carries the first qubit of the pair: its bit is the "a" bit of the quadruple.
    loc_a = np.array([local[i] for i, _ in pairs], dtype=np.int64)
    loc_b = np.array([local[j] for _, j in pairs], dtype=np.int64)
    angles = np.asarray(angles, dtype=float)
    c, s = np.cos(angles), np.sin(angles)
    _kernels.apply_tile(
        state.amplitudes, state.n, np.array(qubits, dtype=np.int64), loc_a, loc_b, c * c, c * s, s * s
    )


def apply_zyyz_rotation(state: Statevector, i: int, j: int, theta: float) -> None:
    """In place: state <- exp(-i theta (Z_i Y_j + Y_i Z_j)) state."""
    _check_qubit(state, i)
    _check_qubit(state, j)
    if i == j:
        raise ValueError("rotation needs two distinct qubits")
    # The generator is symmetric under i <-> j.
    i, j = min(i, j), max(i, j)
    _run_tile(state, [i, j], [(i, j)], [theta])


@lru_cache(maxsize=None)
def _schedule(n: int) -> tuple[tuple[tuple[int, ...], tuple[tuple[int, int], ...], np.ndarray], ...]:
    out = []
    for pairs in _kernels.tile_schedule(n):
        qubits = tuple(sorted({q for p in pairs for q in p}))
        idx = np.array([pair_index(i, j, n) for i, j in pairs], dtype=np.int64)
        out.append((qubits, tuple(pairs), idx))
    return tuple(out)


def apply_qite_circuit(state: Statevector, thetas: ThetaMap) -> None:
    """In place: apply every pair rotation in lexicographic pair order.

    Pairs with |theta| < 1e-14 are skipped.
    """
    if thetas.n != state.n:
        raise ValueError(f"theta map is for {thetas.n} qubits, state has {state.n}")
    if state.n < 2:
        return
    for qubits, pairs, idx in _schedule(state.n):
        angles = thetas.values[idx]
        keep = np.abs(angles) >= THETA_SKIP
        if not keep.any():
            continue
        kept = [p for p, k in zip(pairs, keep) if k]
        _run_tile(state, list(qubits), kept, angles[keep])


# --- expectations -----------------------------------------------------------

def _split(state: Statevector, q: int) -> np.ndarray:
    return state.amplitudes.reshape(1 << (state.n - 1 - q), 2, 1 << q)


def expectation_z(state: Statevector, i: int) -> float:
    _check_qubit(state, i)
    p = state.probabilities().reshape(1 << (state.n - 1 - i), 2, 1 << i)
    return float(p[:, 0, :].sum() - p[:, 1, :].sum())


def expectation_x(state: Statevector, i: int) -> float:
    _check_qubit(state, i)
    a = _split(state, i)
    return float(2.0 * np.real(np.vdot(a[:, 0, :], a[:, 1, :])))


def expectation_zz(state: Statevector, i: int, j: int) -> float:
    _check_qubit(state, i)
    _check_qubit(state, j)
    if i == j:
        return 1.0
    lo, hi = min(i, j), max(i, j)
    n = state.n
    p = state.probabilities().reshape(1 << (n - 1 - hi), 2, 1 << (hi - lo - 1), 2, 1 << lo)
    m = p.sum(axis=(0, 2, 4))
    return float(m[0, 0] + m[1, 1] - m[0, 1] - m[1, 0])


def expectation_h(state: Statevector, graph: Graph) -> float:
    return float(sum(expectation_zz(state, i, j) for i, j in graph.edges))


# --- measurement ------------------------------------------------------------

def sample_indices(state: Statevector, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Basis indices drawn i.i.d. from |amplitude|^2, by inverse-CDF lookup."""
    if shots < 1:
        raise ValueError("shots must be positive")
    cdf = np.cumsum(state.probabilities())
    u = rng.random(shots) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, cdf.size - 1)


def sample_bits(state: Statevector, shots: int, rng: np.random.Generator) -> np.ndarray:
    return index_to_bits(sample_indices(state, shots, rng), state.n)


def sample(state: Statevector, shots: int, rng: np.random.Generator) -> list[Assignment]:
    return [tuple(int(b) for b in row) for row in sample_bits(state, shots, rng)]


# --- imaginary-time reference ------------------------------------------------

def exact_imaginary_time(state: Statevector, graph: Graph, tau: float) -> Statevector:
    """Normalized exp(-H tau) |state>; H is diagonal so this is amplitude-wise."""
    if not math.isfinite(tau):
        raise ValueError("tau must be finite")
    costs = cost_table(graph).astype(float)
    # Shift by the minimum so that large tau does not underflow everything.
    weights = np.exp(-(costs - costs.min()) * tau)
    out = state.amplitudes * weights
    norm = np.linalg.norm(out)
    if norm == 0.0:
        raise ValueError("imaginary-time evolution annihilated the state")
    return Statevector(state.n, out / norm)


def dump_amplitudes(state: Statevector, path: str | os.PathLike) -> None:
    """Binary dump: uint32 n, then 2^n little-endian complex128 amplitudes."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<I", state.n))
        fh.write(np.asarray(state.amplitudes, dtype="<c16").tobytes())


def load_amplitudes(path: str | os.PathLike) -> Statevector:
    with open(path, "rb") as fh:
        (n,) = struct.unpack("<I", fh.read(4))
        amps = np.frombuffer(fh.read(), dtype="<c16").copy()
    return Statevector(n, amps)
