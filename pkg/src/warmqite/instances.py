"""MaxCut instances: random 3-regular graphs, the Ising cost, and exact optima.

Bit convention used everywhere in the package: an assignment ``z`` of ``n``
bits maps to the basis index ``sum(z[i] << i)`` (qubit ``i`` is bit ``i``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Assignment = tuple[int, ...]

BRUTE_FORCE_CEILING = 24


class BruteForceCeilingError(ValueError):
    """Raised instead of approximating when an instance is too large to enumerate."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with canonical edge order (i < j, sorted)."""

    n: int
    edges: tuple[tuple[int, int], ...]
    connected: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got {self.n}")
        canon = []
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            canon.append((min(i, j), max(i, j)))
        canon.sort()
        if len(set(canon)) != len(canon):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "connected", _is_connected(self.n, canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def neighbors(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return nbrs

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.edges:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        e = np.asarray(self.edges, dtype=np.int64)
        return e[:, 0], e[:, 1]


def _is_connected(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        parent[find(i)] = find(j)
    return len({find(v) for v in range(n)}) == 1


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def generate_3regular(n: int, rng: np.random.Generator) -> Graph:
    """Uniform simple 3-regular graph from the pairing model.

    Half-edges are shuffled and paired; any self-loop or repeated edge
    restarts the whole pairing, which keeps the result uniform over simple
    3-regular graphs. Connectivity is not enforced (see ``Graph.connected``).
    """
    if n < 4 or n % 2:
        raise ValueError(f"3-regular graphs need an even vertex count >= 4, got {n}")
    stubs = np.repeat(np.arange(n), 3)
    while True:
        perm = rng.permutation(stubs)
        a, b = perm[0::2], perm[1::2]
        if np.any(a == b):
            continue
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        keys = lo * n + hi
        if np.unique(keys).size != keys.size:
            continue
        return Graph(n, tuple(zip(lo.tolist(), hi.tolist())))


def _check_length(graph: Graph, z: Sequence[int]) -> None:
    if len(z) != graph.n:
        raise ValueError(f"assignment has {len(z)} bits, graph has {graph.n} vertices")


def cost(graph: Graph, z: Sequence[int]) -> int:
    """Eigenvalue of sum_{(i,j) in E} Z_i Z_j on the basis state |z>."""
    _check_length(graph, z)
    return sum(1 if z[i] == z[j] else -1 for i, j in graph.edges)


def cut_size(graph: Graph, z: Sequence[int]) -> int:
    _check_length(graph, z)
    return sum(1 for i, j in graph.edges if z[i] != z[j])


def batch_cost(graph: Graph, bits: np.ndarray) -> np.ndarray:
    """Costs of a (shots, n) 0/1 array of assignments."""
    bits = np.asarray(bits)
    if bits.ndim != 2 or bits.shape[1] != graph.n:
        raise ValueError(f"expected shape (shots, {graph.n}), got {bits.shape}")
    ei, ej = graph.edge_arrays()
    disagree = (bits[:, ei] != bits[:, ej]).sum(axis=1)
    return graph.m - 2 * disagree.astype(np.int64)


def index_to_bits(index: int | np.ndarray, n: int) -> np.ndarray:
    idx = np.asarray(index, dtype=np.int64)
    return ((idx[..., None] >> np.arange(n)) & 1).astype(np.uint8)


def bits_to_index(z: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(z))


def complement(z: Sequence[int]) -> Assignment:
    return tuple(1 - int(b) for b in z)


def cost_table(graph: Graph, n_free: int | None = None) -> np.ndarray:
    """Cost of every basis index in ``range(2**n_free)``.

    ``n_free`` defaults to ``graph.n``; smaller values enumerate only indices
    whose high bits are zero (used by the brute force with vertex 0 pinned).
    """
    n = graph.n if n_free is None else n_free
    idx = np.arange(1 << n, dtype=np.int64)
    table = np.full(1 << n, graph.m, dtype=np.int16)
    for i, j in graph.edges:
        if i >= n and j >= n:
            continue
        flip = ((idx >> i) ^ (idx >> j)) & 1 if max(i, j) < n else (idx >> min(i, j)) & 1
        table -= 2 * flip.astype(np.int16)
    return table


@dataclass(frozen=True)
class CostSummary:
    c_min: int
    c_max: int
    optima: frozenset[Assignment]

    def is_optimal(self, z: Sequence[int]) -> bool:
        return tuple(int(b) for b in z) in self.optima


def brute_force_summary(graph: Graph, ceiling: int = BRUTE_FORCE_CEILING) -> CostSummary:
    """Exact C^min, C^max and every optimum by enumeration.

    Vertex 0 is pinned to 0, which halves the space thanks to complement
    symmetry; both complements of each optimum are reported.
    """
    if graph.n > ceiling:
        raise BruteForceCeilingError(
            f"n={graph.n} exceeds the brute-force ceiling of {ceiling}; refusing to approximate"
        )
    n = graph.n
    # Relabel so that vertex 0 becomes the top bit, then enumerate the remaining n-1 bits
    # with the pinned bit equal to zero.
    perm = [(v - 1) % n for v in range(n)]
    shifted = Graph(n, tuple((perm[i], perm[j]) for i, j in graph.edges))
    table = cost_table(shifted, n_free=n - 1)
    c_min = int(table.min())
    hits = np.flatnonzero(table == c_min)
    optima = set()
    for h in hits.tolist():
        z = tuple(int(b) for b in index_to_bits(h, n))
        original = tuple(z[perm[v]] for v in range(n))
        optima.add(original)
        optima.add(complement(original))
    return CostSummary(c_min=c_min, c_max=graph.m, optima=frozenset(optima))


def normalized_cost(graph: Graph, z: Sequence[int], summary: CostSummary) -> float:
    return normalize(cost(graph, z), summary)


def normalize(c: int, summary: CostSummary) -> float:
    if summary.c_min == summary.c_max:
        raise ValueError("degenerate instance: C^min equals C^max")
    return (c - summary.c_max) / (summary.c_min - summary.c_max)


# --- edge-list files -------------------------------------------------------

def write_edges(graph: Graph, path: str | os.PathLike) -> None:
    lines = [f"{graph.n} {graph.m}"] + [f"{i} {j}" for i, j in graph.edges]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_edges(path: str | os.PathLike) -> Graph:
    rows = [ln.split() for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not rows:
        raise ValueError(f"{path}: empty graph file")
    n, m = int(rows[0][0]), int(rows[0][1])
    edges = [(int(a), int(b)) for a, b in rows[1:]]
    if len(edges) != m:
        raise ValueError(f"{path}: header declares {m} edges, found {len(edges)}")
    for i, j in edges:
        if not i < j:
            raise ValueError(f"{path}: edge ({i}, {j}) is not written with i < j")
    return Graph(n, tuple(edges))
