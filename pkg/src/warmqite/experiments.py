"""Ensemble generation, method sweeps and aggregate metrics.

Ensemble directory layout::

    <dir>/<n>_<index>.edges   one graph per file ("n m" header, then "i j" lines)
    <dir>/manifest.json       seeds, connectivity and brute-force optima per graph

Run records are CSV with a fixed header (``RUN_COLUMNS``); every row carries
the seed of its run so that it can be reproduced on its own.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .instances import (
    BRUTE_FORCE_CEILING,
    BruteForceCeilingError,
    CostSummary,
    Graph,
    brute_force_summary,
    generate_3regular,
    normalize,
    read_edges,
    write_edges,
)
from .optimizer import METHODS, RunConfig, run

SCHEMA_VERSION = 1
MANIFEST = "manifest.json"

RUN_COLUMNS = [
    "method", "n", "graph_id", "seed", "n_it", "shots_per_it", "delta_tau",
    "best_cost", "c_min", "c_max", "c_norm", "found_opt", "samples_used",
    "wallclock_ms", "schema_version",
]
METRIC_COLUMNS = [
    "method", "n", "median_cnorm", "q25_cnorm", "q75_cnorm", "frac_optimal",
    "n_it", "shots_per_it", "delta_tau", "graphs_count",
]


def derive_seed(master_seed: int, *key: int) -> int:
    """64-bit child seed of ``master_seed`` for the given integer key path."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


@dataclass(frozen=True)
class EnsembleSpec:
    sizes: tuple[int, ...]
    graphs_per_size: int = 100
    master_seed: int = 0

    def __post_init__(self):
        for n in self.sizes:
            if n < 4 or n % 2:
                raise ValueError(f"ensemble sizes must be even and >= 4, got {n}")
        if self.graphs_per_size < 1:
            raise ValueError("graphs_per_size must be positive")


@dataclass
class EnsembleEntry:
    graph_id: str
    n: int
    index: int
    seed: int
    graph: Graph
    connected: bool
    c_min: int | None
    c_max: int
    n_optima: int | None = None

    @property
    def summary(self) -> CostSummary | None:
        if self.c_min is None:
            return None
        return CostSummary(self.c_min, self.c_max, frozenset())


def graph_id(n: int, index: int) -> str:
    return f"{n}_{index:03d}"


def generate_ensemble(spec: EnsembleSpec, out_dir: str | os.PathLike,
                      brute_force_ceiling: int = BRUTE_FORCE_CEILING) -> list[EnsembleEntry]:
    """Write graphs and manifest. Sizes above the brute-force ceiling get no optimum."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for n in spec.sizes:
        for index in range(spec.graphs_per_size):
            seed = derive_seed(spec.master_seed, n, index)
            graph = generate_3regular(n, np.random.default_rng(seed))
            try:
                summary = brute_force_summary(graph, brute_force_ceiling)
                c_min, n_opt = summary.c_min, len(summary.optima)
            except BruteForceCeilingError:
                c_min, n_opt = None, None
            gid = graph_id(n, index)
            write_edges(graph, out / f"{gid}.edges")
            entries.append(EnsembleEntry(gid, n, index, seed, graph, graph.connected, c_min, graph.m, n_opt))
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "master_seed": spec.master_seed,
        "sizes": list(spec.sizes),
        "graphs_per_size": spec.graphs_per_size,
        "graphs": [
            {
                "graph_id": e.graph_id, "file": f"{e.graph_id}.edges", "n": e.n, "index": e.index,
                "seed": e.seed, "connected": e.connected, "c_min": e.c_min, "c_max": e.c_max,
                "n_optima": e.n_optima,
            }
            for e in entries
        ],
    }
    (out / MANIFEST).write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
    return entries


def load_ensemble(ensemble_dir: str | os.PathLike, sizes: Iterable[int] | None = None) -> list[EnsembleEntry]:
    root = Path(ensemble_dir)
    path = root / MANIFEST
    if not path.exists():
        raise FileNotFoundError(f"no {MANIFEST} in {root}")
    manifest = json.loads(path.read_text(encoding="utf-8"))
    keep = set(sizes) if sizes is not None else None
    entries = []
    for g in manifest["graphs"]:
        if keep is not None and g["n"] not in keep:
            continue
        graph = read_edges(root / g["file"])
        entries.append(EnsembleEntry(g["graph_id"], g["n"], g["index"], g["seed"], graph,
                                     g["connected"], g["c_min"], g["c_max"], g.get("n_optima")))
    return entries


# --- running -----------------------------------------------------------------

def _run_one(args) -> dict:
    entry, config, record_timing = args
    result = run(entry.graph, config)
    row = {
        "method": config.method, "n": entry.n, "graph_id": entry.graph_id, "seed": config.seed,
        "n_it": config.n_it, "shots_per_it": config.shots_per_it, "delta_tau": config.delta_tau,
        "best_cost": result.best_cost, "c_min": entry.c_min, "c_max": entry.c_max,
        "c_norm": None, "found_opt": None, "samples_used": result.samples_used,
        "wallclock_ms": round(result.wallclock_ms, 3) if record_timing else None,
        "schema_version": SCHEMA_VERSION,
    }
    if entry.c_min is not None:
        row["c_norm"] = normalize(result.best_cost, entry.summary)
        row["found_opt"] = int(result.best_cost == entry.c_min)
    return row


def run_ensemble(entries: Sequence[EnsembleEntry], config: RunConfig, master_seed: int,
                 methods: Sequence[str] = ("qite",), jobs: int = 1,
                 record_timing: bool = False) -> list[dict]:
    """One run per (method, graph). Run seeds derive from (master, n, index, method)."""
    tasks = []
    for method in methods:
        code = METHODS.index(method)
        for e in entries:
            cfg = config.with_(method=method, seed=derive_seed(master_seed, e.n, e.index, code))
            tasks.append((e, cfg, record_timing))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, tasks))
    return [_run_one(t) for t in tasks]


# --- metrics -----------------------------------------------------------------

@dataclass
class MetricsRow:
    method: str
    n: int
    median_cnorm: float | None
    q25_cnorm: float | None
    q75_cnorm: float | None
    frac_optimal: float | None
    n_it: int
    shots_per_it: int
    delta_tau: float
    graphs_count: int


def aggregate(rows: Iterable[dict]) -> list[MetricsRow]:
    """Median and 25th/75th percentiles (linear interpolation) of c_norm per group."""
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        key = (r["method"], int(r["n"]), int(r["n_it"]), int(r["shots_per_it"]), float(r["delta_tau"]))
        groups.setdefault(key, []).append(r)
    out = []
    for (method, n, n_it, spi, dt), rs in groups.items():
        cn = [r["c_norm"] for r in rs]
        if any(v is None or v == "" for v in cn):
            med = q25 = q75 = frac = None
        else:
            vals = np.asarray([float(v) for v in cn])
            q25, med, q75 = (float(v) for v in np.percentile(vals, [25, 50, 75]))
            frac = sum(int(r["found_opt"]) for r in rs) / len(rs)
        out.append(MetricsRow(method, n, med, q25, q75, frac, n_it, spi, dt, len(rs)))
    return out


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_csv(records: Iterable[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_fmt(rec.get(c)) for c in columns])
    return buf.getvalue()


def write_csv(records: Iterable[dict], columns: Sequence[str], path: str | os.PathLike) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(format_csv(records, columns), encoding="utf-8")


def read_csv(path: str | os.PathLike) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def metrics_records(metrics: Iterable[MetricsRow]) -> list[dict]:
    return [asdict(m) for m in metrics]


# --- sweeps ------------------------------------------------------------------

def parse_splits(text: str) -> list[tuple[int, int]]:
    """'10x10,100x1' -> [(10, 10), (100, 1)] as (n_it, shots_per_it)."""
    out = []
    for part in text.split(","):
        a, b = part.lower().split("x")
        out.append((int(a), int(b)))
    return out


def sweep_split(entries: Sequence[EnsembleEntry], splits: Sequence[tuple[int, int]], total_shots: int,
                config: RunConfig, master_seed: int, methods: Sequence[str] = ("qite",),
                jobs: int = 1, record_timing: bool = False) -> tuple[list[dict], list[MetricsRow]]:
    for n_it, spi in splits:
        if n_it * spi != total_shots:
            raise ValueError(f"split {n_it}x{spi} spends {n_it * spi} shots, budget is {total_shots}")
    rows = []
    for n_it, spi in splits:
        rows += run_ensemble(entries, config.with_(n_it=n_it, shots_per_it=spi), master_seed,
                             methods, jobs, record_timing)
    return rows, aggregate(rows)


def sweep_shots(entries: Sequence[EnsembleEntry], totals: Sequence[int], shots_per_it: Sequence[int],
                config: RunConfig, master_seed: int, methods: Sequence[str] = ("qite",),
                jobs: int = 1, record_timing: bool = False) -> tuple[list[dict], list[MetricsRow]]:
    for total in totals:
        for spi in shots_per_it:
            if total % spi:
                raise ValueError(f"total {total} is not divisible by shots_per_it {spi}")
    rows = []
    for spi in shots_per_it:
        for total in totals:
            rows += run_ensemble(entries, config.with_(n_it=total // spi, shots_per_it=spi), master_seed,
                                 methods, jobs, record_timing)
    return rows, aggregate(rows)
