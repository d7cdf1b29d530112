"""Command line entry point: ``warmqite {gen,run,sweep-split,sweep-shots,validate}``.

Options may also come from a ``--config`` file of ``key = value`` lines (keys
are the long flag names, with dashes or underscores); explicit flags win.
Relative ``--out`` paths resolve against ``$WARMQITE_OUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import experiments as ex
from .instances import BRUTE_FORCE_CEILING
from .optimizer import METHODS, RunConfig
from .statevector import SIMULATOR_CEILING

log = logging.getLogger("warmqite")

OUT_ENV = "WARMQITE_OUT_DIR"

# Built-in defaults; applied after the config file so that the file can override them.
DEFAULTS = {
    "graphs_per_size": 100,
    "seed": 0,
    "method": "qite",
    "n_it": 10,
    "shots_per_it": 10,
    "delta_tau": 0.1,
    "total_shots": 100,
    "phi_endpoint": "exclusive",
    "max_qubits": SIMULATOR_CEILING,
    "brute_force_ceiling": BRUTE_FORCE_CEILING,
    "jobs": 1,
    "splits": "10x10,20x5,5x20,50x2,2x50,100x1",
    "totals": "100,200,300,400,500",
    "shots_per_it_list": "1,10",
}


def _int_list(text: str) -> list[int]:
    return [int(t) for t in str(text).split(",") if t.strip()]


def read_config(path: str | os.PathLike) -> dict[str, str]:
    conf = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        conf[key.replace("-", "_")] = value
    return conf


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    conf = read_config(args.config) if getattr(args, "config", None) else {}
    for key, default in DEFAULTS.items():
        if not hasattr(args, key) or getattr(args, key) is not None:
            continue
        value = conf.get(key, default)
        setattr(args, key, type(default)(value) if not isinstance(default, str) else str(value))
    for key in ("sizes", "ensemble", "out"):
        if hasattr(args, key) and getattr(args, key) is None and key in conf:
            setattr(args, key, conf[key])
    return args


def _out_path(path: str | None, fallback: str) -> Path:
    p = Path(path or fallback)
    base = os.environ.get(OUT_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _config(args) -> RunConfig:
    return RunConfig(
        n_it=args.n_it, shots_per_it=args.shots_per_it, delta_tau=args.delta_tau,
        method=_methods(args)[0], seed=args.seed, phi_endpoint=args.phi_endpoint,
        max_qubits=args.max_qubits,
    )


def _methods(args) -> list[str]:
    methods = list(METHODS) if args.method == "all" else args.method.split(",")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {', '.join(METHODS)} or all")
    return methods


def _emit(rows, metrics, out: Path) -> None:
    ex.write_csv(rows, ex.RUN_COLUMNS, out)
    mpath = out.with_name(out.stem + ".metrics.csv")
    records = ex.metrics_records(metrics)
    ex.write_csv(records, ex.METRIC_COLUMNS, mpath)
    sys.stdout.write(ex.format_csv(records, ex.METRIC_COLUMNS))
    log.info("wrote %s and %s", out, mpath)
    if any(m.frac_optimal is None for m in metrics):
        log.warning("some graphs have no brute-force optimum; c_norm and frac_optimal left blank")


def cmd_gen(args) -> int:
    if not args.sizes:
        raise SystemExit("gen needs --sizes")
    spec = ex.EnsembleSpec(tuple(_int_list(args.sizes)), args.graphs_per_size, args.seed)
    out = _out_path(args.out, "ensemble")
    entries = ex.generate_ensemble(spec, out, args.brute_force_ceiling)
    log.info("wrote %d graphs to %s", len(entries), out)
    return 0


def _entries(args):
    if not args.ensemble:
        raise SystemExit("--ensemble is required")
    sizes = _int_list(args.sizes) if args.sizes else None
    return ex.load_ensemble(args.ensemble, sizes)


def cmd_run(args) -> int:
    entries = _entries(args)
    rows = ex.run_ensemble(entries, _config(args), args.seed, _methods(args), args.jobs, args.record_timing)
    _emit(rows, ex.aggregate(rows), _out_path(args.out, "runs.csv"))
    return 0


def cmd_sweep_split(args) -> int:
    entries = _entries(args)
    rows, metrics = ex.sweep_split(entries, ex.parse_splits(args.splits), args.total_shots, _config(args),
                                   args.seed, _methods(args), args.jobs, args.record_timing)
    _emit(rows, metrics, _out_path(args.out, "sweep_split.csv"))
    return 0


def cmd_sweep_shots(args) -> int:
    entries = _entries(args)
    rows, metrics = ex.sweep_shots(entries, _int_list(args.totals), _int_list(args.shots_per_it_list),
                                   _config(args), args.seed, _methods(args), args.jobs, args.record_timing)
    _emit(rows, metrics, _out_path(args.out, "sweep_shots.csv"))
    return 0


def cmd_validate(args) -> int:
    from .validation import run_checks

    results = run_checks(trials=args.trials)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="warmqite", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, run_opts=True, shot_list=False):
        sp.add_argument("--config", help="key = value file with option defaults")
        sp.add_argument("--seed", type=int, help="master seed (default 0)")
        sp.add_argument("--out", help="output path")
        if not run_opts:
            return
        sp.add_argument("--ensemble", help="ensemble directory written by gen")
        sp.add_argument("--sizes", help="restrict to these comma-separated n")
        sp.add_argument("--method", help="qite, classical, random, a comma list, or all")
        sp.add_argument("--n-it", type=int)
        if shot_list:
            sp.add_argument("--shots-per-it", dest="shots_per_it_list",
                            help="comma list of shots per iteration")
            sp.set_defaults(shots_per_it=None)
        else:
            sp.add_argument("--shots-per-it", type=int)
        sp.add_argument("--delta-tau", type=float)
        sp.add_argument("--phi-endpoint", choices=["exclusive", "inclusive"])
        sp.add_argument("--max-qubits", type=int, help="statevector ceiling")
        sp.add_argument("--jobs", type=int, help="worker processes")
        sp.add_argument("--record-timing", action="store_true",
                        help="fill wallclock_ms (makes output non-reproducible)")

    g = sub.add_parser("gen", help="generate a random 3-regular ensemble")
    common(g, run_opts=False)
    g.add_argument("--sizes", help="comma-separated even vertex counts")
    g.add_argument("--graphs-per-size", type=int)
    g.add_argument("--brute-force-ceiling", type=int)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run methods on every graph of an ensemble")
    common(r)
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep-split", help="vary (n_it, shots_per_it) at a fixed budget")
    common(s)
    s.add_argument("--total-shots", type=int)
    s.add_argument("--splits", help="comma list of N_ITxSHOTS, e.g. 10x10,2x50")
    s.set_defaults(func=cmd_sweep_split)

    t = sub.add_parser("sweep-shots", help="vary the total shot budget")
    common(t, shot_list=True)
    t.add_argument("--totals", help="comma list of total shot budgets")
    t.set_defaults(func=cmd_sweep_shots)

    v = sub.add_parser("validate", help="run the oracle and closed-form checks")
    v.add_argument("--trials", type=int, default=100, help="random tuples for the oracle check")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args = _resolve(args)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
