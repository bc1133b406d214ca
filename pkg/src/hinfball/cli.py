"""Command-line front end.

Exit statuses: 0 success, 1 a checked inequality failed, 2 usage or
config error, 3 numerically inner input, 4 empty sublevel set, 5 kernel
conditioning failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .admissibility import SweepConfig, bracket, run_sweep
from .circle import BoundaryGrid, TOL_SUP, analyticity_defect, sup_norm
from .constraints import (
    TOL_KERNEL,
    ConstraintSet,
    fourier_constraints,
    random_constraints,
)
from .errors import ConditioningError, ContractViolation, DegenerateInputError
from .functions import FunctionKind, FunctionSpec, build_function
from .outer import (
    FLOOR,
    exposed_mass,
    extremality_test,
    inner_defect,
    make_outer,
    sublevel_set,
)
from .reporting import (
    complex_from_record,
    dumps,
    envelope,
    functional_from_record,
    sweep_csv,
    to_jsonable,
)
from .witness import (
    ConstantMethod,
    extreme_violation_witness,
    strong_violation_witness,
    tn_corpus,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INNER, EXIT_EMPTY_SUBLEVEL, EXIT_CONDITIONING = range(6)
CLASSIFY_ETAS = (0.1, 0.25, 0.5, 0.75, 0.9)
OUT_DIR_ENV = "HINFBALL_OUT_DIR"

_KINDS = {
    "theorem2": FunctionKind.THEOREM2,
    "blaschke": FunctionKind.BLASCHKE,
    "poly-fraction": FunctionKind.POLY_FRACTION,
    "outer-from-modulus": FunctionKind.OUTER_FROM_MODULUS,
    "spectrum": FunctionKind.SPECTRUM_LITERAL,
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n_grid: int = 4096
    oversample: int = 4
    tol_sup: float = TOL_SUP
    tol_kernel: float = TOL_KERNEL
    floor: float = FLOOR
    seed: int = 0
    output_path: str | None = None
    format: str = "json"

    def __post_init__(self):
        if min(self.tol_sup, self.tol_kernel, self.floor) <= 0:
            raise ContractViolation("tolerances and floor must be positive")
        if self.format not in ("json", "csv"):
            raise ContractViolation(f"unknown format {self.format!r}")
        BoundaryGrid(self.n_grid, self.oversample)

    @property
    def grid(self) -> BoundaryGrid:
        return BoundaryGrid(self.n_grid, self.oversample)


_GLOBAL_DEFAULTS = {
    "n_grid": 4096, "oversample": 4, "seed": 0, "out": None, "format": "json",
    "tol_sup": TOL_SUP, "tol_kernel": TOL_KERNEL, "floor": FLOOR,
}


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--n-grid", type=int, default=S, help="grid size, power of two (4096)")
    p.add_argument("--oversample", type=int, default=S, help="sup-norm refinement factor (4)")
    p.add_argument("--seed", type=int, default=S, help="random seed (0)")
    p.add_argument("--out", default=S, help="output file (directory for sweep)")
    p.add_argument("--format", choices=("json", "csv"), default=S)
    p.add_argument("--tol-sup", type=float, default=S, help=f"sup-norm slack ({TOL_SUP:g})")
    p.add_argument("--tol-kernel", type=float, default=S, help=f"kernel residual ({TOL_KERNEL:g})")
    p.add_argument("--floor", type=float, default=S, help=f"log floor ({FLOOR:g})")
    return p


def _function_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("kind", choices=sorted(_KINDS), help="function family")
    p.add_argument("--n", type=int, help="theorem2: number of constraints N")
    p.add_argument("--eta", type=float, help="theorem2: low modulus level")
    p.add_argument("--gamma", type=float, help="theorem2: measure of the low set")
    p.add_argument("--zeros", nargs="+", type=complex, help="blaschke: zeros in the disk")
    p.add_argument("--numerator", nargs="+", type=complex, help="poly-fraction: coefficients")
    p.add_argument("--denominator", nargs="+", type=complex, help="poly-fraction: coefficients")
    p.add_argument("--terms", nargs="+", help="spectrum: k:re[:im] entries")
    p.add_argument("--file", help="JSON file holding the kind's parameters")


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(
        prog="hinfball", parents=[common],
        description="Extreme points and admissibility in constrained H-infinity spaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="inner / extreme / exposed diagnostics")
    _function_args(p)

    p = sub.add_parser("witness", parents=[common], help="build a violation witness")
    p.add_argument("mode", choices=("extreme", "strong"))
    _function_args(p)
    p.add_argument("--phi", help="fourier:N | random:N:DEGREE[:SEED] | file:PATH")
    p.add_argument("--witness-eta", dest="w_eta", type=float, default=None,
                   help="strong: sublevel level (defaults to --eta, else 0.5)")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--method", choices=("nazarov", "empirical"), default="nazarov")
    p.add_argument("--relaxed", action="store_true",
                   help="extreme: skip the divergence precheck")

    p = sub.add_parser("sweep", parents=[common], help="sandwich-bound sweep")
    p.add_argument("config", nargs="?", help="JSON file mirroring SweepConfig")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--figures", action="store_true", help="also render sweep.png")

    p = sub.add_parser("tn", parents=[common], help="Turan-Nazarov randomized corpus")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--max-terms", type=int, default=5)
    p.add_argument("--min-measure", type=float, default=0.05)
    p.add_argument("--max-freq", type=int, default=32)
    p.add_argument("--figure", help="write a ratio scatter to this PNG")

    p = sub.add_parser("outer", parents=[common], help="outer function with a given modulus")
    _function_args(p)
    p.add_argument("--samples", action="store_true", help="include boundary samples")
    return parser


def _run_config(args) -> RunConfig:
    vals = {k: getattr(args, k, v) for k, v in _GLOBAL_DEFAULTS.items()}
    return RunConfig(
        n_grid=vals["n_grid"], oversample=vals["oversample"], tol_sup=vals["tol_sup"],
        tol_kernel=vals["tol_kernel"], floor=vals["floor"], seed=vals["seed"],
        output_path=vals["out"], format=vals["format"],
    )


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _function_spec(args) -> FunctionSpec:
    kind = _KINDS[args.kind]
    params: dict = _load_json(args.file) if args.file else {}
    if not isinstance(params, dict):
        raise UsageError("parameter file must hold a JSON object")
    if kind is FunctionKind.THEOREM2:
        for key, val in (("N", args.n), ("eta", args.eta), ("gamma", args.gamma)):
            if val is not None:
                params[key] = val
    elif kind is FunctionKind.BLASCHKE and args.zeros:
        params["zeros"] = args.zeros
    elif kind is FunctionKind.BLASCHKE and "zeros" in params:
        params["zeros"] = [complex_from_record(z) for z in params["zeros"]]
    elif kind is FunctionKind.POLY_FRACTION:
        if args.numerator:
            params["numerator"] = args.numerator
        if args.denominator:
            params["denominator"] = args.denominator
        for key in ("numerator", "denominator"):
            if key in params:
                params[key] = [complex_from_record(c) for c in params[key]]
    elif kind is FunctionKind.SPECTRUM_LITERAL:
        if args.terms:
            params["terms"] = _parse_terms(args.terms)
        elif "terms" in params:
            params["terms"] = {int(t["k"]): complex_from_record(t) for t in params["terms"]}
    return FunctionSpec(kind, params)


def _parse_terms(items) -> dict[int, complex]:
    terms = {}
    for item in items:
        parts = item.split(":")
        if len(parts) not in (2, 3):
            raise UsageError(f"bad spectrum term {item!r}; expected k:re[:im]")
        try:
            k = int(parts[0])
            terms[k] = complex(float(parts[1]), float(parts[2]) if len(parts) == 3 else 0.0)
        except ValueError as exc:
            raise UsageError(f"bad spectrum term {item!r}") from exc
    return terms


def _parse_phi(text: str | None, default: ConstraintSet | None, seed: int) -> ConstraintSet:
    if text is None:
        return default if default is not None else fourier_constraints(1)
    kind, _, rest = text.partition(":")
    try:
        if kind == "fourier":
            return fourier_constraints(int(rest))
        if kind == "random":
            parts = [int(x) for x in rest.split(":")]
            N, degree = parts[0], parts[1]
            return random_constraints(N, degree, parts[2] if len(parts) > 2 else seed)
        if kind == "file":
            data = _load_json(rest)
            return ConstraintSet(tuple(functional_from_record(rec) for rec in data))
    except (ValueError, IndexError, TypeError, KeyError) as exc:
        raise UsageError(f"bad --phi {text!r}: {exc}") from exc
    raise UsageError(f"unknown constraint spec {text!r}")


def _flatten(prefix: str, obj, out: list):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, obj))


def _emit(cfg: RunConfig, config_echo, results) -> None:
    doc = envelope(config_echo, results)
    if cfg.format == "json":
        text = dumps(doc)
    else:
        rows: list = []
        _flatten("", doc, rows)
        text = "key,value\n" + "".join(f"{k},{'' if v is None else v}\n" for k, v in rows)
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_classify(args, cfg: RunConfig) -> int:
    spec = _function_spec(args)
    f, _ = build_function(spec, cfg.grid, cfg.floor)
    norm = sup_norm(f)
    defect = inner_defect(f)
    results = {
        "sup_norm": norm,
        "inner_defect": defect,
        "inner": defect <= cfg.tol_sup,
        "analyticity": analyticity_defect(f),
        "sublevel_measures": {repr(eta): sublevel_set(f, eta).measure for eta in CLASSIFY_ETAS},
    }
    if norm <= 1.0 + cfg.tol_sup:
        results["extremality"] = extremality_test(f, tol_sup=cfg.tol_sup)
        results["exposed_mass"] = exposed_mass(f, tol_sup=cfg.tol_sup)
    else:
        results["extremality"] = None
        results["exposed_mass"] = None
    if abs(norm - 1.0) <= cfg.tol_sup:
        results["bracket_N1"] = bracket(f, 1)
    _emit(cfg, {"run": cfg, "function": spec}, results)
    return EXIT_OK


def cmd_witness(args, cfg: RunConfig) -> int:
    spec = _function_spec(args)
    f, own_phi = build_function(spec, cfg.grid, cfg.floor)
    phi = _parse_phi(args.phi, own_phi, cfg.seed)
    if args.mode == "extreme":
        w = extreme_violation_witness(
            f, phi, floor=cfg.floor, tol_sup=cfg.tol_sup, tol_kernel=cfg.tol_kernel,
            strict=not args.relaxed,
        )
    else:
        eta = args.w_eta if args.w_eta is not None else (args.eta if args.eta is not None else 0.5)
        w = strong_violation_witness(
            f, phi, eta, args.delta, method=ConstantMethod(args.method.upper()),
            tol_sup=cfg.tol_sup, tol_kernel=cfg.tol_kernel, seed=cfg.seed,
        )
    ok = w.invariants_hold(tol_kernel=cfg.tol_kernel)
    echo = {"run": cfg, "function": spec, "phi": phi, "mode": args.mode,
            "delta": args.delta if args.mode == "strong" else None}
    _emit(cfg, echo, {"witness": w, "invariants_hold": ok})
    return EXIT_OK if ok else EXIT_CHECK


def _sweep_config(args, cfg_overrides: dict) -> SweepConfig:
    data = {}
    if args.config:
        data = _load_json(args.config)
        if not isinstance(data, dict):
            raise UsageError("sweep config must be a JSON object")
    data.update(cfg_overrides)
    try:
        return SweepConfig.from_dict(data)
    except TypeError as exc:
        raise UsageError(f"bad sweep config: {exc}") from exc


def cmd_sweep(args, cfg: RunConfig) -> int:
    overrides = {}
    for key in ("seed", "n_grid", "oversample"):
        if hasattr(args, key):
            overrides[key] = getattr(args, key)
    config = _sweep_config(args, overrides)
    report = run_sweep(config, max_workers=args.workers)
    out_dir = Path(cfg.output_path or os.environ.get(OUT_DIR_ENV, "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "sweep.json").write_text(dumps(envelope({"sweep": config}, {
        "rows": report.rows, "violations": report.violations,
    })))
    (out_dir / "sweep.csv").write_text(sweep_csv(report))
    if args.figures:
        from .plotting import plot_sweep

        plot_sweep(report, out_dir / "sweep.png")
    # error rows carry sandwich_ok = False and are counted there
    bad = report.violations
    print(f"{len(report.rows)} rows, {bad} violations -> {out_dir}", file=sys.stderr)
    return EXIT_OK if bad == 0 else EXIT_CHECK


def cmd_tn(args, cfg: RunConfig) -> int:
    reports = tn_corpus(cfg.grid, args.count, args.max_terms, args.min_measure,
                        args.max_freq, cfg.seed)
    ratios = [r.ratio for r in reports]
    violations = sum(1 for r in reports if not r.holds(cfg.tol_sup))
    by_terms: dict[str, float] = {}
    for r in reports:
        key = str(r.n_terms)
        by_terms[key] = max(by_terms.get(key, 0.0), r.ratio)
    results = {
        "count": len(reports),
        "violations": violations,
        "max_ratio": max(ratios) if ratios else None,
        "max_ratio_by_terms": by_terms,
        "c_used": reports[0].c_used if reports else None,
    }
    echo = {"run": cfg, "count": args.count, "max_terms": args.max_terms,
            "min_measure": args.min_measure, "max_freq": args.max_freq}
    _emit(cfg, echo, results)
    if args.figure:
        from .plotting import plot_tn_ratios

        plot_tn_ratios(ratios, [r.n_terms for r in reports], Path(args.figure))
    return EXIT_OK if violations == 0 else EXIT_CHECK


def cmd_outer(args, cfg: RunConfig) -> int:
    spec = _function_spec(args)
    f, _ = build_function(spec, cfg.grid, cfg.floor)
    # for non-modulus kinds this is the outer factor of f
    res = make_outer(f.with_values(np.abs(f.values)), cfg.floor)
    results = {
        "modulus_error": res.modulus_error,
        "analyticity": res.analyticity,
        "value_at_origin": res.boundary.spectrum[0],
        "sup_norm": sup_norm(res.boundary),
        "spectrum": [{"k": k, **to_jsonable(c)} for k, c in res.boundary.spectrum.items()
                     if 0 <= k < 64],
    }
    if args.samples:
        results["samples"] = res.boundary
    _emit(cfg, {"run": cfg, "function": spec}, results)
    return EXIT_OK


_COMMANDS = {
    "classify": cmd_classify,
    "witness": cmd_witness,
    "sweep": cmd_sweep,
    "tn": cmd_tn,
    "outer": cmd_outer,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = _run_config(args)
        return _COMMANDS[args.command](args, cfg)
    except (UsageError, ContractViolation) as exc:
        print(f"hinfball: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateInputError as exc:
        print(f"hinfball: degenerate input: {exc}", file=sys.stderr)
        if exc.kind == DegenerateInputError.EMPTY_SUBLEVEL:
            return EXIT_EMPTY_SUBLEVEL
        return EXIT_INNER
    except ConditioningError as exc:
        print(f"hinfball: conditioning failure: {exc}", file=sys.stderr)
        return EXIT_CONDITIONING


if __name__ == "__main__":
    sys.exit(main())
