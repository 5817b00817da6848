"""Command-line entry point.

Usage::

    dualelast run --case stress_free --elements 100,1600,8000
    dualelast run --case grain_boundary_dynamic --compare-primal
    dualelast run --suite convexity --samples 100 --seed 7
    dualelast run --config run.cfg --c-e 50

A config file holds flat ``key = value`` lines whose keys mirror the flags
(``c_u`` or ``c-u``); ``#`` starts a comment.  Flags override the file.

Exit status: 0 on success, 1 on a solver failure or a failed check, 2 on
a configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import convexity, output
from .cases import CASE_NAMES, build_case, refinement_study, run_dynamic_case
from .dtp import AuxPotentialParams
from .errors import ConfigError, DtPError, NewtonError, UnknownCase
from .newton import NewtonConfig

__all__ = ["RunConfig", "parse_config", "parse_config_text", "run", "main", "SUITES"]

SUITES = ("convexity", "statics", "dynamics")
EXIT_OK, EXIT_FAILURE, EXIT_CONFIG = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration; ``None`` means the case default."""

    case: str = "stress_free"
    suite: str | None = None
    elements: tuple | None = None
    nx: int | None = None
    nt: int | None = None
    T: float | None = None
    c_u: float = 100.0
    c_e: float = 100.0
    c_v: float = 100.0
    rho0: float = 1.0
    tol: float = 1e-10
    max_iter: int = 50
    compare_primal: bool = False
    samples: int = 100
    seed: int = 7
    out_dir: str = "out"

    def aux_params(self):
        return AuxPotentialParams(c_u=self.c_u, c_e=self.c_e, c_v=self.c_v, rho0=self.rho0)

    def newton_config(self):
        return NewtonConfig(tol=self.tol, max_iter=self.max_iter)


_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def _to_bool(field, text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(field, f"expected a boolean, got {text!r}")


def _to_int(field, text):
    try:
        return int(str(text).strip())
    except ValueError:
        raise ConfigError(field, f"expected an integer, got {text!r}") from None


def _to_float(field, text):
    try:
        return float(str(text).strip())
    except ValueError:
        raise ConfigError(field, f"expected a number, got {text!r}") from None


def _to_elements(field, text):
    if isinstance(text, (tuple, list)):
        parts = list(text)
    else:
        parts = [p for p in str(text).replace(" ", "").split(",") if p]
    if not parts:
        raise ConfigError(field, "expected a comma-separated list of element counts")
    return tuple(_to_int(field, p) for p in parts)


def _convert(field, value):
    if value is None:
        return None
    if field in ("case", "suite", "out_dir"):
        return str(value).strip()
    if field == "elements":
        return _to_elements(field, value)
    if field in ("nx", "nt", "max_iter", "samples", "seed"):
        return _to_int(field, value)
    if field == "compare_primal":
        return value if isinstance(value, bool) else _to_bool(field, value)
    return _to_float(field, value)


def _normalise_key(key):
    return key.strip().lstrip("-").replace("-", "_")


def parse_config_text(text):
    """Parse flat ``key = value`` text into a dict of raw strings.

    Raises
    ------
    ConfigError
        For malformed lines, unknown or repeated keys.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key = _normalise_key(key)
        if key not in _FIELDS:
            raise ConfigError(key, "unknown configuration key")
        if key in values:
            raise ConfigError(key, "given more than once")
        values[key] = val.strip()
    return values


def _validate(cfg: RunConfig):
    for name in ("c_u", "c_e", "c_v", "rho0", "tol"):
        v = getattr(cfg, name)
        if not (np.isfinite(v) and v > 0):
            raise ConfigError(name, f"must be a positive number, got {v}")
    if cfg.T is not None and not (np.isfinite(cfg.T) and cfg.T > 0):
        raise ConfigError("T", f"must be a positive number, got {cfg.T}")
    for name in ("nx", "nt"):
        v = getattr(cfg, name)
        if v is not None and v < 1:
            raise ConfigError(name, f"must be >= 1, got {v}")
    if cfg.elements is not None and any(n < 1 for n in cfg.elements):
        raise ConfigError("elements", "element counts must be >= 1")
    if cfg.max_iter < 1:
        raise ConfigError("max_iter", f"must be >= 1, got {cfg.max_iter}")
    if cfg.samples < 1:
        raise ConfigError("samples", f"must be >= 1, got {cfg.samples}")
    if cfg.seed < 0:
        raise ConfigError("seed", f"must be >= 0, got {cfg.seed}")
    if cfg.suite is not None and cfg.suite not in SUITES:
        raise ConfigError("suite", f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    if cfg.suite is None:
        try:
            build_case(cfg.case)
        except UnknownCase as exc:
            raise ConfigError("case", str(exc.args[0] if exc.args else exc)) from None
    if not cfg.out_dir:
        raise ConfigError("out_dir", "must not be empty")


def parse_config(path=None, overrides=None) -> RunConfig:
    """Build a validated :class:`RunConfig` from an optional file plus overrides.

    ``overrides`` maps field names to values (``None`` entries are ignored)
    and wins over the file.
    """
    raw = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
        raw.update(parse_config_text(text))
    for k, v in (overrides or {}).items():
        key = _normalise_key(k)
        if key not in _FIELDS:
            raise ConfigError(key, "unknown configuration key")
        if v is not None:
            raw[key] = v
    cfg = RunConfig(**{k: _convert(k, v) for k, v in raw.items()})
    _validate(cfg)
    return cfg


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------


def _params_section(cfg):
    return {"c_u": cfg.c_u, "c_e": cfg.c_e, "c_v": cfg.c_v, "rho0": cfg.rho0, "tol": cfg.tol, "max_iter": cfg.max_iter}


def _run_static(spec, cfg, out, say):
    sizes = cfg.elements or spec.mesh_sizes
    reports = refinement_study(spec, sizes, params=cfg.aux_params(), newton=cfg.newton_config())
    stem = output.file_stem(spec.label)
    for r in reports:
        output.write_static_fields(r, out / f"{stem}_n{r.n_elements}_fields.csv")
    output.write_refinement_table(reports, out / f"{stem}_refinement.csv")
    output.write_newton_histories([(r.case, r.n_elements, r.newton) for r in reports], out / f"{stem}_newton.csv")
    meta = {
        "run": {"case": spec.label, "kind": "static", "elements": list(sizes),
                "reference_elements": spec.reference_elements if spec.reference_elements else "none"},
        "params": _params_section(cfg),
    }
    for r in reports:
        meta[f"mesh {r.n_elements}"] = {"iterations": r.newton.iterations, "residuals": list(r.newton.history),
                                        **{k: r.errors[k] for k in sorted(r.errors)}}
    output.write_metadata(out / f"{stem}_metadata.txt", meta)
    say(f"case {spec.label}")
    say(output.format_refinement_table(reports))
    return EXIT_OK


def _run_dynamic(spec, cfg, out, say):
    if cfg.rho0 != spec.dynamic.rho0:
        spec = dataclasses.replace(spec, dynamic=dataclasses.replace(spec.dynamic, rho0=cfg.rho0))
    rep = run_dynamic_case(spec, cfg.nx, cfg.nt, cfg.T, params=cfg.aux_params(), newton=cfg.newton_config(),
                           compare_primal=cfg.compare_primal)
    stem = output.file_stem(spec.label)
    output.write_dynamic_fields(rep, out / f"{stem}_dual.csv")
    if rep.primal is not None:
        output.write_primal_series(rep.primal, out / f"{stem}_primal.csv")
    output.write_stability_series(rep, spec.equilibrium_strain, out / f"{stem}_stability.csv")
    output.write_newton_histories([(rep.case, f"{rep.nx}x{rep.nt}", rep.newton)], out / f"{stem}_newton.csv")
    run = {"case": spec.label, "kind": "dynamic", "nx": rep.nx, "nt": rep.nt, "T": rep.T,
           "iterations": rep.newton.iterations, "residuals": list(rep.newton.history)}
    if rep.stability_metric is not None:
        run["stability_metric"] = rep.stability_metric
    if rep.stability_threshold is not None:
        run["stability_threshold"] = rep.stability_threshold
    for name, (measured, linear) in sorted(rep.wave_speeds.items()):
        run[f"wave_speed_{name}"] = measured
        run[f"linear_speed_{name}"] = linear
    if rep.primal is not None:
        p = rep.primal
        run.update(primal_elements=p.mesh.n_elements, primal_dt=p.dt, primal_steps=p.steps_taken,
                   primal_blow_up=p.blow_up, primal_max_abs_strain=float(np.max(p.max_abs_strain)))
        if p.blow_up_time is not None:
            run["primal_blow_up_time"] = p.blow_up_time
        if rep.primal_departure_time is not None:
            run["primal_departure_time"] = rep.primal_departure_time
    run["verdict"] = rep.verdict()
    output.write_metadata(out / f"{stem}_metadata.txt", {"run": run, "params": _params_section(cfg)})
    say(f"case {spec.label} ({rep.nx}x{rep.nt}, T = {rep.T:g}): Newton converged in {rep.newton.iterations} iterations")
    for name, (measured, linear) in sorted(rep.wave_speeds.items()):
        say(f"wave speed {name}: measured {measured:.4f}, linearised {linear:.4f}")
    say(rep.verdict())
    return EXIT_OK


def _run_convexity(cfg, out, say):
    bounds = convexity.run_bound_checks(cfg.samples, cfg.seed)
    combos = convexity.run_convexity_checks(cfg.samples, cfg.seed)
    output.write_bound_report(bounds, out / "convexity_bounds.csv")
    output.write_convexity_report(combos, out / "convexity_combinations.csv")
    nb = sum(bool(r["violation"]) for r in bounds)
    nc = sum(bool(r["violation"]) for r in combos)
    output.write_metadata(out / "convexity_metadata.txt", {
        "run": {"suite": "convexity", "samples": cfg.samples, "seed": cfg.seed,
                "bound_rows": len(bounds), "bound_violations": nb,
                "combination_rows": len(combos), "combination_violations": nc},
    })
    say(f"convexity lab: {len(bounds)} bound checks, {nb} violations; {len(combos)} convex combinations, {nc} violations")
    return EXIT_OK if nb == 0 and nc == 0 else EXIT_FAILURE


def run(cfg: RunConfig, stream=None) -> int:
    """Execute ``cfg`` and write artifacts to ``cfg.out_dir``; returns the exit status."""
    stream = stream or sys.stdout

    def say(msg):
        print(msg, file=stream)

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if cfg.suite == "convexity":
            return _run_convexity(cfg, out, say)
        if cfg.suite is not None:
            kind = "static" if cfg.suite == "statics" else "dynamic"
            names = [n for n in CASE_NAMES if build_case(n).kind == kind]
        else:
            names = [cfg.case]
        status = EXIT_OK
        for name in names:
            spec = build_case(name)
            runner = _run_static if spec.kind == "static" else _run_dynamic
            status = max(status, runner(spec, cfg, out, say))
        return status
    except (NewtonError, DtPError) as exc:
        say(f"solver failure: {exc}")
        return EXIT_FAILURE


def _build_parser():
    parser = argparse.ArgumentParser(prog="dualelast", description="Dual variational solver for 1-D nonconvex elasticity.")
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a case or a suite", argument_default=None)
    r.add_argument("--case", help=f"case name, one of {', '.join(CASE_NAMES)}; e.g. 'hat_bifurcation(a=0.2)'")
    r.add_argument("--suite", help=f"run a suite: {', '.join(SUITES)}")
    r.add_argument("--elements", help="comma-separated element counts for static cases")
    r.add_argument("--nx", help="space elements for dynamic cases")
    r.add_argument("--nt", help="time elements for dynamic cases")
    r.add_argument("--T", help="time window for dynamic cases")
    r.add_argument("--c-u", dest="c_u", help="auxiliary potential constant c_u")
    r.add_argument("--c-e", dest="c_e", help="auxiliary potential constant c_e")
    r.add_argument("--c-v", dest="c_v", help="auxiliary potential constant c_v")
    r.add_argument("--rho0", help="reference density")
    r.add_argument("--tol", help="Newton tolerance on the max-norm residual")
    r.add_argument("--max-iter", dest="max_iter", help="Newton iteration cap")
    r.add_argument("--compare-primal", dest="compare_primal", action="store_const", const=True,
                   help="also run the primal reference integrator")
    r.add_argument("--samples", help="random points per model for the convexity suite")
    r.add_argument("--seed", help="seed for random sampling")
    r.add_argument("--out-dir", dest="out_dir", help="output directory")
    r.add_argument("--config", help="flat key=value config file")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = parse_config(args.config, overrides)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
