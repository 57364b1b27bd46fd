"""Command-line entry point.

Every run reads one JSON config (optional) whose fields individual flags
override.  Outputs embed the config snapshot and package version and never
a timestamp, so identical inputs give identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .ansatz import AnsatzSpec, build_ansatz, prepare_state
from .excitation import MAPPINGS, ExcitationCoefficients, coefficients_from_angle
from .lcu import CSV_COLUMNS, LcuEstimate, oracle_check, sweep, sweep3d, sweep_csv
from .oracle import diagonalize, exact_transition
from .pauli import build_triton_hamiltonian, expectation
from .reference import TABLE1
from .variational import (OptimizerSettings, VariationalResult, fit_lambda_regimes, lambda_sweep,
                          monte_carlo_energy, overlap, run_vqd, run_vqe, run_vqeac)

log = logging.getLogger("tritonsim")

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_VALIDATION = 0, 1, 2, 3
RESULT_SCHEMA = "tritonsim.result/1"
SPECTRUM_SCHEMA = "tritonsim.spectrum/1"
REPORT_SCHEMA = "tritonsim.validation/1"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    t: float = 1.0
    u: float = -7.0
    v: float = 28.0  # recorded only; the two-site model has no use for it
    blocks: int = 4
    method: str = "cobyla"
    max_iterations: int = 1500
    tolerance: float = 1e-4
    initial_step: float = 0.5
    shots_per_term: int | None = None
    lam: float = 4.0
    restarts: int = 1
    lambda_points: int = 13
    lambda_max: float | None = None  # None: twice the exact gap
    shots: int = 10_000
    sigma: float = 1e-3
    mc_samples: int = 10_000
    mapping: str = "dipole-axis"
    alpha0: float = 1.0
    phi: float = 0.0
    theta_points: int = 64
    theta_min: float = 0.0
    theta_max: float = math.pi
    phi_points: int = 16
    seed: int = 0

    def validate(self) -> None:
        positive = ("blocks", "max_iterations", "restarts", "lambda_points", "shots",
                    "mc_samples", "theta_points", "phi_points")
        for name in positive:
            if getattr(self, name) < 1:
                raise UsageError(f"config field {name!r} must be >= 1")
        if self.shots_per_term is not None and self.shots_per_term < 1:
            raise UsageError("config field 'shots_per_term' must be >= 1")
        if self.tolerance <= 0 or self.initial_step <= 0:
            raise UsageError("tolerance and initial_step must be positive")
        if self.lam < 0 or self.sigma < 0:
            raise UsageError("lambda and sigma must be non-negative")
        if self.mapping not in MAPPINGS:
            raise UsageError(f"unknown mapping {self.mapping!r}; known: {', '.join(sorted(MAPPINGS))}")
        if self.method not in ("cobyla", "nelder-mead"):
            raise UsageError(f"unknown optimizer {self.method!r}")

    def snapshot(self) -> dict:
        out = dataclasses.asdict(self)
        out["lambda"] = out.pop("lam")
        return dict(sorted(out.items()))

    @property
    def settings(self) -> OptimizerSettings:
        return OptimizerSettings(self.max_iterations, self.initial_step, self.tolerance,
                                 self.method, self.shots_per_term)

    @property
    def spec(self) -> AnsatzSpec:
        return AnsatzSpec(4, self.blocks)


_ALIASES = {"lambda": "lam"}


def _coerce(name: str, value, default):
    kind = {f.name: f.type for f in dataclasses.fields(RunConfig)}[name]
    if value is None:
        if "None" in str(kind):
            return None
        raise UsageError(f"config field {name!r} may not be null")
    try:
        if "int" in str(kind):
            if isinstance(value, bool) or float(value) != int(value):
                raise ValueError
            return int(value)
        if "float" in str(kind):
            if isinstance(value, bool):
                raise ValueError
            return float(value)
        if not isinstance(value, str):
            raise ValueError
        return value
    except (TypeError, ValueError):
        raise UsageError(f"config field {name!r}: bad value {value!r}") from None


def load_config(path: str | None, overrides: dict) -> RunConfig:
    cfg = RunConfig()
    data = {}
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise UsageError(f"config {path}: top level must be an object")
    known = {f.name for f in dataclasses.fields(RunConfig)}
    for key, value in list(data.items()) + list(overrides.items()):
        name = _ALIASES.get(key, key)
        if name not in known:
            raise UsageError(f"unknown config field {key!r}")
        setattr(cfg, name, _coerce(name, value, getattr(cfg, name)))
    cfg.validate()
    return cfg


# ---------------------------------------------------------------- I/O helpers

def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _header(command: str, cfg: RunConfig, extra: dict | None = None) -> dict:
    out = {"version": __version__, "command": command, "seed": cfg.seed, "config": cfg.snapshot()}
    if extra:
        out.update(extra)
    return out


def _csv_header(meta: dict) -> list[str]:
    return [f"tritonsim {meta['version']} {meta['command']}"] + [
        f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in sorted(meta.items())
        if k not in ("version", "command")]


def _provenance(path: str | None) -> dict | None:
    if path is None:
        return None
    if path.startswith("table1:"):
        return {"source": path}
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return {"source": path, "sha256": hashlib.sha256(data).hexdigest()}


def load_theta(source: str) -> np.ndarray:
    """Parameter vector from ``table1:NAME``, a result JSON, a JSON list or plain numbers."""
    if source.startswith("table1:"):
        key = source.split(":", 1)[1]
        if key not in TABLE1:
            raise UsageError(f"unknown reference row {key!r}; known: {', '.join(TABLE1)}")
        return np.array(TABLE1[key], dtype=float)
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read parameters {source}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = text.replace(",", " ").split()
    if isinstance(data, dict):
        data = data.get("theta")
    try:
        theta = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise UsageError(f"{source}: no parameter vector found") from None
    if theta.ndim != 1 or theta.size == 0:
        raise UsageError(f"{source}: expected a flat list of parameters")
    return theta


def _check_length(theta: np.ndarray, cfg: RunConfig, source: str) -> None:
    if theta.size != cfg.spec.num_parameters:
        raise UsageError(f"{source}: {theta.size} parameters, ansatz needs {cfg.spec.num_parameters}")


def _bound_result(algorithm: str, theta, hamiltonian, cfg: RunConfig) -> VariationalResult:
    from .optimizer import OptimizationTrace
    psi = prepare_state(build_ansatz(cfg.spec), theta)
    energy = expectation(hamiltonian, psi)
    return VariationalResult(algorithm, np.asarray(theta, float), energy, energy, None,
                             OptimizationTrace(termination="bound", method="none"), cfg.seed)


def _result_json(command: str, cfg: RunConfig, res: VariationalResult, spectrum, target: float,
                 extra: dict) -> str:
    meta = _header(command, cfg, extra)
    meta.update({
        "schema": RESULT_SCHEMA,
        "algorithm": res.algorithm,
        "theta": [float(x) for x in res.theta],
        "energy": float(res.energy),
        "loss": float(res.loss),
        "overlap_with_ground": None if res.overlap_with_ground is None else float(res.overlap_with_ground),
        "termination": res.trace.termination,
        "iterations": res.trace.iterations,
        "exact": {"ground_energy": spectrum.ground_energy,
                  "first_excited_energy": spectrum.first_excited_energy},
        "relative_error": abs(res.energy - target) / abs(target),
        "metadata": _jsonable(res.metadata),
    })
    return _dumps(meta)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _exit_for(res: VariationalResult) -> int:
    if res.trace.termination in ("max_iterations", "infeasible"):
        log.warning("%s stopped without convergence (%s)", res.algorithm, res.trace.termination)
        return EXIT_CAP
    return EXIT_OK


# ---------------------------------------------------------------- commands

def cmd_spectrum(args, cfg: RunConfig) -> int:
    h = build_triton_hamiltonian(cfg.t, cfg.u)
    spec = diagonalize(h, args.solver)
    out = _header("spectrum", cfg, {"schema": SPECTRUM_SCHEMA, "solver": args.solver})
    out["eigenvalues"] = [float(x) for x in spec.eigenvalues]
    out["ground_energy"] = spec.ground_energy
    out["first_excited_energy"] = spec.first_excited_energy
    out["gap"] = spec.gap
    _emit(_dumps(out), args.output)
    return EXIT_OK


def _ground(args, cfg, hamiltonian) -> tuple[VariationalResult, dict]:
    if not args.ground:
        raise UsageError("--ground is required (a ground result file or table1:vqe)")
    theta = load_theta(args.ground)
    _check_length(theta, cfg, args.ground)
    return _bound_result("VQE", theta, hamiltonian, cfg), _provenance(args.ground)


def _variational(args, cfg: RunConfig, algorithm: str) -> int:
    h = build_triton_hamiltonian(cfg.t, cfg.u)
    spectrum = diagonalize(h)
    extra = {}
    ground = None
    if algorithm != "vqe":
        ground, extra["ground"] = _ground(args, cfg, h)
    if args.params_file:
        theta = load_theta(args.params_file)
        _check_length(theta, cfg, args.params_file)
        res = _bound_result(algorithm.upper(), theta, h, cfg)
        if ground is not None:
            res.overlap_with_ground = overlap(ground.state(cfg.spec), res.state(cfg.spec))
            if algorithm == "vqd":
                res.loss = res.energy + cfg.lam * res.overlap_with_ground
        extra["params"] = _provenance(args.params_file)
    elif algorithm == "vqe":
        res = run_vqe(h, cfg.spec, cfg.settings, cfg.seed)
    elif algorithm == "vqd":
        res = run_vqd(h, ground, cfg.lam, cfg.spec, cfg.settings, cfg.seed)
    else:
        res = run_vqeac(h, ground, cfg.spec, cfg.settings, cfg.seed)
    target = spectrum.ground_energy if algorithm == "vqe" else spectrum.first_excited_energy
    _emit(_result_json(algorithm, cfg, res, spectrum, target, extra), args.output)
    if args.trace:
        meta = _header(algorithm, cfg, extra)
        text = "".join(f"# {line}\n" for line in _csv_header(meta)) + res.trace.to_csv()
        Path(args.trace).write_text(text)
    log.info("%s energy %.6f (relative error %.4f)", res.algorithm, res.energy,
             abs(res.energy - target) / abs(target))
    return _exit_for(res)


def cmd_vqe(args, cfg):
    return _variational(args, cfg, "vqe")


def cmd_vqd(args, cfg):
    return _variational(args, cfg, "vqd")


def cmd_vqeac(args, cfg):
    return _variational(args, cfg, "vqeac")


def cmd_lambda_sweep(args, cfg: RunConfig) -> int:
    h = build_triton_hamiltonian(cfg.t, cfg.u)
    spectrum = diagonalize(h)
    ground, prov = _ground(args, cfg, h)
    lam_max = 2 * spectrum.gap if cfg.lambda_max is None else cfg.lambda_max
    grid = np.linspace(0.0, lam_max, cfg.lambda_points)
    points = lambda_sweep(h, ground, grid, cfg.spec, cfg.settings, cfg.seed, cfg.restarts, args.jobs)
    fit = fit_lambda_regimes(points, spectrum.ground_energy)
    meta = _header("lambda-sweep", cfg, {
        "ground": prov, "exact_gap": spectrum.gap, "ground_energy": spectrum.ground_energy,
        "plateau": fit["plateau"], "crossover": fit["crossover"]})
    buf = io.StringIO()
    for line in _csv_header(meta):
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "loss", "energy", "overlap"])
    for p in points:
        w.writerow([repr(float(p.lam)), repr(float(p.loss)), repr(float(p.energy)), repr(float(p.overlap))])
    _emit(buf.getvalue(), args.output)
    print(f"crossover at lambda = {fit['crossover']:.4f}; exact gap {spectrum.gap:.4f}; "
          f"grid step {grid[1] - grid[0] if grid.size > 1 else 0.0:.4f}", file=sys.stderr)
    return EXIT_OK


def cmd_mc_error(args, cfg: RunConfig) -> int:
    source = args.params_file or args.ground
    if not source:
        raise UsageError("mc-error needs --params-file (or --ground) for the centre point")
    theta = load_theta(source)
    _check_length(theta, cfg, source)
    h = build_triton_hamiltonian(cfg.t, cfg.u)
    point = expectation(h, prepare_state(build_ansatz(cfg.spec), theta))
    dist = monte_carlo_energy(theta, cfg.sigma, cfg.mc_samples, h, cfg.spec, cfg.seed, args.jobs)
    meta = _header("mc-error", cfg, {
        "params": _provenance(source), "point_energy": point, "mean": dist.mean,
        "std": dist.std, "standard_error": dist.standard_error})
    buf = io.StringIO()
    for line in _csv_header(meta):
        buf.write(f"# {line}\n")
    buf.write("sample,energy\n")
    for i, e in enumerate(dist.samples):
        buf.write(f"{i},{float(e)!r}\n")
    _emit(buf.getvalue(), args.output)
    print(f"mean {dist.mean:.6f} +/- {dist.standard_error:.2e} (std {dist.std:.3e}); "
          f"point energy {point:.6f}", file=sys.stderr)
    return EXIT_OK


def _theta_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.theta_min, cfg.theta_max, cfg.theta_points)


def _phi_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(0.0, 2 * math.pi, cfg.phi_points, endpoint=False)


def _validate_estimates(estimates) -> list[dict]:
    failures = []
    for i, e in enumerate(estimates):
        check = oracle_check(e)
        if not check["success_ok"] or check["transition_ok"] is False:
            c = e.coefficients
            failures.append({"row": i, "theta_rad": c.theta, "phi_rad": c.phi, **check})
    return failures


def _sweep_output(args, cfg: RunConfig, command: str, estimates) -> int:
    meta = _header(command, cfg, {"ground": _provenance(args.ground),
                                  "excited": _provenance(args.excited)})
    _emit(sweep_csv(estimates, _csv_header(meta)), args.output)
    pt = np.array([e.p_transition for e in estimates])
    if np.all(np.isnan(pt)):
        print("no successful shots anywhere on the grid", file=sys.stderr)
    else:
        best = estimates[int(np.nanargmax(pt))]
        c = best.coefficients
        print(f"argmax P_t = {best.p_transition:.4f} at theta = {c.theta:.4f} rad "
              f"({math.degrees(c.theta):.1f} deg), phi = {c.phi:.4f} rad", file=sys.stderr)
    undefined = sum(e.undefined for e in estimates)
    if undefined:
        print(f"{undefined} point(s) had no successful shots; P_t undefined there", file=sys.stderr)
    if args.validate:
        failures = _validate_estimates(estimates)
        for f in failures:
            print(f"oracle mismatch at row {f['row']}: theta={f['theta_rad']:.4f} "
                  f"phi={f['phi_rad']:.4f}", file=sys.stderr)
        print(f"validation: {len(estimates) - len(failures)}/{len(estimates)} rows within 3 sigma",
              file=sys.stderr)
        if failures:
            return EXIT_VALIDATION
    return EXIT_OK


def cmd_lcu_sweep(args, cfg: RunConfig) -> int:
    est = sweep(_theta_grid(cfg), cfg.phi, cfg.mapping, cfg.alpha0, cfg.shots, cfg.seed, args.jobs)
    return _sweep_output(args, cfg, "lcu-sweep", est)


def cmd_lcu_sweep3d(args, cfg: RunConfig) -> int:
    est = sweep3d(_theta_grid(cfg), _phi_grid(cfg), cfg.mapping, cfg.alpha0, cfg.shots,
                  cfg.seed, args.jobs)
    return _sweep_output(args, cfg, "lcu-sweep3d", est)


def _validate_file(path: str) -> dict:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        cfg = load_config(None, data.get("config", {}))
        h = build_triton_hamiltonian(cfg.t, cfg.u)
        if data.get("schema") == SPECTRUM_SCHEMA:
            ref = diagonalize(h, "jacobi").eigenvalues
            err = float(np.max(np.abs(np.array(data["eigenvalues"]) - ref)))
            return {"file": path, "kind": "spectrum", "max_deviation": err, "ok": err <= 1e-8}
        if data.get("schema") == RESULT_SCHEMA:
            energy = expectation(h, prepare_state(build_ansatz(cfg.spec), data["theta"]))
            err = abs(energy - data["energy"])
            return {"file": path, "kind": "result", "energy": energy,
                    "relative_error": data["relative_error"], "deviation": err, "ok": err <= 1e-9}
        raise UsageError(f"{path}: unrecognised JSON schema")
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    rows = list(csv.DictReader(lines))
    if not rows or set(CSV_COLUMNS) - set(rows[0]):
        raise UsageError(f"{path}: not a sweep CSV")
    estimates = []
    for r in rows:
        c = ExcitationCoefficients(float(r["alpha"]), float(r["beta"]), float(r["gamma"]),
                                   float(r["delta"]), float(r["theta_rad"]), float(r["phi_rad"]))
        estimates.append(LcuEstimate(int(r["shots"]), int(r["successes"]), int(r["transitions"]), c))
    failures = _validate_estimates(estimates)
    return {"file": path, "kind": "sweep", "rows": len(rows), "failures": failures,
            "ok": not failures}


def cmd_validate(args, cfg: RunConfig) -> int:
    """Oracle self-check plus optional re-validation of earlier outputs."""
    h = build_triton_hamiltonian(cfg.t, cfg.u)
    a, b = diagonalize(h, "householder-ql"), diagonalize(h, "jacobi")
    agree = float(np.max(np.abs(a.eigenvalues - b.eigenvalues)))
    from .pauli import to_dense
    resid = float(max(a.residuals(to_dense(h)).max(), b.residuals(to_dense(h)).max()))
    checks = [{"kind": "eigensolvers", "agreement": agree, "max_residual": resid,
               "ok": agree <= 1e-8 and resid <= 1e-9}]
    for path in args.files:
        try:
            checks.append(_validate_file(path))
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    report = _header("validate", cfg, {"schema": REPORT_SCHEMA, "checks": checks,
                                       "ok": all(c["ok"] for c in checks)})
    _emit(_dumps(_jsonable(report)), args.output)
    return EXIT_OK if report["ok"] else EXIT_VALIDATION


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


_OVERRIDES = [
    ("--t", float, "hopping t"), ("--u", float, "contact coupling U"),
    ("--v", float, "three-body coupling (recorded only)"), ("--blocks", int, "ansatz blocks"),
    ("--method", str, "cobyla or nelder-mead"), ("--max-iterations", int, "evaluation cap"),
    ("--tolerance", float, "final trust radius"), ("--initial-step", float, "initial trust radius"),
    ("--shots-per-term", int, "sample each Pauli term instead of exact expectations"),
    ("--lambda", float, "deflation weight"), ("--restarts", int, "restarts per lambda point"),
    ("--lambda-points", int, "lambda grid size"), ("--lambda-max", float, "lambda grid end"),
    ("--shots", int, "LCU shots per point"), ("--sigma", float, "parameter noise"),
    ("--mc-samples", int, "Monte-Carlo samples"), ("--mapping", str, "angle-to-coefficient mapping"),
    ("--alpha0", float, "identity coefficient of the mapping"), ("--phi", float, "azimuth (rad)"),
    ("--theta-points", int, "polar grid size"), ("--theta-min", float, "polar grid start (rad)"),
    ("--theta-max", float, "polar grid end (rad)"), ("--phi-points", int, "azimuth grid size"),
    ("--seed", int, "master seed"),
]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("-o", "--output", help="output path (default stdout)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")
    over = common.add_argument_group("config overrides")
    for flag, kind, text in _OVERRIDES:
        over.add_argument(flag, type=kind, default=None, help=text,
                          dest="cfg_" + flag[2:].replace("-", "_"))

    parser = _Parser(prog="tritonsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tritonsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", parents=[common], help="exact eigenvalues")
    p.add_argument("--solver", choices=("householder-ql", "jacobi"), default="householder-ql")
    p.set_defaults(func=cmd_spectrum)

    for name, func, text in (("vqe", cmd_vqe, "ground state"), ("vqd", cmd_vqd, "excited state by deflation"),
                             ("vqeac", cmd_vqeac, "excited state under overlap constraints")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--params-file", help="bind these parameters instead of optimising "
                                             "(file or table1:vqe|vqd|vqeac)")
        p.add_argument("--trace", help="write the optimiser trace CSV here")
        if name != "vqe":
            p.add_argument("--ground", help="ground result file or parameter source")
        p.set_defaults(func=func)

    p = sub.add_parser("lambda-sweep", parents=[common], help="VQD loss against deflation weight")
    p.add_argument("--ground", help="ground result file or parameter source")
    p.set_defaults(func=cmd_lambda_sweep)

    p = sub.add_parser("mc-error", parents=[common], help="energy spread under parameter noise")
    p.add_argument("--params-file", help="centre parameters (file or table1:NAME)")
    p.add_argument("--ground", help="alias source for the centre parameters")
    p.set_defaults(func=cmd_mc_error)

    for name, func in (("lcu-sweep", cmd_lcu_sweep), ("lcu-sweep3d", cmd_lcu_sweep3d)):
        p = sub.add_parser(name, parents=[common], help="sampled LCU transition probabilities")
        p.add_argument("--ground", help="ground result file (provenance only)")
        p.add_argument("--excited", help="excited result file (provenance only)")
        p.add_argument("--validate", action="store_true", help="check every row against the oracle")
        p.set_defaults(func=func)

    p = sub.add_parser("validate", parents=[common], help="oracle self-check and output re-validation")
    p.add_argument("files", nargs="*", help="spectrum/result JSON or sweep CSV files")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s", stream=sys.stderr)
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        overrides = {k[4:]: v for k, v in vars(args).items() if k.startswith("cfg_") and v is not None}
        cfg = load_config(args.config, overrides)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"tritonsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
