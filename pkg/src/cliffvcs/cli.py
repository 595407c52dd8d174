"""Command-line front end.

    cliffvcs algebra check            randomized representation audit
    cliffvcs vcs normalize            sum_j <j|j> = 1 and <j|j> = 1/n
    cliffvcs vcs identity             resolution of the identity
    cliffvcs vcs uncertainty          Delta Q * Delta P
    cliffvcs vcs expform              series vs displacement-exponential states
    cliffvcs vcs matrix-moment        rotation-block matrix-moment family
    cliffvcs moments verify           odd moments of lambda against x_m!

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.
Reports are JSON; the ``generated_at`` timestamp sits alone on the second
line so two runs can be diffed with that line dropped.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .errors import ConfigError
from .rho_moments import (
    DensityFunction,
    QuadratureSpec,
    RadialRule,
    RhoSequence,
    canonical_density,
    canonical_rho,
    gaussian_density,
    table_rho,
    tabulated_density,
)
from .vcs_states import RepFamily
from . import verify

OUT_DIR_ENV = "CLIFFVCS_OUT_DIR"

DEFAULT_TOL = {
    ("algebra", "check"): 1e-12,
    ("vcs", "normalize"): 1e-10,
    ("vcs", "identity"): 1e-8,
    ("vcs", "uncertainty"): 1e-8,
    ("vcs", "expform"): 1e-9,
    ("vcs", "matrix-moment"): 1e-8,
    ("moments", "verify"): 1e-10,
}


@dataclass
class RunConfig:
    algebra: RepFamily = RepFamily.QUATERNION
    coeffs: np.ndarray = field(default_factory=lambda: np.ones(4))
    theta: float = 0.0
    rho: RhoSequence | None = None
    rho_spec: object = "factorial"
    density: DensityFunction = field(default_factory=canonical_density)
    density_spec: object = "canonical"
    fock: int | None = None
    tolerance: float | None = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    seed: int = 42
    samples: int = 1000
    m_max: int = 20
    x_rot: float = 0.7
    state: str = "eigen"
    fault: str | None = None
    link: str = "conjugation"
    output: str | None = None

    def as_dict(self) -> dict:
        return {
            "algebra": self.algebra.value,
            "coeffs": [float(c) for c in self.coeffs],
            "theta": self.theta,
            "rho": self.rho_spec,
            "density": self.density_spec,
            "fock": self.fock,
            "tolerance": self.tolerance,
            "quadrature": self.quadrature.summary(),
            "seed": self.seed,
            "samples": self.samples,
            "m_max": self.m_max,
            "x_rot": self.x_rot,
            "state": self.state,
            "fault": self.fault,
            "link": self.link,
        }


_KNOWN_KEYS = {
    "algebra", "coeffs", "theta", "rho", "density", "fock", "tolerance", "quadrature", "seed",
    "samples", "m_max", "x_rot", "state", "fault", "link", "output",
}


def _number(raw, name, kind=float, minimum=None, strict=False):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(name, f"expected a number, got {raw!r}")
    if kind is int and int(raw) != raw:
        raise ConfigError(name, f"expected an integer, got {raw!r}")
    value = kind(raw)
    if not math.isfinite(value):
        raise ConfigError(name, "must be finite")
    if minimum is not None and (value <= minimum if strict else value < minimum):
        raise ConfigError(name, f"must be {'>' if strict else '>='} {minimum}, got {value}")
    return value


def _parse_rho(raw) -> RhoSequence | None:
    if raw in (None, "factorial"):
        return None
    if isinstance(raw, dict) and "table" in raw:
        values = raw["table"]
        if not isinstance(values, list) or not values:
            raise ConfigError("rho.table", "expected a non-empty list of positive numbers")
        vals = [_number(v, "rho.table", minimum=0, strict=True) for v in values]
        R = raw.get("R")
        R = None if R is None else _number(R, "rho.R", minimum=0, strict=True)
        return table_rho(vals, R)
    raise ConfigError("rho", f"expected 'factorial' or {{'table': [...]}}, got {raw!r}")


def _parse_density(raw) -> DensityFunction:
    if raw in (None, "canonical"):
        return canonical_density()
    if raw == "gaussian":
        return gaussian_density(1.0)
    if isinstance(raw, dict) and "table" in raw:
        pts = raw["table"]
        try:
            ts = [_number(p[0], "density.table") for p in pts]
            lam = [_number(p[1], "density.table", minimum=0) for p in pts]
        except (TypeError, IndexError, KeyError):
            raise ConfigError("density.table", "expected a list of [t, lambda] pairs") from None
        try:
            return tabulated_density(ts, lam, raw.get("interpolation", "linear"))
        except ValueError as exc:
            raise ConfigError("density", str(exc)) from None
    raise ConfigError("density", f"expected 'canonical', 'gaussian' or {{'table': [...]}}, got {raw!r}")


def _parse_quadrature(raw, density: DensityFunction) -> QuadratureSpec:
    raw = dict(raw or {})
    unknown = set(raw) - {"radial_rule", "radial_points", "angular_points", "t_cutoff"}
    if unknown:
        raise ConfigError("quadrature", f"unknown keys {sorted(unknown)}")
    default_rule = "gauss-laguerre" if math.isinf(density.support_upper) else "gauss-legendre"
    try:
        rule = RadialRule(raw.get("radial_rule", default_rule))
    except ValueError:
        raise ConfigError("quadrature.radial_rule",
                          f"expected one of {[r.value for r in RadialRule]}") from None
    points = _number(raw.get("radial_points", 64), "quadrature.radial_points", int, 1)
    angular = raw.get("angular_points")
    angular = None if angular is None else _number(angular, "quadrature.angular_points", int, 1)
    cutoff = raw.get("t_cutoff")
    if cutoff is None and rule is RadialRule.GAUSS_LEGENDRE:
        cutoff = density.support_upper if math.isfinite(density.support_upper) else 6.0
    cutoff = None if cutoff is None else _number(cutoff, "quadrature.t_cutoff", minimum=0, strict=True)
    return QuadratureSpec(rule, points, angular, cutoff)


def build_config(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be an object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown config key")
    cfg = RunConfig()
    try:
        cfg.algebra = RepFamily(raw.get("algebra", "quaternion"))
    except ValueError:
        raise ConfigError("algebra", f"expected one of {[f.value for f in RepFamily]}") from None
    dim = 1 if cfg.algebra is RepFamily.SCALAR else cfg.algebra.n
    coeffs = raw.get("coeffs")
    if coeffs is None:
        coeffs = [1.0] * dim if dim <= 4 else [0.5] * dim
    if not isinstance(coeffs, list):
        raise ConfigError("coeffs", "expected a list of numbers")
    if len(coeffs) != dim:
        raise ConfigError("coeffs", f"{cfg.algebra.value} needs {dim} coefficients, got {len(coeffs)}")
    cfg.coeffs = np.array([_number(c, "coeffs") for c in coeffs])
    cfg.theta = _number(raw.get("theta", 0.0), "theta")
    cfg.rho_spec = raw.get("rho", "factorial")
    cfg.rho = _parse_rho(cfg.rho_spec)
    cfg.density_spec = raw.get("density", "canonical")
    cfg.density = _parse_density(cfg.density_spec)
    if raw.get("fock") is not None:
        cfg.fock = _number(raw["fock"], "fock", int, 0)
    if raw.get("tolerance") is not None:
        cfg.tolerance = _number(raw["tolerance"], "tolerance", minimum=0, strict=True)
    cfg.quadrature = _parse_quadrature(raw.get("quadrature"), cfg.density)
    cfg.seed = _number(raw.get("seed", 42), "seed", int, 0)
    cfg.samples = _number(raw.get("samples", 1000), "samples", int, 1)
    cfg.m_max = _number(raw.get("m_max", 20), "m_max", int, 0)
    cfg.x_rot = _number(raw.get("x_rot", 0.7), "x_rot")
    cfg.state = raw.get("state", "eigen")
    if cfg.state not in ("eigen", "series", "vacuum"):
        raise ConfigError("state", "expected 'eigen', 'series' or 'vacuum'")
    cfg.fault = raw.get("fault")
    if cfg.fault not in (None, "omega-sign", "prefactor"):
        raise ConfigError("fault", "expected null, 'omega-sign' or 'prefactor'")
    cfg.link = raw.get("link", "conjugation")
    if cfg.link not in ("conjugation", "minkowski"):
        raise ConfigError("link", "expected 'conjugation' or 'minkowski'")
    cfg.output = raw.get("output")
    return cfg


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("--config", f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("--config", f"invalid JSON at line {exc.lineno}: {exc.msg}") from None


def _run_checks(group: str, action: str, cfg: RunConfig, tol: float) -> list[verify.VerificationReport]:
    fam = cfg.algebra
    if group == "algebra":
        return verify.representation_audit(cfg.samples, cfg.seed, tol, cfg.link, cfg.fault)
    if group == "moments":
        rho = cfg.rho if cfg.rho is not None else canonical_rho(cfg.m_max)
        if cfg.m_max > rho.m_max:
            raise ConfigError("m_max", f"{cfg.m_max} exceeds the rho table (m <= {rho.m_max})")
        return verify.check_moments(cfg.density, rho, cfg.m_max, cfg.quadrature, tol)
    if action == "normalize":
        rho = cfg.rho
        M = cfg.fock
        if rho is not None and M is not None and M > rho.m_max:
            raise ConfigError("fock", f"{M} exceeds the rho table (m <= {rho.m_max})")
        return verify.check_normalization(fam, cfg.coeffs, cfg.theta, M, tol, rho, cfg.fault)
    if action == "identity":
        M = cfg.fock if cfg.fock is not None else (10 if fam.n == 8 else 15)
        rho = cfg.rho if cfg.rho is not None else canonical_rho(M)
        if M > rho.m_max:
            raise ConfigError("fock", f"{M} exceeds the rho table (m <= {rho.m_max})")
        direction = cfg.coeffs if np.any(cfg.coeffs) else None
        reports = [verify.resolve_identity_series(fam, rho, cfg.density, cfg.quadrature, M,
                                                  direction=direction, tol=tol)]
        reports.append(verify.identity_direction_spread(fam, rho, cfg.density, cfg.quadrature, M,
                                                        5, cfg.seed))
        return reports
    if action == "uncertainty":
        return verify.check_uncertainty(fam, cfg.coeffs, cfg.theta, cfg.fock, tol, cfg.state)
    if action == "expform":
        M = cfg.fock if cfg.fock is not None else 50
        return [verify.check_expform(fam, cfg.coeffs, cfg.theta, M, tol)]
    if action == "matrix-moment":
        if fam is RepFamily.SCALAR:
            raise ConfigError("algebra", "matrix moments need a quaternion or octonion family")
        M = cfg.fock if cfg.fock is not None else 12
        return verify.check_matrix_moment(fam, cfg.coeffs, cfg.theta, cfg.x_rot, M, cfg.quadrature,
                                          tol_identity=tol)
    raise ConfigError("command", f"unknown command {group} {action}")


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else ("inf" if obj > 0 else "-inf" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def render_report(command: str, cfg: RunConfig, reports, timestamp: str) -> str:
    body = {
        "command": command,
        "backend": kernels.BACKEND,
        "config": cfg.as_dict(),
        "passed": verify.all_passed(reports),
        "records": [r.as_dict() for r in reports],
    }
    text = json.dumps(_clean(body), indent=2)
    # timestamp isolated on line 2
    return "{\n" + f'  "generated_at": {json.dumps(timestamp)},\n' + text[2:] + "\n"


def report_path(group: str, action: str, out: str | None) -> Path:
    name = f"report-{group}-{action}.json"
    path = Path(out) if out else Path(name)
    override = os.environ.get(OUT_DIR_ENV)
    if override:
        path = Path(override) / path.name
    return path


def _print_table(reports, stream):
    width = max(len(r.check_name) for r in reports)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.check_name:<{width}}  residual={r.residual:.3e}  tol={r.tolerance:.1e}  {status}",
              file=stream)
        if "product" in r.params:
            p = r.params
            print(f"    <Q>={p['mean_Q']:.6f}  <P>={p['mean_P']:.6f}  dQ={p['delta_Q']:.6f}  "
                  f"dP={p['delta_P']:.6f}  product={p['product']:.12f}  "
                  f"saturated: {str(p['saturated']).lower()}", file=stream)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="report path (directory overridable via $%s)" % OUT_DIR_ENV)
    common.add_argument("--seed", type=int, help="RNG seed (overrides config)")
    common.add_argument("--tol", type=float, help="tolerance for the primary check")
    common.add_argument("--fock", type=int, help="Fock truncation M")

    parser = argparse.ArgumentParser(prog="cliffvcs", description=__doc__.split("\n\n")[0])
    groups = parser.add_subparsers(dest="group", required=True)
    alg = groups.add_parser("algebra", help="representation audit").add_subparsers(dest="action", required=True)
    alg.add_parser("check", parents=[common])
    vcs = groups.add_parser("vcs", help="coherent-state checks").add_subparsers(dest="action", required=True)
    for action in ("normalize", "identity", "uncertainty", "expform", "matrix-moment"):
        vcs.add_parser(action, parents=[common])
    mom = groups.add_parser("moments", help="moment problem").add_subparsers(dest="action", required=True)
    mom.add_parser("verify", parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        raw = load_config(args.config)
        if args.seed is not None:
            if args.seed < 0 or args.seed >= 2 ** 64:
                raise ConfigError("--seed", "must be an unsigned 64-bit integer")
            raw["seed"] = args.seed
        if args.fock is not None:
            raw["fock"] = args.fock
        if args.tol is not None:
            raw["tolerance"] = args.tol
        cfg = build_config(raw)
        tol = cfg.tolerance if cfg.tolerance is not None else DEFAULT_TOL[(args.group, args.action)]
        reports = _run_checks(args.group, args.action, cfg, tol)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    command = f"{args.group} {args.action}"
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    path = report_path(args.group, args.action, args.out or cfg.output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_report(command, cfg, reports, stamp))
    _print_table(reports, sys.stdout)
    ok = verify.all_passed(reports)
    print(f"{command}: {'PASS' if ok else 'FAIL'}  report -> {path}")
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
