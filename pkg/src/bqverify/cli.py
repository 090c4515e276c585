"""Command-line entry point.

Exit status: 0 when every executed check passes, 1 when a check fails (or
the requested computation raises a domain error), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import dirac, fields, maxwell, spinor, suite
from .algebra import E1, E2, E3, Biquaternion
from .errors import BiquaternionError, DomainError
from .report import Report

SCHEMA = "1"


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    field_path: str | None = None
    events_path: str | None = None
    trials: int = 100
    seed: int = 42
    tol: float | None = None
    output: str = "text"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("--trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("--seed must be a 64-bit unsigned integer")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


def _parse_axis(text: str) -> Biquaternion:
    named = {"e1": E1, "e2": E2, "e3": E3}
    t = text.strip().lower()
    sign = -1 if t.startswith("-") else 1
    if t.lstrip("+-") in named:
        return named[t.lstrip("+-")] * sign
    try:
        v = [float(c) for c in t.split(",")]
    except ValueError:
        raise ConfigError(f"bad axis {text!r}; use e1/e2/e3 or 'x,y,z'") from None
    if len(v) != 3:
        raise ConfigError(f"bad axis {text!r}; need three components")
    n = float(np.linalg.norm(v))
    if n == 0:
        raise ConfigError("axis must be non-zero")
    return Biquaternion.vector([c / n for c in v])


def _parse_floats(text: str, n: int | None = None) -> list:
    try:
        vals = [float(c) for c in text.split(",")]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise ConfigError(f"expected {n} numbers, got {len(vals)}")
    return vals


def _events(cfg: RunConfig, rng) -> list:
    if cfg.events_path:
        raw = _load_json(cfg.events_path)
        try:
            return [fields.Event.of(e) for e in raw]
        except (TypeError, DomainError, ValueError) as exc:
            raise ConfigError(f"bad events file: {exc}") from None
    return fields.random_events(rng, cfg.trials)


def _field(cfg: RunConfig) -> fields.EMField:
    if not cfg.field_path:
        raise ConfigError("--field is required")
    try:
        return fields.field_from_spec(_load_json(cfg.field_path))
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _error_report(check: str, exc: Exception) -> Report:
    return Report(check, float("inf"), 0.0, False,
                  extra={"error": type(exc).__name__, "message": str(exc)})


# -- subcommands ---------------------------------------------------------------


def _cmd_verify(cfg):
    return suite.run_all(cfg.seed)


def _cmd_maxwell(cfg):
    f = _field(cfg)
    events = _events(cfg, np.random.default_rng(cfg.seed))
    tol = cfg.tol if cfg.tol is not None else maxwell.RESIDUAL_TOL
    try:
        return [maxwell.residual_check(f, events, tol), maxwell.equivalence_check(f, events, tol)]
    except BiquaternionError as exc:
        return [_error_report(f"maxwell:{f.name}", exc)]


def _cmd_decompose(cfg):
    try:
        F = Biquaternion.from_json(json.loads(cfg.extra["F"]))
    except (json.JSONDecodeError, AttributeError, TypeError) as exc:
        raise ConfigError(f"--F must be a biquaternion JSON object: {exc}") from None
    u = _parse_axis(cfg.extra["u"])
    try:
        dec = spinor.decompose(F, u)
        res = spinor.dof_rank(dec)
    except BiquaternionError as exc:
        return [_error_report("decompose", exc)]
    err = abs(spinor.compose(dec) - F) / max(abs(F), 1e-300)
    return [Report("decompose", err, suite.ROUNDTRIP_REL_TOL,
                   extra={"rho": dec.rho, "beta": dec.beta, "L": dec.L.value.to_json(),
                          "gauge_nullity": res.nullity})]


def _cmd_dof(cfg):
    return [suite.check_dof(np.random.default_rng(cfg.seed), cfg.trials)]


def _cmd_dirac_kernel(cfg):
    p = _parse_floats(cfg.extra["p"], 3)
    mom = dirac.Momentum(cfg.extra["E"], tuple(p), cfg.extra["m"])
    dim, _, sv = dirac.momentum_symbol_kernel(mom, _parse_axis(cfg.extra["u"]))
    expected = 8 if mom.on_shell() else 0
    return [Report("dirac_kernel", abs(dim - expected), 0.0,
                   extra={"dim": dim, "expected_dim": expected, "on_shell": mom.on_shell(),
                          "singular_values": sv})]


def _cmd_dirac_treverse(cfg):
    u = _parse_axis(cfg.extra["u"])
    try:
        outcome = dirac.time_reversal_scan(cfg.extra["m"], u, seed=cfg.seed)
    except BiquaternionError as exc:
        return [_error_report("time_reversal", exc)]
    found = [{"T": r.descriptor, "t_square_sign": r.t_square_sign} for _, r in outcome.found]
    signs = {r.t_square_sign for _, r in outcome.found}
    worst = max((r.max_t_square_error for _, r in outcome.found), default=float("inf"))
    return [Report("time_reversal", worst, suite.T_SQUARE_TOL,
                   passed=bool(found) and signs == {-1} and worst <= suite.T_SQUARE_TOL,
                   extra={"candidates": outcome.candidates, "found": found,
                          "j_linear_survivors": [
                              {"T": r.descriptor, "t_square_sign": r.t_square_sign}
                              for _, r in outcome.rejected_linear]})]


def _cmd_dirac_mass(cfg):
    f = _field(cfg)
    u = _parse_axis(cfg.extra["u"])
    if cfg.events_path:
        events = _events(cfg, None)
    else:
        axis, start, stop, n = _parse_floats(cfg.extra["ray"], 4)
        if int(axis) not in (1, 2, 3) or n < 1:
            raise ConfigError("--ray is 'axis,start,stop,n' with axis in 1..3")
        events = []
        for x in np.linspace(start, stop, int(n)):
            c = [0.0, 0.0, 0.0, 0.0]
            c[int(axis)] = float(x)
            events.append(fields.Event(*c))
    try:
        _, summary = dirac.effective_mass_field(f, u, events)
    except BiquaternionError as exc:
        return [_error_report("effective_mass_constant", exc)]
    # informational: the verdict is whether the mass slot is constant along the ray
    tol = cfg.tol if cfg.tol is not None else suite.MASS_CONST_TOL
    return [Report("effective_mass_constant", summary["relative_variation"], tol, extra=summary)]


def _cmd_algebra_selftest(cfg):
    return [suite.check_algebra(np.random.default_rng(cfg.seed), cfg.trials)]


COMMANDS = {
    "verify": _cmd_verify,
    "maxwell": _cmd_maxwell,
    "decompose": _cmd_decompose,
    "dof": _cmd_dof,
    "dirac kernel": _cmd_dirac_kernel,
    "dirac treverse": _cmd_dirac_treverse,
    "dirac mass": _cmd_dirac_mass,
    "algebra selftest": _cmd_algebra_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--json", action="store_true", help="emit the JSON report")

    parser = argparse.ArgumentParser(prog="bqverify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify", parents=[common], help="run every acceptance check")

    p = sub.add_parser("maxwell", parents=[common], help="Maxwell residuals of a field")
    p.add_argument("--field", required=True)
    p.add_argument("--events")

    p = sub.add_parser("decompose", parents=[common], help="spinor decomposition of F")
    p.add_argument("--F", required=True, dest="F")
    p.add_argument("--u", default="e3")

    sub.add_parser("dof", parents=[common], help="degrees-of-freedom rank analysis")

    p = sub.add_parser("dirac", help="Dirac-Lanczos checks")
    dsub = p.add_subparsers(dest="dirac_command", required=True)
    k = dsub.add_parser("kernel", parents=[common])
    k.add_argument("--E", type=float, required=True, dest="E")
    k.add_argument("--p", default="0,0,0")
    k.add_argument("--m", type=float, default=1.0)
    k.add_argument("--u", default="e3")
    t = dsub.add_parser("treverse", parents=[common])
    t.add_argument("--m", type=float, default=1.0)
    t.add_argument("--u", default="e3")
    m = dsub.add_parser("mass", parents=[common])
    m.add_argument("--field", required=True)
    m.add_argument("--ray", default="1,0.5,2,50", help="axis,start,stop,n")
    m.add_argument("--events")
    m.add_argument("--u", default="e3")

    p = sub.add_parser("algebra", help="algebra checks")
    asub = p.add_subparsers(dest="algebra_command", required=True)
    asub.add_parser("selftest", parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    name = args.command
    if name == "dirac":
        name += " " + args.dirac_command
    elif name == "algebra":
        name += " " + args.algebra_command
    extra = {k: getattr(args, k) for k in ("F", "u", "E", "p", "m", "ray") if hasattr(args, k)}
    default_trials = {"dof": 100, "algebra selftest": 1000}.get(name, 100)
    return RunConfig(
        subcommand=name,
        field_path=getattr(args, "field", None),
        events_path=getattr(args, "events", None),
        trials=args.trials if args.trials is not None else default_trials,
        seed=args.seed,
        tol=args.tol,
        output="json" if args.json else "text",
        extra=extra,
    )


def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def render(cfg: RunConfig, reports: list) -> str:
    ok = all(r.passed for r in reports)
    if cfg.output == "json":
        doc = {"schema": SCHEMA, "command": cfg.subcommand, "seed": cfg.seed, "pass": ok,
               "reports": [_finite(r.to_dict()) for r in reports]}
        return json.dumps(doc, indent=2, default=str, allow_nan=False)
    lines = [r.line() for r in reports]
    lines.append(f"{'PASS' if ok else 'FAIL'} ({cfg.subcommand}, seed={cfg.seed})")
    return "\n".join(lines)


def run(cfg: RunConfig) -> tuple[int, list]:
    reports = COMMANDS[cfg.subcommand](cfg)
    return (0 if all(r.passed for r in reports) else 1), reports


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        code, reports = run(cfg)
    except ConfigError as exc:
        print(f"bqverify: {exc}", file=sys.stderr)
        return 2
    print(render(cfg, reports))
    return code


if __name__ == "__main__":
    sys.exit(main())
