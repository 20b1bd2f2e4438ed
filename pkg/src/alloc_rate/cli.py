"""Command-line front end: ``alloc-rate {rate,bounds,simulate,sweep,figures}``.

Exit codes: 0 success, 1 simulation disagrees with the closed form
(simulate only), 2 usage or validation error.

Parameters come from long flags, from a ``--config`` string of
whitespace-separated ``key=value`` tokens, or both (flags win)::

    N=30 m=3 alpha=2 access=fixed r=5 service=scaled mu=1.0
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings

from . import __version__
from .analytic_rates import dss_service_rate, set_service_rate
from .combinatorics import DomainError
from .figures import FIGURES, fmt, render_csv, write_figure
from .model import (
    FixedSize,
    InvalidConfigurationError,
    Probabilistic,
    ScaledExponential,
    ShiftedExponential,
    SystemConfig,
    phi_distribution,
)
from .monte_carlo import UnderSampledStratumWarning, chi_squared_gate, simulate_dss
from .optimizer import optimal_alpha, sweep_alpha
from .theorem_bounds import regions, verify_region

__all__ = ["main", "parse_config_text", "ConfigSyntaxError"]

SEED_ENV = "ALLOC_RATE_SEED"
DEFAULT_SEED = 42
DEFAULT_TRIALS = 100_000
Z_GATE = 4.0

_KEYS = {
    "N": int, "m": int, "alpha": int, "k": int, "r": int,
    "p": float, "mu": float, "delta": float,
    "access": str, "service": str,
}
_CHOICES = {"access": ("fixed", "prob"), "service": ("scaled", "shifted")}


class ConfigSyntaxError(ValueError):
    pass


class UsageError(Exception):
    pass


def parse_config_text(text: str) -> dict:
    """Parse ``key=value`` tokens into typed values; unknown keys are an error."""
    out = {}
    for token in text.split():
        key, sep, raw = token.partition("=")
        if not sep or not raw:
            raise ConfigSyntaxError(f"expected key=value, got {token!r}")
        if key not in _KEYS:
            raise ConfigSyntaxError(f"unknown key {key!r}; known keys: {', '.join(_KEYS)}")
        try:
            value = _KEYS[key](raw)
        except ValueError:
            raise ConfigSyntaxError(f"bad value for {key}: {raw!r}") from None
        if key in _CHOICES and value not in _CHOICES[key]:
            raise ConfigSyntaxError(f"{key} must be one of {_CHOICES[key]}, got {value!r}")
        out[key] = value
    return out


def _merged(args) -> dict:
    params = parse_config_text(args.config) if args.config else {}
    for key in _KEYS:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return params


def _require(params, *keys):
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise UsageError("missing parameter(s): " + ", ".join(missing))


def _access(params):
    _require(params, "access")
    if params["access"] == "fixed":
        _require(params, "r")
        return FixedSize(params["r"])
    _require(params, "p")
    return Probabilistic(params["p"])


def _service(params):
    kind = params.get("service", "scaled")
    mu = params.get("mu", 1.0)
    if kind == "scaled":
        return ScaledExponential(mu)
    return ShiftedExponential(mu, params.get("delta", 3.0))


def _describe(command, params, extra=()):
    order = ["N", "m", "alpha", "k", "access", "r", "p", "service", "mu", "delta"]
    if params.get("service", "scaled") == "scaled":
        order.remove("delta")
    parts = [f"{k}={params[k]}" for k in order if params.get(k) is not None]
    return [f"alloc-rate {__version__}", "command: " + " ".join([command, *parts, *extra])]


def _emit(text, args):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_rate(args) -> int:
    params = _merged(args)
    _require(params, "N", "m", "alpha")
    config = SystemConfig(params["N"], params["m"], params["alpha"], params.get("k"))
    report = dss_service_rate(config, _access(params), _service(params))
    comments = _describe("rate", params)
    if args.format == "csv":
        text = render_csv(("mu_s", "p_s"), [(report.mu_s, report.p_s)], comments)
        if args.per_phi:
            text += render_csv(("phi", "pmf", "rate"),
                               [(t.phi, t.prob, t.rate) for t in report.per_phi], ["per_phi"])
    else:
        lines = [f"# {c}" for c in comments]
        lines += [f"mu_s={fmt(report.mu_s)}", f"p_s={fmt(report.p_s)}"]
        if args.per_phi:
            lines += [f"phi={t.phi} pmf={fmt(t.prob)} rate={fmt(t.rate)}" for t in report.per_phi]
        text = "\n".join(lines) + "\n"
    _emit(text, args)
    return 0


def _bool(x):
    return "true" if x else "false"


def cmd_bounds(args) -> int:
    params = _merged(args)
    _require(params, "m", "alpha", "access")
    N = None
    if params["access"] == "fixed":
        _require(params, "N")
        N = params["N"]
    rep = regions(params["m"], params["alpha"], _service(params), N=N)
    rows = [
        ("variable", rep.variable),
        ("worse_threshold", fmt(rep.worse_threshold)),
        ("better_threshold", fmt(rep.better_threshold)),
        ("worse_region", str(rep.worse_region)),
        ("worse_exists", _bool(rep.worse_exists)),
        ("better_region", str(rep.better_region)),
        ("better_exists", _bool(rep.better_exists)),
        ("gap", str(rep.gap)),
    ]
    if rep.variable == "r":
        worse_r, better_r = rep.integer_ranges()
        rows.append(("worse_integers", _span(worse_r)))
        rows.append(("better_integers", _span(better_r)))
    if args.verify:
        rec = verify_region(rep, step=args.step)
        rows.append(("verified_points", str(rec.checked)))
        rows.append(("counterexamples", str(len(rec.counterexamples))))
        for c in rec.counterexamples:
            rows.append(("counterexample", f"{c.region} {rep.variable}={fmt(c.point)} "
                                           f"mu_alpha={fmt(c.mu_alpha)} mu_1={fmt(c.mu_one)}"))
    comments = _describe("bounds", params)
    if args.format == "csv":
        text = render_csv(("quantity", "value"), rows, comments)
    else:
        text = "".join(f"# {c}\n" for c in comments) + "".join(f"{k}={v}\n" for k, v in rows)
    _emit(text, args)
    return 0


def _span(rng):
    return f"{rng.start}..{rng.stop - 1}" if len(rng) else "none"


def _z(est, target):
    return est.z_score(target)


def cmd_simulate(args) -> int:
    params = _merged(args)
    _require(params, "N", "m", "alpha")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    config = SystemConfig(params["N"], params["m"], params["alpha"], params.get("k"))
    access, service = _access(params), _service(params)
    seed = args.seed if args.seed is not None else _env_seed()
    analytic = dss_service_rate(config, access, service)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnderSampledStratumWarning)
        sim = simulate_dss(config, access, service, args.trials, seed=seed, workers=args.workers)

    rows = [
        ("p_s", analytic.p_s, sim.p_s.mean, sim.p_s.std_error, _z(sim.p_s, analytic.p_s)),
        ("mu_s", analytic.mu_s, sim.mu_s.mean, sim.mu_s.std_error, _z(sim.mu_s, analytic.mu_s)),
    ]
    for st in sim.strata:
        target = 1.0 / set_service_rate(service, config.alpha, st.phi)
        z = (st.mean_time - target) / st.std_error if st.std_error > 0 else 0.0
        rows.append((f"T_phi={st.phi}", target, st.mean_time, st.std_error, z))
    stat, crit, passed = chi_squared_gate(sim.phi, dict(phi_distribution(config, access).items()))

    comments = _describe("simulate", params, [f"trials={args.trials}", f"seed={seed}"])
    comments.append(f"chi2 statistic={fmt(stat)} critical={fmt(crit)} passed={_bool(passed)}")
    comments += [f"warning: {w}" for w in sim.warnings]
    for w in sim.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(render_csv(("metric", "analytic", "estimate", "std_error", "z"), rows, comments), args)
    return 1 if any(abs(r[4]) > Z_GATE for r in rows) else 0


def _env_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def cmd_sweep(args) -> int:
    params = _merged(args)
    _require(params, "N", "m")
    table = sweep_alpha(params["N"], params["m"], _access(params), _service(params),
                        alpha_max=args.alpha_max)
    best = optimal_alpha(table)
    text = render_csv(("alpha", "mu_s", "p_s"), [(r.alpha, r.mu_s, r.p_s) for r in table.rows],
                      _describe("sweep", params))
    text += f"# optimum alpha_star_rate={best.alpha_star_rate} alpha_star_recovery={best.alpha_star_recovery}\n"
    _emit(text, args)
    return 0


def cmd_figures(args) -> int:
    for path in write_figure(args.figure_id, args.output_dir):
        print(path)
    return 0


def _add_params(p, need_alpha=True):
    p.add_argument("--config", help="key=value parameter string, e.g. 'N=30 m=3 alpha=2'")
    p.add_argument("--N", type=int)
    p.add_argument("--m", type=int)
    if need_alpha:
        p.add_argument("--alpha", type=int)
        p.add_argument("--k", type=int, help="file block count (metadata; must be divisible by alpha)")
    p.add_argument("--access", choices=_CHOICES["access"])
    p.add_argument("--r", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--service", choices=_CHOICES["service"])
    p.add_argument("--mu", type=float)
    p.add_argument("--delta", type=float, help="shift for shifted service (default 3)")
    p.add_argument("--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alloc-rate", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"alloc-rate {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="closed-form service rate and recovery probability")
    _add_params(p)
    p.add_argument("--per-phi", action="store_true")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("bounds", help="regions where alpha loses or wins against alpha=1")
    _add_params(p)
    p.add_argument("--verify", action="store_true", help="check the regions numerically")
    p.add_argument("--step", type=float, default=0.01, help="p grid step for --verify")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="Monte Carlo check against the closed forms")
    _add_params(p)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or {DEFAULT_SEED}")
    p.add_argument("--workers", type=int, default=1, help="threads; results do not depend on it")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="mu_s and p_s over every feasible alpha")
    _add_params(p, need_alpha=False)
    p.add_argument("--alpha-max", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figures", help="write the CSV tables behind a figure")
    p.add_argument("figure_id", choices=sorted(FIGURES))
    p.add_argument("--output-dir", default=".")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidConfigurationError as exc:
        for v in exc.violations:
            print(f"error: {v.code}: {v.message}", file=sys.stderr)
        return 2
    except (UsageError, ConfigSyntaxError, DomainError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
