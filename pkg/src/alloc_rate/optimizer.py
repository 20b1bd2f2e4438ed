"""Sweeps over the spreading parameter alpha and the optima they expose."""

from __future__ import annotations

from dataclasses import dataclass

from .analytic_rates import dss_service_rate, expected_download_time
from .model import (
    AccessModel,
    FixedSize,
    InvalidConfigurationError,
    ScaledExponential,
    ServiceModel,
    SystemConfig,
    Violation,
    check,
)

__all__ = [
    "SweepRow",
    "SweepTable",
    "OptimumReport",
    "MonotonicityStep",
    "ClaimViolation",
    "feasible_alpha_max",
    "sweep_alpha",
    "optimal_alpha",
    "monotonicity_check",
    "tradeoff_frontier",
    "trend",
    "argmax_drift",
]


@dataclass(frozen=True)
class SweepRow:
    alpha: int
    mu_s: float
    p_s: float


@dataclass(frozen=True)
class SweepTable:
    rows: tuple
    feasible_alpha_range: tuple

    @property
    def alphas(self):
        return [row.alpha for row in self.rows]

    @property
    def mu_s(self):
        return [row.mu_s for row in self.rows]

    @property
    def p_s(self):
        return [row.p_s for row in self.rows]


@dataclass(frozen=True)
class OptimumReport:
    alpha_star_rate: int
    alpha_star_recovery: int
    tie_break: str = "smallest-alpha"


def feasible_alpha_max(N: int, m: int, access: AccessModel) -> int:
    cap = N // m
    if isinstance(access, FixedSize):
        cap = min(cap, access.r)
    return cap


def sweep_alpha(
    N: int, m: int, access: AccessModel, service: ServiceModel, alpha_max: int | None = None
) -> SweepTable:
    """One row per feasible alpha, optionally truncated at ``alpha_max``."""
    hi = feasible_alpha_max(N, m, access)
    if alpha_max is not None:
        hi = min(hi, alpha_max)
    if hi < 1:
        raise InvalidConfigurationError([Violation(
            "no_feasible_alpha", f"no feasible alpha for N={N}, m={m}, {access}")])
    check(SystemConfig(N, m, 1), access)
    rows = []
    for alpha in range(1, hi + 1):
        rep = dss_service_rate(SystemConfig(N, m, alpha), access, service)
        rows.append(SweepRow(alpha, rep.mu_s, rep.p_s))
    return SweepTable(tuple(rows), (1, hi))


def _argmax(rows, key):
    best = rows[0]
    for row in rows[1:]:
        if key(row) > key(best):  # strict: ties keep the smaller alpha
            best = row
    return best.alpha


def optimal_alpha(sweep: SweepTable) -> OptimumReport:
    if not sweep.rows:
        raise ValueError("empty sweep")
    return OptimumReport(
        alpha_star_rate=_argmax(sweep.rows, lambda r: r.mu_s),
        alpha_star_recovery=_argmax(sweep.rows, lambda r: r.p_s),
    )


class ClaimViolation(AssertionError):
    """The scaled-service download-time chain failed to decrease."""


@dataclass(frozen=True)
class MonotonicityStep:
    alpha: int
    time: float
    next_time: float
    verdict: str  # "decreasing", "increasing" or "equal"


def monotonicity_check(service: ServiceModel, m: int, alpha_max: int) -> list[MonotonicityStep]:
    """Compare T(alpha | alpha*m) with T(alpha+1 | (alpha+1)*m) for 1 <= alpha < alpha_max.

    With every node accessed (r = N, or p = 0) phi = alpha*m always, so this
    chain decides whether mu_s grows with alpha. Under scaled service the
    chain must strictly decrease and a violation raises ClaimViolation;
    under shifted service the verdicts are only reported.
    """
    if m < 1 or alpha_max < 2:
        raise ValueError(f"need m >= 1 and alpha_max >= 2, got m={m}, alpha_max={alpha_max}")
    steps = []
    for alpha in range(1, alpha_max):
        t = expected_download_time(service, alpha, alpha * m)
        t_next = expected_download_time(service, alpha + 1, (alpha + 1) * m)
        if t > t_next:
            verdict = "decreasing"
        elif t < t_next:
            verdict = "increasing"
        else:
            verdict = "equal"
        steps.append(MonotonicityStep(alpha, t, t_next, verdict))
    if isinstance(service, ScaledExponential):
        bad = [s for s in steps if s.verdict != "decreasing"]
        if bad:
            raise ClaimViolation(f"scaled download time not decreasing at alpha={bad[0].alpha}, m={m}")
    return steps


def tradeoff_frontier(sweep: SweepTable) -> list[SweepRow]:
    """Rows not beaten in both mu_s and p_s by any other row, by alpha."""
    out = []
    for row in sweep.rows:
        dominated = any(
            o.mu_s >= row.mu_s and o.p_s >= row.p_s and (o.mu_s > row.mu_s or o.p_s > row.p_s)
            for o in sweep.rows
        )
        if not dominated:
            out.append(row)
    return sorted(out, key=lambda r: r.alpha)


def trend(values) -> str:
    """'increasing', 'decreasing', 'constant' or 'mixed' (all strict)."""
    diffs = [b - a for a, b in zip(values, values[1:])]
    if not diffs or all(d == 0 for d in diffs):
        return "constant"
    if all(d > 0 for d in diffs):
        return "increasing"
    if all(d < 0 for d in diffs):
        return "decreasing"
    return "mixed"


def argmax_drift(sweeps: dict) -> str:
    """Direction in which the rate-optimal alpha moves as the sweep key grows.

    ``sweeps`` maps a parameter value (r, p or m) to its SweepTable. The
    result is an empirical annotation, not a proven property.
    """
    keys = sorted(sweeps)
    stars = [optimal_alpha(sweeps[k]).alpha_star_rate for k in keys]
    diffs = [b - a for a, b in zip(stars, stars[1:])]
    if all(d == 0 for d in diffs):
        return "flat"
    if all(d >= 0 for d in diffs):
        return "non-decreasing"
    if all(d <= 0 for d in diffs):
        return "non-increasing"
    return "mixed"
