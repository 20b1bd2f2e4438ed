"""Provable regions where alpha-spreading loses or wins against minimal spreading.

For alpha >= 2 the per-set rate sandwiches give closed-form thresholds on
the access size r (fixed-size access) or the failure probability p
(probabilistic access):

* below ``r_low`` (above ``p_worse``) the alpha allocation is strictly slower
  than alpha = 1;
* above ``r_high`` (below ``p_better``) it is strictly faster.

Between the two thresholds the bounds are not tight enough to decide. All
thresholds are (alpha-1)-th roots, evaluated as exp(log(.)/(alpha-1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic_rates import dss_service_rate
from .combinatorics import DomainError, log_binomial
from .model import (
    FixedSize,
    Probabilistic,
    ScaledExponential,
    ServiceModel,
    ShiftedExponential,
    SystemConfig,
)

__all__ = [
    "Interval",
    "RegionReport",
    "Counterexample",
    "VerificationRecord",
    "fixed_scaled_regions",
    "prob_scaled_regions",
    "fixed_shifted_regions",
    "prob_shifted_regions",
    "regions",
    "verify_region",
    "scaled_rate_bounds",
    "shifted_rate_bounds",
]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    @property
    def exists(self) -> bool:
        if self.lo < self.hi:
            return True
        return self.lo == self.hi and self.lo_closed and self.hi_closed

    def __contains__(self, x) -> bool:
        if not self.exists:
            return False
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def integers(self) -> range:
        """Integers lying in the interval."""
        if not self.exists:
            return range(0)
        lo = math.ceil(self.lo)
        if not self.lo_closed and lo == self.lo:
            lo += 1
        hi = math.floor(self.hi)
        if not self.hi_closed and hi == self.hi:
            hi -= 1
        return range(lo, max(lo, hi + 1))

    def __str__(self):
        if not self.exists:
            return "empty"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:.6g}, {self.hi:.6g}{right}"


_EMPTY = Interval(0.0, 0.0, False, False)


@dataclass(frozen=True)
class RegionReport:
    """Worse/better regions for one alpha.

    ``variable`` is ``"r"`` or ``"p"``. ``worse_threshold`` and
    ``better_threshold`` are the raw real-valued thresholds before clamping
    to the admissible domain. ``N`` is None for probabilistic access, where
    the node count plays no role.
    """

    alpha: int
    variable: str
    worse_region: Interval
    better_region: Interval
    gap: Interval
    worse_threshold: float
    better_threshold: float
    m: int
    service: ServiceModel
    N: int | None = None
    domain: tuple = field(default=(0.0, 1.0))

    @property
    def worse_exists(self) -> bool:
        return self.worse_region.exists

    @property
    def better_exists(self) -> bool:
        return self.better_region.exists

    def integer_ranges(self):
        """The induced integer r-ranges (fixed-size access only)."""
        if self.variable != "r":
            raise ValueError("integer ranges only apply to fixed-size regions")
        return self.worse_region.integers(), self.better_region.integers()


def _check_alpha(alpha, m):
    if alpha == 1:
        raise DomainError("alpha = 1 compares minimal spreading with itself; need alpha >= 2")
    if alpha < 1 or m < 1:
        raise DomainError(f"need alpha >= 2 and m >= 1, got alpha={alpha}, m={m}")


def _root(log_x, alpha):
    return math.exp(log_x / (alpha - 1))


def _fixed_report(N, m, alpha, r_low, r_high, service):
    if alpha * m > N:
        raise DomainError(f"alpha*m = {alpha * m} exceeds N = {N}")
    a = float(alpha)
    if r_low > N:
        worse = Interval(a, float(N), True, True)
    else:
        worse = Interval(a, r_low, True, False) if r_low > a else _EMPTY
    if r_high < a:
        better = Interval(a, float(N), True, True)
    else:
        better = Interval(r_high, float(N), False, True) if r_high < N else _EMPTY
    gap = _gap(worse, better, a, float(N))
    return RegionReport(alpha, "r", worse, better, gap, r_low, r_high, m, service,
                        N=N, domain=(a, float(N)))


def _prob_report(m, alpha, p_worse, p_better, service):
    if p_worse < 0.0:
        worse = Interval(0.0, 1.0, True, True)
    else:
        worse = Interval(p_worse, 1.0, False, True) if p_worse < 1.0 else _EMPTY
    if p_better > 1.0:
        better = Interval(0.0, 1.0, True, True)
    else:
        better = Interval(0.0, p_better, True, False) if p_better > 0.0 else _EMPTY
    gap = _gap(better, worse, 0.0, 1.0)
    return RegionReport(alpha, "p", worse, better, gap, p_worse, p_better, m, service)


def _gap(left, right, lo, hi):
    """Undecided stretch between the region that sits low and the one that sits high."""
    g_lo, lo_closed = (left.hi, not left.hi_closed) if left.exists else (lo, True)
    g_hi, hi_closed = (right.lo, not right.lo_closed) if right.exists else (hi, True)
    if g_lo > g_hi or (g_lo == g_hi and not (lo_closed and hi_closed)):
        return _EMPTY
    return Interval(g_lo, g_hi, lo_closed, hi_closed)


def fixed_scaled_regions(N: int, m: int, mu: float, alpha: int) -> RegionReport:
    _check_alpha(alpha, m)
    lc = math.log(alpha) + log_binomial(alpha * m - 1, alpha - 1)
    r_low = 1.0 + (N - 1) / _root(lc, alpha)
    r_high = _root(math.log(m) - math.log(alpha * m - alpha + 1), alpha) * (N - alpha + 1) + alpha - 1
    return _fixed_report(N, m, alpha, r_low, r_high, ScaledExponential(mu))


def prob_scaled_regions(m: int, mu: float, alpha: int) -> RegionReport:
    _check_alpha(alpha, m)
    lc = math.log(alpha) + log_binomial(alpha * m - 1, alpha - 1)
    p_worse = 1.0 - _root(-lc, alpha)
    p_better = 1.0 - _root(math.log(m) - math.log(alpha * m - alpha + 1), alpha)
    return _prob_report(m, alpha, p_worse, p_better, ScaledExponential(mu))


def _shifted_logs(m, mu, delta, alpha):
    """log of the two root arguments shared by the fixed and probabilistic shifted thresholds."""
    x = delta * mu
    span = alpha * m - alpha + 1
    log_worse = (math.log(x + alpha) - math.log(alpha) - math.log(x * m + 1)
                 - log_binomial(alpha * m - 1, alpha - 1))
    log_better = (math.log(m) + math.log(x * span + alpha * alpha)
                  - math.log(alpha) - math.log(x + 1) - math.log(span))
    return log_worse, log_better


def fixed_shifted_regions(N: int, m: int, mu: float, delta: float, alpha: int) -> RegionReport:
    _check_alpha(alpha, m)
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    log_worse, log_better = _shifted_logs(m, mu, delta, alpha)
    r_low = 1.0 + _root(log_worse, alpha) * (N - 1)
    r_high = _root(log_better, alpha) * (N - alpha + 1) + alpha - 1
    return _fixed_report(N, m, alpha, r_low, r_high, ShiftedExponential(mu, delta))


def prob_shifted_regions(m: int, mu: float, delta: float, alpha: int) -> RegionReport:
    _check_alpha(alpha, m)
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    log_worse, log_better = _shifted_logs(m, mu, delta, alpha)
    p_worse = 1.0 - _root(log_worse, alpha)
    p_better = 1.0 - _root(log_better, alpha)
    return _prob_report(m, alpha, p_worse, p_better, ShiftedExponential(mu, delta))


def regions(m: int, alpha: int, service: ServiceModel, N: int | None = None) -> RegionReport:
    """Dispatch on access (N given means fixed-size) and service model."""
    if isinstance(service, ScaledExponential):
        if N is None:
            return prob_scaled_regions(m, service.mu, alpha)
        return fixed_scaled_regions(N, m, service.mu, alpha)
    if isinstance(service, ShiftedExponential):
        if N is None:
            return prob_shifted_regions(m, service.mu, service.delta, alpha)
        return fixed_shifted_regions(N, m, service.mu, service.delta, alpha)
    raise TypeError(f"unknown service model {service!r}")


@dataclass(frozen=True)
class Counterexample:
    region: str
    point: float
    mu_alpha: float
    mu_one: float


@dataclass(frozen=True)
class VerificationRecord:
    checked: int
    counterexamples: tuple

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _grid_points(interval, step):
    n = int(round(1.0 / step))
    grid = np.arange(n + 1) / n
    return [float(x) for x in grid if x in interval]


def verify_region(report: RegionReport, step: float = 0.01) -> VerificationRecord:
    """Evaluate both allocations at every feasible point inside each region.

    Points are the integers r of a fixed-size region, or the grid
    {0, step, 2*step, ..., 1} for p. Points where alpha = 1 has zero rate
    (p = 1) are skipped: both rates vanish there and neither strict
    inequality can hold.
    """
    alpha, m, service = report.alpha, report.m, report.service
    if report.variable == "r":
        N = report.N
        cfg_a, cfg_1 = SystemConfig(N, m, alpha), SystemConfig(N, m, 1)

        def rates(r):
            acc = FixedSize(int(r))
            return (dss_service_rate(cfg_a, acc, service).mu_s,
                    dss_service_rate(cfg_1, acc, service).mu_s)

        worse_pts = list(report.worse_region.integers())
        better_pts = list(report.better_region.integers())
    else:
        # N does not enter probabilistic access; the smallest admissible one will do
        cfg_a, cfg_1 = SystemConfig(alpha * m, m, alpha), SystemConfig(alpha * m, m, 1)

        def rates(p):
            acc = Probabilistic(p)
            return (dss_service_rate(cfg_a, acc, service).mu_s,
                    dss_service_rate(cfg_1, acc, service).mu_s)

        worse_pts = _grid_points(report.worse_region, step)
        better_pts = _grid_points(report.better_region, step)

    checked = 0
    bad = []
    for name, pts, wins in (("worse", worse_pts, False), ("better", better_pts, True)):
        for x in pts:
            mu_a, mu_1 = rates(x)
            if mu_1 == 0.0 and mu_a == 0.0:
                continue
            checked += 1
            holds = mu_a > mu_1 if wins else mu_a < mu_1
            if not holds:
                bad.append(Counterexample(name, float(x), mu_a, mu_1))
    return VerificationRecord(checked, tuple(bad))


def scaled_rate_bounds(mu: float, alpha: int, phi: int) -> tuple[float, float]:
    """(lower, upper) sandwich on the scaled per-set rate: mu(phi-alpha+1) and mu*phi."""
    if alpha > phi:
        raise DomainError(f"alpha = {alpha} exceeds phi = {phi}")
    return mu * (phi - alpha + 1), mu * phi


def shifted_rate_bounds(mu: float, delta: float, alpha: int, m: int, phi: int) -> tuple[float, float]:
    """(lower, upper) sandwich on the shifted per-set rate for phi in [alpha, alpha*m]."""
    if not alpha <= phi <= alpha * m:
        raise DomainError(f"need alpha <= phi <= alpha*m, got alpha={alpha}, phi={phi}, m={m}")
    x = delta * mu
    lower = alpha * mu * (phi - alpha + 1) / (x * (alpha * m - alpha + 1) + alpha * alpha)
    upper = mu * phi / (x + alpha)
    return lower, upper
