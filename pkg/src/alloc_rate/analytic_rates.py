"""Closed-form download times, per-set rates, recovery probability and DSS service rate."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .combinatorics import DomainError, harmonic_window
from .model import (
    AccessModel,
    ScaledExponential,
    ServiceModel,
    ShiftedExponential,
    SystemConfig,
    phi_distribution,
)

__all__ = [
    "PhiTerm",
    "RateReport",
    "expected_download_time",
    "set_service_rate",
    "recovery_probability",
    "dss_service_rate",
]

# pmf terms smaller than this contribute nothing representable to mu_s
_NEGLIGIBLE = 1e-300


@dataclass(frozen=True)
class PhiTerm:
    phi: int
    prob: float
    rate: float


@dataclass(frozen=True)
class RateReport:
    mu_s: float
    p_s: float
    per_phi: tuple

    def __str__(self):
        return f"RateReport(mu_s={self.mu_s:.12g}, p_s={self.p_s:.12g}, terms={len(self.per_phi)})"


def _check_window(alpha, phi):
    if alpha < 1:
        raise DomainError(f"alpha must be >= 1, got {alpha}")
    if alpha > phi:
        raise DomainError(f"alpha = {alpha} exceeds phi = {phi}: the file cannot be recovered")


def expected_download_time(service: ServiceModel, alpha: int, phi: int) -> float:
    """Mean of the alpha-th smallest of phi i.i.d. node delivery times."""
    _check_window(alpha, phi)
    window = harmonic_window(phi, alpha)
    if isinstance(service, ScaledExponential):
        return window / (alpha * service.mu)
    if isinstance(service, ShiftedExponential):
        return service.delta / alpha + window / service.mu
    raise TypeError(f"unknown service model {service!r}")


def set_service_rate(service: ServiceModel, alpha: int, phi: int) -> float:
    """Rate delivered by an accessed set holding phi data nodes: 1 / E[T | phi]."""
    return 1.0 / expected_download_time(service, alpha, phi)


def recovery_probability(config: SystemConfig, access: AccessModel) -> float:
    """P(phi >= alpha)."""
    dist = phi_distribution(config, access)
    p = math.fsum(prob for phi, prob in dist.items() if phi >= config.alpha)
    return min(1.0, p)


def dss_service_rate(
    config: SystemConfig, access: AccessModel, service: ServiceModel
) -> RateReport:
    """Expected per-set rate over access outcomes; failed recoveries contribute zero.

    The per-phi breakdown lists every phi >= alpha with non-negligible
    probability together with its conditional rate.
    """
    dist = phi_distribution(config, access)
    alpha = config.alpha
    terms = []
    for phi, prob in dist.items():
        if phi < alpha or prob < _NEGLIGIBLE:
            continue
        terms.append(PhiTerm(phi, prob, set_service_rate(service, alpha, phi)))
    mu_s = math.fsum(t.prob * t.rate for t in terms)
    p_s = min(1.0, math.fsum(t.prob for t in terms))
    return RateReport(mu_s=mu_s, p_s=p_s, per_phi=tuple(terms))
