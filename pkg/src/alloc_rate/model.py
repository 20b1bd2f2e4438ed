"""System parameters and the distribution of phi.

phi is the number of accessed nodes that actually hold data. Recovery
succeeds iff phi >= alpha, and every rate formula is an expectation over
phi, so this module is where the two access models differ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .combinatorics import binomial_pmf, hypergeometric_pmf

__all__ = [
    "SystemConfig",
    "FixedSize",
    "Probabilistic",
    "AccessModel",
    "ScaledExponential",
    "ShiftedExponential",
    "ServiceModel",
    "PhiDistribution",
    "Violation",
    "InvalidConfigurationError",
    "validate",
    "check",
    "phi_distribution",
]


def _positive_int(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return int(value)


@dataclass(frozen=True)
class SystemConfig:
    """An alpha quasi-symmetric allocation: alpha*m of the N nodes each hold k/alpha blocks.

    ``k`` is metadata only; no result depends on it beyond divisibility.
    """

    N: int
    m: int
    alpha: int
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "N", _positive_int("N", self.N))
        object.__setattr__(self, "m", _positive_int("m", self.m))
        object.__setattr__(self, "alpha", _positive_int("alpha", self.alpha))
        if self.k is not None:
            object.__setattr__(self, "k", _positive_int("k", self.k))

    @property
    def data_nodes(self) -> int:
        return self.alpha * self.m

    @property
    def max_alpha(self) -> int:
        """Largest alpha whose allocation fits on N nodes (maximal spreading when N/m is integral)."""
        return self.N // self.m


@dataclass(frozen=True)
class FixedSize:
    """Each request goes to a uniformly random r-subset of the N nodes."""

    r: int

    def __post_init__(self):
        object.__setattr__(self, "r", _positive_int("r", self.r))


@dataclass(frozen=True)
class Probabilistic:
    """Each data node independently fails to respond with probability p."""

    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))


AccessModel = Union[FixedSize, Probabilistic]


@dataclass(frozen=True)
class ScaledExponential:
    """A node holding 1/alpha of the file serves in Exp time with mean 1/(alpha*mu)."""

    mu: float = 1.0

    def __post_init__(self):
        mu = float(self.mu)
        if not mu > 0 or not np.isfinite(mu):
            raise ValueError(f"mu must be positive and finite, got {self.mu}")
        object.__setattr__(self, "mu", mu)


@dataclass(frozen=True)
class ShiftedExponential:
    """Constant delta/alpha plus an Exp(mu) processing time."""

    mu: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        mu = float(self.mu)
        delta = float(self.delta)
        if not mu > 0 or not np.isfinite(mu):
            raise ValueError(f"mu must be positive and finite, got {self.mu}")
        if not delta >= 0 or not np.isfinite(delta):
            raise ValueError(f"delta must be nonnegative and finite, got {self.delta}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "delta", delta)


ServiceModel = Union[ScaledExponential, ShiftedExponential]


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


class InvalidConfigurationError(ValueError):
    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(v.message for v in self.violations))


def validate(config: SystemConfig, access: AccessModel) -> list[Violation]:
    """Return every violated invariant; an empty list means the pair is usable."""
    out = []
    if config.data_nodes > config.N:
        out.append(Violation(
            "alpha_m_exceeds_N",
            f"alpha*m = {config.data_nodes} exceeds N = {config.N}",
        ))
    if config.k is not None and config.k % config.alpha:
        out.append(Violation(
            "k_not_divisible",
            f"k = {config.k} is not divisible by alpha = {config.alpha}",
        ))
    if isinstance(access, FixedSize):
        if access.r > config.N:
            out.append(Violation("r_exceeds_N", f"r = {access.r} exceeds N = {config.N}"))
        if config.alpha > access.r:
            out.append(Violation(
                "alpha_exceeds_r",
                f"alpha exceeds r (alpha = {config.alpha}, r = {access.r}); recovery is impossible",
            ))
    elif isinstance(access, Probabilistic):
        if not 0.0 <= access.p <= 1.0:
            out.append(Violation("p_out_of_range", f"p = {access.p} is out of range [0, 1]"))
    else:
        raise TypeError(f"unknown access model {access!r}")
    return out


def check(config: SystemConfig, access: AccessModel) -> None:
    violations = validate(config, access)
    if violations:
        raise InvalidConfigurationError(violations)


@dataclass(frozen=True)
class PhiDistribution:
    support_min: int
    support_max: int
    pmf: dict = field(default_factory=dict)

    def __getitem__(self, phi):
        return self.pmf.get(phi, 0.0)

    def items(self):
        return sorted(self.pmf.items())

    def mean(self) -> float:
        return sum(phi * p for phi, p in self.pmf.items())

    def tail(self, lo: int) -> float:
        """P(phi >= lo)."""
        return sum(p for phi, p in self.pmf.items() if phi >= lo)


def phi_distribution(config: SystemConfig, access: AccessModel) -> PhiDistribution:
    """Law of phi: hypergeometric under fixed-size access, binomial under probabilistic.

    Under probabilistic access only the alpha*m data nodes matter, so phi
    is Binomial(alpha*m, 1 - p).
    """
    check(config, access)
    K = config.data_nodes
    if isinstance(access, FixedSize):
        N, r = config.N, access.r
        lo, hi = max(0, r - (N - K)), min(r, K)
        pmf = {phi: hypergeometric_pmf(N, K, r, phi) for phi in range(lo, hi + 1)}
    else:
        q = 1.0 - access.p
        lo, hi = 0, K
        pmf = {phi: binomial_pmf(K, phi, q) for phi in range(lo, hi + 1)}
    return PhiDistribution(lo, hi, pmf)
