"""Stochastic oracle for the closed forms.

Trials are cut into fixed-size blocks. Block ``b`` draws from its own
generator seeded by ``(seed, b)``, and per-block accumulators are merged
in block order. The estimates therefore do not depend on how many worker
threads ran the blocks.

The DSS rate is estimated as sum_phi p_hat(phi) / T_hat(phi), the same
functional as the closed forms (rate = 1 / mean time). The per-trial
average of 1/T is a different quantity and is deliberately not used.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .combinatorics import DomainError
from .model import (
    AccessModel,
    FixedSize,
    ScaledExponential,
    ServiceModel,
    ShiftedExponential,
    SystemConfig,
    check,
    phi_distribution,
)

__all__ = [
    "BLOCK_SIZE",
    "SimulationEstimate",
    "EmpiricalPhi",
    "Stratum",
    "DssSimulation",
    "UnderSampledStratumWarning",
    "simulate_download_time",
    "simulate_phi",
    "simulate_dss",
    "chi_squared_gate",
]

BLOCK_SIZE = 1 << 16

# a phi >= alpha stratum whose analytic mass exceeds this many expected hits
# must receive at least MIN_STRATUM_SAMPLES trials
_EXPECTED_HITS = 10
MIN_STRATUM_SAMPLES = 30


class UnderSampledStratumWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SimulationEstimate:
    mean: float
    std_error: float
    trials: int
    seed: int
    per_phi_counts: dict = field(default_factory=dict)

    def z_score(self, target: float) -> float:
        diff = self.mean - target
        if self.std_error > 0:
            return diff / self.std_error
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)


@dataclass(frozen=True)
class EmpiricalPhi:
    counts: dict
    trials: int
    seed: int

    @property
    def pmf(self) -> dict:
        return {phi: c / self.trials for phi, c in sorted(self.counts.items())}


@dataclass(frozen=True)
class Stratum:
    """Download-time statistics over the trials that landed on one phi."""

    phi: int
    count: int
    mean_time: float
    std_error: float


@dataclass(frozen=True)
class DssSimulation:
    p_s: SimulationEstimate
    mu_s: SimulationEstimate
    strata: tuple
    phi: EmpiricalPhi
    warnings: tuple = ()


def _rng(seed, block):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))


def _blocks(trials):
    full, rest = divmod(trials, BLOCK_SIZE)
    sizes = [BLOCK_SIZE] * full
    if rest:
        sizes.append(rest)
    return sizes


def _run_blocks(fn, trials, workers):
    sizes = _blocks(trials)
    if workers is None or workers <= 1 or len(sizes) == 1:
        return [fn(b, n) for b, n in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(len(sizes)), sizes))


def _node_times(rng, service, alpha, shape):
    """i.i.d. node delivery times by inverse transform of uniforms."""
    u = rng.random(shape)
    e = -np.log1p(-u)
    if isinstance(service, ScaledExponential):
        return e / (alpha * service.mu)
    if isinstance(service, ShiftedExponential):
        return service.delta / alpha + e / service.mu
    raise TypeError(f"unknown service model {service!r}")


def _order_stat(rng, service, alpha, phi, n):
    t = _node_times(rng, service, alpha, (n, phi))
    return np.partition(t, alpha - 1, axis=1)[:, alpha - 1]


def _sample_phi(rng, config, access, n):
    K = config.data_nodes
    if isinstance(access, FixedSize):
        # uniform r-subset: the r nodes with the smallest random keys; nodes 0..K-1 hold data
        keys = rng.random((n, config.N))
        chosen = np.argpartition(keys, access.r - 1, axis=1)[:, : access.r]
        return np.count_nonzero(chosen < K, axis=1)
    alive = rng.random((n, K)) < 1.0 - access.p
    return np.count_nonzero(alive, axis=1)


def _validate_trials(trials):
    if isinstance(trials, bool) or not isinstance(trials, (int, np.integer)) or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")


def simulate_download_time(
    service: ServiceModel, alpha: int, phi: int, trials: int, seed: int = 42, workers: int | None = None
) -> SimulationEstimate:
    """Mean of the alpha-th smallest of phi simulated node times."""
    if alpha < 1 or alpha > phi:
        raise DomainError(f"need 1 <= alpha <= phi, got alpha={alpha}, phi={phi}")
    _validate_trials(trials)

    def block(b, n):
        x = _order_stat(_rng(seed, b), service, alpha, phi, n)
        return n, float(x.sum()), float(np.square(x).sum())

    parts = _run_blocks(block, trials, workers)
    count = sum(p[0] for p in parts)
    s = math.fsum(p[1] for p in parts)
    ss = math.fsum(p[2] for p in parts)
    mean, se = _mean_se(count, s, ss)
    return SimulationEstimate(mean, se, trials, seed, {phi: count})


def _mean_se(n, s, ss):
    mean = s / n
    if n < 2:
        return mean, 0.0
    var = max(0.0, (ss - n * mean * mean) / (n - 1))
    return mean, math.sqrt(var / n)


def simulate_phi(
    config: SystemConfig, access: AccessModel, trials: int, seed: int = 42, workers: int | None = None
) -> EmpiricalPhi:
    check(config, access)
    _validate_trials(trials)

    def block(b, n):
        phis = _sample_phi(_rng(seed, b), config, access, n)
        return np.bincount(phis, minlength=config.data_nodes + 1)

    counts = np.sum(_run_blocks(block, trials, workers), axis=0)
    return EmpiricalPhi({int(i): int(c) for i, c in enumerate(counts) if c}, trials, seed)


def simulate_dss(
    config: SystemConfig,
    access: AccessModel,
    service: ServiceModel,
    trials: int,
    seed: int = 42,
    workers: int | None = None,
) -> DssSimulation:
    """Estimate recovery probability and DSS service rate.

    Each trial draws phi from the access model and, when phi >= alpha,
    the alpha-th order statistic of phi node times. The rate estimate's
    standard error comes from the delta method: the multinomial spread of
    the phi frequencies plus the per-stratum spread of 1/T_hat.
    """
    check(config, access)
    _validate_trials(trials)
    alpha = config.alpha
    width = config.data_nodes + 1

    def block(b, n):
        rng = _rng(seed, b)
        phis = _sample_phi(rng, config, access, n)
        counts = np.bincount(phis, minlength=width)
        s = np.zeros(width)
        ss = np.zeros(width)
        for phi in range(alpha, width):
            k = int(counts[phi])
            if k:
                t = _order_stat(rng, service, alpha, phi, k)
                s[phi] = t.sum()
                ss[phi] = np.square(t).sum()
        return counts, s, ss

    parts = _run_blocks(block, trials, workers)
    counts = np.zeros(width, dtype=np.int64)
    s = np.zeros(width)
    ss = np.zeros(width)
    for c, a, b in parts:
        counts += c
        s += a
        ss += b

    n = trials
    per_phi_counts = {int(i): int(c) for i, c in enumerate(counts) if c}
    strata = []
    for phi in range(alpha, width):
        k = int(counts[phi])
        if k:
            mean, se = _mean_se(k, s[phi], ss[phi])
            strata.append(Stratum(phi, k, mean, se))

    hits = sum(st.count for st in strata)
    ps_hat = hits / n
    ps_se = math.sqrt(ps_hat * (1.0 - ps_hat) / n)

    # rate = sum_phi f_phi g_phi with f the empirical frequency and g = 1/T_hat
    f = np.array([st.count / n for st in strata])
    g = np.array([1.0 / st.mean_time for st in strata])
    var_g = np.array([(st.std_error / st.mean_time**2) ** 2 for st in strata])
    mu_hat = math.fsum(f * g) if strata else 0.0
    if strata:
        var_f = max(0.0, (math.fsum(f * g * g) - mu_hat * mu_hat) / n)
        mu_se = math.sqrt(var_f + math.fsum(f * f * var_g))
    else:
        mu_se = 0.0

    notes = []
    expected = phi_distribution(config, access)
    for phi in range(alpha, width):
        if expected[phi] > _EXPECTED_HITS / n and counts[phi] < MIN_STRATUM_SAMPLES:
            msg = (f"stratum phi={phi} received {int(counts[phi])} samples "
                   f"(< {MIN_STRATUM_SAMPLES}); its rate estimate is unreliable")
            notes.append(msg)
            warnings.warn(msg, UnderSampledStratumWarning, stacklevel=2)

    return DssSimulation(
        p_s=SimulationEstimate(ps_hat, ps_se, n, seed, per_phi_counts),
        mu_s=SimulationEstimate(mu_hat, mu_se, n, seed, per_phi_counts),
        strata=tuple(strata),
        phi=EmpiricalPhi(per_phi_counts, n, seed),
        warnings=tuple(notes),
    )


def chi_squared_gate(empirical: EmpiricalPhi, expected: dict, level: float = 0.999, min_expected: float = 5.0):
    """Pearson goodness-of-fit of empirical phi counts against an analytic pmf.

    Bins with fewer than ``min_expected`` expected hits are pooled into one
    bin. Returns ``(statistic, critical_value, passed)``; a distribution with
    a single populated bin passes trivially when all mass landed there.
    """
    n = empirical.trials
    support = sorted(set(expected) | set(empirical.counts))
    obs = np.array([empirical.counts.get(k, 0) for k in support], dtype=float)
    exp = np.array([expected.get(k, 0.0) * n for k in support])
    big = exp >= min_expected
    o = obs[big]
    e = exp[big]
    if (~big).any():
        po, pe = obs[~big].sum(), exp[~big].sum()
        if pe >= min_expected or len(e) == 0:
            o = np.append(o, po)
            e = np.append(e, pe)
        else:
            # pooled tail still too thin; fold it into the smallest bin
            i = int(np.argmin(e))
            o[i] += po
            e[i] += pe
    if np.any((e == 0) & (o > 0)):
        return math.inf, 0.0, False
    keep = e > 0
    o, e = o[keep], e[keep]
    dof = len(e) - 1
    if dof < 1:
        return 0.0, 0.0, bool(np.allclose(o, e, rtol=1e-9, atol=0.5))
    stat = float(np.sum((o - e) ** 2 / e))
    crit = float(stats.chi2.ppf(level, dof))
    return stat, crit, stat <= crit
