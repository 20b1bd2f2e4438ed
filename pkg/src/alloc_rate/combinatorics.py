"""Exact and log-space combinatorial primitives.

Every pmf in the package goes through :func:`log_binomial` so that large
node counts never overflow; :func:`binomial` stays exact for identities.
"""

from __future__ import annotations

import math

__all__ = [
    "DomainError",
    "binomial",
    "log_binomial",
    "harmonic",
    "harmonic_window",
    "hypergeometric_pmf",
    "binomial_pmf",
]

# math.log(math.comb(n, k)) is exact to the last ulp but comb() grows
# expensive; above this n fall back to lgamma.
_EXACT_LOG_LIMIT = 2000


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


def _check_int(name, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")


def binomial(n: int, k: int) -> int:
    """C(n, k) as an exact integer; 0 when k < 0 or k > n."""
    _check_int("n", n)
    _check_int("k", k)
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def log_binomial(n: int, k: int) -> float:
    """Natural log of C(n, k); requires 0 <= k <= n."""
    _check_int("n", n)
    _check_int("k", k)
    if not 0 <= k <= n:
        raise DomainError(f"log_binomial needs 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    if k == 0:
        return 0.0
    if n <= _EXACT_LOG_LIMIT:
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def harmonic(ell: int) -> float:
    """H_ell = sum_{i=1}^{ell} 1/i, with H_0 = 0."""
    _check_int("ell", ell)
    if ell < 0:
        raise DomainError(f"harmonic number needs ell >= 0, got {ell}")
    # smallest terms first; fsum keeps the result correctly rounded
    return math.fsum(1.0 / i for i in range(ell, 0, -1))


def harmonic_window(phi: int, alpha: int) -> float:
    """H_phi - H_{phi-alpha}, summed directly over the alpha terms of the window."""
    _check_int("phi", phi)
    _check_int("alpha", alpha)
    if alpha < 1 or phi < 1:
        raise DomainError(f"harmonic_window needs positive phi and alpha, got {phi}, {alpha}")
    if alpha > phi:
        raise DomainError(f"harmonic_window needs alpha <= phi, got alpha={alpha} > phi={phi}")
    return math.fsum(1.0 / i for i in range(phi, phi - alpha, -1))


def hypergeometric_pmf(N: int, K: int, r: int, phi: int) -> float:
    """P(phi marked items among r draws without replacement from N with K marked)."""
    for name, v in (("N", N), ("K", K), ("r", r), ("phi", phi)):
        _check_int(name, v)
    if not (0 <= K <= N and 0 <= r <= N):
        raise DomainError(f"hypergeometric_pmf needs 0<=K<=N and 0<=r<=N, got N={N}, K={K}, r={r}")
    if phi < max(0, r - (N - K)) or phi > min(r, K):
        return 0.0
    log_p = log_binomial(K, phi) + log_binomial(N - K, r - phi) - log_binomial(N, r)
    return math.exp(log_p)


def binomial_pmf(n: int, phi: int, q: float) -> float:
    """C(n, phi) q^phi (1-q)^(n-phi), with 0^0 = 1 at q in {0, 1}."""
    _check_int("n", n)
    _check_int("phi", phi)
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"success probability must lie in [0, 1], got {q}")
    if not 0 <= phi <= n:
        raise DomainError(f"binomial_pmf needs 0 <= phi <= n, got n={n}, phi={phi}")
    if q == 0.0:
        return 1.0 if phi == 0 else 0.0
    if q == 1.0:
        return 1.0 if phi == n else 0.0
    log_p = log_binomial(n, phi) + phi * math.log(q) + (n - phi) * math.log1p(-q)
    return math.exp(log_p)
