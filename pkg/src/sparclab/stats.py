"""Small exact-binomial helpers for coverage adjudication and Monte Carlo CIs."""

from __future__ import annotations

import math


def binomial_sf(k: int, n: int, p: float) -> float:
    """P[Bin(n, p) >= k], exact via log-space summation."""
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    log_p, log_q = math.log(p), math.log1p(-p)
    total = 0.0
    for i in range(k, n + 1):
        total += math.exp(math.lgamma(n + 1) - math.lgamma(i + 1)
                          - math.lgamma(n - i + 1) + i * log_p + (n - i) * log_q)
    return min(1.0, total)


def coverage_critical_count(n: int, p: float, significance: float = 0.01) -> int:
    """Largest violation count consistent with rate p at the given level.

    Returns the greatest k with P[Bin(n, p) >= k] >= significance; observing
    more than k violations rejects the claimed coverage.
    """
    k = 0
    while k <= n and binomial_sf(k + 1, n, p) >= significance:
        k += 1
    return k


def wilson_upper(successes: int, trials: int, z: float = 2.5758293035489004) -> float:
    """Upper Wilson score bound; default z is the two-sided 99% quantile."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials
                                   + z * z / (4 * trials * trials))
    return min(1.0, center + half)
