"""Channel and code parameter arithmetic plus the section-size analysis.

Rates and capacities are in nats throughout.  The analysis codelength
``n_real`` is kept real valued; the integer ``n_int`` exists only for
simulation, so analytic curves are not perturbed by rounding.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

from .exponents import capped_deviation_exponent, inverse_deviation_exponent, optimal_tilt

LN2 = math.log(2.0)


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")


def _check_snr(v: float) -> None:
    if v <= 0:
        raise ValueError(f"snr must be positive, got {v}")


@dataclass(frozen=True)
class ChannelSpec:
    """AWGN channel with signal power P and noise variance sigma2."""

    P: float
    sigma2: float

    def __post_init__(self):
        if self.P <= 0 or self.sigma2 <= 0:
            raise ValueError("signal power and noise variance must be positive")

    @classmethod
    def from_snr(cls, v: float) -> "ChannelSpec":
        _check_snr(v)
        return cls(P=float(v), sigma2=1.0)

    @property
    def snr(self) -> float:
        return self.P / self.sigma2

    @property
    def capacity(self) -> float:
        return capacity(self.snr)


@dataclass(frozen=True)
class CodeSpec:
    """Partitioned superposition code: L sections of B columns at rate R nats."""

    L: int
    B: int
    rate: float
    signed: bool = False

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"need at least one section, got L={self.L}")
        if self.B < 2:
            raise ValueError(f"section size must be at least 2, got B={self.B}")
        if self.rate <= 0:
            raise ValueError(f"rate must be positive, got {self.rate}")

    @property
    def section_size_rate(self) -> float:
        """a = ln B / ln L; the dictionary has N = L^(a+1) columns."""
        if self.L < 2:
            raise ValueError("section size rate needs L >= 2")
        return math.log(self.B) / math.log(self.L)

    @property
    def n_real(self) -> float:
        per_section = math.log(2 * self.B) if self.signed else math.log(self.B)
        return self.L * per_section / self.rate

    @property
    def n_int(self) -> int:
        return math.ceil(self.n_real)

    @property
    def bits_per_section(self) -> int:
        if self.B & (self.B - 1):
            raise ValueError(f"bit encoding requires a power-of-two section size, got {self.B}")
        b = self.B.bit_length() - 1
        return b + 1 if self.signed else b

    @property
    def input_bits(self) -> int:
        return self.L * self.bits_per_section

    @property
    def num_columns(self) -> int:
        return self.L * self.B

    def candidate_count(self) -> int:
        """Number of admissible coefficient vectors."""
        return (2 * self.B if self.signed else self.B) ** self.L


@dataclass(frozen=True)
class AlphaGrid:
    """Mistake fractions ell/L for an integer sub-range of sections."""

    L: int
    ells: tuple[int, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.ells is None:
            object.__setattr__(self, "ells", tuple(range(1, self.L + 1)))
        if any(not 0 <= e <= self.L for e in self.ells):
            raise ValueError("section counts out of range")
        if any(b <= a for a, b in zip(self.ells, self.ells[1:])):
            raise ValueError("section counts must be strictly increasing")

    @classmethod
    def interior(cls, L: int) -> "AlphaGrid":
        return cls(L, tuple(range(1, L)))

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(e / self.L for e in self.ells)


def capacity(v: float) -> float:
    """Channel capacity (1/2)ln(1+v) in nats per use."""
    _check_snr(v)
    return 0.5 * math.log1p(v)


def partial_capacity(alpha: float, v: float) -> float:
    """(1/2)ln(1+alpha*v): the rate obstacle for a fraction-alpha confusion."""
    _check_alpha(alpha)
    _check_snr(v)
    return 0.5 * math.log1p(alpha * v)


def spread_direct(alpha: float, v: float) -> float:
    """Spread alpha*v/(1+alpha*v) of the one-shot decoding statistic."""
    _check_alpha(alpha)
    _check_snr(v)
    return alpha * v / (1.0 + alpha * v)


def spread_refined(alpha: float, v: float) -> float:
    """Spread alpha*(1-alpha)*v/(1+alpha*v) after splitting the statistic.

    The extra (1-alpha) factor is what keeps the split bound useful for
    mistake fractions near one.  Vanishes at both endpoints.
    """
    _check_alpha(alpha)
    _check_snr(v)
    return alpha * (1.0 - alpha) * v / (1.0 + alpha * v)


def capacity_shape_gap(alpha: float, v: float) -> float:
    """Concave gap C_alpha - alpha*C, zero exactly at the endpoints."""
    return partial_capacity(alpha, v) - alpha * capacity(v)


def log_binomial(L: int, ell: int) -> float:
    """ln of (L choose ell) via log-gamma."""
    if not 0 <= ell <= L:
        raise ValueError(f"need 0 <= ell <= L, got ell={ell}, L={L}")
    return (math.lgamma(L + 1) - math.lgamma(ell + 1) - math.lgamma(L - ell + 1))


def combinatorial_rate(ell: int, L: int, n_real: float) -> float:
    """Per-symbol log count of fraction-ell/L confusions: ln(L choose ell)/n."""
    if n_real <= 0:
        raise ValueError(f"codelength must be positive, got {n_real}")
    return log_binomial(L, ell) / n_real


def min_gap(ell: int, L: int, n_real: float, v: float) -> float:
    """Smallest gap whose capped exponent cancels the combinatorial coefficient.

    Solves n * capped_exponent(gap, spread) = ln(L choose ell) with the
    refined spread, by bisection plus Newton polish.  The closed-form branch
    values (root of the interior or clamped formula) bracket the root.
    """
    if not 1 <= ell <= L - 1:
        raise ValueError(f"need 1 <= ell <= L-1, got ell={ell}, L={L}")
    r = combinatorial_rate(ell, L, n_real)
    s = spread_refined(ell / L, v)
    target = log_binomial(L, ell)

    f = lambda d: n_real * capped_deviation_exponent(d, s).value
    lo, hi = r, r - 0.5 * math.log1p(-s)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(3):
        slope = n_real * min(1.0, optimal_tilt(x, s)) if x > 0 else n_real
        x -= (f(x) - target) / slope
    return x


def min_gap_branch_formula(ell: int, L: int, n_real: float, v: float) -> float:
    """Closed-form value of the same gap via the inverse exponent.

    Uses the scaled inverse while the implied tilt stays below one, and the
    clamped-branch linear solution beyond.  Serves as a cross-check for
    min_gap, not as the production path.
    """
    if not 1 <= ell <= L - 1:
        raise ValueError(f"need 1 <= ell <= L-1, got ell={ell}, L={L}")
    r = combinatorial_rate(ell, L, n_real)
    s = spread_refined(ell / L, v)
    g = inverse_deviation_exponent(r)
    rho_sq = 1.0 - s
    if g < math.sqrt(s) / rho_sq:
        return math.sqrt(s) * g
    return r - 0.5 * math.log(rho_sq)


def shape_exponent(ell: int, L: int, v: float) -> float:
    """Capped exponent of the capacity-shape gap at the refined spread."""
    alpha = ell / L
    return capped_deviation_exponent(capacity_shape_gap(alpha, v),
                                     spread_refined(alpha, v)).value


def section_size_rate_finite(v: float, L: int, rate: float) -> float:
    """Smallest section size rate canceling every combinatorial coefficient.

    Exhaustive maximum of R*ln(L choose ell) / (shape_exponent * L * ln L)
    over the interior integer grid; no continuous optimization.
    """
    _check_snr(v)
    if L < 3:
        raise ValueError(f"need L >= 3, got {L}")
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    denom_scale = L * math.log(L)
    best = 0.0
    for ell in range(1, L):
        ratio = rate * log_binomial(L, ell) / (shape_exponent(ell, L, v) * denom_scale)
        if ratio > best:
            best = ratio
    return best


@functools.lru_cache(maxsize=1)
def snr_branch_point() -> float:
    """The snr near 15.8 solving (1+v)ln(1+v) = 3v, splitting the limit formula."""
    f = lambda v: (1.0 + v) * math.log1p(v) - 3.0 * v
    lo, hi = 10.0, 20.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def section_size_rate_limit(v: float, rate: float) -> float:
    """Large-L limit of the finite section size rate (continuous in v).

    Approximately 16/v^2 for small v (at rate C) and decreasing toward 1
    for large v.
    """
    _check_snr(v)
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    t = (1.0 + v) * math.log1p(v)
    if v < snr_branch_point():
        return rate * 8.0 * v * (1.0 + v) / (t - v) ** 2
    return rate * 2.0 * (1.0 + v) / (t - 2.0 * v)


def small_alpha_slope(v: float, rate: float, a: float) -> float:
    """Slope at alpha = 0 of the exponent surplus beyond the minimum gap."""
    _check_snr(v)
    if a <= 0:
        raise ValueError(f"section size rate must be positive, got {a}")
    return 0.5 * (v - math.log1p(v)) - math.sqrt(2.0 * v * rate / a)


def combinatorial_surplus_at_n(ell: int, L: int, n_real: float, v: float) -> float:
    """n * shape_exponent - ln(L choose ell) at an explicit codelength."""
    if not 0 <= ell <= L:
        raise ValueError(f"need 0 <= ell <= L, got ell={ell}")
    if ell in (0, L):
        return 0.0
    return n_real * shape_exponent(ell, L, v) - log_binomial(L, ell)


def combinatorial_surplus(ell: int, code: CodeSpec, v: float) -> float:
    """n * shape_exponent - ln(L choose ell); nonnegative iff a suffices.

    Zero at the endpoints by convention (both constituents vanish there).
    """
    return combinatorial_surplus_at_n(ell, code.L, code.n_real, v)
