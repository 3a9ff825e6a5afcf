"""Error-probability bounds for least-squares decoding of superposition codes.

Per mistake-fraction bounds (the single-term union bound and the two-term
split bound with an optimized intermediate threshold), their aggregation
into a mistake-tail probability, the minimal section size rate meeting a
target bound level, the achievable composite-rate search, and the
finite-blocklength normal-approximation comparator.

Everything is computed in log space and exponentiated once, so values like
1e-12 are exact rather than underflow artifacts; probabilities are clamped
to [0, 1] at the boundary only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exponents import capped_deviation_exponent
from .geometry import (
    ChannelSpec,
    CodeSpec,
    capacity,
    log_binomial,
    partial_capacity,
    spread_direct,
    spread_refined,
)
from .normal import q_inverse

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class InfeasibleError(RuntimeError):
    """No admissible parameter meets the requested bound level."""


@dataclass(frozen=True)
class BoundQuery:
    """Channel, code, and threshold context for the per-fraction bounds.

    The threshold t is the decoder tolerance in nats (delta0 / (2 sigma^2)).
    """

    channel: ChannelSpec
    code: CodeSpec
    t: float = 0.0
    alpha0: float | None = None
    epsilon: float | None = None

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"threshold must be nonnegative, got {self.t}")
        if self.alpha0 is not None and not 1 <= self.alpha0 * self.code.L:
            raise ValueError("alpha0 must be at least 1/L")
        if self.epsilon is not None and not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")


@dataclass(frozen=True)
class SectionBound:
    """Both bounds for one mistake count, with the split-bound internals."""

    ell: int
    alpha: float
    union_prob: float
    union_log: float
    split_prob: float
    split_log: float
    split_main_log: float
    split_star_log: float
    t_alpha_opt: float

    def chosen(self, policy: str = "split") -> float:
        """Per-count bound under the given aggregation policy.

        "split" takes the two-term bound alone (the aggregation the fig2
        curve family and its tail summary are built on); "min" takes the
        tighter minimum of both bounds.  At moderate rate fractions the
        single-term bound is dramatically tighter, so the two policies
        differ by many orders of magnitude; both are valid upper bounds.
        """
        if policy == "split":
            return self.split_prob
        if policy == "min":
            return min(self.union_prob, self.split_prob)
        raise ValueError(f"unknown policy {policy!r}")


@dataclass(frozen=True)
class TailBound:
    """Aggregated mistake-tail bound: sum of per-count chosen bounds."""

    ell0: int
    per_ell: tuple[SectionBound, ...]
    total: float
    policy: str = "split"


def _capped_exponent_vec(delta: np.ndarray, spread: float) -> np.ndarray:
    """Vectorized tilt-capped exponent; zero for nonpositive gaps."""
    d = np.maximum(delta, 0.0)
    if spread == 0.0:
        return d
    q = 4.0 * d * d / spread
    root = np.sqrt(1.0 + q)
    lam = 2.0 * d / (spread * (1.0 + root))
    gamma = q / (root + 1.0)
    interior = 0.5 * (gamma - np.log1p(0.5 * gamma))
    clamped = d + 0.5 * math.log1p(-spread)
    return np.where(lam >= 1.0, clamped, interior)


def _exponent_vec(delta: np.ndarray, spread: float) -> np.ndarray:
    """Vectorized unrestricted exponent; zero for nonpositive gaps."""
    d = np.maximum(delta, 0.0)
    q = 4.0 * d * d / spread
    gamma = q / (np.sqrt(1.0 + q) + 1.0)
    return 0.5 * (gamma - np.log1p(0.5 * gamma))


def _union_log(ell: int, L: int, n: float, v: float, rate: float, t: float) -> float:
    """ln of the single-term bound before clamping."""
    alpha = ell / L
    gap = partial_capacity(alpha, v) - alpha * rate - t
    if gap <= 0.0:
        return log_binomial(L, ell)
    expo = capped_deviation_exponent(gap, spread_direct(alpha, v)).value
    return log_binomial(L, ell) - n * expo


def _split_terms(t_alpha, n, t, log_comb, s_main, s_star, room):
    """Log of the two split-bound terms at intermediate thresholds t_alpha."""
    main = log_comb - n * _capped_exponent_vec(room - (t_alpha - t), s_main)
    star = -n * _exponent_vec(t_alpha - t, s_star)
    return main, star


def _split_eval(ell: int, L: int, n: float, v: float, rate: float, t: float,
                grid_points: int = 256):
    """Optimize the split bound over the open threshold interval.

    Uniform grid then golden-section refinement around the grid minimum.
    Returns (log_total, t_alpha, log_main, log_star).
    """
    alpha = ell / L
    head = partial_capacity(alpha, v) - alpha * rate
    room = head - t
    if room <= 0.0:
        return 0.0, t, 0.0, 0.0

    log_comb = log_binomial(L, ell)
    s_main = spread_refined(alpha, v)
    s_star = alpha * alpha * v / (1.0 + alpha * alpha * v)

    ks = np.arange(1, grid_points + 1, dtype=np.float64)
    xs = t + room * ks / (grid_points + 1)
    main, star = _split_terms(xs, n, t, log_comb, s_main, s_star, room)
    tot = np.logaddexp(main, star)
    j = int(np.argmin(tot))

    lo = xs[j - 1] if j > 0 else t + 1e-12 * room
    hi = xs[j + 1] if j < grid_points - 1 else t + room * (1.0 - 1e-12)

    def f(x: float) -> float:
        m, s = _split_terms(np.array([x]), n, t, log_comb, s_main, s_star, room)
        return float(np.logaddexp(m, s)[0])

    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(60):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
        if b - a <= 1e-14 * room:
            break
    x_opt = c if fc < fd else d
    if float(tot[j]) < min(fc, fd):
        x_opt = float(xs[j])
    m, s = _split_terms(np.array([x_opt]), n, t, log_comb, s_main, s_star, room)
    return float(np.logaddexp(m, s)[0]), float(x_opt), float(m[0]), float(s[0])


def _query_params(q: BoundQuery) -> tuple[int, float, float, float, float]:
    return q.code.L, q.code.n_real, q.channel.snr, q.code.rate, q.t


def union_bound(ell: int, q: BoundQuery) -> float:
    """Single-term bound on the probability of exactly ell/L mistakes."""
    L, n, v, rate, t = _query_params(q)
    if not 1 <= ell <= L:
        raise ValueError(f"need 1 <= ell <= L, got {ell}")
    return min(1.0, math.exp(min(0.0, _union_log(ell, L, n, v, rate, t))))


def split_bound(ell: int, q: BoundQuery,
                grid_points: int = 256) -> tuple[float, float]:
    """Two-term bound minimized over the intermediate threshold.

    Returns (probability, optimizing threshold).  Degenerates to 1 when the
    threshold leaves no interval to optimize over.
    """
    L, n, v, rate, t = _query_params(q)
    if not 1 <= ell <= L:
        raise ValueError(f"need 1 <= ell <= L, got {ell}")
    log_total, t_opt, _, _ = _split_eval(ell, L, n, v, rate, t, grid_points)
    return min(1.0, math.exp(min(0.0, log_total))), t_opt


def section_bound(ell: int, q: BoundQuery,
                  grid_points: int = 256) -> SectionBound:
    """Full per-fraction record: both bounds plus split internals."""
    L, n, v, rate, t = _query_params(q)
    if not 1 <= ell <= L:
        raise ValueError(f"need 1 <= ell <= L, got {ell}")
    u_log = _union_log(ell, L, n, v, rate, t)
    s_log, t_opt, m_log, st_log = _split_eval(ell, L, n, v, rate, t, grid_points)
    return SectionBound(
        ell=ell,
        alpha=ell / L,
        union_prob=min(1.0, math.exp(min(0.0, u_log))),
        union_log=u_log,
        split_prob=min(1.0, math.exp(min(0.0, s_log))),
        split_log=s_log,
        split_main_log=m_log,
        split_star_log=st_log,
        t_alpha_opt=t_opt,
    )


def mistake_tail_bound(ell0: int, q: BoundQuery, grid_points: int = 256,
                       policy: str = "split") -> TailBound:
    """Bound on P[mistakes >= ell0]: per-count bounds summed, clamped to 1."""
    L = q.code.L
    if not 1 <= ell0 <= L:
        raise ValueError(f"need 1 <= ell0 <= L, got {ell0}")
    per = tuple(section_bound(ell, q, grid_points) for ell in range(ell0, L + 1))
    return TailBound(ell0=ell0, per_ell=per,
                     total=min(1.0, sum(b.chosen(policy) for b in per)),
                     policy=policy)


def subset_rate(alpha: float, N: int, L: int, rate: float) -> float:
    """Rate term replacing alpha*R when all size-L subsets are codewords."""
    if L > N:
        raise ValueError(f"need L <= N, got L={L}, N={N}")
    ell = round(alpha * L)
    if abs(alpha * L - ell) > 1e-9:
        raise ValueError(f"alpha*L must be an integer, got {alpha * L}")
    if ell == 0:
        return 0.0
    return rate * log_binomial(N - L, ell) / log_binomial(N, L)


def min_section_size_rate_for_target(v: float, L: int, rate: float,
                                     alpha0: float, epsilon: float,
                                     a_max: float = 50.0,
                                     tol: float = 1e-6) -> float:
    """Smallest section size rate pushing every per-count bound below epsilon.

    Feasibility is monotone in a (larger a means longer codewords), so this
    is a bracketed bisection, re-deriving n = a L ln L / R at each probe.
    Raises InfeasibleError when even a_max fails.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    ell0 = max(1, math.ceil(alpha0 * L - 1e-9))
    log_eps = math.log(epsilon)

    def feasible(a: float) -> bool:
        n = a * L * math.log(L) / rate
        for ell in range(ell0, L + 1):
            u = _union_log(ell, L, n, v, rate, 0.0)
            if u <= log_eps:
                continue
            s, _, _, _ = _split_eval(ell, L, n, v, rate, 0.0)
            # compare clamped log probabilities, so epsilon = 1 always passes
            if min(u, s, 0.0) > log_eps:
                return False
        return True

    a_lo = 1e-6
    if feasible(a_lo):
        return a_lo
    if not feasible(a_max):
        raise InfeasibleError(
            f"no section size rate up to {a_max} meets epsilon={epsilon} "
            f"at v={v}, L={L}, rate={rate}, alpha0={alpha0}")
    lo, hi = a_lo, a_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def next_power_of_two(x: int) -> int:
    return 1 << max(1, (int(x) - 1)).bit_length()


@dataclass(frozen=True)
class AchievableRate:
    """Best composite rate found on the declared search grid."""

    R_comp: float
    R_inner: float
    alpha0: float
    tail_total: float
    B: int
    n_real: float


def achievable_rate(v: float, L: int, a: float, epsilon: float,
                    rate_points: int = 200, alpha0_cap: float = 0.25,
                    grid_points: int = 256,
                    policy: str = "split") -> AchievableRate:
    """Maximize the composite rate (1 - 2 alpha0) R subject to the tail bound.

    The section size is B = ceil(L^a) rounded up to a power of two.  The
    declared search grid is rate_points interior points of (0.3 C, C) for
    the inner rate and integer multiples of 1/L up to alpha0_cap for the
    outer mistake-fraction budget; the mistake-tail bound at ell0 =
    alpha0 L must stay at or below epsilon.  Returns a zero rate when no
    grid point is feasible.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    B = next_power_of_two(math.ceil(L ** a))
    C = capacity(v)
    ell0_max = max(1, math.floor(alpha0_cap * L))
    log_n_bits = L * math.log(B)

    best = AchievableRate(0.0, 0.0, 0.0, 1.0, B, math.inf)
    rates = np.linspace(0.3 * C, C, rate_points + 2)[1:-1]
    for rate in rates:
        n = log_n_bits / rate
        chosen_logs = []
        for ell in range(1, L + 1):
            s, _, _, _ = _split_eval(ell, L, n, v, rate, 0.0, grid_points)
            if policy == "min":
                s = min(s, _union_log(ell, L, n, v, rate, 0.0))
            chosen_logs.append(s)
        probs = np.exp(np.minimum(chosen_logs, 0.0))
        tails = np.minimum(1.0, np.cumsum(probs[::-1])[::-1])
        for ell0 in range(1, ell0_max + 1):
            if tails[ell0 - 1] <= epsilon:
                alpha0 = ell0 / L
                r_comp = (1.0 - 2.0 * alpha0) * float(rate)
                if r_comp > best.R_comp:
                    best = AchievableRate(r_comp, float(rate), alpha0,
                                          float(tails[ell0 - 1]), B, float(n))
                break
    return best


def channel_dispersion(v: float) -> float:
    """Dispersion (v/2)(v+2)/(v+1)^2 in nats^2 per channel use."""
    if v <= 0:
        raise ValueError(f"snr must be positive, got {v}")
    return 0.5 * v * (v + 2.0) / (v + 1.0) ** 2


def normal_approximation_rate(v: float, n: float, epsilon: float) -> float:
    """Benchmark rate C - sqrt(V/n) Qinv(eps) + ln(n)/(2n) in nats."""
    if n <= 1:
        raise ValueError(f"codelength must exceed 1, got {n}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    C = capacity(v)
    return C - math.sqrt(channel_dispersion(v) / n) * q_inverse(epsilon) \
        + 0.5 * math.log(n) / n
