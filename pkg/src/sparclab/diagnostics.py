"""Codeword-power statistics and column-geometry checks for dictionaries.

Average power over the message ensemble (signed and unsigned forms), the
worst-case codeword power envelope, column norm and pairwise inner-product
concentration, and per-subset conditional power statistics.  All norms use
the (1/n) normalization; bounds are one-sided envelopes valid except on an
event of the stated probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codec import Dictionary, SparseCoefficients
from .exponents import inverse_chi_square_exponent, inverse_deviation_exponent
from .geometry import ChannelSpec, CodeSpec


def average_power_signed(dic: Dictionary) -> float:
    """Ensemble-average codeword power for the signed code.

    Signs kill the cross terms, leaving the per-section average column
    power summed over sections.
    """
    col_power = np.mean(dic.entries ** 2, axis=0)
    return float(dic.L * col_power.mean())


def signed_power_sd(P: float, L: int, B: int, n: int) -> float:
    """Sampling sd of the signed ensemble average over dictionary draws."""
    return P * math.sqrt(2.0 / (L * B * n))


def average_power_unsigned(dic: Dictionary) -> float:
    """Ensemble-average codeword power for the unsigned code.

    Squared norm of the mean codeword plus the average within-section
    variance; the section means no longer cancel without signs.
    """
    n = dic.n
    total_mean = np.zeros(n)
    variance_part = 0.0
    for i in range(dic.L):
        sec = dic.section(i)
        mean_col = sec.mean(axis=1)
        total_mean += mean_col
        variance_part += float(np.mean((sec - mean_col[:, None]) ** 2, axis=0).mean())
    return variance_part + float(np.mean(total_mean ** 2))


def unsigned_power_sd(P: float, L: int, B: int, n: int) -> float:
    """Sampling sd of the unsigned ensemble average over dictionary draws."""
    return P * math.sqrt(2.0 / n) * math.sqrt(1.0 / (L * B) + (1.0 - 1.0 / L) / B ** 2)


def worst_case_power_bound(channel: ChannelSpec, code: CodeSpec,
                           epsilon: float) -> float:
    """Envelope on the maximum codeword power, violated with prob <= epsilon.

    Uses the analysis codelength n_real; the integer-length matrix only
    tightens the statement.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    P = channel.P
    arg = code.rate + math.log(1.0 / epsilon) / code.n_real
    return P + P * inverse_chi_square_exponent(arg)


@dataclass(frozen=True)
class ColumnGeometry:
    max_column_power: float
    column_power_bound: float
    max_abs_inner_product: float | None   # None when there is a single column
    inner_product_bound: float
    epsilon: float

    @property
    def column_power_ok(self) -> bool:
        return self.max_column_power <= self.column_power_bound

    @property
    def inner_product_ok(self) -> bool:
        return (self.max_abs_inner_product is None
                or self.max_abs_inner_product <= self.inner_product_bound)


def column_geometry(dic: Dictionary, epsilon: float) -> ColumnGeometry:
    """Empirical column-power and inner-product maxima against their envelopes."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    n = dic.n
    N = dic.num_columns
    P_over_L = dic.entry_variance

    col_power = np.mean(dic.entries ** 2, axis=0)
    power_bound = P_over_L * (1.0 + inverse_chi_square_exponent(
        math.log(N / epsilon) / n))

    if N < 2:
        max_ip = None
    else:
        gram = (dic.entries.T @ dic.entries) / n
        off = gram[~np.eye(N, dtype=bool)]
        max_ip = float(np.abs(off).max())
    ip_bound = P_over_L * inverse_deviation_exponent(
        math.log(N * N / epsilon) / n)

    return ColumnGeometry(
        max_column_power=float(col_power.max()),
        column_power_bound=power_bound,
        max_abs_inner_product=max_ip,
        inner_product_bound=ip_bound,
        epsilon=epsilon,
    )


def codeword_power_stats(dic: Dictionary,
                         S: SparseCoefficients) -> tuple[float, float]:
    """Conditional mean and variance of codeword power over random signs.

    Mean is the sum of selected column powers; the variance comes from the
    pairwise inner products of the selected columns.
    """
    if S.L != dic.L or any(j >= dic.B for j in S.indices):
        raise ValueError("coefficients do not match the dictionary layout")
    cols = dic.entries[:, [i * dic.B + j for i, j in enumerate(S.indices)]]
    gram = (cols.T @ cols) / dic.n
    mean = float(np.trace(gram))
    off = gram[~np.eye(S.L, dtype=bool)]
    variance = 2.0 * float(np.sum(off ** 2))
    return mean, variance


@dataclass(frozen=True)
class PowerReport:
    """Bundle of power diagnostics for one dictionary draw."""

    signed: bool
    avg_power: float
    analytic_mean: float
    analytic_sd: float
    worst_case_bound: float
    max_column_power: float
    column_power_bound: float
    max_abs_inner_product: float | None
    inner_product_bound: float
    epsilon: float
    avg_power_ok: bool
    column_power_ok: bool
    inner_product_ok: bool


def power_report(dic: Dictionary, channel: ChannelSpec, code: CodeSpec,
                 epsilon: float = 0.01) -> PowerReport:
    """Run every power check on one dictionary at the given envelope level.

    The average-power flag tests a four-sigma band around the target power.
    """
    P = channel.P
    n = dic.n
    if code.signed:
        avg = average_power_signed(dic)
        sd = signed_power_sd(P, dic.L, dic.B, n)
    else:
        avg = average_power_unsigned(dic)
        sd = unsigned_power_sd(P, dic.L, dic.B, n)
    geom = column_geometry(dic, epsilon)
    return PowerReport(
        signed=code.signed,
        avg_power=avg,
        analytic_mean=P,
        analytic_sd=sd,
        worst_case_bound=worst_case_power_bound(channel, code, epsilon),
        max_column_power=geom.max_column_power,
        column_power_bound=geom.column_power_bound,
        max_abs_inner_product=geom.max_abs_inner_product,
        inner_product_bound=geom.inner_product_bound,
        epsilon=epsilon,
        avg_power_ok=abs(avg - P) <= 4.0 * sd,
        column_power_ok=geom.column_power_ok,
        inner_product_ok=geom.inner_product_ok,
    )
