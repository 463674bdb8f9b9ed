"""Tests of equal predictive ability on a loss-differential series.

All procedures share one statistic shape, sqrt(P) * mean(d) / sigma_hat,
and differ in the long-run variance estimator sigma_hat^2 and the reference
distribution used to judge it. Standard-asymptotics versions hold the
bandwidth negligible relative to P and compare against the normal (or a
degrees-of-freedom-corrected t); fixed-smoothing versions treat the
bandwidth fraction as fixed and use critical values that grow with it.
Every test is two-sided.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .lrv import (
    LrvEstimate,
    bandwidth,
    lrv_bartlett,
    lrv_ewc,
    lrv_rectangular,
    lrv_wpe,
)
from .series import as_loss_series

__all__ = [
    "DegenerateVarianceError",
    "UnsupportedLevelError",
    "TestOutcome",
    "ImPartition",
    "dm_statistic",
    "dm_test_r",
    "dm_test_m",
    "dm_test_bt",
    "dm_test_bt_fb",
    "dm_test_ewc_fb",
    "dm_test_wpe_fb",
    "dm_test_im",
    "fixed_b_critical_value",
    "im_partition",
]


class DegenerateVarianceError(ArithmeticError):
    """A variance estimate came out nonpositive, so no statistic exists."""

    def __init__(self, kernel: str, bandwidth: int, value: float):
        self.kernel = kernel
        self.bandwidth = bandwidth
        self.value = value
        super().__init__(
            f"nonpositive variance estimate {value:g} "
            f"({kernel} kernel, bandwidth {bandwidth}); statistic undefined"
        )


class UnsupportedLevelError(ValueError):
    """The procedure has no critical values at the requested level."""


@dataclass(frozen=True)
class TestOutcome:
    """Result of one equal-predictive-ability test.

    ``rej`` is True exactly when ``abs(stat) > critical_value``; whenever a
    p-value is defined it agrees with that decision at level ``cl``.
    ``pval`` is None for procedures whose reference distribution is known
    only through tabulated critical values. ``df`` is None under normal
    asymptotics.
    """

    method: str
    stat: float
    rej: bool
    cl: float
    critical_value: float
    pval: float | None = None
    bandwidth: int | None = None
    df: float | None = None


def _check_level(cl: float) -> None:
    if not 0.0 < cl < 1.0:
        raise ValueError(f"significance level must lie in (0, 1), got {cl}")


def dm_statistic(d, lrv: LrvEstimate) -> float:
    """sqrt(P) * mean(d) / sqrt(lrv.value), the common studentized statistic.

    Raises :class:`DegenerateVarianceError` when the variance estimate is
    nonpositive rather than fabricating a sign via a complex root.
    """
    d = as_loss_series(d)
    if lrv.value <= 0.0:
        raise DegenerateVarianceError(lrv.kernel, lrv.bandwidth, lrv.value)
    return float(np.sqrt(d.size) * d.mean() / np.sqrt(lrv.value))


def _normal_outcome(method: str, stat: float, cl: float, bw: int | None) -> TestOutcome:
    pval = float(2.0 * stats.norm.sf(abs(stat)))
    crit = float(stats.norm.ppf(1.0 - cl / 2.0))
    return TestOutcome(
        method=method,
        stat=stat,
        rej=abs(stat) > crit,
        cl=cl,
        critical_value=crit,
        pval=pval,
        bandwidth=bw,
    )


def _student_outcome(method: str, stat: float, cl: float, df: float, bw: int | None) -> TestOutcome:
    pval = float(2.0 * stats.t.sf(abs(stat), df))
    crit = float(stats.t.ppf(1.0 - cl / 2.0, df))
    return TestOutcome(
        method=method,
        stat=stat,
        rej=abs(stat) > crit,
        cl=cl,
        critical_value=crit,
        pval=pval,
        bandwidth=bw,
        df=df,
    )


def dm_test_r(d, h: int = 1, cl: float = 0.05) -> TestOutcome:
    """Original test: rectangular variance truncated at h - 1, normal critical values.

    For an h-step forecast the loss differential is treated as MA(h-1), so
    the variance sums the first h - 1 autocovariances with flat weights.
    """
    _check_level(cl)
    est = lrv_rectangular(d, h)
    stat = dm_statistic(d, est)
    return _normal_outcome("dm_r", stat, cl, est.bandwidth)


def dm_test_m(d, h: int = 1, cl: float = 0.05) -> TestOutcome:
    """Small-sample modification: scaled statistic against t with P - 1 degrees of freedom.

    The statistic is dm_test_r's multiplied by
    sqrt((P + 1 - 2h + h(h-1)/P) / P), which offsets the finite-sample bias
    of the truncated variance estimator under multi-step forecasting.
    """
    _check_level(cl)
    d = as_loss_series(d)
    P = d.size
    factor_sq = (P + 1.0 - 2.0 * h + h * (h - 1.0) / P) / P
    if factor_sq <= 0.0:
        raise ValueError(
            f"small-sample correction factor is nonpositive at P={P}, h={h}; "
            "the horizon is too large for this sample"
        )
    est = lrv_rectangular(d, h)
    stat = float(np.sqrt(factor_sq)) * dm_statistic(d, est)
    return _student_outcome("dm_m", stat, cl, P - 1, est.bandwidth)


def _resolve_lag_bandwidth(P: int, M: int | None, rule: str) -> int:
    if M is None:
        return bandwidth(rule, P)
    if not 1 <= M <= P - 1:
        raise ValueError(f"bandwidth must lie in [1, {P - 1}], got {M}")
    return int(M)


def dm_test_bt(d, M: int | None = None, rule: str = "nw1994", cl: float = 0.05) -> TestOutcome:
    """Bartlett-kernel test under standard asymptotics (normal critical values).

    ``M`` overrides the automatic bandwidth; otherwise ``rule`` picks it
    (default the data-size rule ceil(4 (P/100)^{2/9})). The outcome is
    labelled ``dm_nw_l`` when the wider ceil(1.3 sqrt(P)) rule is selected
    automatically, ``dm_nw`` otherwise.
    """
    _check_level(cl)
    d = as_loss_series(d)
    resolved = _resolve_lag_bandwidth(d.size, M, rule)
    est = lrv_bartlett(d, resolved)
    stat = dm_statistic(d, est)
    method = "dm_nw_l" if (M is None and rule == "llsw") else "dm_nw"
    return _normal_outcome(method, stat, cl, resolved)


def fixed_b_critical_value(b: float) -> float:
    """Two-sided 5% fixed-b critical value for the Bartlett-kernel statistic.

    Cubic response surface in the bandwidth fraction b = M/P:
    1.9600 + 2.9694 b + 0.4160 b^2 - 0.5324 b^3, valid on [0, 1]. At b = 0
    it collapses to the normal critical value; at b = 1 it reaches 4.8130.
    """
    if not 0.0 <= b <= 1.0:
        raise ValueError(f"bandwidth fraction must lie in [0, 1], got {b}")
    return 1.9600 + 2.9694 * b + 0.4160 * b**2 - 0.5324 * b**3


def dm_test_bt_fb(d, M: int | None = None, rule: str = "llsw", cl: float = 0.05) -> TestOutcome:
    """Bartlett-kernel test under fixed-b asymptotics.

    Same statistic as :func:`dm_test_bt` but compared against the fixed-b
    critical value at b = M/P, so a generous bandwidth no longer inflates
    size. Only the 5% level is tabulated; other levels raise
    :class:`UnsupportedLevelError`. No p-value is produced.
    """
    if cl != 0.05:
        raise UnsupportedLevelError(
            f"fixed-b critical values are tabulated for cl=0.05 only, got cl={cl}"
        )
    d = as_loss_series(d)
    resolved = _resolve_lag_bandwidth(d.size, M, rule)
    est = lrv_bartlett(d, resolved)
    stat = dm_statistic(d, est)
    crit = fixed_b_critical_value(resolved / d.size)
    return TestOutcome(
        method="dm_fb",
        stat=stat,
        rej=abs(stat) > crit,
        cl=cl,
        critical_value=crit,
        pval=None,
        bandwidth=resolved,
    )


def dm_test_ewc_fb(d, B: int | None = None, cl: float = 0.05) -> TestOutcome:
    """Equal-weighted cosine test with its exact fixed-smoothing reference, t with B df.

    With B cosine coefficients the variance estimate is an average of B
    asymptotically independent chi-squared(1) terms, making the studentized
    statistic t-distributed with B degrees of freedom. Default
    B = floor(0.4 P^{2/3}).
    """
    _check_level(cl)
    d = as_loss_series(d)
    P = d.size
    if B is None:
        B = bandwidth("ewc_default", P)
    elif not 1 <= B <= P - 1:
        raise ValueError(f"number of basis functions must lie in [1, {P - 1}], got {B}")
    est = lrv_ewc(d, B)
    stat = dm_statistic(d, est)
    return _student_outcome("dm_ewc", stat, cl, B, B)


def dm_test_wpe_fb(d, m: int | None = None, cl: float = 0.05) -> TestOutcome:
    """Weighted-periodogram test with fixed-smoothing reference t with 2m df.

    Averaging m periodogram ordinates gives a variance estimate with 2m
    effective chi-squared degrees of freedom. Default m = floor(P^{1/3}).
    """
    _check_level(cl)
    d = as_loss_series(d)
    P = d.size
    if m is None:
        m = bandwidth("wpe_default", P)
    elif not 1 <= m <= P // 2:
        raise ValueError(f"number of ordinates must lie in [1, {P // 2}], got {m}")
    est = lrv_wpe(d, m)
    stat = dm_statistic(d, est)
    return _student_outcome("dm_wpe", stat, cl, 2 * m, m)


@dataclass(frozen=True)
class ImPartition:
    """Balanced partition of P observations into q contiguous blocks."""

    q: int
    block_sizes: tuple[int, ...]


def im_partition(P: int, q: int) -> ImPartition:
    """Split ``P`` observations into ``q`` contiguous blocks as evenly as possible.

    With P = q*b0 + r, the first r blocks get b0 + 1 observations and the
    remaining q - r blocks get b0, so sizes differ by at most one and sum
    to P exactly.
    """
    if q < 2:
        raise ValueError(f"need at least 2 blocks, got {q}")
    if q > P:
        raise ValueError(f"cannot split {P} observations into {q} blocks")
    b0, r = divmod(P, q)
    sizes = (b0 + 1,) * r + (b0,) * (q - r)
    return ImPartition(q=q, block_sizes=sizes)


def dm_test_im(d, q: int = 2, cl: float = 0.05) -> TestOutcome:
    """Block t-test: an ordinary t-test on q contiguous block means.

    The series is split into q balanced blocks, each block mean is treated
    as one approximately independent observation, and the usual one-sample
    t statistic with q - 1 degrees of freedom is applied. Exact under
    Gaussian independence for any q, robust to dependence for modest q.
    """
    _check_level(cl)
    d = as_loss_series(d)
    part = im_partition(d.size, q)
    starts = np.concatenate(([0], np.cumsum(part.block_sizes[:-1])))
    means = np.add.reduceat(d, starts) / np.asarray(part.block_sizes, dtype=float)
    grand = means.mean()
    s2 = float(np.sum((means - grand) ** 2) / (q - 1))
    if s2 <= 0.0:
        raise DegenerateVarianceError("block-means", q, s2)
    stat = float(grand / np.sqrt(s2 / q))
    return _student_outcome("dm_im", stat, cl, q - 1, q)
