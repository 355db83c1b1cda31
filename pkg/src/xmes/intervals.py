"""Confidence intervals for shortfall estimates and serial variance inflation.

Both interval constructions exponentiate the extrapolation base
n(1-tau)/k by a bias term plus or minus a normal quantile times a
variance term over sqrt(k).  The basic interval uses the plug-in bias
b = gamma beta (n/k)^rho / (1-rho) and variance gamma; the refined one
corrects both for the contribution of the anchor order statistic through
c = sqrt(k)/log(k/(n(1-tau))).  For adjusted-variant estimates the bias
term is zero.  Under serial dependence the variance term is inflated by
sqrt(1 + 2 sum_t r_t(1,1)) with plug-in joint tail exceedance rates r_t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from ._kernels import joint_exceed_counts
from .errors import HeavyTailUnbounded, InvalidAlpha, InvalidInput, InvalidLag, InvalidTau
from .estimators import VARIANT_ADJUSTED, ConfidenceBand, MesEstimate, TailFit
from .radial import RadialSample, check_k

KIND_BASIC = "basic"
KIND_REFINED = "refined"


@dataclass(frozen=True)
class SerialAdjustment:
    """Lag-wise joint tail exceedance rates and the implied variance inflation."""

    r_hat: np.ndarray
    inflation: float
    lag: int


def default_serial_lag(n: int) -> int:
    """Default truncation lag min(floor(sqrt(n)), 50)."""
    return min(int(math.isqrt(n)), 50)


def serial_r_hat(r: RadialSample, k: int, t: int) -> float:
    """Fraction (1/k) of index pairs (i, i+t) whose radii both exceed R_(n-k)."""
    k = check_k(k, r.n)
    if not 1 <= t < r.n:
        raise InvalidLag(f"lag t={t} outside [1, {r.n - 1}]")
    threshold = r.threshold(k)
    counts = joint_exceed_counts(r.radii, threshold, np.array([t], dtype=np.int64))
    return float(counts[0]) / k


def variance_inflation(r: RadialSample, k: int, lag: int) -> SerialAdjustment:
    """Plug-in inflation 1 + 2 sum_{t<=lag} r_t(1,1); lag 0 recovers the iid case."""
    k = check_k(k, r.n)
    if lag < 0:
        raise InvalidLag(f"truncation lag must be >= 0, got {lag}")
    if lag >= r.n:
        raise InvalidLag(f"truncation lag {lag} must be < n={r.n}")
    if lag == 0:
        return SerialAdjustment(r_hat=np.zeros(0), inflation=1.0, lag=0)
    lags = np.arange(1, lag + 1, dtype=np.int64)
    counts = joint_exceed_counts(r.radii, r.threshold(k), lags)
    r_hat = counts / k
    return SerialAdjustment(r_hat=r_hat, inflation=float(1.0 + 2.0 * r_hat.sum()), lag=int(lag))


def confidence_interval(
    est: MesEstimate,
    fit: TailFit,
    kind: str = KIND_REFINED,
    alpha: float = 0.05,
    serial: SerialAdjustment | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-component (lower, upper) bounds for a shortfall estimate.

    Parameters
    ----------
    est : MesEstimate
        Point estimate; adjusted variants get a zero bias term.
    fit : TailFit
        Hill estimate (and, for plain variants, second-order parameters).
    kind : str
        ``"basic"`` or ``"refined"``.
    alpha : float
        Two-sided miscoverage level in (0, 1).
    serial : SerialAdjustment, optional
        Multiplies the variance term by sqrt(inflation).
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha={alpha} outside (0, 1)")
    if kind not in (KIND_BASIC, KIND_REFINED):
        raise InvalidInput(f"unknown interval kind {kind!r}")
    gamma = fit.gamma_hat
    if gamma >= 1.0:
        raise HeavyTailUnbounded(f"gamma_hat = {gamma:.4f} >= 1")
    n, k, tau = est.n, est.k, est.tau
    extrapolation = n * (1.0 - tau) / k

    if est.variant == VARIANT_ADJUSTED:
        bias = 0.0
    else:
        if fit.second_order is None:
            raise InvalidInput("plain-variant intervals need second-order parameters")
        so = fit.second_order
        bias = gamma * so.beta * (n / k) ** so.rho / (1.0 - so.rho)

    sqrt_k = math.sqrt(k)
    if kind == KIND_BASIC:
        variance_term = gamma
    else:
        log_ratio = math.log(k / (n * (1.0 - tau)))
        if log_ratio <= 0.0:
            raise InvalidTau("refined interval needs extrapolation, k > n(1-tau)")
        c = sqrt_k / log_ratio
        bias = bias * (1.0 + (c / sqrt_k) / (1.0 - gamma))
        variance_term = gamma * math.sqrt(
            1.0 + 2.0 * c / ((1.0 - gamma) * sqrt_k) + 2.0 * c * c / k
        )
    if serial is not None:
        variance_term *= math.sqrt(serial.inflation)

    z = float(ndtri(1.0 - alpha / 2.0))
    half_width = z * variance_term / sqrt_k
    bound_a = est.theta_hat * extrapolation ** (bias + half_width)
    bound_b = est.theta_hat * extrapolation ** (bias - half_width)
    return np.minimum(bound_a, bound_b), np.maximum(bound_a, bound_b)


def attach_ci(
    est: MesEstimate,
    fit: TailFit,
    kind: str = KIND_REFINED,
    alpha: float = 0.05,
    serial: SerialAdjustment | None = None,
) -> MesEstimate:
    """Return a copy of the estimate with the interval bounds attached."""
    lower, upper = confidence_interval(est, fit, kind=kind, alpha=alpha, serial=serial)
    return est.with_ci(ConfidenceBand(lower=lower, upper=upper, alpha=alpha, kind=kind))
