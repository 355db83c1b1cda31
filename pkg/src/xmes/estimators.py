"""Tail index, extreme radial quantile and marginal shortfall estimators.

All estimators operate on the top-k radial order statistics of an (n, d)
panel.  The marginal shortfall of component j at extreme level tau is
estimated as

    theta_j(tau) = Q_R(tau) * w_j / (1 - gamma),

where gamma is the Hill estimate of the radial tail index, Q_R(tau) the
Weissman extrapolated radial quantile and w_j the mean of the j-th angular
component over radial exceedances.  The adjusted variants subtract the
second-order bias using (beta, rho) estimated at a separate, deeper level s.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from ._kernels import hill_curve
from .errors import (
    DegenerateTail,
    DegenerateThreshold,
    HeavyTailUnbounded,
    InvalidInput,
    InvalidK,
    InvalidTau,
)
from .radial import RadialSample, as_data_matrix, check_k, radial_decompose

RHO_MIN = -10.0
RHO_MAX = -0.01

VARIANT_PLAIN = "plain"
VARIANT_ADJUSTED = "adjusted"
VARIANT_EMP = "emp"
VARIANT_CAI = "cai"


@dataclass(frozen=True)
class SecondOrder:
    """Second-order tail parameters (beta, rho) estimated at level s."""

    beta: float
    rho: float
    s: int


@dataclass(frozen=True)
class TailFit:
    """Hill estimate at level k, optionally with second-order parameters."""

    gamma_hat: float
    k: int
    second_order: SecondOrder | None = None


@dataclass(frozen=True)
class ConfidenceBand:
    """Per-component interval bounds at confidence 1 - alpha."""

    lower: np.ndarray
    upper: np.ndarray
    alpha: float
    kind: str


@dataclass(frozen=True)
class MesEstimate:
    """Componentwise marginal shortfall estimate at level tau."""

    theta_hat: np.ndarray
    variant: str
    tau: float
    k: int
    n: int
    ci: ConfidenceBand | None = None

    @property
    def d(self) -> int:
        return self.theta_hat.shape[0]

    def with_ci(self, ci: ConfidenceBand) -> "MesEstimate":
        return replace(self, ci=ci)


def check_tau(tau: float) -> float:
    if not 0.0 < tau < 1.0:
        raise InvalidTau(f"tau={tau} outside (0, 1)")
    return float(tau)


def hill_estimate(r: RadialSample, k: int) -> float:
    """Weighted-log-spacings tail index from the top k radial order statistics.

    Computes sum_{i<=k} (i/k) ln(R_(n-i+1) / R_(n-i)), which telescopes to
    the classical mean of log-excesses over R_(n-k).
    """
    k = check_k(k, r.n)
    if r.sorted_radii[r.n - k - 1] <= 0.0:
        raise DegenerateTail(f"order statistic R_(n-k) = {r.sorted_radii[r.n - k - 1]} <= 0")
    out = hill_curve(r.sorted_radii, np.array([k], dtype=np.int64))
    return float(out[0])


def weissman_quantile(r: RadialSample, k: int, tau: float, gamma: float) -> float:
    """Extrapolated radial tau-quantile R_(n-k) * (n(1-tau)/k)^(-gamma)."""
    check_tau(tau)
    k = check_k(k, r.n)
    anchor = r.sorted_radii[r.n - k - 1]
    if anchor <= 0.0:
        raise DegenerateTail(f"order statistic R_(n-k) = {anchor} <= 0")
    return float(anchor * (r.n * (1.0 - tau) / k) ** (-gamma))


def exceedance_mask(r: RadialSample, k: int) -> np.ndarray:
    """Boolean mask of rows with radius strictly above R_(n-k).

    Warns when ties at the threshold make the count differ from k, and
    rejects thresholds where an exceeding radius is not strictly positive.
    """
    threshold = r.threshold(k)
    mask = r.radii > threshold
    count = int(mask.sum())
    if count == 0:
        raise DegenerateThreshold(f"no radii strictly above the threshold {threshold}")
    if threshold <= 0.0:
        raise DegenerateTail("exceeding radii must be strictly positive")
    if count != k:
        warnings.warn(
            f"exceedance count {count} != k={k}; ties at the radial threshold",
            stacklevel=3,
        )
    return mask


def angular_mean(x, r: RadialSample, k: int) -> np.ndarray:
    """Mean angular component over radial exceedances, (1/k) sum W_ij 1(R_i > R_(n-k))."""
    x = as_data_matrix(x)
    if x.shape != r.angular.shape:
        raise InvalidInput("panel shape does not match the radial sample")
    mask = exceedance_mask(r, k)
    return r.angular[mask].sum(axis=0) / k


def mes_estimate(x, k: int, tau: float) -> MesEstimate:
    """Plain marginal shortfall estimate Q_R(tau) * w_j / (1 - gamma) per component."""
    x = as_data_matrix(x)
    r = radial_decompose(x)
    gamma = hill_estimate(r, k)
    if gamma >= 1.0:
        raise HeavyTailUnbounded(f"gamma_hat = {gamma:.4f} >= 1")
    quantile = weissman_quantile(r, k, tau, gamma)
    w = angular_mean(x, r, k)
    theta = quantile * w / (1.0 - gamma)
    return MesEstimate(theta_hat=theta, variant=VARIANT_PLAIN, tau=tau, k=int(k), n=r.n)


def default_second_order_level(n: int) -> int:
    """Default deep level s for second-order estimation, floor(n^0.97) capped at n-2."""
    return min(int(n**0.97), n - 2)


def second_order_params(r: RadialSample, s: int) -> tuple[float, float]:
    """Estimate (beta, rho) of the radial tail from the top s order statistics.

    rho comes from the moment ratio of the first three powers of
    log-excesses (tuning exponent zero variant) as -|3(T-1)/(T-3)|, clamped
    to [-10, -0.01]; beta from weighted combinations of the scaled
    log-spacings U_i = i ln(R_(n-i+1)/R_(n-i)) discounted at rates
    (i/s)^(-rho) and (i/s)^(-2 rho).
    """
    n = r.n
    s = check_k(s, n)
    if s < 4:
        raise InvalidK(f"second-order level s={s} too small, need s >= 4")
    sorted_radii = r.sorted_radii
    base = sorted_radii[n - s - 1]
    if base <= 0.0:
        raise DegenerateTail(f"order statistic R_(n-s) = {base} <= 0")
    top_logs = np.log(sorted_radii[n - s - 1 :])  # ascending, s+1 values
    excesses = top_logs[1:][::-1] - top_logs[0]  # ln R_(n-i+1) - ln R_(n-s), i=1..s
    m1 = excesses.mean()
    m2 = (excesses**2).mean()
    m3 = (excesses**3).mean()
    if m1 <= 0.0 or m2 <= 0.0 or m3 <= 0.0:
        raise DegenerateTail("flat log-spacings; second-order parameters undefined")

    num = np.log(m1) - 0.5 * np.log(m2 / 2.0)
    den = 0.5 * np.log(m2 / 2.0) - np.log(m3 / 6.0) / 3.0
    if den == 0.0 or not np.isfinite(num / den):
        rho = RHO_MIN
    else:
        t_stat = num / den
        if abs(t_stat - 3.0) < 1e-12:
            rho = RHO_MIN
        else:
            rho = -abs(3.0 * (t_stat - 1.0) / (t_stat - 3.0))
    rho = float(np.clip(rho, RHO_MIN, RHO_MAX))

    i_arr = np.arange(1, s + 1, dtype=np.float64)
    u_i = i_arr * (top_logs[1:][::-1] - top_logs[:-1][::-1])  # i * ln(R_(n-i+1)/R_(n-i))
    rel = i_arr / s
    d_bar = np.mean(rel**(-rho))
    d0 = np.mean(u_i)
    d_rho = np.mean(rel**(-rho) * u_i)
    d_2rho = np.mean(rel**(-2.0 * rho) * u_i)
    denom = d_bar * d_rho - d_2rho
    if denom == 0.0:
        raise DegenerateTail("degenerate discounted log-spacings; beta undefined")
    beta = (s / n) ** rho * (d_bar * d0 - d_rho) / denom
    if not np.isfinite(beta):
        raise DegenerateTail("beta estimate is not finite")
    return float(beta), rho


def adjusted_gamma(gamma: float, beta: float, rho: float, n: int, k: int) -> float:
    """Bias-corrected tail index gamma * (1 - beta (n/k)^rho / (1 - rho))."""
    if rho >= 0.0:
        raise InvalidInput(f"rho must be negative, got {rho}")
    return gamma * (1.0 - beta / (1.0 - rho) * (n / k) ** rho)


def adjusted_quantile(
    r: RadialSample, k: int, tau: float, gamma_adj: float, beta: float, rho: float
) -> float:
    """Bias-corrected extrapolated quantile: Weissman at gamma_adj times exp(C_tau)."""
    if rho >= 0.0:
        raise InvalidInput(f"rho must be negative, got {rho}")
    base = weissman_quantile(r, k, tau, gamma_adj)
    ratio = k / (r.n * (1.0 - tau))
    correction = beta * (r.n / k) ** rho * (ratio**rho - 1.0) / rho
    return base * float(np.exp(correction))


def tail_fit(r: RadialSample, k: int, s: int | None = None) -> TailFit:
    """Hill estimate at k bundled with second-order parameters at level s."""
    gamma = hill_estimate(r, k)
    if s is None:
        s = default_second_order_level(r.n)
    beta, rho = second_order_params(r, s)
    return TailFit(gamma_hat=gamma, k=int(k), second_order=SecondOrder(beta, rho, int(s)))


def mes_estimate_adjusted(x, k: int, s: int | None = None, tau: float = 0.998) -> MesEstimate:
    """Bias-corrected marginal shortfall Q_adj(tau) * w_j / (1 - gamma_adj)."""
    x = as_data_matrix(x)
    r = radial_decompose(x)
    if s is None:
        s = default_second_order_level(r.n)
    gamma = hill_estimate(r, k)
    beta, rho = second_order_params(r, s)
    gamma_adj = adjusted_gamma(gamma, beta, rho, r.n, k)
    if gamma_adj >= 1.0:
        raise HeavyTailUnbounded(f"adjusted gamma_hat = {gamma_adj:.4f} >= 1")
    quantile = adjusted_quantile(r, k, tau, gamma_adj, beta, rho)
    w = angular_mean(x, r, k)
    theta = quantile * w / (1.0 - gamma_adj)
    return MesEstimate(theta_hat=theta, variant=VARIANT_ADJUSTED, tau=tau, k=int(k), n=r.n)


def competitor_emp(x, j: int, k: int, tau: float) -> float:
    """Empirical-mean competitor: (k/(n(1-tau)))^gamma * (1/k) sum X_ij over exceedances."""
    x = as_data_matrix(x)
    check_tau(tau)
    r = radial_decompose(x)
    gamma = hill_estimate(r, k)
    mask = exceedance_mask(r, k)
    scale = (k / (r.n * (1.0 - tau))) ** gamma
    return float(scale * x[mask, j].sum() / k)


def competitor_cai(x, j: int, k: int, tau: float) -> float:
    """Rank-based competitor using the column-j threshold X_(n-k) and ordinal ranks.

    Ties in column j get distinct ranks through a stable sort, so equal
    values rank in row order.
    """
    x = as_data_matrix(x)
    check_tau(tau)
    r = radial_decompose(x)
    n = r.n
    gamma = hill_estimate(r, k)
    mask = exceedance_mask(r, k)
    column = x[:, j]
    ranks = np.empty(n, dtype=np.float64)
    ranks[np.argsort(column, kind="stable")] = np.arange(1, n + 1)
    column_threshold = np.sort(column, kind="stable")[n - k - 1]
    factors = ((n - ranks[mask] + 1.0) / k) ** (-gamma)
    scale = (k / (n * (1.0 - tau))) ** gamma
    return float(scale * column_threshold * factors.sum() / k)
