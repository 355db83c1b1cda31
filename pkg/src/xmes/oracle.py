"""Brute-force Monte Carlo ground truth for the conditional tail means.

Evaluates theta_j(tau) = E(X_j | R > Q_R(tau)) for an arbitrary model by
streaming draws in two passes: the first pass keeps a top-radii reservoir
large enough to select the empirical tau-quantile exactly, the second
re-streams the identical per-batch seeds and accumulates conditional
moments.  Nothing close to total_draws x d values is ever held in memory.

The batch plan is a pure function of (total_draws, batch size); partial
results are folded in batch order, so the output is bit-identical for any
number of worker threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import ceil

import numpy as np

from .errors import InsufficientExceedances, InvalidInput
from .estimators import check_tau
from .models import ModelSpec, derive_seed, sample_model

DEFAULT_BATCH_VALUES = 8_000_000
MIN_EXCEEDANCES = 100


@dataclass(frozen=True)
class OracleResult:
    """Conditional tail means with their Monte Carlo standard errors."""

    theta: np.ndarray
    standard_error: np.ndarray
    tau: float
    total_draws: int
    exceedance_count: int
    radial_quantile: float


def _batch_plan(total_draws: int, rows_per_batch: int) -> list[tuple[int, int]]:
    plan = []
    start = 0
    index = 0
    while start < total_draws:
        rows = min(rows_per_batch, total_draws - start)
        plan.append((index, rows))
        start += rows
        index += 1
    return plan


def _pool_map(worker, plan, threads):
    """Apply worker over the batch plan, returning results in batch order."""
    if threads <= 1:
        return [worker(item) for item in plan]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, plan))


def true_mes(
    spec: ModelSpec,
    tau: float,
    total_draws: int,
    seed: int,
    batch_values: int = DEFAULT_BATCH_VALUES,
    threads: int | None = None,
) -> OracleResult:
    """Monte Carlo estimate of E(X_j | R > Q_R(tau)) for every component j.

    Parameters
    ----------
    spec : ModelSpec
        Model to draw from.
    tau : float
        Quantile level of the radial threshold, strictly inside (0, 1).
    total_draws : int
        Number of model draws; 1e6+ recommended for tau near 0.998.
    seed : int
        Master seed; batch b uses the derived child seed (seed, b).
    batch_values : int
        Target number of matrix entries per batch (rows = batch_values / d).
    threads : int, optional
        Worker threads; defaults to the available CPU count.
    """
    check_tau(tau)
    if total_draws < 1:
        raise InvalidInput(f"total_draws must be positive, got {total_draws}")
    threads = threads or os.cpu_count() or 1
    rows_per_batch = max(1, batch_values // spec.d)
    plan = _batch_plan(total_draws, rows_per_batch)

    reservoir = min(total_draws, max(1000, ceil(2.0 * total_draws * (1.0 - tau))))

    def pass_one(item):
        index, rows = item
        data = sample_model(spec, rows, derive_seed(seed, index)).data
        radii = data.sum(axis=1)
        if rows > reservoir:
            return np.partition(radii, rows - reservoir)[rows - reservoir :]
        return radii

    tops = _pool_map(pass_one, plan, threads)
    pool_radii = np.concatenate(tops)
    if pool_radii.shape[0] > reservoir:
        pool_radii = np.partition(pool_radii, pool_radii.shape[0] - reservoir)[
            pool_radii.shape[0] - reservoir :
        ]
    # empirical tau-quantile: ascending order statistic at index ceil(tau N)
    rank_from_top = total_draws - ceil(tau * total_draws) + 1
    if rank_from_top > pool_radii.shape[0]:
        raise InvalidInput("reservoir too small for the requested tau; more draws needed")
    quantile = float(np.sort(pool_radii)[-rank_from_top])

    def pass_two(item):
        index, rows = item
        data = sample_model(spec, rows, derive_seed(seed, index)).data
        mask = data.sum(axis=1) > quantile
        selected = data[mask]
        return (
            int(mask.sum()),
            selected.sum(axis=0),
            (selected**2).sum(axis=0),
        )

    partials = _pool_map(pass_two, plan, threads)
    count = 0
    s1 = np.zeros(spec.d)
    s2 = np.zeros(spec.d)
    for c, p1, p2 in partials:
        count += c
        s1 += p1
        s2 += p2

    if count < MIN_EXCEEDANCES:
        raise InsufficientExceedances(
            f"only {count} exceedances above the tau={tau} radial quantile; "
            "increase total_draws"
        )
    theta = s1 / count
    variance = np.maximum(s2 / count - theta**2, 0.0)
    se = np.sqrt(variance / count)
    return OracleResult(
        theta=theta,
        standard_error=se,
        tau=float(tau),
        total_draws=int(total_draws),
        exceedance_count=count,
        radial_quantile=quantile,
    )


def oracle_to_csv(result: OracleResult, path, names=None) -> None:
    """Write one row per component: component, theta, se, tau, draws."""
    d = result.theta.shape[0]
    if names is None:
        names = [f"c{j + 1}" for j in range(d)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("component,theta,se,tau,draws\n")
        for j in range(d):
            fh.write(
                f"{names[j]},{result.theta[j]:.17g},{result.standard_error[j]:.17g},"
                f"{result.tau:.17g},{result.total_draws}\n"
            )
