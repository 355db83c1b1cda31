"""Hot numeric kernels for grid evaluation over many threshold levels.

Every kernel exists in two semantically identical flavours: a loop
implementation compiled with numba's ``@njit`` and a vectorised numpy
fallback.  The active backend is picked at import time: numba when it is
importable, unless the environment variable ``XMES_NUMBA`` is set to
``0``/``false``/``off``/``no``.  ``benchmarks/bench_kernels.py`` compares
the two.

All kernels assume their preconditions were validated by the caller:
``sorted_radii`` ascending with positive entries above the deepest
threshold, ``ks`` strictly increasing with ``1 <= k <= n-1``, ``counts``
nondecreasing.
"""

from __future__ import annotations

import os

import numpy as np


def _hill_curve_loop(sorted_radii, ks):
    n = sorted_radii.shape[0]
    out = np.empty(ks.shape[0])
    kmax = ks[-1]
    j = 0
    acc = 0.0
    prev = np.log(sorted_radii[n - 1])
    for i in range(1, kmax + 1):
        cur = np.log(sorted_radii[n - 1 - i])
        acc += i * (prev - cur)
        prev = cur
        while j < ks.shape[0] and ks[j] == i:
            out[j] = acc / i
            j += 1
    return out


def _hill_curve_numpy(sorted_radii, ks):
    n = sorted_radii.shape[0]
    kmax = int(ks[-1])
    top = np.log(sorted_radii[n - kmax - 1 :])
    spacings = np.diff(top)[::-1]
    weighted = np.cumsum(np.arange(1, kmax + 1, dtype=np.float64) * spacings)
    return weighted[ks - 1] / ks


def _prefix_rows_at_loop(values, counts):
    n, d = values.shape
    m = counts.shape[0]
    out = np.zeros((m, d))
    running = np.zeros(d)
    t = 0
    for i in range(n + 1):
        while t < m and counts[t] == i:
            for c in range(d):
                out[t, c] = running[c]
            t += 1
        if i < n:
            for c in range(d):
                running[c] += values[i, c]
    return out


def _prefix_rows_at_numpy(values, counts):
    cum = np.vstack([np.zeros((1, values.shape[1])), np.cumsum(values, axis=0)])
    return cum[counts]


def _rank_factor_curve_loop(ranks_desc, counts, ks, gammas, n):
    m = ks.shape[0]
    out = np.empty(m)
    for t in range(m):
        k = ks[t]
        g = gammas[t]
        acc = 0.0
        for i in range(counts[t]):
            acc += ((n - ranks_desc[i] + 1.0) / k) ** (-g)
        out[t] = acc
    return out


def _rank_factor_curve_numpy(ranks_desc, counts, ks, gammas, n):
    out = np.empty(ks.shape[0])
    for t in range(ks.shape[0]):
        rel = (n - ranks_desc[: counts[t]] + 1.0) / ks[t]
        out[t] = np.sum(rel ** (-gammas[t]))
    return out


def _joint_exceed_counts_loop(radii, threshold, lags):
    n = radii.shape[0]
    out = np.zeros(lags.shape[0], dtype=np.int64)
    for t in range(lags.shape[0]):
        lag = lags[t]
        c = 0
        for i in range(n - lag):
            if radii[i] > threshold and radii[i + lag] > threshold:
                c += 1
        out[t] = c
    return out


def _joint_exceed_counts_numpy(radii, threshold, lags):
    exceed = radii > threshold
    out = np.zeros(lags.shape[0], dtype=np.int64)
    for t in range(lags.shape[0]):
        lag = int(lags[t])
        out[t] = np.count_nonzero(exceed[:-lag] & exceed[lag:])
    return out


NUMPY_IMPLS = {
    "hill_curve": _hill_curve_numpy,
    "prefix_rows_at": _prefix_rows_at_numpy,
    "rank_factor_curve": _rank_factor_curve_numpy,
    "joint_exceed_counts": _joint_exceed_counts_numpy,
}

_LOOP_IMPLS = {
    "hill_curve": _hill_curve_loop,
    "prefix_rows_at": _prefix_rows_at_loop,
    "rank_factor_curve": _rank_factor_curve_loop,
    "joint_exceed_counts": _joint_exceed_counts_loop,
}

NUMBA_ENABLED = False
JITTED_IMPLS: dict = {}

if os.environ.get("XMES_NUMBA", "").strip().lower() not in {"0", "false", "off", "no"}:
    try:
        import numba
    except ImportError:
        numba = None
    if numba is not None:
        def _jit(fn):
            try:
                return numba.njit(cache=True)(fn)
            except RuntimeError:  # no cache locator (e.g. interactive use)
                return numba.njit(cache=False)(fn)

        JITTED_IMPLS = {name: _jit(fn) for name, fn in _LOOP_IMPLS.items()}
        NUMBA_ENABLED = True

_ACTIVE = JITTED_IMPLS if NUMBA_ENABLED else NUMPY_IMPLS

hill_curve = _ACTIVE["hill_curve"]
prefix_rows_at = _ACTIVE["prefix_rows_at"]
rank_factor_curve = _ACTIVE["rank_factor_curve"]
joint_exceed_counts = _ACTIVE["joint_exceed_counts"]


def backend() -> str:
    """Name of the active kernel backend, ``"numba"`` or ``"numpy"``."""
    return "numba" if NUMBA_ENABLED else "numpy"


def strict_exceed_counts(sorted_radii: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """Number of entries strictly above the k-th upper order statistic, per k."""
    n = sorted_radii.shape[0]
    thresholds = sorted_radii[n - ks - 1]
    return n - np.searchsorted(sorted_radii, thresholds, side="right")
