"""Radial/angular decomposition of a data panel under the L1 norm."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, InvalidK

MIN_ROWS = 3


def as_data_matrix(values) -> np.ndarray:
    """Validate and coerce input into an (n, d) float panel.

    Rows are observations, columns are components.  One-dimensional input
    is treated as a single column.  Raises InvalidInput on non-finite
    entries or fewer than three rows.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2:
        raise InvalidInput(f"expected a 2-D panel, got ndim={x.ndim}")
    n, d = x.shape
    if n < MIN_ROWS:
        raise InvalidInput(f"need at least {MIN_ROWS} rows, got {n}")
    if d < 1:
        raise InvalidInput("need at least one column")
    if not np.all(np.isfinite(x)):
        raise InvalidInput("panel contains non-finite entries")
    return x


@dataclass(frozen=True)
class RadialSample:
    """Row sums (radii), their sort order and the angular rows X_i / R_i.

    ``angular`` holds NaN for rows with zero radius; those rows are flagged
    in ``zero_rows``.  ``order`` is a stable ascending argsort of the radii
    and ``sorted_radii`` the corresponding sorted values.
    """

    radii: np.ndarray
    order: np.ndarray
    angular: np.ndarray
    zero_rows: np.ndarray
    sorted_radii: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.radii.shape[0]

    @property
    def d(self) -> int:
        return self.angular.shape[1]

    def threshold(self, k: int) -> float:
        """The (n-k)-th ascending order statistic of the radii."""
        check_k(k, self.n)
        return float(self.sorted_radii[self.n - k - 1])


def check_k(k: int, n: int) -> int:
    if not isinstance(k, (int, np.integer)):
        raise InvalidK(f"k must be an integer, got {k!r}")
    if not 1 <= k <= n - 1:
        raise InvalidK(f"k={k} outside [1, {n - 1}]")
    return int(k)


def radial_decompose(x) -> RadialSample:
    """Decompose a panel into radii R_i = sum_j X_ij and angles W_i = X_i / R_i."""
    x = as_data_matrix(x)
    radii = x.sum(axis=1)
    order = np.argsort(radii, kind="stable")
    zero_rows = radii == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        angular = x / radii[:, None]
    angular[zero_rows] = np.nan
    return RadialSample(
        radii=radii,
        order=order,
        angular=angular,
        zero_rows=zero_rows,
        sorted_radii=radii[order],
    )
