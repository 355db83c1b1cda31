"""Copula samplers, model specifications and the five built-in presets.

Archimedean families are sampled exactly with frailty mixtures (gamma for
Clayton, positive stable for Gumbel, Sibuya for Joe); the Student-t copula
goes through a correlated multivariate-t transform.  Every sampler is a
pure function of (spec, n, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln

from .dists import Burr, Frechet, HalfT, Marginal, Pareto, t_cdf
from .errors import InvalidModel

__all__ = [
    "Clayton",
    "Gumbel",
    "Joe",
    "StudentT",
    "ModelSpec",
    "SampleBatch",
    "sample_copula",
    "sample_model",
    "derive_seed",
    "model_i",
    "model_ii",
    "model_iii",
    "model_iv",
    "model_v",
    "PRESETS",
    "get_preset",
]


@dataclass(frozen=True)
class Clayton:
    """Clayton copula; delta -> 0 is independence, delta -> inf comonotone."""

    delta: float

    def __post_init__(self):
        if self.delta <= 0:
            raise InvalidModel(f"Clayton delta must be positive, got {self.delta}")


@dataclass(frozen=True)
class Gumbel:
    """Gumbel copula with theta >= 1; theta == 1 is independence."""

    theta: float

    def __post_init__(self):
        if self.theta < 1:
            raise InvalidModel(f"Gumbel theta must be >= 1, got {self.theta}")


@dataclass(frozen=True)
class Joe:
    """Joe copula with theta >= 1; theta == 1 is independence."""

    theta: float

    def __post_init__(self):
        if self.theta < 1:
            raise InvalidModel(f"Joe theta must be >= 1, got {self.theta}")


@dataclass(frozen=True)
class StudentT:
    """Student-t copula with a correlation matrix and dof > 0."""

    corr: tuple
    dof: float

    def __post_init__(self):
        if self.dof <= 0:
            raise InvalidModel(f"Student-t dof must be positive, got {self.dof}")
        corr = np.atleast_2d(np.asarray(self.corr, dtype=np.float64))
        if corr.shape[0] != corr.shape[1]:
            raise InvalidModel("correlation matrix must be square")
        if not np.allclose(corr, corr.T, atol=1e-12):
            raise InvalidModel("correlation matrix must be symmetric")
        if not np.allclose(np.diag(corr), 1.0, atol=1e-12):
            raise InvalidModel("correlation matrix must have unit diagonal")
        try:
            chol = np.linalg.cholesky(corr)
        except np.linalg.LinAlgError as exc:
            raise InvalidModel("correlation matrix must be positive-definite") from exc
        object.__setattr__(self, "corr", tuple(map(tuple, corr)))
        object.__setattr__(self, "dof", float(self.dof))
        object.__setattr__(self, "_chol", chol)

    @property
    def dim(self) -> int:
        return len(self.corr)


Copula = Clayton | Gumbel | Joe | StudentT


@dataclass(frozen=True)
class ModelSpec:
    """A copula joined with one marginal quantile transform per component."""

    copula: Copula
    marginals: tuple[Marginal, ...]

    def __post_init__(self):
        marginals = tuple(self.marginals)
        object.__setattr__(self, "marginals", marginals)
        if not marginals:
            raise InvalidModel("need at least one marginal")
        if isinstance(self.copula, StudentT) and self.copula.dim != len(marginals):
            raise InvalidModel(
                f"copula dimension {self.copula.dim} != {len(marginals)} marginals"
            )
        for m in marginals:
            if m.tail_index >= 1.0:
                raise InvalidModel(
                    f"marginal {m} has tail index {m.tail_index} >= 1; "
                    "the conditional mean would be infinite"
                )

    @property
    def d(self) -> int:
        return len(self.marginals)


@dataclass(frozen=True)
class SampleBatch:
    """A sampled panel together with the seed and spec that produced it."""

    data: np.ndarray
    seed: object
    model: ModelSpec


def derive_seed(seed, *path: int) -> np.random.SeedSequence:
    """Build an independent child seed from an integer seed and an index path."""
    if isinstance(seed, np.random.SeedSequence):
        return seed.spawn(1)[0] if path else seed
    return np.random.SeedSequence((int(seed),) + tuple(int(p) for p in path))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _positive_stable(alpha: float, size: int, rng: np.random.Generator) -> np.ndarray:
    # Zolotarev representation: conditional on Theta ~ U(0, pi) the variable
    # (A(Theta)/W)^((1-alpha)/alpha), W ~ Exp(1), is one-sided stable with
    # Laplace transform exp(-s^alpha).
    theta = rng.uniform(0.0, np.pi, size)
    w = rng.standard_exponential(size)
    a = (
        np.sin(alpha * theta) ** (alpha / (1.0 - alpha))
        * np.sin((1.0 - alpha) * theta)
        / np.sin(theta) ** (1.0 / (1.0 - alpha))
    )
    return (a / w) ** ((1.0 - alpha) / alpha)


def _sibuya(alpha: float, size: int, rng: np.random.Generator) -> np.ndarray:
    # Inverse transform on the discrete law with survival
    # P(N > n) = prod_{i<=n} (1 - alpha/i); the tail branch inverts the
    # asymptotic survival n^(-alpha)/Gamma(1-alpha) and corrects by one step.
    u = rng.uniform(0.0, 1.0, size)
    out = np.ones(size)
    tail = u > alpha
    if np.any(tail):
        ut = 1.0 - u[tail]
        g = math.gamma(1.0 - alpha)
        x = (ut * g) ** (-1.0 / alpha)
        fl = np.floor(x)
        # survival at fl: 1/(fl * B(fl, 1-alpha))
        log_surv = -(np.log(fl) + betaln(fl, 1.0 - alpha))
        out[tail] = np.where(np.log(ut) < log_surv, np.ceil(x), fl)
    return out


def _copula_uniforms(copula: Copula, d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(copula, Clayton):
        v = rng.standard_gamma(1.0 / copula.delta, n)
        e = rng.standard_exponential((n, d))
        return np.exp(-np.log1p(e / v[:, None]) / copula.delta)
    if isinstance(copula, Gumbel):
        e = rng.standard_exponential((n, d))
        if copula.theta == 1.0:
            return np.exp(-e)
        alpha = 1.0 / copula.theta
        v = _positive_stable(alpha, n, rng)
        return np.exp(-((e / v[:, None]) ** alpha))
    if isinstance(copula, Joe):
        e = rng.standard_exponential((n, d))
        if copula.theta == 1.0:
            return np.exp(-e)
        alpha = 1.0 / copula.theta
        v = _sibuya(alpha, n, rng)
        return 1.0 - (-np.expm1(-e / v[:, None])) ** alpha
    if isinstance(copula, StudentT):
        z = rng.standard_normal((n, d)) @ copula._chol.T
        s = rng.chisquare(copula.dof, n) / copula.dof
        t = z / np.sqrt(s)[:, None]
        return t_cdf(copula.dof, t)
    raise InvalidModel(f"unknown copula {copula!r}")


def sample_copula(spec: ModelSpec, n: int, seed) -> np.ndarray:
    """Draw n rows from the model's copula; columns are marginally U(0,1)."""
    if n < 1:
        raise InvalidModel(f"n must be >= 1, got {n}")
    rng = _as_rng(seed)
    return _copula_uniforms(spec.copula, spec.d, n, rng)


def sample_model(spec: ModelSpec, n: int, seed) -> SampleBatch:
    """Draw an (n, d) panel: copula uniforms pushed through the marginals."""
    u = sample_copula(spec, n, seed)
    data = np.empty_like(u)
    for j, marginal in enumerate(spec.marginals):
        data[:, j] = marginal.quantile(u[:, j])
    return SampleBatch(data=data, seed=seed, model=spec)


def _equicorrelation(d: int, off_diag: float) -> np.ndarray:
    corr = np.full((d, d), off_diag)
    np.fill_diagonal(corr, 1.0)
    return corr


# Preset parameters below 1 for the Gumbel family are interpreted as the
# reciprocal of the Archimedean theta (the "dep" convention, where values
# in (0, 1] shrink towards complete dependence); pass theta explicitly to
# override.


def model_i() -> ModelSpec:
    """Bivariate Clayton(3) with half-t(5/2) margins, tail index 2/5."""
    return ModelSpec(Clayton(3.0), (HalfT(2.5), HalfT(2.5)))


def model_ii(theta: float | None = None) -> ModelSpec:
    """Bivariate Gumbel (dep 0.8, i.e. theta 1.25) with Burr(sqrt3, sqrt3) margins."""
    theta = 1.0 / 0.8 if theta is None else theta
    b = Burr(math.sqrt(3.0), math.sqrt(3.0))
    return ModelSpec(Gumbel(theta), (b, b))


def model_iii(dof: float = 4.0) -> ModelSpec:
    """Bivariate Student-t copula (corr 0.8) with Burr(2, 2) margins."""
    b = Burr(2.0, 2.0)
    return ModelSpec(StudentT(_equicorrelation(2, 0.8), dof), (b, b))


def model_iv(theta: float | None = None) -> ModelSpec:
    """Four-variate Gumbel (dep 0.7) with half-t, Burr, Frechet, Pareto margins."""
    theta = 1.0 / 0.7 if theta is None else theta
    marginals = (HalfT(5.0), Burr(math.sqrt(5.0), math.sqrt(5.0)), Frechet(5.0), Pareto(0.2))
    return ModelSpec(Gumbel(theta), marginals)


def model_v() -> ModelSpec:
    """15-variate Student-t copula (dof 4, corr 0.4) with half-t(4) margins."""
    return ModelSpec(StudentT(_equicorrelation(15, 0.4), 4.0), (HalfT(4.0),) * 15)


PRESETS = {
    "model_i": model_i,
    "model_ii": model_ii,
    "model_iii": model_iii,
    "model_iv": model_iv,
    "model_v": model_v,
}


def get_preset(name: str) -> ModelSpec:
    """Look up a built-in model by name (``model_i`` .. ``model_v``)."""
    try:
        factory = PRESETS[name]
    except KeyError:
        raise InvalidModel(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
    return factory()
