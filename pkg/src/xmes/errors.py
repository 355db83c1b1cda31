"""Exception types raised by the estimators, samplers and pipelines."""


class XmesError(Exception):
    """Base class for all library errors."""


class InvalidInput(XmesError):
    """Malformed data matrix (wrong shape, non-finite entries, bad probability)."""


class InvalidK(XmesError):
    """Effective sample size k outside the admissible range."""


class InvalidTau(XmesError):
    """Quantile level tau outside (0, 1)."""


class InvalidAlpha(XmesError):
    """Confidence level alpha outside (0, 1)."""


class InvalidLag(XmesError):
    """Serial lag outside [1, n)."""


class DegenerateTail(XmesError):
    """Tail statistics undefined (nonpositive threshold, flat log-spacings)."""


class DegenerateThreshold(XmesError):
    """No strict exceedances above the radial threshold."""


class HeavyTailUnbounded(XmesError):
    """Estimated tail index >= 1: the conditional-mean approximation has no finite value."""


class InvalidModel(XmesError):
    """Copula or marginal parameters outside their admissible range."""


class InsufficientExceedances(XmesError):
    """Too few Monte Carlo exceedances to report a conditional mean."""


class MissingTruth(XmesError):
    """Experiment requested bias/coverage metrics without reference values."""


class GridMismatch(XmesError):
    """Component curves evaluated on different k grids."""


class InvalidPrices(XmesError):
    """Price panel contains nonpositive prices or inconsistent columns."""


class InvalidHorizon(XmesError):
    """Return-period horizon does not map to a tau in (0, 1)."""
