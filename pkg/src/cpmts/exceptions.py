"""Exception hierarchy.

Every failure mode that callers may want to branch on gets its own class.
The CLI reports ``type(exc).__name__`` as the machine-readable error name,
so class names are stable API.
"""


class CpmtsError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteEntry(CpmtsError):
    """A series contains a NaN or infinite value."""


class ZeroVariance(CpmtsError):
    """A component series is constant where positive variance is required."""


class InsufficientHistory(CpmtsError):
    """A masked entry has fewer than three predecessors to impute from."""


class DegenerateCovariance(CpmtsError):
    """Total variance of the flattened series is zero."""


class LagTooLarge(CpmtsError):
    """Requested lag exceeds ``n - 2``."""


class NonOrthonormalProjection(CpmtsError):
    """A projection basis fails the orthonormality check."""


class AllZeroSpectrum(CpmtsError):
    """Every eigenvalue is numerically zero and no ridge constant was set."""


class EigenvalueCollision(CpmtsError):
    """Two eigenvalues are too close for the eigenvectors to be trusted."""


class RankDeficientLoadings(CpmtsError):
    """An estimated loading matrix has numerical column rank below the order."""


class SingularGram(CpmtsError):
    """The lag-1 projected covariance Gram matrix is numerically singular."""


class UnmatchedComplexEigenvalue(CpmtsError):
    """A non-real eigenvalue has no conjugate partner within tolerance."""


class ResidualImaginaryPart(CpmtsError):
    """A factor series flagged as real carries a non-negligible imaginary part."""


class ShapeMismatch(CpmtsError):
    """Two series that must share dimensions do not."""


class WindowTooLong(CpmtsError):
    """Rolling-evaluation windows do not fit into the series."""


class ConstructionFailure(CpmtsError):
    """Simulated loading matrices failed the rank restriction repeatedly."""


class TooShort(CpmtsError):
    """A series is too short for the requested model order."""


class EigenGapCollapse(UserWarning):
    """Warning: the eigengap at the selected order is numerically zero."""
