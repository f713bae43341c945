"""Exception types shared across the toolkit.

Every error that a caller may want to catch individually gets its own class;
they all derive from CoarselabError so blanket handling stays easy.
"""


class CoarselabError(Exception):
    """Base class for all toolkit errors."""


# --- metric validation -------------------------------------------------------

class MetricViolation(CoarselabError):
    """A distance matrix failed one of the metric axioms."""


class AsymmetryError(MetricViolation):
    pass


class NegativeDistance(MetricViolation):
    pass


class ZeroDiagonalViolation(MetricViolation):
    pass


class TriangleViolation(MetricViolation):
    """Carries the worst offending triple as ``.witness`` = (i, k, j, defect)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# --- sizes / feasibility ------------------------------------------------------

class SampleTooLarge(CoarselabError):
    """Exhaustive scan refused; pass an approximation flag or shrink the input."""


class TooLarge(CoarselabError):
    """Exact subset enumeration refused above the configured size cap."""


class InfeasibleParams(CoarselabError):
    """No admissible parameter tuple exists for the given sample/resolution."""


# --- geometry-specific --------------------------------------------------------

class NotCobounded(CoarselabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotRoughGeodesic(CoarselabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DegenerateSpace(CoarselabError):
    """Cone construction over a space of zero diameter."""


class ScaleOutOfRange(CoarselabError):
    """Disk-model scale parameter outside (0, diam]."""


class ConfinementViolation(CoarselabError):
    """A metric ball escaped its guaranteed height window (implementation bug)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CertificationFailure(CoarselabError):
    """The refined grid found a counterexample to a certified inequality."""


class EmptyLevel(CoarselabError):
    """The cone sample is missing a stratum required by the build."""


class SeparationViolation(CoarselabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CoboundednessViolation(CoarselabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IsolatedVertex(CoarselabError):
    """Graph Laplacian undefined on a vertex with no neighbours."""


class NotConnected(CoarselabError):
    """Spectral sweep requires a connected graph."""


class NoInteriorVertices(CoarselabError):
    """Certificate undefined: every vertex sits on the truncation boundary."""


class HypothesisViolation(CoarselabError):
    """Input violates a standing hypothesis (e.g. a coarse component is a singleton)."""


class ResolutionWarning(UserWarning):
    """The sample is too coarse for the requested scale; results may degenerate."""
