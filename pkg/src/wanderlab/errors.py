"""Exception types shared across the toolkit."""


class WanderlabError(Exception):
    """Base class for all toolkit errors."""


# -- geometry ---------------------------------------------------------------

class PointOutsideDomain(WanderlabError):
    """A point lies on or outside the boundary of its ambient domain."""


class InvalidWinding(WanderlabError):
    """A winding count of zero where a nonzero one is required."""


# -- tower dynamics ---------------------------------------------------------

class StageOutOfRange(WanderlabError):
    """Requested iteration stage exceeds the configured degree sequence."""


class AmbiguousClassification(WanderlabError):
    """A point pair is within tolerance of both foliation degeneracies."""


class VerdictMismatch(WanderlabError):
    """A trichotomy branch check failed; signals an implementation bug."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DegenerateBasePoint(WanderlabError):
    """Base point on the unit circle; log-modulus ratio undefined."""


# -- silhouette classification ----------------------------------------------

class InfeasibleSurgery(WanderlabError):
    """Covering arithmetic yields a connectivity below one."""


class InfiniteDegree(WanderlabError):
    """Infinite-degree covering; the finite formula does not apply."""


class OutOfScope(WanderlabError):
    """Input outside the operation's admissible range."""


class InsufficientData(WanderlabError):
    """Too few entries to attempt a classification."""


class NoEventualConnectivity(WanderlabError):
    """Connectivity sequence never settles; carries a detected period."""

    def __init__(self, message, period=None):
        super().__init__(message)
        self.period = period


class Unclassifiable(WanderlabError):
    """The decision table has no row for this input."""


# -- model-map laboratory ---------------------------------------------------

class InfeasibleParameters(WanderlabError):
    """A construction inequality is violated; names the first failure."""


class CalibrationFailed(WanderlabError):
    """Bisection could not bracket a feasible constant."""


class PoleHit(WanderlabError):
    """Evaluation requested within guard distance of a registered pole."""


class TraceDiverged(WanderlabError):
    """Level-curve continuation left its basin or failed to close."""


class ContainmentViolated(WanderlabError):
    """A sampled image point left its target region."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TargetOnCurve(WanderlabError):
    """Winding target is indistinguishable from the image curve."""


class ResolutionInsufficient(WanderlabError):
    """Adaptive refinement cap reached before argument tracking settled."""


class AuditFailed(WanderlabError):
    """A per-stage connectivity fact failed."""

    def __init__(self, message, stage=None, fact=None):
        super().__init__(message)
        self.stage = stage
        self.fact = fact


# -- boundary probes ---------------------------------------------------------

class UnsupportedRegion(WanderlabError):
    """No hull or probe support for this region kind."""


class OrbitEscapedDomain(WanderlabError):
    """An iterate left its target region; the synthetic system is invalid."""


class BoundViolated(WanderlabError):
    """A proven inequality failed numerically; signals an implementation bug."""


# -- CLI ---------------------------------------------------------------------

class ConfigError(WanderlabError):
    """Malformed or incomplete experiment configuration."""


class CheckFailed(WanderlabError):
    """One or more experiment checks failed."""

    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = failures or []
