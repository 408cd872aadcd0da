"""Exception types shared across the package."""


class CmcForgeError(Exception):
    """Base class for all library errors."""


class InvalidMatrixError(CmcForgeError):
    """A matrix argument violates its algebraic precondition."""


class WrongSheetError(CmcForgeError):
    """Hermitian point lies on the x0 <= 0 sheet of the hyperboloid."""


class NoAxisError(CmcForgeError):
    """Rotation axis requested for a central element of SU(2)."""


class SingularPointError(CmcForgeError):
    """Evaluation hit a pole, branch point or degenerate derivative."""


class PathError(CmcForgeError):
    """A path is malformed or runs too close to a singular point."""


class CatalogError(CmcForgeError):
    """Unknown or unavailable catalog surface."""


class DataError(CmcForgeError):
    """Weierstrass data violates a structural invariant."""


class NormalizationError(CmcForgeError):
    """Step I-III normalization cannot proceed (precondition failed)."""


class AccuracyError(CmcForgeError):
    """A computation could not reach the requested tolerance."""


class BranchError(CmcForgeError):
    """Analytic continuation left the validity window of a branch."""


class ConvergenceError(CmcForgeError):
    """An iterative solver exhausted its budget."""
