"""Exception types shared across the package.

Each class carries the error code used by the CLI when translating
mathematical findings into run reports.
"""


class CasextError(Exception):
    """Base class for all domain errors."""

    code = "error"


class SingularMatrixError(CasextError):
    """Matrix inversion requested for a rank-deficient matrix."""

    code = "singular"


class NonRationalSpectrumError(CasextError):
    """A structure matrix has no rational eigenvalue; exact splitting refused."""

    code = "non-rational-spectrum"


class NotNilpotentError(CasextError):
    """Canonical solvable form requested for a non-nilpotent family."""

    code = "not-nilpotent"


class NotUnityError(CasextError):
    """Designated basis element is not a unity in this basis."""

    code = "not-unity"


class NotCommonEigenvectorError(CasextError):
    """Vector is not a simultaneous eigenvector of the structure matrices."""

    code = "not-common-eigenvector"


class DegenerateCoextensionError(CasextError):
    """The middle block of the pseudo-zero slice is singular; coextension undefined."""

    code = "degenerate"


class NotACasimirError(CasextError):
    """Symmetric form fails the quadratic invariance equations."""

    code = "not-a-casimir"


class InconsistentLiftError(CasextError):
    """The boundary-value system of a Casimir lift has no solution."""

    code = "inconsistent"


class UnclassifiableError(CasextError):
    """Block is neither a nilpotent family nor unital over the rationals."""

    code = "unclassifiable"


class NoFrameError(CasextError):
    """No unity + pseudo-zero pair exists in the given basis."""

    code = "no-frame"
