"""Exception types raised by the package."""


class StructureError(ValueError):
    """Base class for all errors raised by polystruct."""


class GradeTooSmall(StructureError):
    """Requested grade is smaller than the degree of the matrix."""


class PoleAtEvaluationPoint(StructureError):
    """A rational matrix was evaluated at one of its poles."""


class RaggedGrid(StructureError):
    """An entry grid does not have rectangular shape."""


class GradeZero(StructureError):
    """A companion form was requested for a constant matrix."""


class InconsistentDims(StructureError):
    """Companion structure data does not match the stated dimensions."""


class NotStrictlyProper(StructureError):
    """A rational matrix expected to be strictly proper has a polynomial part."""


class SingularPencil(StructureError):
    """The state pencil of a realization is not regular."""


class SingularT(StructureError):
    """The state block of a polynomial system matrix is not regular."""


class SingularD(StructureError):
    """The denominator of a matrix fraction description is not regular."""


class NotPolynomial(StructureError):
    """A realization does not represent a polynomial matrix."""


class NotRegular(StructureError):
    """A square regular polynomial matrix was required."""


class BoundTooSmall(StructureError):
    """The degree bound of a brute-force search was exhausted."""
