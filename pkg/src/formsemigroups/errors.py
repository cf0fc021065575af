"""Exception types raised across the package."""


class FormError(Exception):
    """Base class for all errors raised by formsemigroups."""


class NonElliptic(FormError):
    """The shifted form does not have a positive-definite Hermitian part."""


class SingularSystem(FormError):
    """A linear system needed to build an operator is singular."""


class SingularResolvent(SingularSystem):
    """The resolvent does not exist at the requested spectral parameter."""

    def __init__(self, lam, message=None):
        self.lam = lam
        super().__init__(message or f"resolvent singular at lambda={lam}")


class NotOrthonormal(FormError):
    """Basis columns are not orthonormal in the H inner product."""


class AlreadyComplex(FormError):
    """Attempt to complexify a triple that is already complex."""


class NotSelfadjoint(FormError):
    """Operation needs a selfadjoint operator."""


class SchemeMismatch(FormError):
    """The evolution scheme cannot handle the requested time argument."""


class NotNodal(FormError):
    """The map j is not a nodal selection or trace map."""


class CoefficientViolation(FormError):
    """PDE coefficients violate the structural hypothesis of the example."""


class SingularInterior(SingularSystem):
    """Interior block of a partitioned stiffness matrix is singular."""


class DisconnectedMesh(NonElliptic):
    """Stiffness plus boundary mass fails to be positive definite."""
