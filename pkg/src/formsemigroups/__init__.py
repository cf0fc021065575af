"""Forms, their associated operators, and the semigroups they generate."""
from .errors import (AlreadyComplex, CoefficientViolation, DisconnectedMesh, FormError, NonElliptic,
                     NotNodal, NotOrthonormal, NotSelfadjoint, SchemeMismatch, SingularInterior,
                     SingularResolvent, SingularSystem)
from .form_core import (AssociatedOperator, FormTriple, ValidationReport, associate, complexify,
                        compose_projection, form_constants, identity_triple, matrix_triple, shift_form,
                        validate_triple)
from .engines import EvolutionResult, SemigroupScheme, evolve, evolve_grid, evolve_matrix
from .verification import ConvexSetSpec, VerificationReport, verify_triple

__all__ = [
    "AlreadyComplex", "CoefficientViolation", "DisconnectedMesh", "FormError", "NonElliptic", "NotNodal",
    "NotOrthonormal", "NotSelfadjoint", "SchemeMismatch", "SingularInterior", "SingularResolvent",
    "SingularSystem", "AssociatedOperator", "FormTriple", "ValidationReport", "associate", "complexify",
    "compose_projection", "form_constants", "identity_triple", "matrix_triple", "shift_form",
    "validate_triple", "EvolutionResult", "SemigroupScheme", "evolve", "evolve_grid", "evolve_matrix",
    "ConvexSetSpec", "VerificationReport", "verify_triple",
]
