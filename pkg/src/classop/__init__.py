"""Classical orthogonal polynomial sequences over admissible maps."""

from .errors import DomainError
from .poly import DEFAULT_TOL, Poly, Tolerance, poly_roots, terminating_hypergeometric

__all__ = ["DomainError", "DEFAULT_TOL", "Poly", "Tolerance", "poly_roots",
           "terminating_hypergeometric"]
