"""Product-state criterion, phase-matrix braid operators, link state sums and CHSH tools."""
from .qstate import (EntangledStateError, Factorization, PureState, criterion_equations,
                     criterion_residuals, factorize, is_product, purity_oracle, tensor, weight,
                     xor_relabel)

__all__ = [
    "EntangledStateError", "Factorization", "PureState", "criterion_equations",
    "criterion_residuals", "factorize", "is_product", "purity_oracle", "tensor", "weight",
    "xor_relabel",
]
__version__ = "0.1.0"
