from .jet import (ONE, ZERO, Jet, format_jet, jet_add, jet_exp_direction,
                  jet_inv, jet_mul, monomials, rational)
from .matrix import (JetMatrix, charpoly, jetmat_solve, matrix_poly_eval,
                     rat_det, rat_inverse, rat_matmul, rat_rank, rat_solve,
                     trace_of_product)
from .poly import discriminant, poly_eval, poly_mul, resultant

__all__ = [
    "ONE", "ZERO", "Jet", "JetMatrix", "charpoly", "discriminant", "format_jet",
    "jet_add", "jet_exp_direction", "jet_inv", "jet_mul", "jetmat_solve",
    "matrix_poly_eval", "monomials", "poly_eval", "poly_mul", "rat_det",
    "rat_inverse", "rat_matmul", "rat_rank", "rat_solve", "rational",
    "resultant", "trace_of_product",
]
