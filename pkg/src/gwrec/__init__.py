"""Exact genus-zero Gromov-Witten numbers of Fano varieties from a reduced Pfaff system."""
from .errors import (ConditionCError, DegenerateFrameError, DimensionError, GradingError,
                     GWRecError, InitialDataError, InsufficientOrderError,
                     IntegrabilityError, InvalidModelError, ModelSyntaxError,
                     NonInvertibleJetError, NonTameError)
from .extract import GWTable, enumerate_targets, extract, lagrange_basis
from .grading import InitialData, initial_classes, parse_initial_data, solve_grading
from .integrator import BasePoint, SolutionJet, initial_y, jet_residuals, propagate
from .model import FanoModel, builtin, load_model, parse_model, projective_space, validate
from .structure import (assemble_bigY, associativity_residual, constraint_residual,
                        euler_matrix, minor_frame, reduced_r, rootsum_R, tameness_report)

__version__ = "0.1.0"

__all__ = [
    "ConditionCError", "DegenerateFrameError", "DimensionError", "GradingError",
    "GWRecError", "InitialDataError", "InsufficientOrderError", "IntegrabilityError",
    "InvalidModelError", "ModelSyntaxError", "NonInvertibleJetError", "NonTameError",
    "GWTable", "enumerate_targets", "extract", "lagrange_basis",
    "InitialData", "initial_classes", "parse_initial_data", "solve_grading",
    "BasePoint", "SolutionJet", "initial_y", "jet_residuals", "propagate",
    "FanoModel", "builtin", "load_model", "parse_model", "projective_space", "validate",
    "assemble_bigY", "associativity_residual", "constraint_residual", "euler_matrix",
    "minor_frame", "reduced_r", "rootsum_R", "tameness_report",
]
