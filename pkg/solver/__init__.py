"""Primal-dual interior-point solver for the LMI relaxation and the inner problem."""

from .errors import SolverInputError, SolverFailure, SolverNumericalError
from .models import (
    SolveStatus,
    SolverOptions,
    IterationRecord,
    ConicIterate,
    RelaxationProblem,
    KktReport,
    ConicSolution,
    InnerSolution
)
from .cones import HermitianPacking, PsdBlock, SocBlock, ProductCone
from .ipm import ConicProgram, PrimalDualSolver
from .relaxation import (
    validate_problem,
    solve_relaxation,
    solve_inner,
    check_kkt,
    compact_form_residual,
    dual_eigen_value
)

__all__ = [
    'SolverInputError',
    'SolverFailure',
    'SolverNumericalError',
    'SolveStatus',
    'SolverOptions',
    'IterationRecord',
    'ConicIterate',
    'RelaxationProblem',
    'KktReport',
    'ConicSolution',
    'InnerSolution',
    'HermitianPacking',
    'PsdBlock',
    'SocBlock',
    'ProductCone',
    'ConicProgram',
    'PrimalDualSolver',
    'validate_problem',
    'solve_relaxation',
    'solve_inner',
    'check_kkt',
    'compact_form_residual',
    'dual_eigen_value'
]
