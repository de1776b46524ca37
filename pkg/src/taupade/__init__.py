"""Tau-method solutions of linear ODEs and their Frobenius-Padé filters."""

from .exceptions import (
    ConfigurationError,
    DegenerateApproximantError,
    IllConditionedError,
    InsufficientCoefficientsError,
    PoleProximityError,
    ProblemSpecError,
    TauPadeError,
)
from .fpade import RationalApproximant, direct_pade, direct_poles, eval_rational, frobenius_pade, h_table
from .froissart import FroissartTable, count_doublets, froissart_table, select_filter, zeros_poles
from .orthopoly import (
    BasisKind,
    CoeffSeries,
    OrthoBasis,
    basis_roots,
    derivative_matrix,
    eval_series,
    make_basis,
    shift_matrix,
    weighted_norm,
)
from .taumethod import Condition, PolyOperator, TauSolution, build_pi, error_estimate, residual, tau_solve

__version__ = "0.1.0"
