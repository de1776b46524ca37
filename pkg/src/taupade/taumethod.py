"""Operational Tau method for linear ODEs with polynomial coefficients.

A problem ``sum_i p_i(t) y^(i)(t) = f(t)`` is turned into the operator
matrix ``Pi = sum_i eta^i p_i(mu)`` acting on coefficient row vectors.  The
Tau system keeps the side conditions exactly and the first ``n + 1 - nu``
projected equations; whatever is left over is the residual ``tau_n``, so that
``D y_n = f + tau_n`` holds exactly.
"""

from __future__ import annotations

import logging
import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .exceptions import ConfigurationError, IllConditionedError
from .orthopoly import CoeffSeries, OrthoBasis, _clenshaw, derivative_matrix, shift_matrix

__all__ = [
    "Condition",
    "PolyOperator",
    "TauSolution",
    "build_pi",
    "operator_matrix",
    "condition_row",
    "tau_solve",
    "residual",
    "error_estimate",
    "MAX_CONDITION",
]

log = logging.getLogger(__name__)

#: Tau systems with a larger condition estimate are rejected.
MAX_CONDITION = 1e14


@dataclass(frozen=True)
class Condition:
    """Linear side condition ``sum weight * y^(order)(point) = value``.

    ``terms`` is a sequence of ``(point, order, weight)`` triples.
    """

    terms: tuple
    value: float

    def __post_init__(self):
        terms = tuple((float(p), int(o), float(w)) for p, o, w in self.terms)
        if not terms:
            raise ConfigurationError("a condition needs at least one term")
        for p, o, _ in terms:
            if not -1.0 <= p <= 1.0:
                raise ConfigurationError(f"condition point {p} outside [-1, 1]")
            if o < 0:
                raise ConfigurationError(f"negative derivative order {o}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "value", float(self.value))

    def homogeneous(self) -> "Condition":
        return replace(self, value=0.0)


@dataclass(frozen=True, eq=False)
class PolyOperator:
    """Differential problem ``sum_{i<=nu} p_i(t) d^i y/dt^i = rhs`` plus conditions.

    ``p[i]`` lists the monomial coefficients of ``p_i`` in increasing powers;
    ``rhs`` is the forcing term expanded in the working basis.
    """

    nu: int
    p: tuple
    rhs: CoeffSeries
    conditions: tuple

    def __post_init__(self):
        p = tuple(np.array(pi, dtype=float).reshape(-1) for pi in self.p)
        for pi in p:
            pi.flags.writeable = False
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "conditions", tuple(self.conditions))
        if self.nu < 0:
            raise ConfigurationError("operator order must be non-negative")
        if len(p) != self.nu + 1:
            raise ConfigurationError(
                f"expected {self.nu + 1} coefficient polynomials, got {len(p)}"
            )
        if not np.any(p[self.nu]):
            raise ConfigurationError("leading coefficient polynomial is identically zero")
        if len(self.conditions) != self.nu:
            raise ConfigurationError(
                f"order {self.nu} operator needs {self.nu} conditions, "
                f"got {len(self.conditions)}"
            )
        for cond in self.conditions:
            if any(o > self.nu - 1 for _, o, _ in cond.terms):
                raise ConfigurationError("condition derivative order must be below nu")

    @property
    def basis(self) -> OrthoBasis:
        return self.rhs.basis

    @property
    def max_poly_degree(self) -> int:
        return max(len(pi) - 1 for pi in self.p)

    def with_rhs(self, rhs: CoeffSeries, homogeneous=False) -> "PolyOperator":
        conds = tuple(c.homogeneous() for c in self.conditions) if homogeneous else self.conditions
        return PolyOperator(self.nu, self.p, rhs, conds)


@dataclass(frozen=True, eq=False)
class TauSolution:
    problem: PolyOperator
    n: int
    coeffs: CoeffSeries
    condition_residuals: np.ndarray
    system_condition_estimate: float
    timings: dict = field(default_factory=dict, compare=False)

    def __call__(self, t):
        return self.coeffs(t)


def _matrix_poly(coeffs, mu):
    """Horner evaluation of a monomial polynomial at the matrix ``mu``."""
    eye = np.eye(mu.shape[0])
    out = coeffs[-1] * eye
    for a in coeffs[-2::-1]:
        out = out @ mu + a * eye
    return out


def operator_matrix(problem: PolyOperator, basis: OrthoBasis, rows: int, cols: int) -> np.ndarray:
    """Leading ``rows x cols`` block of ``sum_i eta^i p_i(mu)``, free of truncation effects."""
    size = max(rows, cols) + problem.nu + problem.max_poly_degree + 1
    eta = derivative_matrix(basis, size - 1)
    mu = shift_matrix(basis, size - 1)
    pi = np.zeros((size, size))
    eta_power = np.eye(size)
    for i, coeffs in enumerate(problem.p):
        if i:
            eta_power = eta_power @ eta
        if np.any(coeffs):
            pi += eta_power @ _matrix_poly(coeffs, mu)
    return pi[:rows, :cols]


def build_pi(problem: PolyOperator, basis: OrthoBasis, n: int) -> np.ndarray:
    """Operator matrix Pi of size (n+1) x (n+1)."""
    if n < problem.nu:
        raise ConfigurationError(f"degree n={n} below operator order {problem.nu}")
    return operator_matrix(problem, basis, n + 1, n + 1)


def condition_row(basis: OrthoBasis, cond: Condition, n: int) -> np.ndarray:
    """Vector ``g`` with ``g_i`` = the condition functional applied to ``phi_i``."""
    g = np.zeros(n + 1)
    max_order = max(o for _, o, _ in cond.terms)
    eta = derivative_matrix(basis, n)
    powers = [np.eye(n + 1)]
    for _ in range(max_order):
        powers.append(powers[-1] @ eta)
    for point, order, weight in cond.terms:
        # row i of eta^order holds the coefficients of phi_i^(order)
        g += weight * _clenshaw(basis, powers[order].T, np.float64(point))
    return g


def _rcond_estimate(lu, a):
    rcond, _ = scipy.linalg.lapack.dgecon(lu, np.linalg.norm(a, 1), norm="1")
    return rcond


def tau_solve(problem: PolyOperator, basis: OrthoBasis, n: int, max_condition=MAX_CONDITION) -> TauSolution:
    """Degree-``n`` Tau approximation of the solution of ``problem``.

    Raises
    ------
    IllConditionedError
        If the 1-norm condition estimate of the Tau matrix exceeds
        ``max_condition``.
    """
    nu = problem.nu
    if n < nu:
        raise ConfigurationError(f"degree n={n} below operator order {nu}")
    if basis != problem.rhs.basis:
        raise ConfigurationError("right-hand side is expanded in a different basis")

    start = time.perf_counter()
    pi = build_pi(problem, basis, n)
    built = time.perf_counter()
    gmat = np.column_stack([condition_row(basis, c, n) for c in problem.conditions]) if nu else np.zeros((n + 1, 0))
    gamma = np.hstack([gmat, pi[:, : n + 1 - nu]])

    f = np.zeros(n + 1 - nu)
    m = min(len(problem.rhs.coeffs), n + 1 - nu)
    f[:m] = problem.rhs.coeffs[:m]
    rhs = np.concatenate([[c.value for c in problem.conditions], f])

    with warnings.catch_warnings():
        # singularity is reported through the condition estimate instead
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(gamma.T, check_finite=True)
    rcond = _rcond_estimate(lu, gamma.T)
    cond = np.inf if rcond == 0.0 else 1.0 / rcond
    if not np.isfinite(cond) or cond > max_condition:
        raise IllConditionedError(f"Tau system of degree {n} is ill-conditioned", cond)
    coeffs = scipy.linalg.lu_solve((lu, piv), rhs)

    cres = gmat.T @ coeffs - rhs[:nu] if nu else np.zeros(0)
    log.debug("tau_solve n=%d cond=%.3e", n, cond)
    done = time.perf_counter()
    timings = {"assemble": built - start, "solve": done - built}
    return TauSolution(problem, n, CoeffSeries(basis, coeffs), cres, float(cond), timings)


def residual(problem: PolyOperator, sol: TauSolution) -> CoeffSeries:
    """Residual ``tau_n = D y_n - f`` as a series of degree ``n + max deg p_i``."""
    basis = sol.coeffs.basis
    n = sol.n
    width = max(n + problem.max_poly_degree + 1, len(problem.rhs.coeffs))
    d_y = sol.coeffs.coeffs @ operator_matrix(problem, basis, n + 1, width)
    d_y[: len(problem.rhs.coeffs)] -= problem.rhs.coeffs
    return CoeffSeries(basis, d_y)


def error_estimate(problem: PolyOperator, sol: TauSolution, m: int) -> CoeffSeries:
    """A posteriori error estimate of degree ``n + m``.

    Solves ``D e = -tau_n`` with the homogeneous versions of all conditions.
    """
    if m < 1:
        raise ConfigurationError("error estimate needs m >= 1")
    tau = residual(problem, sol)
    err_problem = problem.with_rhs(CoeffSeries(tau.basis, -tau.coeffs), homogeneous=True)
    return tau_solve(err_problem, tau.basis, sol.n + m).coeffs
