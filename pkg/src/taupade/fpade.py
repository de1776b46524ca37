"""Frobenius-Padé (linear Padé) approximants from orthogonal series.

A type (p, q) approximant ``N / D`` with ``N = sum a_i phi_i`` and
``D = phi_q + sum_{i<q} b_i phi_i`` is defined by requiring the expansion of
``D * y - N`` to start at ``phi_{p+q+1}``.  Everything is driven by the
coefficients ``h[i, j]`` of ``phi_j * y``, computed from the series
coefficients through the three-term recurrence.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import (
    DegenerateApproximantError,
    IllConditionedError,
    InsufficientCoefficientsError,
    PoleProximityError,
)
from .orthopoly import BasisKind, CoeffSeries, OrthoBasis, eval_series, make_basis

__all__ = [
    "HTable",
    "RationalApproximant",
    "h_table",
    "frobenius_pade",
    "defining_residual",
    "direct_pade",
    "direct_poles",
    "eval_rational",
    "PADE_MAX_CONDITION",
    "POLE_THRESHOLD",
]

#: Padé systems whose condition estimate exceeds this are treated as singular.
PADE_MAX_CONDITION = np.inf

#: ``|D(t)|`` at or below this counts as evaluating on a pole.
POLE_THRESHOLD = 1e-30

_DEGENERATE_RTOL = 1e-14


def _as_coeffs(c):
    if isinstance(c, CoeffSeries):
        return c.coeffs
    return np.asarray(c, dtype=float).reshape(-1)


@dataclass(frozen=True, eq=False)
class HTable:
    """Coefficients ``entries[i, j]`` of ``phi_j * y`` in the basis."""

    basis: OrthoBasis
    entries: np.ndarray
    source_coeffs: CoeffSeries

    @property
    def rows(self):
        return self.entries.shape[0] - 1

    @property
    def cols(self):
        return self.entries.shape[1] - 1


def _h_general(basis, c, rows, cols):
    big = rows + cols
    i = np.arange(big + 2)
    a, b, g, mu = basis.alpha(i), basis.beta(i), basis.gamma(i), basis.mu(i)
    h = np.full((big + 1, cols + 1), np.nan)
    h[:, 0] = c[: big + 1]
    for j in range(cols):
        last = big - j - 1  # deepest row still computable in column j+1
        r = np.arange(1, last + 1)
        prev = h[r, j - 1] if j else 0.0
        h[r, j + 1] = (
            mu[r + 1] / mu[r] * a[r] * h[r + 1, j]
            + (b[r] - b[j]) * h[r, j]
            + mu[r - 1] / mu[r] * g[r] * h[r - 1, j]
            - g[j] * prev
        ) / a[j]
        h[0, j + 1] = mu[j + 1] / mu[0] * h[j + 1, 0]
    return h


def _h_chebyshev(c, rows, cols):
    big = rows + cols
    h = np.full((big + 1, cols + 1), np.nan)
    h[:, 0] = c[: big + 1]
    for j in range(1, cols + 1):
        last = big - j
        h[0, j] = 0.5 * c[j]
        if last < 1:
            continue
        if j == 1:
            h[1, 1] = h[0, 0] + 0.5 * h[2, 0]
            h[2 : last + 1, 1] = 0.5 * (h[1:last, 0] + h[3 : last + 2, 0])
        else:
            h[1, j] = 2.0 * h[0, j - 1] + h[2, j - 1] - h[1, j - 2]
            r = np.arange(2, last + 1)
            h[r, j] = h[r - 1, j - 1] + h[r + 1, j - 1] - h[r, j - 2]
    return h


def _h_legendre(c, rows, cols):
    big = rows + cols
    h = np.full((big + 1, cols + 1), np.nan)
    h[:, 0] = c[: big + 1]
    for j in range(1, cols + 1):
        last = big - j
        h[0, j] = c[j] / (2 * j + 1)
        r = np.arange(1, last + 1)
        up = (r + 1) / (2 * r + 3)
        down = r / (2 * r - 1)
        if j == 1:
            h[r, 1] = up * c[r + 1] + down * c[r - 1]
        else:
            k = j - 1
            h[r, j] = (2 * k + 1) / (k + 1) * (up * h[r + 1, k] + down * h[r - 1, k]) - k / (k + 1) * h[r, k - 1]
    return h


def h_table(basis: OrthoBasis, c, rows: int, cols: int, method="specialized") -> HTable:
    """Table ``h[i, j]``, ``0 <= i <= rows``, ``0 <= j <= cols``.

    ``method="specialized"`` uses the closed Chebyshev/Legendre rules,
    ``"general"`` the generic recurrence with norm ratios.  Both need the
    series coefficients ``c_0 .. c_{rows+cols}``.
    """
    coeffs = _as_coeffs(c)
    available = len(coeffs) - 1
    if rows < 0 or cols < 0:
        raise ValueError("table dimensions must be non-negative")
    if rows + cols > available:
        raise InsufficientCoefficientsError(
            f"h table {rows}x{cols} needs c_0..c_{rows + cols}, only c_0..c_{available} "
            f"available; feasible tables satisfy rows + cols <= {available}",
            max_feasible=(available - cols, cols),
        )
    if method == "general":
        h = _h_general(basis, coeffs, rows, cols)
    elif method == "specialized":
        h = _h_chebyshev(coeffs, rows, cols) if basis.kind is BasisKind.CHEBYSHEV else _h_legendre(coeffs, rows, cols)
    else:
        raise ValueError(f"unknown h-table method {method!r}")
    entries = h[: rows + 1, : cols + 1].copy()
    entries.flags.writeable = False
    return HTable(basis, entries, CoeffSeries(basis, coeffs))


@dataclass(frozen=True, eq=False)
class RationalApproximant:
    """``numerator / denominator`` with the denominator's top coefficient equal to 1."""

    numerator: CoeffSeries
    denominator: CoeffSeries
    p: int
    q: int
    residual_norm: float = 0.0
    condition: float = 1.0

    @property
    def a(self):
        return self.numerator.coeffs

    @property
    def b(self):
        return self.denominator.coeffs

    def __call__(self, t):
        return eval_rational(self, t)


def _solve_checked(mat, rhs, max_condition, what):
    with warnings.catch_warnings():
        # singularity is reported through the condition estimate instead
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(mat)
    rcond, _ = scipy.linalg.lapack.dgecon(lu, np.linalg.norm(mat, 1), norm="1")
    cond = np.inf if rcond == 0.0 else 1.0 / rcond
    if not np.isfinite(cond) or cond > max_condition:
        raise IllConditionedError(what, cond)
    return scipy.linalg.lu_solve((lu, piv), rhs), float(cond)


def defining_residual(table: HTable, a, b, p: int, q: int) -> np.ndarray:
    """Coefficients ``e_0 .. e_{p+q}`` of ``D * y - N`` from an h table."""
    e = table.entries[: p + q + 1, : q + 1] @ np.asarray(b)
    e[: p + 1] -= a
    return e


def frobenius_pade(basis: OrthoBasis, c, p: int, q: int, max_condition=PADE_MAX_CONDITION) -> RationalApproximant:
    """Type (p, q) Frobenius-Padé approximant of the series ``c``.

    Solves ``H b = -h`` for the denominator (normalised so ``b_q = 1``) and
    sets ``a = G b + g``.  Needs ``c_0 .. c_{p+2q}``.

    Raises
    ------
    InsufficientCoefficientsError
        If fewer than ``p + 2q + 1`` coefficients are given.
    IllConditionedError
        If the q x q system is singular or its condition estimate exceeds
        ``max_condition``.
    """
    coeffs = _as_coeffs(c)
    if p < 0 or q < 0:
        raise ValueError("p and q must be non-negative")
    if q == 0:
        if p + 1 > len(coeffs):
            raise InsufficientCoefficientsError(f"type ({p},0) needs c_0..c_{p}", max_feasible=(len(coeffs) - 1, 0))
        return RationalApproximant(CoeffSeries(basis, coeffs[: p + 1]), CoeffSeries(basis, [1.0]), p, 0)

    table = h_table(basis, coeffs, p + q, q)
    h = table.entries
    big_h = h[p + 1 : p + q + 1, :q]
    little_h = h[p + 1 : p + q + 1, q]
    b, cond = _solve_checked(big_h, -little_h, max_condition, f"Padé system ({p},{q}) is ill-conditioned")
    b = np.append(b, 1.0)
    a = h[: p + 1, :q] @ b[:q] + h[: p + 1, q]
    e = defining_residual(table, a, b, p, q)
    return RationalApproximant(
        CoeffSeries(basis, a), CoeffSeries(basis, b), p, q, float(np.max(np.abs(e))), cond
    )


def _cheb_primed(c, k, second=False):
    """Chebyshev coefficient with the corollary's boundary conventions.

    Plain convention: c'_{-1} = 0, c'_0 = 2 c_0.  ``second=True`` is the one
    needed by the type (p, 2) formulas: c'_{-2} = 0, c'_{-1} = c_1.
    """
    if k == 0:
        return 2.0 * c[0]
    if k > 0:
        return c[k]
    if second and k == -1:
        return c[1]
    return 0.0


def _cheb_h1(c, k):
    return 0.5 * (_cheb_primed(c, k - 1) + c[k + 1])


def _cheb_h2(c, k):
    return 0.5 * (_cheb_primed(c, k - 2, second=True) + c[k + 2])


def _leg_h1(c, k):
    lower = k / (2 * k - 1) * c[k - 1] if k > 0 else 0.0
    return lower + (k + 1) / (2 * k + 3) * c[k + 1]


def _leg_h2(c, k):
    # removable singularities of the textbook form at k = 1 cancelled by hand
    lower = 3 * k * (k - 1) / (2 * (2 * k - 1) * (2 * k - 3)) * c[k - 2] if k >= 2 else 0.0
    middle = k * (k + 1) / ((2 * k + 3) * (2 * k - 1)) * c[k]
    upper = 3 * (k + 1) * (k + 2) / (2 * (2 * k + 3) * (2 * k + 5)) * c[k + 2]
    return lower + middle + upper


def _direct_denominator(kind, c, p, q):
    """(b, h1, h2) for the closed-form (p, 1) / (p, 2) approximants."""
    if q not in (1, 2):
        raise ValueError("closed forms exist only for q = 1 and q = 2")
    if p < 0:
        raise ValueError("p must be non-negative")
    need = p + 2 * q
    if len(c) <= need:
        raise InsufficientCoefficientsError(f"type ({p},{q}) needs c_0..c_{need}", max_feasible=(len(c) - 1 - 2 * q, q))
    h1, h2 = (_cheb_h1, _cheb_h2) if kind is BasisKind.CHEBYSHEV else (_leg_h1, _leg_h2)
    # degeneracy is judged against the entries that enter each formula, so
    # fast-decaying series are not flagged merely for being small
    if q == 1:
        scale = np.max(np.abs(c[p : p + 3]))
        if abs(c[p + 1]) <= _DEGENERATE_RTOL * scale:
            raise DegenerateApproximantError(f"c_{p + 1} = 0: type ({p},1) approximant is degenerate")
        return np.array([-h1(c, p + 1) / c[p + 1], 1.0]), h1, h2
    left, right = c[p + 1] * h1(c, p + 2), h1(c, p + 1) * c[p + 2]
    det = left - right
    if abs(det) <= _DEGENERATE_RTOL * (abs(left) + abs(right)):
        raise DegenerateApproximantError(f"zero determinant: type ({p},2) approximant is degenerate")
    b0 = -(h2(c, p + 1) * h1(c, p + 2) - h1(c, p + 1) * h2(c, p + 2)) / det
    b1 = -(c[p + 1] * h2(c, p + 2) - h2(c, p + 1) * c[p + 2]) / det
    return np.array([b0, b1, 1.0]), h1, h2


def direct_pade(basis_kind, c, p: int, q: int) -> RationalApproximant:
    """Closed-form type (p, 1) or (p, 2) approximant (Chebyshev or Legendre)."""
    basis = make_basis(basis_kind)
    coeffs = _as_coeffs(c)
    b, h1, h2 = _direct_denominator(basis.kind, coeffs, p, q)
    k = range(p + 1)
    if q == 1:
        a = [h1(coeffs, i) + b[0] * coeffs[i] for i in k]
    else:
        a = [coeffs[i] * b[0] + h1(coeffs, i) * b[1] + h2(coeffs, i) for i in k]
    return RationalApproximant(CoeffSeries(basis, a), CoeffSeries(basis, b), p, q)


def direct_poles(basis_kind, c, p: int, q: int) -> np.ndarray:
    """Poles of the type (p, 1) or (p, 2) approximant straight from the coefficients.

    Returns one pole for q = 1 and the pair ``(lambda_plus, lambda_minus)``
    for q = 2, as complex numbers.
    """
    basis = make_basis(basis_kind)
    b, _, _ = _direct_denominator(basis.kind, _as_coeffs(c), p, q)
    if q == 1:
        return np.array([complex(-b[0])])
    b0, b1 = b[0], b[1]
    if basis.kind is BasisKind.CHEBYSHEV:
        # b0 + b1 t + (2t^2 - 1) = 0
        root = cmath.sqrt(b1 * b1 - 8.0 * (b0 - 1.0))
        return np.array([(-b1 + root) / 4.0, (-b1 - root) / 4.0])
    # b0 + b1 t + (3t^2 - 1)/2 = 0
    root = cmath.sqrt(b1 * b1 - 3.0 * (2.0 * b0 - 1.0))
    return np.array([(-b1 + root) / 3.0, (-b1 - root) / 3.0])


def eval_rational(r: RationalApproximant, t):
    """Value of ``r`` at ``t``; raises :class:`PoleProximityError` on a pole."""
    den = np.asarray(eval_series(r.denominator, t))
    bad = np.abs(den) <= POLE_THRESHOLD
    if np.any(bad):
        where = np.asarray(t)[bad] if np.ndim(t) else t
        loc = float(np.ravel(where)[0])
        raise PoleProximityError(f"denominator vanishes at t={loc!r}", loc)
    out = np.asarray(eval_series(r.numerator, t)) / den
    return out[()] if out.ndim == 0 else out
