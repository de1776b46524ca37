"""Orthogonal polynomial bases on [-1, 1] and the operational matrices built from them.

Every family handled here satisfies a three-term recurrence

    t * phi_i = alpha_i * phi_{i+1} + beta_i * phi_i + gamma_i * phi_{i-1},

with ``phi_0 = 1`` and ``phi_1 = (t - beta_0) / alpha_0``.  Evaluation,
differentiation, multiplication by ``t`` and root-finding are all expressed
through the recurrence coefficients, so nothing is ever converted to the
monomial basis.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError

__all__ = [
    "BasisKind",
    "OrthoBasis",
    "CoeffSeries",
    "ExtrapolationWarning",
    "make_basis",
    "eval_series",
    "basis_values",
    "derivative_matrix",
    "shift_matrix",
    "basis_roots",
    "weighted_norm",
    "trim_coeffs",
    "TRIM_RTOL",
]

#: Trailing coefficients below this fraction of the largest one are treated as zero.
TRIM_RTOL = 1e-13

_INTERVAL_SLACK = 1e-12


class ExtrapolationWarning(UserWarning):
    """A series was evaluated at a real point outside [-1, 1]."""


class BasisKind(str, enum.Enum):
    CHEBYSHEV = "chebyshev"
    LEGENDRE = "legendre"


@dataclass(frozen=True)
class OrthoBasis:
    """Recurrence data of a classical orthogonal family on [-1, 1].

    The coefficient accessors accept an int or an integer array and return
    floats of matching shape.  ``mu(i)`` is the squared weighted norm of
    ``phi_i``.
    """

    kind: BasisKind

    @property
    def interval(self):
        return (-1.0, 1.0)

    def alpha(self, i):
        i = np.asarray(i)
        if self.kind is BasisKind.CHEBYSHEV:
            return np.where(i == 0, 1.0, 0.5)
        return (i + 1.0) / (2.0 * i + 1.0)

    def beta(self, i):
        return np.zeros(np.shape(i))

    def gamma(self, i):
        i = np.asarray(i)
        if self.kind is BasisKind.CHEBYSHEV:
            return np.where(i == 0, 0.0, 0.5)
        return i / (2.0 * i + 1.0)

    def mu(self, i):
        i = np.asarray(i)
        if self.kind is BasisKind.CHEBYSHEV:
            return np.where(i == 0, math.pi, math.pi / 2)
        return 2.0 / (2.0 * i + 1.0)

    def weight(self, t):
        """Orthogonality weight w(t)."""
        t = np.asarray(t, dtype=float)
        if self.kind is BasisKind.CHEBYSHEV:
            return 1.0 / np.sqrt(1.0 - t * t)
        return np.ones_like(t)

    def series(self, coeffs):
        return CoeffSeries(self, coeffs)


def make_basis(kind) -> OrthoBasis:
    """Return the basis for ``kind`` ("chebyshev" or "legendre", any case)."""
    if isinstance(kind, OrthoBasis):
        return kind
    try:
        k = BasisKind(kind.lower() if isinstance(kind, str) else kind)
    except (ValueError, AttributeError):
        raise ConfigurationError(
            f"unsupported basis kind {kind!r}; expected one of "
            f"{[b.value for b in BasisKind]}"
        ) from None
    return OrthoBasis(k)


@dataclass(frozen=True, eq=False)
class CoeffSeries:
    """Finite expansion ``sum_i coeffs[i] * phi_i`` in ``basis``."""

    basis: OrthoBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, t):
        return eval_series(self, t)

    def __eq__(self, other):
        if not isinstance(other, CoeffSeries):
            return NotImplemented
        return self.basis == other.basis and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"CoeffSeries({self.basis.kind.value}, degree={self.degree})"


def _clenshaw(basis: OrthoBasis, coeffs, t):
    """Backward recurrence for ``sum_k coeffs[k] phi_k(t)``.

    ``coeffs`` may be 2-D (axis 0 runs over the basis); the result then has
    shape ``t.shape + coeffs.shape[1:]``.
    """
    c = np.asarray(coeffs)
    t = np.asarray(t)
    n = c.shape[0] - 1
    tail = c.shape[1:]
    tt = t.reshape(t.shape + (1,) * len(tail))
    k = np.arange(n + 2)
    a, b, g = basis.alpha(k), basis.beta(k), basis.gamma(k)
    dtype = np.result_type(c.dtype, t.dtype, float)
    shape = np.broadcast_shapes(tt.shape, tail)
    b1 = np.zeros(shape, dtype=dtype)
    b2 = np.zeros(shape, dtype=dtype)
    for j in range(n, -1, -1):
        b1, b2 = c[j] + (tt - b[j]) / a[j] * b1 - (g[j + 1] / a[j + 1]) * b2, b1
    return b1


def eval_series(s: CoeffSeries, t):
    """Evaluate a coefficient series at ``t`` (scalar or array).

    Uses Clenshaw's backward recurrence.  Real points outside [-1, 1] are
    allowed but raise an :class:`ExtrapolationWarning`.
    """
    if len(s.coeffs) == 0:
        raise ConfigurationError("cannot evaluate an empty coefficient vector")
    t_arr = np.asarray(t)
    if not np.iscomplexobj(t_arr) and np.any(np.abs(t_arr) > 1.0 + _INTERVAL_SLACK):
        warnings.warn("evaluating outside [-1, 1]", ExtrapolationWarning, stacklevel=2)
    out = _clenshaw(s.basis, s.coeffs, t_arr)
    return out[()] if out.ndim == 0 else out


def basis_values(basis: OrthoBasis, n: int, t):
    """Values ``phi_0(t), ..., phi_n(t)`` by the forward recurrence.

    Returns an array of shape ``(n + 1,) + shape(t)``.
    """
    t = np.asarray(t, dtype=float)
    k = np.arange(n + 1)
    a, b, g = basis.alpha(k), basis.beta(k), basis.gamma(k)
    out = np.empty((n + 1,) + t.shape)
    out[0] = 1.0
    if n >= 1:
        out[1] = (t - b[0]) / a[0]
    for i in range(1, n):
        out[i + 1] = ((t - b[i]) * out[i] - g[i] * out[i - 1]) / a[i]
    return out


def derivative_matrix(basis: OrthoBasis, n: int) -> np.ndarray:
    """Differentiation matrix ``eta`` of size (n+1) x (n+1).

    Row ``i`` holds the coefficients of ``d phi_i / dt``; for a coefficient
    row vector ``c`` the derivative has coefficients ``c @ eta``.
    """
    eta = np.zeros((n + 1, n + 1))
    if n == 0:
        return eta
    k = np.arange(n + 2)
    a, b, g = basis.alpha(k), basis.beta(k), basis.gamma(k)
    eta[1, 0] = 1.0 / a[0]
    for i in range(1, n):
        j = np.arange(i)
        row = (b[j] - b[i]) * eta[i, j] + g[j + 1] * eta[i, j + 1] - g[i] * eta[i - 1, j]
        row[1:] += a[j[1:] - 1] * eta[i, j[1:] - 1]
        eta[i + 1, :i] = row / a[i]
        eta[i + 1, i] = (a[i - 1] * eta[i, i - 1] + 1.0) / a[i]
    return eta


def shift_matrix(basis: OrthoBasis, n: int) -> np.ndarray:
    """Tridiagonal matrix of multiplication by ``t``, truncated to (n+1) x (n+1).

    The coupling of row ``n`` into ``phi_{n+1}`` is dropped, so ``c @ mu`` is
    exact only when ``c`` has degree below ``n``.
    """
    k = np.arange(n + 1)
    mu = np.diag(basis.beta(k).astype(float))
    if n > 0:
        mu[k[:-1], k[1:]] = basis.alpha(k[:-1])
        mu[k[1:], k[:-1]] = basis.gamma(k[1:])
    return mu


def trim_coeffs(c, rtol=TRIM_RTOL) -> np.ndarray:
    """Drop trailing entries with ``|c_i| <= rtol * max|c|``."""
    c = np.asarray(c, dtype=float)
    if c.size == 0:
        return c
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return c[:1]
    keep = np.nonzero(np.abs(c) > rtol * scale)[0]
    return c[: keep[-1] + 1]


def basis_roots(s: CoeffSeries) -> np.ndarray:
    """All complex roots of a polynomial given by its basis coefficients.

    The roots are the eigenvalues of the comrade matrix (the colleague matrix
    for Chebyshev).  Returned sorted by real, then imaginary part.
    """
    c = trim_coeffs(s.coeffs)
    d = len(c) - 1
    if d < 1:
        raise ConfigurationError("constant polynomial has no roots")
    basis = s.basis
    comrade = shift_matrix(basis, d - 1)
    comrade[d - 1, :] -= basis.alpha(d - 1) * c[:d] / c[d]
    roots = np.linalg.eigvals(comrade).astype(complex)
    return roots[np.lexsort((roots.imag, roots.real))]


def weighted_norm(s: CoeffSeries) -> float:
    """Weighted L2 norm from the coefficients (Parseval)."""
    c = s.coeffs
    mu = s.basis.mu(np.arange(len(c)))
    return float(np.sqrt(np.sum(mu * c * c)))
