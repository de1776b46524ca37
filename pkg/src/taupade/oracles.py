"""Built-in test problems with closed-form solutions.

``example1``: ``(t + 1) y' - y/2 = 0``, ``y(0) = pi*sqrt(2)/4``, solved in
Chebyshev polynomials.  Its solution ``pi*sqrt(2(t+1))/4`` has a branch
point at ``t = -1``, so the Tau method converges slowly, and the Tau
coefficients are known exactly.

``example2``: ``(1 + a^2 - 2 a t)^2 y'' - 15 a^2 y = 0`` with Dirichlet data,
solved in Legendre polynomials.  The solution is the derivative of the
Legendre generating function, with a branch point at ``(a + 1/a) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import polygamma

from .exceptions import ConfigurationError
from .orthopoly import CoeffSeries, OrthoBasis, make_basis
from .taumethod import Condition, PolyOperator

__all__ = [
    "SeriesOracle",
    "Example1Oracle",
    "Example2Oracle",
    "example1_oracle",
    "example2_oracle",
    "example1_operator",
    "example2_operator",
]

Y0 = math.pi * math.sqrt(2.0) / 4.0


class SeriesOracle:
    """A function with known expansion coefficients in ``basis``.

    Subclasses provide ``exact_coeffs_upto``, ``tail_norm_sq`` and ``y``.
    """

    basis: OrthoBasis

    def exact_coeffs_upto(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def tail_norm_sq(self, n: int) -> float:
        """``sum_{k > n} mu_k c_k^2``."""
        raise NotImplementedError

    def y(self, t):
        raise NotImplementedError

    def error_norm(self, approx: CoeffSeries) -> float:
        """Weighted norm of ``y - approx`` (Parseval plus the exact tail)."""
        n = approx.degree
        diff = self.exact_coeffs_upto(n) - approx.coeffs
        mu = self.basis.mu(np.arange(n + 1))
        return math.sqrt(float(np.sum(mu * diff * diff)) + self.tail_norm_sq(n))


def _example1_exact(n):
    k = np.arange(n + 1, dtype=float)
    c = 2.0 * (-1.0) ** (k + 1) / (4.0 * k * k - 1.0)
    c[0] = 1.0
    return c


def _cheb_at_zero(n):
    """T_k(0) for k = 0..n."""
    k = np.arange(n + 1)
    return np.where(k % 2 == 0, np.where(k % 4 == 0, 1.0, -1.0), 0.0)


@dataclass(frozen=True, eq=False)
class Example1Oracle(SeriesOracle):
    """Exact Chebyshev and Tau coefficients of example 1 at degree ``n``.

    ``tau_coeffs[k] = (y0/S_n) c_k`` for ``k < n`` and the last one carries
    the extra factor ``(2n+1)/(4n)``; ``delta_coeffs = exact - tau``.
    """

    n: int
    exact_coeffs: np.ndarray
    S_n: float
    tau_coeffs: np.ndarray
    delta_coeffs: np.ndarray
    y0: float = Y0

    @property
    def basis(self):
        return make_basis("chebyshev")

    def exact_coeffs_upto(self, n):
        return _example1_exact(n)

    def tail_norm_sq(self, n):
        # sum_{k>n} 4/(4k^2-1)^2 in closed form via the trigamma function
        s = 0.25 * (polygamma(1, n + 0.5) + polygamma(1, n + 1.5)) - 1.0 / (2 * n + 1)
        return math.pi / 2 * float(s)

    def y(self, t):
        t = np.asarray(t, dtype=float)
        return math.pi * np.sqrt(2.0 * (t + 1.0)) / 4.0


def example1_oracle(n: int) -> Example1Oracle:
    if n < 2:
        raise ConfigurationError("example 1 oracle needs n >= 2")
    c = _example1_exact(n)
    t0 = _cheb_at_zero(n)
    s_n = 1.0 + float(np.sum(c[1:] * t0[1:])) + t0[n] / (2.0 * n * (2.0 * n + 1.0))
    tau = Y0 / s_n * c
    tau[n] *= (2.0 * n + 1.0) / (4.0 * n)
    for arr in (c, tau):
        arr.flags.writeable = False
    delta = c - tau
    delta.flags.writeable = False
    return Example1Oracle(n, c, s_n, tau, delta)


@dataclass(frozen=True, eq=False)
class Example2Oracle(SeriesOracle):
    alpha: float

    @property
    def basis(self):
        return make_basis("legendre")

    @property
    def zeta(self) -> float:
        """Branch point closest to [-1, 1]."""
        return 0.5 * (self.alpha + 1.0 / self.alpha)

    @property
    def y_left(self) -> float:
        a = self.alpha
        return (1.0 - a) / (1.0 + a) ** 2

    @property
    def y_right(self) -> float:
        a = self.alpha
        return (1.0 + a) / (1.0 - a) ** 2

    @property
    def legendre_coeffs(self) -> Callable[[int], np.ndarray]:
        return self.exact_coeffs_upto

    def exact_coeffs_upto(self, n):
        k = np.arange(n + 1, dtype=float)
        return (2.0 * k + 1.0) * self.alpha ** k

    def tail_norm_sq(self, n):
        # mu_k c_k^2 = 2 (2k+1) x^k with x = alpha^2; geometric-type sum from k = n+1
        x = self.alpha ** 2
        m = n + 1
        return 2.0 * x ** m * ((2 * m + 1) / (1 - x) + 2 * x / (1 - x) ** 2)

    def y(self, t):
        a = self.alpha
        t = np.asarray(t, dtype=float)
        return (1.0 - a * a) / (1.0 + a * a - 2.0 * a * t) ** 1.5


def example2_oracle(alpha: float) -> Example2Oracle:
    if not 0.0 < abs(alpha) < 1.0:
        raise ConfigurationError(f"example 2 needs 0 < |alpha| < 1, got {alpha}")
    return Example2Oracle(float(alpha))


def example1_operator() -> PolyOperator:
    basis = make_basis("chebyshev")
    return PolyOperator(
        nu=1,
        p=([-0.5], [1.0, 1.0]),
        rhs=CoeffSeries(basis, [0.0]),
        conditions=(Condition(((0.0, 0, 1.0),), Y0),),
    )


def example2_operator(alpha: float) -> PolyOperator:
    oracle = example2_oracle(alpha)
    a = oracle.alpha
    s = 1.0 + a * a
    # (s - 2 a t)^2 expanded in monomials
    lead = [s * s, -4.0 * a * s, 4.0 * a * a]
    return PolyOperator(
        nu=2,
        p=([-15.0 * a * a], [0.0], lead),
        rhs=CoeffSeries(make_basis("legendre"), [0.0]),
        conditions=(
            Condition(((-1.0, 0, 1.0),), oracle.y_left),
            Condition(((1.0, 0, 1.0),), oracle.y_right),
        ),
    )
