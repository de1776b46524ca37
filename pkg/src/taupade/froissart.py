"""Froissart-doublet diagnostics for tables of Frobenius-Padé approximants.

A doublet is a pole/zero pair of a computed approximant closer than a
tolerance.  Counting doublets over a grid of types (p, q) gives the
Froissart table; approximants in its doublet-free region are the ones worth
using as filters.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import TauPadeError
from .fpade import RationalApproximant, frobenius_pade
from .orthopoly import CoeffSeries, OrthoBasis, basis_roots, trim_coeffs

__all__ = [
    "ZeroPoleSet",
    "FroissartTable",
    "FilterStrategy",
    "zeros_poles",
    "count_doublets",
    "froissart_cell",
    "froissart_table",
    "select_filter",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-5


@dataclass(frozen=True, eq=False)
class ZeroPoleSet:
    zeros: np.ndarray
    poles: np.ndarray
    p: int
    q: int


def _roots(s: CoeffSeries) -> np.ndarray:
    if len(trim_coeffs(s.coeffs)) < 2:
        return np.zeros(0, dtype=complex)
    return basis_roots(s)


def zeros_poles(r: RationalApproximant) -> ZeroPoleSet:
    """Zeros of the numerator and of the denominator of ``r``."""
    return ZeroPoleSet(_roots(r.numerator), _roots(r.denominator), r.p, r.q)


def count_doublets(zp: ZeroPoleSet, tol: float = DEFAULT_TOL) -> int:
    """Number of pole/zero pairs closer than ``tol``.

    Pairs are matched greedily by global distance: the closest remaining
    pair is taken first, and each pole and each zero is used at most once.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if zp.poles.size == 0 or zp.zeros.size == 0:
        return 0
    dist = np.abs(zp.poles[:, None] - zp.zeros[None, :])
    count = 0
    while True:
        k = np.argmin(dist)
        i, j = np.unravel_index(k, dist.shape)
        if not dist[i, j] < tol:
            return count
        count += 1
        dist[i, :] = np.inf
        dist[:, j] = np.inf


@dataclass(frozen=True, eq=False)
class FroissartTable:
    """Doublet counts ``counts[p-1, q-1]`` for ``1 <= p <= pmax``, ``1 <= q <= qmax``.

    Cells whose approximant could not be built hold ``-1`` in ``counts`` and
    the reason in ``failures[(p, q)]``.
    """

    tol: float
    pmax: int
    qmax: int
    counts: np.ndarray
    failures: dict = field(default_factory=dict)

    def count(self, p, q):
        """Doublet count of cell (p, q), or ``None`` for a failed cell."""
        if (p, q) in self.failures:
            return None
        return int(self.counts[p - 1, q - 1])

    def is_clean(self, p, q):
        return self.count(p, q) == 0

    def cells(self):
        """``(p, q, count_or_None)`` in row-major order."""
        for p in range(1, self.pmax + 1):
            for q in range(1, self.qmax + 1):
                yield p, q, self.count(p, q)


def froissart_cell(basis: OrthoBasis, c, p: int, q: int, tol: float = DEFAULT_TOL) -> int:
    """Doublet count of the single type (p, q) approximant."""
    return count_doublets(zeros_poles(frobenius_pade(basis, c, p, q)), tol)


def _cell_or_failure(args):
    basis, c, p, q, tol = args
    try:
        return froissart_cell(basis, c, p, q, tol), None
    except (TauPadeError, np.linalg.LinAlgError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def froissart_table(basis: OrthoBasis, c, pmax: int, qmax: int, tol: float = DEFAULT_TOL, workers=None) -> FroissartTable:
    """Froissart table of the series ``c`` over ``1..pmax x 1..qmax``.

    Cell failures (too few coefficients, singular Padé system) are recorded,
    never raised.  ``workers > 1`` evaluates cells on a thread pool; the
    result does not depend on the worker count.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    coeffs = c.coeffs if isinstance(c, CoeffSeries) else np.asarray(c, dtype=float)
    jobs = [(basis, coeffs, p, q, tol) for p in range(1, pmax + 1) for q in range(1, qmax + 1)]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cell_or_failure, jobs))
    else:
        results = [_cell_or_failure(job) for job in jobs]

    counts = np.full((pmax, qmax), -1, dtype=int)
    failures = {}
    for (_, _, p, q, _), (n, why) in zip(jobs, results):
        if why is None:
            counts[p - 1, q - 1] = n
        else:
            failures[(p, q)] = why
    counts.flags.writeable = False
    return FroissartTable(tol, pmax, qmax, counts, failures)


class FilterStrategy(str, enum.Enum):
    MAX_CLEAN_DIAGONAL = "max_clean_diagonal"


def select_filter(table: FroissartTable, strategy=FilterStrategy.MAX_CLEAN_DIAGONAL):
    """Pick a doublet-free approximant type from the table, or ``None``.

    ``max_clean_diagonal``: the largest ``p`` with cell (p, p) clean.
    """
    strategy = FilterStrategy(strategy)
    top = min(table.pmax, table.qmax)
    if top < 1:
        raise ValueError("empty Froissart table")
    for p in range(top, 0, -1):
        if table.is_clean(p, p):
            return (p, p)
    return None
