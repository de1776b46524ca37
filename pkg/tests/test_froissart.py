import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import expansion, random_rational
from taupade.fpade import RationalApproximant, direct_pade, frobenius_pade
from taupade.froissart import (
    FroissartTable,
    ZeroPoleSet,
    count_doublets,
    froissart_cell,
    froissart_table,
    select_filter,
    zeros_poles,
)
from taupade.oracles import example1_operator, example1_oracle
from taupade.orthopoly import CoeffSeries, make_basis
from taupade.taumethod import tau_solve

CHEB = make_basis("chebyshev")


@pytest.fixture(scope="module")
def y150_table():
    c = tau_solve(example1_operator(), CHEB, 150).coeffs.coeffs
    return froissart_table(CHEB, c, 25, 25, 1e-5)


def _zp(zeros, poles):
    return ZeroPoleSet(np.asarray(zeros, dtype=complex), np.asarray(poles, dtype=complex), len(zeros), len(poles))


def test_zeros_poles_of_p1_approximant():
    c = example1_oracle(20).exact_coeffs
    r = direct_pade("chebyshev", c, 4, 1)
    zp = zeros_poles(r)
    assert np.allclose(zp.poles, [-r.b[0]])
    assert len(zp.zeros) == 4


def test_zeros_poles_q0_has_no_poles():
    r = frobenius_pade(CHEB, [1.0, 0.5, 0.25], 2, 0)
    assert zeros_poles(r).poles.size == 0
    const = frobenius_pade(CHEB, [1.0, 0.0], 0, 0)
    assert zeros_poles(const).zeros.size == 0


def test_zeros_poles_of_t2_denominator():
    r = RationalApproximant(CoeffSeries(CHEB, [1.0]), CoeffSeries(CHEB, [0.0, 0.0, 1.0]), 0, 2)
    assert np.allclose(np.sort(zeros_poles(r).poles.real), [-math.sqrt(2) / 2, math.sqrt(2) / 2])


def test_zero_pole_counts_bounded(y150_table):
    c = tau_solve(example1_operator(), CHEB, 150).coeffs.coeffs
    for p, q in [(3, 7), (12, 12), (20, 5)]:
        zp = zeros_poles(frobenius_pade(CHEB, c, p, q))
        assert len(zp.zeros) <= p and len(zp.poles) <= q


def test_count_examples():
    assert count_doublets(_zp([0.0, 0.5], [0.7, -0.3]), 1e-5) == 0
    assert count_doublets(_zp([0.5], [0.5 + 1e-7j]), 1e-5) == 1
    # one zero can absorb only one pole
    assert count_doublets(_zp([0.5], [0.5 + 1e-7j, 0.5 - 1e-7j]), 1e-5) == 1
    assert count_doublets(_zp([], [0.5]), 1e-5) == 0
    with pytest.raises(ValueError):
        count_doublets(_zp([0.5], [0.5]), 0.0)


def test_greedy_takes_closest_pair_first():
    # pole 0 is near both zeros; the closest pair must be matched first so
    # pole 1 can still take the other zero
    zp = _zp([0.0, 2e-6], [1e-6, 2.9e-6])
    assert count_doublets(zp, 1.5e-6) == 2


points = st.lists(st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False), min_size=0, max_size=8)


@settings(max_examples=200, deadline=None)
@given(zeros=points, poles=points, perm_seed=st.integers(0, 1000), t1=st.floats(1e-8, 1.0), t2=st.floats(1e-8, 1.0))
def test_count_order_free_and_monotone(zeros, poles, perm_seed, t1, t2):
    zp = _zp(zeros, poles)
    rng = np.random.default_rng(perm_seed)
    shuffled = _zp(zeros, list(rng.permutation(np.asarray(poles, dtype=complex))))
    lo, hi = sorted((t1, t2))
    n_lo = count_doublets(zp, lo)
    assert n_lo == count_doublets(shuffled, lo)
    assert n_lo <= count_doublets(zp, hi)
    assert 0 <= n_lo <= min(len(zeros), len(poles))


def test_example1_table_clean_diagonal(y150_table):
    assert y150_table.counts.shape == (25, 25)
    for p in range(1, 11):
        assert y150_table.count(p, p) == 0
    sel = select_filter(y150_table)
    assert sel is not None and sel[0] >= 10


def test_table_counts_bounded(y150_table):
    for p, q, k in y150_table.cells():
        assert k is not None and 0 <= k <= min(p, q)


def test_cells_independent(y150_table):
    c = tau_solve(example1_operator(), CHEB, 150).coeffs.coeffs
    for p, q in [(1, 1), (10, 10), (12, 12), (25, 3), (7, 19)]:
        assert froissart_cell(CHEB, c, p, q, 1e-5) == y150_table.count(p, q)


def test_workers_do_not_change_table(y150_table):
    c = tau_solve(example1_operator(), CHEB, 150).coeffs.coeffs
    par = froissart_table(CHEB, c, 25, 25, 1e-5, workers=4)
    assert np.array_equal(par.counts, y150_table.counts)
    assert par.failures == y150_table.failures


def test_failed_cells_are_recorded():
    c = example1_oracle(20).exact_coeffs
    t = froissart_table(CHEB, c, 10, 8, 1e-5)
    # p + 2q <= 20 is required
    assert t.count(10, 5) is not None
    assert (10, 6) in t.failures and t.count(10, 6) is None
    assert "InsufficientCoefficientsError" in t.failures[(10, 6)]
    assert t.counts[9, 5] == -1
    assert not t.is_clean(10, 6)


def test_singular_cells_are_recorded():
    # an even function has c_odd = 0, which makes many Padé systems singular
    c = np.zeros(30)
    c[0] = 1.0
    t = froissart_table(CHEB, c, 4, 4, 1e-5)
    assert t.failures
    assert all("Error" in why for why in t.failures.values())


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_exact_rationals_give_clean_tables(basis, seed):
    rng = np.random.default_rng(100 + seed)
    f, _, _ = random_rational(rng, 8, 8)
    c = expansion(basis, f)
    t = froissart_table(basis, c, 8, 8, 1e-5)
    assert not t.failures
    assert np.all(t.counts == 0)


def test_noise_creates_doublets():
    c = example1_oracle(150).exact_coeffs
    clean = froissart_table(CHEB, c, 25, 25, 1e-5)
    rng = np.random.default_rng(1)
    noisy = froissart_table(CHEB, c + rng.uniform(-1e-10, 1e-10, c.size), 25, 25, 1e-5)
    assert np.count_nonzero(noisy.counts > 0) >= 1
    # observed: ~446 of 625 cells carry doublets, and the clean diagonal
    # shrinks from (11,11) to (6,6) or (7,7)
    assert np.count_nonzero(noisy.counts > 0) > np.count_nonzero(clean.counts > 0)
    assert select_filter(noisy)[0] < select_filter(clean)[0]


def _table(counts, failures=()):
    counts = np.asarray(counts)
    return FroissartTable(1e-5, counts.shape[0], counts.shape[1], counts, {f: "x" for f in failures})


def test_select_filter_strategy():
    n = 12
    counts = np.zeros((n, n), dtype=int)
    for p in range(11, n + 1):
        counts[p - 1, p - 1] = 1
    assert select_filter(_table(counts)) == (10, 10)
    assert select_filter(_table(np.zeros((5, 5), dtype=int))) == (5, 5)
    assert select_filter(_table(np.ones((3, 3), dtype=int))) is None
    assert select_filter(_table(np.zeros((3, 3), dtype=int), failures=[(3, 3)])) == (2, 2)
    assert select_filter(_table(np.zeros((2, 6), dtype=int))) == (2, 2)
    with pytest.raises(ValueError):
        select_filter(_table(np.zeros((2, 2), dtype=int)), "largest")
