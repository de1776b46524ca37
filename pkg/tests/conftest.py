import numpy as np
import pytest
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import legendre as npleg
from numpy.polynomial import polynomial as nppoly

from taupade.orthopoly import BasisKind, make_basis

ACCEPTANCE_LINES = []


def expansion(basis, f, deg=200):
    """Coefficients of ``f`` in ``basis`` up to ``deg`` (interpolation / Gauss quadrature)."""
    if basis.kind is BasisKind.CHEBYSHEV:
        return npcheb.chebinterpolate(f, deg)
    x, w = npleg.leggauss(deg + 60)
    vander = npleg.legvander(x, deg)
    k = np.arange(deg + 1)
    return (2 * k + 1) / 2 * (vander.T @ (w * f(x)))


def random_rational(rng, p=8, q=8):
    """Real rational N/D with ``p`` zeros in [-1, 1] and ``q`` poles well off [-1, 1].

    Poles come in conjugate pairs with imaginary part in [0.6, 1.5]; returns
    ``(f, zeros, poles)``.
    """
    zeros = rng.uniform(-1, 1, p)
    re = rng.uniform(-1, 1, q // 2)
    im = rng.uniform(0.6, 1.5, q // 2)
    poles = np.concatenate([re + 1j * im, re - 1j * im])
    if q % 2:
        poles = np.append(poles, rng.choice([-1.0, 1.0]) * rng.uniform(1.6, 2.5))
    num = nppoly.polyfromroots(zeros).real
    den = nppoly.polyfromroots(poles).real

    def f(t):
        return nppoly.polyval(t, num) / nppoly.polyval(t, den)

    return f, zeros, poles


@pytest.fixture(params=["chebyshev", "legendre"])
def basis(request):
    return make_basis(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
