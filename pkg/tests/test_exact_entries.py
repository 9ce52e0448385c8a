"""Oracle tests for the scalar integrals behind the determinant formula.

The weighted-moment entries are checked against adaptive quadrature with
explicit cos/sin weights, and the tail integrals against high-precision
mpmath evaluation along a rotated (non-oscillatory) contour.
"""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from grassvol import ParameterError, beta_fourier_moment
from grassvol.exact import _osc_tail_integrals, beta_exact


def _moment_oracle(alpha, beta, nu):
    """int_0^1 x^(alpha-1) (1-x)^(beta-1) e^(-i nu x) dx, split by weight."""
    f = lambda x: x ** (alpha - 1) * (1 - x) ** (beta - 1)
    if nu == 0.0:
        return complex(quad(f, 0, 1, epsabs=1e-14)[0])
    re = quad(f, 0, 1, weight="cos", wvar=nu, epsabs=1e-14, limit=400)[0]
    im = quad(f, 0, 1, weight="sin", wvar=nu, epsabs=1e-14, limit=400)[0]
    return re - 1j * im


# Frequencies straddling the series/endpoint crossover for every order pair.
@pytest.mark.parametrize("alpha,beta", [(1, 1), (2, 3), (5, 2), (9, 4), (3, 1), (12, 5)])
@pytest.mark.parametrize("nu", [0.0, 0.5, 5.0, 11.9, 12.1, 17.9, 18.1, 40.0, 250.0])
def test_beta_fourier_moment_matches_quadrature(alpha, beta, nu):
    got = beta_fourier_moment(alpha, beta, nu)
    want = _moment_oracle(alpha, beta, nu)
    assert abs(got - want) < 1e-12


@pytest.mark.parametrize("alpha,beta,nu", [(2, 2, 3.7), (7, 3, 30.0), (1, 1, 0.25)])
def test_beta_fourier_moment_conjugate_symmetry(alpha, beta, nu):
    plus = beta_fourier_moment(alpha, beta, nu)
    minus = beta_fourier_moment(alpha, beta, -nu)
    assert minus == pytest.approx(plus.conjugate(), abs=1e-15)


@pytest.mark.parametrize("alpha,beta", [(1, 1), (4, 2), (10, 7)])
def test_beta_fourier_moment_at_zero_is_beta_function(alpha, beta):
    got = beta_fourier_moment(alpha, beta, 0.0)
    assert got.imag == 0.0
    assert got.real == pytest.approx(float(beta_exact(alpha, beta)), rel=1e-14)


def test_beta_fourier_moment_modulus_bounded():
    # |E[e^(-i nu X)]| <= 1 scaled by B(alpha, beta).
    for nu in np.linspace(0, 120, 37):
        val = beta_fourier_moment(3, 4, float(nu))
        assert abs(val) <= float(beta_exact(3, 4)) + 1e-14


def test_beta_fourier_moment_rejects_bad_orders():
    with pytest.raises(ParameterError):
        beta_fourier_moment(0, 2, 1.0)
    with pytest.raises(ParameterError):
        beta_fourier_moment(2, 0, 1.0)


def test_beta_exact_values():
    assert beta_exact(3, 2) == Fraction(1, 12)
    assert beta_exact(1, 1) == 1
    assert beta_exact(5, 5) == Fraction(
        math.factorial(4) ** 2, math.factorial(9)
    )


# ------------------------------------------------------------
# Tail integrals int_T^inf nu^-s e^(i omega nu) d nu
# ------------------------------------------------------------

def _tail_oracle(s, omega, T):
    """Rotated-contour evaluation, exact for the oscillatory tail.

    For omega > 0 the integrand decays along nu = T + iu, giving
    i e^(i omega T) int_0^inf (T+iu)^-s e^(-omega u) du; omega < 0 follows
    by conjugation and omega = 0 elementarily.
    """
    if omega == 0.0:
        return complex(T ** (1 - s) / (s - 1))
    if omega < 0:
        return complex(_tail_oracle(s, -omega, T)).conjugate()
    mp.mp.dps = 40
    val = mp.quad(
        lambda u: (T + 1j * u) ** (-s) * mp.e ** (-omega * u), [0, mp.inf]
    )
    return complex(1j * mp.e ** (1j * omega * T) * val)


@pytest.mark.parametrize("T", [20.0, 64.0])
@pytest.mark.parametrize("omega", [-2.0, -1.0, 0.0, 0.3, 1.7])
def test_tail_integral_table_matches_contour_oracle(omega, T):
    max_s = 9
    table = _osc_tail_integrals(max_s, np.array([omega]), T)
    assert table.shape == (1, max_s)
    for m in range(1, max_s + 1):
        s = m + 1
        want = _tail_oracle(s, omega, T)
        assert abs(table[0, m - 1] - want) <= 1e-9 * abs(want) + 1e-16


def test_tail_integral_table_vectorizes_over_frequencies():
    omegas = np.array([-1.5, 0.0, 0.4, 2.0])
    table = _osc_tail_integrals(5, omegas, 32.0)
    for i, w in enumerate(omegas):
        single = _osc_tail_integrals(5, np.array([w]), 32.0)
        np.testing.assert_allclose(table[i], single[0], rtol=0, atol=1e-18)


def test_tail_integral_magnitude_decays_with_order():
    # |int| <= T^(1-s)/(s-1), with equality only at omega = 0.
    table = _osc_tail_integrals(8, np.array([0.9]), 25.0)
    for m in range(1, 9):
        s = m + 1
        assert abs(table[0, m - 1]) <= 25.0 ** (1 - s) / (s - 1) + 1e-16
