"""Tests for the determinant form of the distance characteristic function.

For p = 2 the determinant collapses to a two-dimensional average that scipy's
adaptive quadrature can evaluate directly, giving an independent oracle.
"""

import numpy as np
import pytest
from scipy.integrate import dblquad

from grassvol import Params, UnsupportedSizeError, charfn
from grassvol.exact import CharFnEvaluator


def _pair_average_oracle(params, nu):
    """E[e^(-i nu (x1+x2))] under density prop to (x1-x2)^2 w(x1) w(x2).

    w(x) = x^b (1-x)^a; the normalization cancels by dividing out nu = 0.
    """
    a, b = params.a, params.b
    w = lambda x: x**b * (1 - x) ** a

    def run(kernel):
        val, _ = dblquad(
            lambda y, x: (x - y) ** 2 * w(x) * w(y) * kernel(nu * (x + y)),
            0.0,
            1.0,
            0.0,
            1.0,
            epsabs=1e-12,
            epsrel=1e-12,
        )
        return val

    norm = run(lambda _: 1.0)
    return (run(np.cos) - 1j * run(np.sin)) / norm


@pytest.mark.parametrize("t", [(4, 2, 2), (5, 2, 3)])
@pytest.mark.parametrize("nu", [0.5, 1.0, 5.0, 20.0])
def test_charfn_matches_pair_average(t, nu):
    got = charfn(Params(*t), nu)
    want = _pair_average_oracle(Params(*t), nu)
    assert abs(got - want) < 1e-9


@pytest.mark.parametrize(
    "t", [(4, 2, 2), (5, 2, 3), (6, 3, 3), (8, 4, 4), (9, 2, 4), (12, 6, 6)]
)
def test_charfn_is_one_at_zero(t):
    # Tolerance tracks the conditioning of the moment determinant, which
    # worsens with p; p = 6 lands near 1e-10.
    assert charfn(Params(*t), 0.0) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("t", [(5, 2, 3), (7, 3, 3), (8, 4, 4)])
def test_charfn_modulus_at_most_one(t):
    nus = np.linspace(0.0, 60.0, 121)
    vals = charfn(Params(*t), nus)
    assert np.max(np.abs(vals)) <= 1.0 + 1e-10


def test_charfn_conjugate_symmetry():
    params = Params(6, 2, 3)
    for nu in (0.3, 4.0, 33.0):
        assert charfn(params, -nu) == pytest.approx(
            charfn(params, nu).conjugate(), abs=1e-13
        )


def test_charfn_scalar_and_array_agree():
    params = Params(5, 2, 2)
    nus = np.array([0.0, 1.5, 7.0, 42.0])
    arr = charfn(params, nus)
    assert arr.shape == nus.shape
    for i, nu in enumerate(nus):
        assert charfn(params, float(nu)) == arr[i]


def test_charfn_canonicalizes_input():
    nu = 2.5
    assert charfn(Params(5, 3, 2), nu) == charfn(Params(5, 2, 3), nu)
    assert charfn(Params(4, 3, 3), nu) == charfn(Params(4, 1, 1), nu)


def test_charfn_first_derivative_matches_mean():
    # -i D'(0) is the mean squared distance p(n-q)/n; finite difference.
    params = Params(5, 2, 3)
    h = 1e-5
    deriv = (charfn(params, h) - charfn(params, -h)) / (2 * h)
    mean = params.p * (params.n - params.q) / params.n
    assert (1j * deriv).real == pytest.approx(mean, abs=1e-8)
    assert (1j * deriv).imag == pytest.approx(0.0, abs=1e-8)


def test_evaluator_rejects_oversize_determinant():
    with pytest.raises(UnsupportedSizeError):
        CharFnEvaluator(Params(30, 13, 13))


def test_evaluator_decay_at_large_frequency():
    # Entries decay like 1/nu, so |D| at nu = 500 is far below 1 for p = 2.
    vals = np.abs(charfn(Params(4, 2, 2), np.array([500.0, 1000.0])))
    assert vals[0] < 1e-3
    assert vals[1] < vals[0] * 4  # roughly 1/nu^2 scaling with slack
