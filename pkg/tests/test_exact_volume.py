"""Tests for ball volumes: closed-form table, quadrature, and cross-checks."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import dblquad
from scipy.special import betainc

from grassvol import (
    AccuracyError,
    NotTabulatedError,
    ParameterError,
    Params,
    QuadratureConfig,
    UnsupportedSizeError,
    closed_form_supported,
    closed_form_triples,
    closed_form_volume_sq,
    volume_closed_form,
    volume_complement,
    volume_curve,
    volume_quadrature,
    volume_quadrature_half_dim,
)
from grassvol.geometry import jacobi_normalization_exact, max_radius_sq

TABULATED = closed_form_triples()


# ------------------------------------------------------------
# Closed-form table
# ------------------------------------------------------------

def test_tabulated_triples():
    assert TABULATED == (
        (4, 2, 2),
        (5, 2, 2),
        (5, 2, 3),
        (6, 2, 2),
        (6, 2, 3),
        (6, 3, 3),
    )
    assert closed_form_supported(Params(4, 2, 2))
    assert not closed_form_supported(Params(7, 2, 2))
    # Equivalent non-canonical descriptions are recognized.
    assert closed_form_supported(Params(5, 3, 2))
    assert closed_form_supported(Params(6, 4, 3))


@pytest.mark.parametrize("t", TABULATED)
def test_closed_form_endpoints_are_exact(t):
    params = Params(*t)
    assert closed_form_volume_sq(params, Fraction(0)) == 0
    assert closed_form_volume_sq(params, Fraction(max_radius_sq(params))) == 1


@pytest.mark.parametrize("t", TABULATED)
def test_closed_form_is_monotone_and_bounded(t):
    params = Params(*t)
    tmax = max_radius_sq(params)
    grid = [Fraction(k, 40) * tmax for k in range(41)]
    vals = [closed_form_volume_sq(params, x) for x in grid]
    assert all(0 <= v <= 1 for v in vals)
    assert all(v2 >= v1 for v1, v2 in zip(vals, vals[1:]))


def test_closed_form_two_branch_example():
    # G(4, 2) with equal dimensions: t^4/2 below the knot at t = 1 and
    # 1 - (2-t)^4/2 above it, both exactly 1/2 at the knot.
    params = Params(4, 2, 2)
    for tt in [Fraction(1, 4), Fraction(1, 2), Fraction(9, 10)]:
        assert closed_form_volume_sq(params, tt) == tt**4 / 2
    for tt in [Fraction(11, 10), Fraction(36, 25), Fraction(7, 4)]:
        assert closed_form_volume_sq(params, tt) == 1 - (2 - tt) ** 4 / 2
    assert closed_form_volume_sq(params, Fraction(1)) == Fraction(1, 2)


def test_closed_form_fraction_in_fraction_out():
    v = closed_form_volume_sq(Params(4, 2, 2), Fraction(1, 2))
    assert isinstance(v, Fraction)
    assert v == Fraction(1, 32)


def test_closed_form_float_clamp_near_boundary():
    # sqrt(2)**2 overshoots 2 by one ulp; the float path forgives that.
    params = Params(4, 2, 2)
    assert closed_form_volume_sq(params, math.sqrt(2) ** 2) == 1.0
    assert closed_form_volume_sq(params, -1e-14) == 0.0
    with pytest.raises(ParameterError):
        closed_form_volume_sq(params, 2.1)
    with pytest.raises(ParameterError):
        closed_form_volume_sq(params, -0.1)


def test_volume_closed_form_radius_interface():
    assert volume_closed_form(Params(4, 2, 2), 1.0) == 0.5
    assert volume_closed_form(Params(4, 2, 2), 0.5) == 1 / 512
    with pytest.raises(NotTabulatedError):
        volume_closed_form(Params(7, 2, 2), 0.5)


def test_closed_form_accepts_equivalent_triples():
    r = 0.8
    assert volume_closed_form(Params(5, 3, 2), r) == volume_closed_form(
        Params(5, 2, 3), r
    )


# ------------------------------------------------------------
# Quadrature vs independent references
# ------------------------------------------------------------

@pytest.mark.parametrize("t", TABULATED)
def test_quadrature_matches_closed_form(t):
    params = Params(*t)
    rmax = math.sqrt(max_radius_sq(params))
    radii = np.linspace(0.0, rmax, 9)
    got, achieved = volume_curve(params, radii)
    want = [float(closed_form_volume_sq(params, float(r) ** 2)) for r in radii]
    assert achieved <= 1e-8
    np.testing.assert_allclose(got, want, atol=2e-8, rtol=0)


def test_known_rational_point_large_case():
    # G(8, 4), unit radius: the volume is exactly 1/24024.
    got = volume_quadrature(Params(8, 4, 4), 1.0)
    assert abs(got - 1 / 24024) < 2e-9


@pytest.mark.parametrize(
    "t", [(8, 1, 7), (6, 1, 2), (9, 1, 4), (5, 1, 1)]
)
def test_one_dimensional_center_is_beta_law(t):
    # For p = 1 the squared distance is Beta(b+1, a+1) distributed.
    params = Params(*t)
    c = params if params.is_canonical else None
    assert c is not None  # all listed triples are canonical
    for tt in [0.1, 0.35, 0.62, 0.9]:
        got = volume_quadrature(params, math.sqrt(tt))
        want = betainc(params.b + 1, params.a + 1, tt)
        assert abs(got - want) < 1e-8


def test_pair_region_oracle_untabulated_triple():
    # (7,2,3) has no table entry; integrate the two-eigenvalue density over
    # {x + y <= t} directly. Weight x^2 (1-x) per coordinate, v = 1800.
    params = Params(7, 2, 3)
    v = float(jacobi_normalization_exact(params))
    assert v == 1800.0
    dens = lambda y, x: v * (x - y) ** 2 * (x**2 * (1 - x)) * (y**2 * (1 - y))

    def region_volume(tt):
        if tt <= 1.0:
            val, _ = dblquad(dens, 0.0, tt, 0.0, lambda x: tt - x, epsabs=1e-11)
            return val
        val, _ = dblquad(
            dens, tt - 1.0, 1.0, lambda x: tt - x, 1.0, epsabs=1e-11
        )
        return 1.0 - val

    for tt in [0.5, 1.2]:
        got = volume_quadrature(params, math.sqrt(tt))
        assert abs(got - region_volume(tt)) < 1e-7


def test_volume_curve_sorted_and_endpoints():
    params = Params(5, 2, 3)
    radii = np.linspace(0.0, math.sqrt(2.0), 11)
    vals, _ = volume_curve(params, radii)
    assert vals[0] == pytest.approx(0.0, abs=1e-9)
    assert vals[-1] == pytest.approx(1.0, abs=1e-9)
    assert np.all(np.diff(vals) >= -1e-9)


def test_volume_curve_preserves_input_order():
    params = Params(4, 2, 2)
    radii = np.array([1.2, 0.3, 1.0, 0.7])
    vals, _ = volume_curve(params, radii)
    direct = [volume_quadrature(params, float(r)) for r in radii]
    np.testing.assert_allclose(vals, direct, atol=1e-10, rtol=0)


def test_volume_curve_empty_input():
    vals, achieved = volume_curve(Params(4, 2, 2), [])
    assert vals.size == 0
    assert achieved == 0.0


def test_volume_curve_non_canonical_input():
    # Equivalent descriptions of the same ball agree.
    a, _ = volume_curve(Params(6, 4, 2), [0.9])
    b, _ = volume_curve(Params(6, 2, 4), [0.9])
    assert a[0] == pytest.approx(b[0], abs=1e-10)


def test_tight_tolerance_is_honored():
    cfg = QuadratureConfig(abs_tol=1e-10, rel_tol=1e-10)
    got = volume_quadrature(Params(4, 2, 2), 1.0, cfg)
    assert abs(got - 0.5) < 1e-10


# ------------------------------------------------------------
# Alternative routes
# ------------------------------------------------------------

@pytest.mark.parametrize("t,r", [((4, 2, 2), 0.8), ((6, 3, 3), 1.1), ((6, 3, 3), 0.5)])
def test_half_dimension_route_matches_closed_form(t, r):
    got = volume_quadrature_half_dim(Params(*t), r)
    want = volume_closed_form(Params(*t), r)
    assert abs(got - want) < 2e-8


def test_half_dimension_route_matches_determinant_route():
    got = volume_quadrature_half_dim(Params(8, 4, 4), 1.0)
    assert abs(got - 1 / 24024) < 2e-8


def test_half_dimension_route_requires_square_split():
    with pytest.raises(ParameterError):
        volume_quadrature_half_dim(Params(5, 2, 3), 0.5)


@pytest.mark.parametrize("t", [(5, 2, 2), (5, 2, 3), (6, 2, 2), (6, 2, 4)])
def test_complement_route_agrees_with_direct(t):
    params = Params(*t)
    rmax = math.sqrt(max_radius_sq(params))
    for r in np.linspace(0.0, rmax, 7):
        direct = volume_quadrature(params, float(r))
        via_complement = volume_complement(params, float(r))
        assert abs(direct - via_complement) < 3e-8


def test_complement_route_closed_form_inner():
    # (4,2,2) is self-complementary, so the closed form can be used inside.
    got = volume_complement(Params(4, 2, 2), 0.8, inner=volume_closed_form)
    assert got == pytest.approx(volume_closed_form(Params(4, 2, 2), 0.8), abs=1e-12)


# ------------------------------------------------------------
# Failure modes
# ------------------------------------------------------------

def test_radius_out_of_range():
    with pytest.raises(ParameterError):
        volume_quadrature(Params(4, 2, 2), 1.5)
    with pytest.raises(ParameterError):
        volume_quadrature(Params(4, 2, 2), -0.1)


def test_oversize_determinant_rejected():
    with pytest.raises(UnsupportedSizeError):
        volume_quadrature(Params(30, 13, 13), 1.0)


def test_starved_tail_budget_raises_with_estimate():
    # One Laurent term cannot represent the p = 2 tail, so the closure is
    # never accepted and the frequency cap is hit; the error still carries
    # the best panel-sum estimate.
    cfg = QuadratureConfig(max_tail_terms=1, nu_max_cap=200.0)
    with pytest.raises(AccuracyError) as exc:
        volume_quadrature(Params(5, 2, 3), 0.9, cfg)
    err = exc.value
    assert err.target_tol == 1e-8
    assert err.achieved_tol is None or err.achieved_tol > 1e-8
    assert err.estimate is not None
    assert abs(err.estimate - volume_closed_form(Params(5, 2, 3), 0.9)) < 1e-4


def test_low_cap_without_any_closure_attempt():
    cfg = QuadratureConfig(nu_max_cap=12.0)
    with pytest.raises(AccuracyError):
        volume_quadrature(Params(5, 2, 3), 0.9, cfg)
