import math

import mpmath as mp
import numpy as np
import pytest

from gmsteady.kernels import (
    BesselOrder,
    GreenParams,
    bessel_k,
    bessel_k_flagged,
    green_lambda,
    green_lambda_mass,
    green_zero,
    sphere_area,
    verify_kernel_bounds,
)


def k_half_integer_closed(nu: float, z):
    """Closed forms for K_{1/2}, K_{3/2}, K_{5/2}."""
    z = np.asarray(z, dtype=float)
    base = np.sqrt(np.pi / (2.0 * z)) * np.exp(-z)
    if nu == 0.5:
        return base
    if nu == 1.5:
        return base * (1.0 + 1.0 / z)
    if nu == 2.5:
        return base * (1.0 + 3.0 / z + 3.0 / z**2)
    raise ValueError(nu)


def k_series_oracle(s: float, z: float) -> float:
    """High-precision summation of the defining series (independent oracle)."""
    with mp.workdps(40):
        def i_series(order):
            return mp.fsum(
                (mp.mpf(z) / 2) ** (2 * k + order) / (mp.factorial(k) * mp.gamma(k + order + 1))
                for k in range(80)
            )

        val = mp.pi / 2 * (i_series(-mp.mpf(s)) - i_series(mp.mpf(s))) / mp.sin(mp.pi * s)
        return float(val)


def test_half_integer_values_match_series_oracle():
    # frozen from the series oracle at 40 digits
    assert bessel_k(0.5, 1.0) == pytest.approx(0.46106850444789455844, rel=1e-13)
    assert bessel_k(0.5, 2.0) == pytest.approx(0.11993777196806144737, rel=1e-13)
    # and the closed form sqrt(pi/(2z)) e^-z agrees with both
    assert bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), rel=1e-13)
    assert bessel_k(0.5, 2.0) == pytest.approx(math.sqrt(math.pi / 4) * math.exp(-2), rel=1e-13)


def test_series_oracle_cross_check_generic_order():
    for z in (0.3, 1.0, 1.7):
        assert bessel_k(0.3, z) == pytest.approx(k_series_oracle(0.3, z), rel=1e-11)


def test_half_integer_closed_forms_over_range():
    z = np.geomspace(0.01, 50.0, 300)
    for nu in (0.5, 1.5, 2.5):
        vals = bessel_k(nu, z)
        ref = k_half_integer_closed(nu, z)
        assert np.max(np.abs(vals - ref) / ref) <= 1e-12


def test_large_argument_asymptotics():
    # K_{3/2}(z) = sqrt(pi/(2z)) e^-z (1 + 1/z) exactly; the generic
    # asymptotic series gives 1 + (4 nu^2 - 1)/(8 z) + O(1/z^2)
    for z in (50.0, 200.0, 400.0):
        ratio = bessel_k(1.5, z) / (math.sqrt(math.pi / (2 * z)) * math.exp(-z))
        assert ratio == pytest.approx(1.0 + 1.0 / z, rel=1e-12)
        ratio1 = bessel_k(1.0, z) / (math.sqrt(math.pi / (2 * z)) * math.exp(-z))
        # (4*1-1)/8 = 3/8 leading correction
        assert abs(ratio1 - 1.0 - 3.0 / (8.0 * z)) <= 1.0 / z**2


def test_monotone_decreasing_and_positive():
    z = np.geomspace(1e-6, 600.0, 2000)
    for nu in (0.5, 1.0, 1.5, 2.0):
        vals = bessel_k(nu, z)
        assert np.all(vals > 0)
        assert np.all(np.diff(vals) < 0)


def test_domain_errors_and_underflow_flag():
    with pytest.raises(ValueError):
        bessel_k(0.5, 0.0)
    with pytest.raises(ValueError):
        bessel_k(0.5, -1.0)
    with pytest.raises(ValueError):
        bessel_k(BesselOrder(0.5), [1.0, -2.0])
    with pytest.raises(ValueError):
        BesselOrder(-0.5)
    val, flag = bessel_k_flagged(0.5, 800.0)
    assert val == 0.0 and flag
    val, flag = bessel_k_flagged(0.5, 10.0)
    assert val > 0.0 and not flag
    vals, flags = bessel_k_flagged(1.5, np.array([1.0, 800.0]))
    assert vals[1] == 0.0 and flags[1] and not flags[0]


def test_green_zero_values():
    assert green_zero(3, 1.0) == pytest.approx(1.0 / (4 * math.pi), rel=1e-14)
    assert green_zero(3, 2.0) == pytest.approx(1.0 / (8 * math.pi), rel=1e-14)
    assert green_zero(4, 1.0) == pytest.approx(1.0 / (4 * math.pi**2), rel=1e-14)
    with pytest.raises(ValueError):
        green_zero(3, 0.0)
    with pytest.raises(ValueError):
        green_zero(2, 1.0)


def test_green_lambda_closed_form_n3():
    params = GreenParams(3, 1.0)
    r = np.geomspace(0.01, 20.0, 400)
    ref = np.exp(-r) / (4 * math.pi * r)
    vals = green_lambda(params, r)
    assert np.max(np.abs(vals / ref - 1.0)) <= 1e-10
    assert green_lambda(params, 1.0) == pytest.approx(math.exp(-1) / (4 * math.pi), rel=1e-12)
    # shift 0 routes to green_zero; negative shift rejected at the type
    assert green_lambda(GreenParams(3, 0.0), 1.0) == green_zero(3, 1.0)
    with pytest.raises(ValueError):
        GreenParams(3, -1.0)


def test_green_lambda_monotone_in_r():
    for n, lam in [(3, 1.0), (4, 4.0), (5, 2.0)]:
        params = GreenParams(n, lam)
        r = np.geomspace(1e-3, 40.0, 800)
        vals = green_lambda(params, r)
        assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("lam", [1.0, 4.0, 9.0])
def test_delta_calibration_mass_identity(n, lam):
    mass = green_lambda_mass(GreenParams(n, lam))
    assert abs(mass - 1.0 / lam) <= 1e-8 / lam


def test_near_field_bound_small_radius():
    # near the origin the kernel behaves like the unshifted one
    params = GreenParams(3, 1.0)
    ratio = green_lambda(params, 1e-3) / (1e-3) ** (-1)
    assert 0.0 < ratio < 1.0  # finite sandwich constant exists
    params4 = GreenParams(4, 1.0)
    r = np.geomspace(1e-3, 0.5, 50)
    ratios = green_lambda(params4, r) / r ** (-2.0)
    assert np.all(np.isfinite(ratios)) and np.all(ratios > 0)


def test_verify_kernel_bounds_reports():
    params = GreenParams(3, 1.0)
    grid = np.concatenate([np.geomspace(1e-3, 0.5, 40), np.geomspace(2.0, 64.0, 40)])
    report = verify_kernel_bounds(params, grid)
    assert report.c1 > 1.0 and report.c2 > 1.0
    # N=3 far-field ratio is the constant 1/(4 pi) exactly
    far = [q for r, q in report.samples if r > 1.0]
    assert np.max(np.abs(np.asarray(far) - 1.0 / (4 * math.pi))) <= 1e-6 / (4 * math.pi)
    for r, q in report.samples:
        c = report.c1 if r > 1.0 else report.c2
        assert 1.0 / c <= q <= c

    report5 = verify_kernel_bounds(GreenParams(5, 2.0), np.concatenate(
        [np.geomspace(1e-2, 0.9, 30), np.geomspace(2.0, 40.0, 30)]))
    assert math.isfinite(report5.c1) and math.isfinite(report5.c2)


def test_verify_kernel_bounds_argument_errors():
    params = GreenParams(3, 1.0)
    with pytest.raises(ValueError):
        verify_kernel_bounds(params, [])
    with pytest.raises(ValueError):
        verify_kernel_bounds(params, [2.0, 3.0])  # no near-field radii


def test_green_zero_discrete_harmonicity():
    # the discrete radial Laplacian of c r^(2-N) vanishes at second order
    from gmsteady.radial_core import RadialField, RadialGrid, apply_radial_laplacian

    def residual(n_nodes):
        grid = RadialGrid.uniform(6.0, n_nodes)
        r = np.maximum(grid.nodes, 0.3)
        field = RadialField(grid, green_zero(4, r))
        lap = apply_radial_laplacian(field, 4).values
        mask = (grid.nodes >= 0.5) & (grid.nodes <= 5.0)
        return np.max(np.abs(lap[mask]))

    r1, r2 = residual(601), residual(1201)
    assert r1 / r2 == pytest.approx(4.0, rel=0.2)


def test_sphere_area():
    assert sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-14)
    assert sphere_area(4) == pytest.approx(2 * math.pi**2, rel=1e-14)
