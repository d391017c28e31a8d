"""Tests for the Zak transform, the theta form, and the ladder diagnostics."""

import numpy as np
import pytest

from zakbench import (
    BoundViolated,
    ConeParams,
    ExcludedIndex,
    GridFunction,
    SingularNode,
    ThetaDomain,
    ThetaParams,
    center_slope,
    cone,
    enk,
    enk_bound_check,
    gaussian_atom,
    gaussian_zak_theta,
    leading_coefficient,
    load_grid_function,
    midpoint_meshgrid,
    modulated_translate,
    quotient_integral,
    save_grid_function,
    taylor_lower_bound,
    theta1,
    theta1_prime_zero,
    theta_grid,
    zak_transform,
)

# Frozen oracle values, computed by direct high-truncation summation.
THETA_PRIME_ZERO = 0.9067676551677313
CENTER_SUM = 1.291996007481504          # 2^{1/4} * sum_k exp(-pi k^2)
THETA_HALF_PI = 0.9135791381561168      # theta1(pi/2) at q = exp(-pi)
LEADING_COEFF = 3.387687891532136       # 2^{1/4} pi theta1'(0)


def theta_sampler(x, xi):
    return gaussian_zak_theta(x, xi)


def test_zak_of_unit_indicator_is_constant_one():
    def indicator(t):
        t = np.asarray(t, dtype=float)
        return ((0.0 <= t) & (t < 1.0)).astype(complex)

    grid = zak_transform(indicator, 16, 3)
    assert np.max(np.abs(grid.samples - 1.0)) < 1e-14
    assert grid.norm() == pytest.approx(1.0)


def test_gaussian_zak_norm_is_one():
    grid = zak_transform(gaussian_atom, 64, 6)
    assert abs(grid.norm() - 1.0) < 1e-6


def test_gaussian_zak_center_sum_oracle():
    # Value at the origin is a rapidly converging plain Gaussian sum.
    direct = sum(2.0**0.25 * np.exp(-np.pi * k * k) for k in range(-8, 9))
    assert direct == pytest.approx(CENTER_SUM, abs=1e-14)
    assert gaussian_zak_theta(0.0, 0.0) == pytest.approx(CENTER_SUM, abs=1e-12)


def test_theta_form_matches_direct_series():
    M = 64
    direct = zak_transform(gaussian_atom, M, 6)
    theta = theta_grid(M)
    assert np.max(np.abs(direct.samples - theta.samples)) < 1e-10


def test_theta_vanishes_at_center_only():
    assert abs(gaussian_zak_theta(0.5, 0.5)) < 1e-12
    X, XI = midpoint_meshgrid(32)
    vals = np.abs(gaussian_zak_theta(X, XI))
    assert np.min(vals) > 0.05  # nodes stay away from the zero


def test_covariance_under_modulation_and_translation():
    M = 32
    base = zak_transform(gaussian_atom, M, 6)
    X, XI = midpoint_meshgrid(M)
    for n in (-1, 0, 1):
        for k in (-1, 0, 1):
            shifted = zak_transform(modulated_translate(gaussian_atom, n, k), M, 6)
            expected = enk(n, k, X, XI) * base.samples
            assert np.max(np.abs(shifted.samples - expected)) < 1e-10


def test_translated_gaussian_norm():
    # Fractional translates are still unit vectors on the line.
    grid = zak_transform(lambda t: gaussian_atom(t - 0.3), 64, 6)
    assert abs(grid.norm() - 1.0) < 1e-6


def test_theta1_oddness_and_zero():
    assert theta1(0.0) == 0.0
    rng = np.random.default_rng(2)
    for _ in range(25):
        z = complex(3 * rng.standard_normal(), rng.uniform(-1, 1))
        a, b = theta1(z), theta1(-z)
        assert abs(a + b) <= 1e-13 * max(abs(a), 1e-30)


def test_theta1_high_truncation_oracle():
    val8 = theta1(np.pi / 2)
    val20 = theta1(np.pi / 2, ThetaParams(truncation=20))
    assert val8 == pytest.approx(val20, abs=1e-15)
    assert val8.real == pytest.approx(THETA_HALF_PI, abs=1e-12)
    assert abs(val8.imag) < 1e-15


def test_theta1_domain_error():
    with pytest.raises(ThetaDomain):
        theta1(5j)


def test_theta_params_tail_bound():
    with pytest.raises(ValueError):
        ThetaParams(truncation=2)
    ThetaParams(truncation=8)  # the default configuration is valid


def test_theta1_prime_zero_oracle():
    v8 = theta1_prime_zero()
    v20 = theta1_prime_zero(ThetaParams(truncation=20))
    assert abs(v8 - v20) <= 1e-13 * abs(v20)
    assert v8 == pytest.approx(THETA_PRIME_ZERO, abs=1e-13)
    assert v8 >= 0.9


def test_leading_coefficient_matches_measured_slope():
    lead = leading_coefficient()
    assert lead == pytest.approx(LEADING_COEFF, abs=1e-12)
    slope = center_slope()
    assert abs(slope - lead) <= 0.02 * lead


def test_cone_hand_values():
    p = ConeParams(x0=0.0, xi0=0.0)
    assert cone(p, 0.0, 0.0) == 0.0
    assert cone(p, 0.6, 0.8) == pytest.approx(1.0)
    c = ConeParams()
    assert cone(c, 0.5 + 0.1, 0.5) == pytest.approx(cone(c, 0.5 - 0.1, 0.5))


def test_enk_hand_values():
    assert enk(1, 0, 0.25, 0.9) == pytest.approx(np.exp(2j * np.pi * 0.25))
    assert enk(0, 1, 0.9, 0.25) == pytest.approx(np.exp(-2j * np.pi * 0.25))


def test_enk_bound_check_passes():
    report = enk_bound_check(1, 0, trials=10_000, seed=0)
    assert report.pointwise_violations == 0
    assert report.anchored_violations == 0
    assert report.passed


def test_enk_bound_check_anchored_pair_from_bound_constant():
    report = enk_bound_check(2, 3, trials=10_000, seed=1)
    assert report.anchored_max_ratio <= 2 * np.pi * np.hypot(2, 3) + 1e-9
    assert report.passed


def test_enk_bound_check_excluded_indices():
    with pytest.raises(ExcludedIndex):
        enk_bound_check(0, 0, trials=10)
    with pytest.raises(ExcludedIndex):
        enk_bound_check(1, 1, trials=10, base=(1, 1))


def test_quotient_integral_equal_arguments_give_unit_measure():
    report = quotient_integral(theta_sampler, theta_sampler, [4, 8, 16])
    assert report.estimates == [1.0, 1.0, 1.0]
    assert report.converges and not report.diverges


def test_quotient_integral_cone_numerator_converges():
    centre = ConeParams()
    report = quotient_integral(
        lambda x, xi: cone(centre, x, xi), theta_sampler, [64, 128]
    )
    assert report.converges
    assert not report.diverges


def test_quotient_integral_constant_numerator_grows():
    report = quotient_integral(
        lambda x, xi: np.ones_like(np.asarray(x, dtype=float)), theta_sampler, [64, 128]
    )
    assert report.diverges
    assert report.step_growth[0] > 0.10
    assert "cannot certify" in report.note


def test_quotient_integral_threaded_matches_serial():
    centre = ConeParams()
    num = lambda x, xi: cone(centre, x, xi)  # noqa: E731
    serial = quotient_integral(num, theta_sampler, [32, 64, 128])
    threaded = quotient_integral(num, theta_sampler, [32, 64, 128], max_workers=3)
    assert serial.estimates == threaded.estimates


def test_quotient_integral_singular_node():
    # A cone centred exactly on a node makes the denominator vanish there.
    centre = ConeParams(x0=1.0 / 8.0, xi0=1.0 / 8.0)
    with pytest.raises(SingularNode):
        quotient_integral(
            lambda x, xi: np.ones_like(np.asarray(x, dtype=float)),
            lambda x, xi: cone(centre, x, xi),
            [4, 8],
        )


def test_quotient_integral_ladder_validation():
    with pytest.raises(ValueError):
        quotient_integral(theta_sampler, theta_sampler, [64])
    with pytest.raises(ValueError):
        quotient_integral(theta_sampler, theta_sampler, [15, 30])


def test_taylor_lower_bound_constants_positive():
    C, c = taylor_lower_bound(delta=0.1, radial=300, angular=300, off_grid=300)
    assert C > 0.0 and c > 0.0
    # near the zero the quotient approaches the first-order coefficient
    assert C <= leading_coefficient()


def test_taylor_lower_bound_fresh_point_reverification():
    C, _ = taylor_lower_bound(delta=0.1, radial=1000, angular=1000, off_grid=200)
    rng = np.random.default_rng(4)
    r = 0.1 * rng.random(10_000)
    a = 2 * np.pi * rng.random(10_000)
    x = 0.5 + r * np.cos(a)
    xi = 0.5 + r * np.sin(a)
    keep = r > 1e-12
    vals = np.abs(gaussian_zak_theta(x[keep], xi[keep]))
    # sampled minima can undershoot slightly on held-out points
    assert np.all(vals >= C * r[keep] * (1.0 - 1e-4))


def test_taylor_lower_bound_delta_validation():
    with pytest.raises(ValueError):
        taylor_lower_bound(delta=0.6)


def test_grid_function_validation():
    with pytest.raises(ValueError):
        GridFunction(np.zeros((3, 3), dtype=complex))   # odd M
    with pytest.raises(ValueError):
        GridFunction(np.zeros((4, 6), dtype=complex))   # not square
    g = GridFunction(np.ones((4, 4), dtype=complex))
    assert g.norm() == pytest.approx(1.0)


def test_grid_function_roundtrip(tmp_path):
    grid = theta_grid(8)
    path = tmp_path / "grid.json"
    save_grid_function(grid, path)
    loaded = load_grid_function(path)
    assert loaded.M == 8
    assert np.max(np.abs(loaded.samples - grid.samples)) < 1e-15


def test_load_grid_function_rejects_bad_header(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text('{"M": 2, "grid": "corner", "domain": "unit_square", "samples": []}')
    with pytest.raises(ValueError):
        load_grid_function(path)
