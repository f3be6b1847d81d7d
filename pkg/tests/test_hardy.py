import numpy as np
import pytest

from hankelschmidt.hardy import (
    BoundaryGrid,
    HardyVector,
    ProjectionError,
    TruncationWarning,
    boundary_to_coefficients,
    coshift,
    evaluate,
    grid_points,
    inner_product,
    one,
    sample_on_grid,
    shift,
    szego_kernel,
)


def test_inner_product_unit_vector():
    e0 = one(4)
    assert inner_product(e0, e0) == 1.0


def test_inner_product_direct_sum():
    f = HardyVector([1.0, 2.0j])
    g = HardyVector([0.0, 1.0])
    assert inner_product(f, g) == 2.0j


def test_inner_product_positivity():
    rng = np.random.default_rng(0)
    f = HardyVector(rng.normal(size=16) + 1j * rng.normal(size=16))
    val = inner_product(f, f)
    assert abs(val.imag) < 1e-14
    assert val.real >= 0
    assert abs(val.real - f.norm() ** 2) < 1e-12


def test_inner_product_zero_pads():
    f = HardyVector([1.0, 2.0, 3.0])
    g = HardyVector([1.0])
    assert inner_product(f, g) == 1.0


def test_shift_basic():
    f = HardyVector([1.0, 0.0, 0.0])
    assert np.allclose(shift(f).coeffs, [0.0, 1.0, 0.0])


def test_coshift_shift_is_identity():
    rng = np.random.default_rng(1)
    c = rng.normal(size=8) + 1j * rng.normal(size=8)
    c[-1] = 0.0  # headroom
    f = HardyVector(c)
    assert np.allclose(coshift(shift(f)).coeffs, f.coeffs)


def test_shift_coshift_rank_one_defect():
    rng = np.random.default_rng(2)
    f = HardyVector(rng.normal(size=8))
    back = shift(coshift(f))
    expected = f.coeffs.copy()
    expected[0] = 0.0
    assert np.allclose(back.coeffs, expected)


def test_shift_warns_on_truncation_loss():
    f = HardyVector([0.0, 1.0])
    with pytest.warns(TruncationWarning):
        shift(f)


def test_norm_under_shifts():
    rng = np.random.default_rng(3)
    c = rng.normal(size=8) + 1j * rng.normal(size=8)
    c[-1] = 0.0
    f = HardyVector(c)
    assert abs(shift(f).norm() - f.norm()) < 1e-14
    assert abs(coshift(f).norm() ** 2 - (f.norm() ** 2 - abs(c[0]) ** 2)) < 1e-12


def test_evaluate_simple():
    f = HardyVector([1.0, 1.0])
    assert evaluate(f, 0.5) == 1.5
    assert evaluate(f, 0.0) == 1.0


def test_evaluate_truncated_kernel_geometric_oracle():
    # sum |a|^{2n} over n < 64 differs from 1/(1-|a|^2) by ~4^{-64}
    k = szego_kernel(0.5, 64)
    assert abs(evaluate(k, 0.5) - 4.0 / 3.0) < 1e-14


def test_evaluate_rejects_outside_disk():
    with pytest.raises(ValueError):
        evaluate(one(4), 1.5)


def test_finite_validation():
    with pytest.raises(ValueError):
        HardyVector([np.nan, 1.0])
    with pytest.raises(ValueError):
        HardyVector([np.inf])


def test_boundary_polynomial_exact_recovery():
    rng = np.random.default_rng(4)
    f = HardyVector(rng.normal(size=16) + 1j * rng.normal(size=16))
    grid = sample_on_grid(f, 32)  # M = 2N
    back, residual = boundary_to_coefficients(grid, 16)
    assert np.linalg.norm(back.coeffs - f.coeffs) < 1e-12
    assert residual < 1e-12


def test_boundary_constant_samples():
    grid = BoundaryGrid(np.ones(64))
    back, residual = boundary_to_coefficients(grid, 8)
    assert np.allclose(back.coeffs, one(8).coeffs)
    assert residual < 1e-14


def test_boundary_antianalytic_projection_oracle():
    # 1/(1 - (1/2) e^{-it}) = sum_{n>=0} 2^{-n} e^{-int}: the analytic part is
    # the constant 1, and the dropped energy is sqrt(sum_{n>=1} 4^{-n}) = 1/sqrt(3).
    m, n = 256, 32
    z = grid_points(m)
    samples = 1.0 / (1.0 - 0.5 * np.conj(z))
    back, residual = boundary_to_coefficients(BoundaryGrid(samples), n)
    expected = np.zeros(n, dtype=complex)
    expected[0] = 1.0
    assert np.linalg.norm(back.coeffs - expected) < 1e-12
    assert abs(residual - 1.0 / np.sqrt(3.0)) < 1e-12


def test_boundary_projection_threshold():
    m = 256
    z = grid_points(m)
    samples = 1.0 / (1.0 - 0.5 * np.conj(z))
    with pytest.raises(ProjectionError):
        boundary_to_coefficients(BoundaryGrid(samples), 32, max_residual=1e-3)


def test_boundary_requires_headroom():
    grid = BoundaryGrid(np.ones(16))
    with pytest.raises(ValueError):
        boundary_to_coefficients(grid, 16)


def test_parseval_on_grid():
    rng = np.random.default_rng(5)
    f = HardyVector(rng.normal(size=32) + 1j * rng.normal(size=32))
    samples = sample_on_grid(f, 128).samples
    assert abs(np.mean(np.abs(samples) ** 2) - f.norm() ** 2) < 1e-12


def test_grid_size_validation():
    with pytest.raises(ValueError):
        BoundaryGrid(np.ones(12))  # not a power of two
