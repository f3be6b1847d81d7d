import numpy as np
import pytest

from hankelschmidt.hardy import (
    BoundaryGrid,
    HardyVector,
    boundary_to_coefficients,
    evaluate,
    grid_points,
    inner_product,
    one,
    sample_on_grid,
    szego_kernel,
    unit,
)
from hankelschmidt.hankel import (
    build_hankel_matrix,
    conjugation_C,
    hankel_apply,
    hankel_square,
    identity_residuals,
    linear_hankel_apply,
    toeplitz_multiplier,
)
from hankelschmidt.suites import random_symbol
from hankelschmidt.symbols import (
    PoleTerm,
    RationalSymbol,
    evaluate_symbol,
    symbol_from_coefficients,
    tail_bound,
)


def rank_one_symbol(a=0.5, c=1.0):
    return RationalSymbol(poles=(PoleTerm(b=a, m=1, c=c),))


def test_build_shift_symbol():
    h = build_hankel_matrix(symbol_from_coefficients([0, 1]), 2)
    assert np.array_equal(h.gamma, np.array([[0, 1], [1, 0]], dtype=complex))


def test_build_rank_one_outer_product():
    h = build_hankel_matrix(rank_one_symbol(), 32)
    v = 0.5 ** np.arange(32)
    assert np.linalg.norm(h.gamma - np.outer(v, v)) < 1e-14


def test_symmetry_exact():
    rng = np.random.default_rng(0)
    for _ in range(5):
        h = build_hankel_matrix(random_symbol(rng), 48)
        assert np.array_equal(h.gamma, h.gamma.T)


def test_apply_shift_symbol():
    h = build_hankel_matrix(symbol_from_coefficients([0, 1]), 8)
    out = hankel_apply(h, one(8))
    assert np.allclose(out.coeffs, unit(1, 8).coeffs)


def test_apply_antilinear():
    h = build_hankel_matrix(symbol_from_coefficients([0, 1]), 8)
    out = hankel_apply(h, HardyVector(1j * one(8).coeffs))
    assert np.allclose(out.coeffs, -1j * unit(1, 8).coeffs)


def test_apply_szego_closed_form():
    # H_u f = conj(f(a)) k_a for the kernel symbol at a
    n = 64
    h = build_hankel_matrix(rank_one_symbol(a=0.5), n)
    rng = np.random.default_rng(1)
    f = HardyVector(rng.normal(size=n) + 1j * rng.normal(size=n))
    out = hankel_apply(h, f)
    expected = np.conj(evaluate(f, 0.5)) * szego_kernel(0.5, n).coeffs
    assert np.linalg.norm(out.coeffs - expected) < 1e-12 * np.linalg.norm(expected)


def test_square_shift_symbol_block_identity():
    h = build_hankel_matrix(symbol_from_coefficients([0, 1]), 8)
    m = hankel_square(h)
    assert np.allclose(m[:2, :2], np.eye(2))
    assert np.allclose(m[2:, 2:], 0)


def test_square_rank_one_eigenvalue():
    n = 128
    h = build_hankel_matrix(rank_one_symbol(), n)
    m = hankel_square(h)
    vals = np.linalg.eigvalsh(m)
    assert abs(vals[-1] - (4.0 / 3.0) ** 2) < 1e-10
    assert np.all(np.abs(vals[:-1]) < 1e-12)


def test_square_hermitian_exactly():
    rng = np.random.default_rng(2)
    h = build_hankel_matrix(random_symbol(rng), 64)
    m = hankel_square(h)
    assert np.linalg.norm(m - m.conj().T) == 0.0


def test_conjugation_C():
    f = HardyVector(1j * one(4).coeffs)
    assert np.allclose(conjugation_C(f).coeffs, -1j * one(4).coeffs)


def test_linear_action_example():
    # z * (Jz) = 1 on the circle
    h = build_hankel_matrix(symbol_from_coefficients([0, 1]), 8)
    out = linear_hankel_apply(h, unit(1, 8))
    assert np.allclose(out.coeffs, one(8).coeffs)


def test_linear_equals_antilinear_after_conjugation():
    rng = np.random.default_rng(3)
    h = build_hankel_matrix(random_symbol(rng), 64)
    f = HardyVector(rng.normal(size=64) + 1j * rng.normal(size=64))
    lhs = linear_hankel_apply(h, f)
    rhs = hankel_apply(h, conjugation_C(f))
    assert np.array_equal(lhs.coeffs, rhs.coeffs)


def test_identities_polynomial_symbol_exact():
    rng = np.random.default_rng(4)
    poly = rng.normal(size=16) + 1j * rng.normal(size=16)
    res = identity_residuals(symbol_from_coefficients(poly), 64)
    assert res.max() < 1e-12


def test_identities_rank_one_within_tail_threshold():
    sym = rank_one_symbol()
    res = identity_residuals(sym, 64)
    assert res.max() <= max(1e-10, 10 * tail_bound(sym, 64))


def test_identities_zero_symbol():
    res = identity_residuals(symbol_from_coefficients([0.0]), 32)
    assert res.max() == 0.0


def test_shift_intertwine_interior_exact():
    rng = np.random.default_rng(5)
    res = identity_residuals(random_symbol(rng), 64)
    assert res.shift_intertwine == 0.0


def test_pairing_symmetry_random_vectors():
    rng = np.random.default_rng(6)
    h = build_hankel_matrix(random_symbol(rng), 128)
    for _ in range(10):
        f = HardyVector(rng.normal(size=128) + 1j * rng.normal(size=128))
        g = HardyVector(rng.normal(size=128) + 1j * rng.normal(size=128))
        f = HardyVector(f.coeffs / f.norm())
        g = HardyVector(g.coeffs / g.norm())
        lhs = inner_product(hankel_apply(h, f), g)
        rhs = inner_product(hankel_apply(h, g), f)
        assert abs(lhs - rhs) < 1e-12


def test_boundary_route_agreement():
    # Gamma conj(f) against sample-multiply-project, 50 random symbols
    rng = np.random.default_rng(7)
    n = 64
    z = grid_points(4 * n)
    for _ in range(50):
        sym = random_symbol(rng)
        h = build_hankel_matrix(sym, n)
        f = HardyVector(rng.normal(size=n) + 1j * rng.normal(size=n))
        f = HardyVector(f.coeffs / f.norm())
        direct = hankel_apply(h, f)
        samples = evaluate_symbol(sym, z) * np.conj(sample_on_grid(f, 4 * n).samples)
        projected, _ = boundary_to_coefficients(BoundaryGrid(samples), n)
        assert np.linalg.norm(direct.coeffs - projected.coeffs) < 10 * h.tail + 1e-10


def test_toeplitz_multiplier_is_convolution():
    p = HardyVector([1.0, 2.0, 3.0])
    t = toeplitz_multiplier(p, 5)
    f = np.array([1.0, 1.0, 0.0, 0.0, 0.0])
    out = t @ f
    expected = np.zeros(5)
    expected[:4] = np.convolve([1, 2, 3], [1, 1])
    assert np.allclose(out, expected)


def test_order_mismatch_rejected():
    h = build_hankel_matrix(symbol_from_coefficients([0, 1]), 8)
    with pytest.raises(ValueError):
        hankel_apply(h, one(4))
