import numpy as np
import pytest

from hankelschmidt.blaschke import BlaschkeProduct, blaschke_coefficients
from hankelschmidt.hardy import BoundaryGrid, boundary_to_coefficients, grid_points
from hankelschmidt.symbols import (
    PoleTerm,
    RationalSymbol,
    SymbolFormatError,
    evaluate_symbol,
    fourier_coefficients,
    kronecker_rank_bound,
    parse_symbol,
    symbol_from_coefficients,
    symbol_from_inner,
    symbol_to_dict,
    tail_bound,
)


def geometric_symbol(b=0.5, c=1.0, m=1):
    return RationalSymbol(poles=(PoleTerm(b=b, m=m, c=c),))


def test_geometric_coefficients():
    u = fourier_coefficients(geometric_symbol(), 12).coeffs
    assert np.allclose(u, 0.5 ** np.arange(12))


def test_monomial_coefficients():
    sym = symbol_from_coefficients([0, 0, 0, 1])
    u = fourier_coefficients(sym, 8).coeffs
    expected = np.zeros(8)
    expected[3] = 1.0
    assert np.allclose(u, expected)


def test_double_pole_binomial_oracle():
    # 1/(1 - z/2)^2 = sum (n+1) 2^{-n} z^n, so u_hat(2) = 3/4
    u = fourier_coefficients(geometric_symbol(m=2), 4).coeffs
    assert abs(u[2] - 0.75) < 1e-15


def test_coefficients_additive_in_terms():
    t1 = PoleTerm(b=0.3, m=1, c=1.0 + 1j)
    t2 = PoleTerm(b=-0.6j, m=2, c=0.5)
    joint = fourier_coefficients(RationalSymbol(poles=(t1, t2)), 32).coeffs
    split = (
        fourier_coefficients(RationalSymbol(poles=(t1,)), 32).coeffs
        + fourier_coefficients(RationalSymbol(poles=(t2,)), 32).coeffs
    )
    assert np.allclose(joint, split)


def test_pole_inside_disk_required():
    with pytest.raises(SymbolFormatError):
        PoleTerm(b=1.0, m=1, c=1.0)
    with pytest.raises(SymbolFormatError):
        PoleTerm(b=1.2j, m=1, c=1.0)


def test_multiplicity_cap():
    with pytest.raises(SymbolFormatError):
        PoleTerm(b=0.5, m=5, c=1.0)
    with pytest.raises(SymbolFormatError):
        PoleTerm(b=0.5, m=0, c=1.0)


def test_tail_bound_simple_pole_closed_form():
    for n in (8, 32, 128):
        bound = tail_bound(geometric_symbol(b=0.5, c=2.0), n)
        assert abs(bound - 2.0 * 0.5**n / np.sqrt(1 - 0.25)) < 1e-18 * max(1.0, bound)


def test_tail_bound_polynomial_zero():
    sym = symbol_from_coefficients([1.0, 2.0, 3.0])
    assert tail_bound(sym, 8) == 0.0


def test_tail_bound_sums_over_terms():
    t1 = PoleTerm(b=0.4, m=1, c=1.0)
    t2 = PoleTerm(b=0.7, m=1, c=-2.0j)
    joint = tail_bound(RationalSymbol(poles=(t1, t2)), 16)
    split = tail_bound(RationalSymbol(poles=(t1,)), 16) + tail_bound(
        RationalSymbol(poles=(t2,)), 16
    )
    assert abs(joint - split) < 1e-18


def test_tail_bound_monotone_and_valid_for_multiplicity():
    sym = geometric_symbol(b=0.8, c=1.5, m=3)
    prev = np.inf
    for n in (16, 32, 64, 128, 256):
        bound = tail_bound(sym, n)
        true_tail = np.sqrt(
            sum(
                abs(1.5 * (k + 1) * (k + 2) / 2 * 0.8**k) ** 2
                for k in range(n, n + 4000)
            )
        )
        assert bound >= true_tail  # rigorous upper bound
        assert bound <= prev
        prev = bound


def test_kronecker_rank_bound_never_exceeded():
    rng = np.random.default_rng(7)
    from hankelschmidt.hankel import build_hankel_matrix

    for _ in range(10):
        k = int(rng.integers(1, 4))
        poles = tuple(
            PoleTerm(
                b=complex(rng.uniform(0.1, 0.7) * np.exp(2j * np.pi * rng.uniform())),
                m=int(rng.integers(1, 3)),
                c=complex(rng.normal() + 1j * rng.normal()),
            )
            for _ in range(k)
        )
        deg = int(rng.integers(0, 3))
        poly = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        sym = RationalSymbol(poly=poly, poles=poles)
        gamma = build_hankel_matrix(sym, 64).gamma
        sing = np.linalg.svd(gamma, compute_uv=False)
        numerical = int(np.sum(sing > 1e-10 * sing[0]))
        assert numerical <= kronecker_rank_bound(sym)


def test_kronecker_rank_bound_attained_for_separated_simple_poles():
    rng = np.random.default_rng(8)
    from hankelschmidt.hankel import build_hankel_matrix
    from hankelschmidt.suites import random_symbol

    for _ in range(10):
        sym = random_symbol(rng)
        gamma = build_hankel_matrix(sym, 64).gamma
        sing = np.linalg.svd(gamma, compute_uv=False)
        numerical = int(np.sum(sing > 1e-10 * sing[0]))
        assert numerical == kronecker_rank_bound(sym)


def test_symbol_from_inner_monomials():
    # S* z^2 = z
    sym = symbol_from_inner(BlaschkeProduct([0.0, 0.0], 1.0))
    u = fourier_coefficients(sym, 6).coeffs
    expected = np.zeros(6)
    expected[1] = 1.0
    assert np.allclose(u, expected, atol=1e-12)


def test_symbol_from_inner_degree_one_gives_constant():
    # S* z = 1; the associated 1x1 Hankel matrix has the single entry 1
    sym = symbol_from_inner(BlaschkeProduct([0.0], -1.0))
    u = fourier_coefficients(sym, 4).coeffs
    assert np.allclose(u, [1, 0, 0, 0], atol=1e-12)


def test_symbol_from_inner_boundary_sampling_oracle():
    b = BlaschkeProduct(np.array([0.0, 0.5]), 1.0)
    sym = symbol_from_inner(b)
    n = 64
    u = fourier_coefficients(sym, n).coeffs
    # oracle: sample B on the boundary, project, and shift down by one
    m = 512
    z = grid_points(m)
    from hankelschmidt.blaschke import blaschke_eval

    samples = blaschke_eval(b, z)
    coeffs, _ = boundary_to_coefficients(BoundaryGrid(samples), n + 1)
    assert np.linalg.norm(u - coeffs.coeffs[1:]) < 1e-10


def test_symbol_from_inner_random_blaschke_consistency():
    rng = np.random.default_rng(11)
    for _ in range(5):
        d = int(rng.integers(1, 6))
        zeros = 0.7 * np.sqrt(rng.uniform(size=d)) * np.exp(2j * np.pi * rng.uniform(size=d))
        b = BlaschkeProduct(zeros, np.exp(2j * np.pi * rng.uniform()))
        sym = symbol_from_inner(b)
        u = fourier_coefficients(sym, 80).coeffs
        series = blaschke_coefficients(b, 81).coeffs
        assert np.linalg.norm(u - series[1:]) < 1e-10


def test_evaluate_symbol_matches_coefficients():
    sym = RationalSymbol(
        poly=np.array([0.5, -1.0j]),
        poles=(PoleTerm(b=0.4 + 0.2j, m=2, c=1.0 - 0.5j),),
    )
    u = fourier_coefficients(sym, 256).coeffs
    for z in (0.0, 0.3, -0.5j, 0.7 * np.exp(0.4j)):
        direct = evaluate_symbol(sym, z)
        series = np.sum(u * z ** np.arange(256))
        assert abs(direct - series) < 1e-10


def test_parse_symbol_roundtrip():
    sym = RationalSymbol(
        poly=np.array([1.0, 2.0j]),
        poles=(PoleTerm(b=0.5 - 0.1j, m=2, c=-1.0j),),
    )
    again = parse_symbol(symbol_to_dict(sym))
    assert np.allclose(again.poly, sym.poly)
    assert again.poles == sym.poles


def test_parse_symbol_rejects_bad_pole_with_name():
    doc = {"poly": [], "poles": [{"b": [1.2, 0.0], "m": 1, "c": [1.0, 0.0]}]}
    with pytest.raises(SymbolFormatError, match=r"poles\[0\]"):
        parse_symbol(doc)


def test_parse_symbol_rejects_unknown_fields():
    with pytest.raises(SymbolFormatError, match="unknown"):
        parse_symbol({"poly": [], "polez": []})
    with pytest.raises(SymbolFormatError, match=r"poles\[0\]"):
        parse_symbol({"poles": [{"b": [0.5, 0], "radius": 2}]})
