"""Finite Blaschke products, model spaces, Frostman shifts and Moebius conjugation.

A finite Blaschke product is stored by its zeros and a unimodular phase,

    B(z) = phase * prod_j (a_j - z) / (1 - conj(a_j) z),      |a_j| < 1,

so a zero at the origin contributes the factor (-z).  All products of
coefficient vectors with boundary functions go through sample-then-project
on an oversampled grid, and every routine that returns a Blaschke product
fixes its phase by a least-squares fit on the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hardy import (
    BoundaryGrid,
    HardyVector,
    basis_matrix,
    boundary_to_coefficients,
    default_grid_size,
    evaluate,
    grid_points,
    one,
    sample_on_grid,
)

__all__ = [
    "BlaschkeProduct",
    "MobiusMap",
    "blaschke_eval",
    "blaschke_coefficients",
    "canonical_blaschke",
    "tm_basis",
    "conjugation_c_theta",
    "frostman_shift",
    "mobius_eval",
    "mobius_conjugate_function",
    "mobius_conjugate_symbol",
    "compose_with_mobius",
    "fit_unimodular_constant",
]


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product: unimodular phase times disk-automorphism factors."""

    zeros: np.ndarray
    phase: complex = 1.0 + 0.0j

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.zeros, dtype=np.complex128))
        if z.size and np.max(np.abs(z)) >= 1:
            raise ValueError(f"Blaschke zeros must lie in the open disk, max |a| = {np.max(np.abs(z))}")
        p = complex(self.phase)
        if abs(abs(p) - 1) > 1e-12:
            raise ValueError(f"phase must be unimodular, got |phase| = {abs(p)}")
        object.__setattr__(self, "zeros", z)
        object.__setattr__(self, "phase", p / abs(p))
        self.zeros.setflags(write=False)

    @property
    def degree(self) -> int:
        return self.zeros.size


@dataclass(frozen=True)
class MobiusMap:
    """Disk involution mu(z) = (alpha - z) / (1 - conj(alpha) z)."""

    alpha: complex

    def __post_init__(self):
        a = complex(self.alpha)
        if abs(a) >= 1:
            raise ValueError(f"Moebius parameter must satisfy |alpha| < 1, got {abs(a)}")
        object.__setattr__(self, "alpha", a)


def mobius_eval(m: MobiusMap, z) -> np.ndarray | complex:
    z = np.asarray(z, dtype=np.complex128)
    out = (m.alpha - z) / (1 - np.conj(m.alpha) * z)
    return complex(out) if out.ndim == 0 else out


def blaschke_eval(b: BlaschkeProduct, z) -> np.ndarray | complex:
    """Evaluate B on |z| <= 1 (boundary included) in product form."""
    zs = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(zs) > 1 + 1e-12):
        raise ValueError("evaluation point outside the closed unit disk")
    out = np.full_like(zs, b.phase)
    for a in b.zeros:
        out = out * (a - zs) / (1 - np.conj(a) * zs)
    return complex(out) if out.ndim == 0 else out


def _poly_from_roots(roots: np.ndarray) -> np.ndarray:
    """Ascending coefficients of prod_j (r_j - z)."""
    c = np.array([1.0 + 0.0j])
    for r in roots:
        c = np.convolve(c, np.array([r, -1.0], dtype=np.complex128))
    return c


def _denominator_from_zeros(zeros: np.ndarray) -> np.ndarray:
    """Ascending coefficients of prod_j (1 - conj(a_j) z)."""
    c = np.array([1.0 + 0.0j])
    for a in zeros:
        c = np.convolve(c, np.array([1.0, -np.conj(a)], dtype=np.complex128))
    return c


def _series_div(num: np.ndarray, den: np.ndarray, order: int) -> np.ndarray:
    """Taylor coefficients of num(z)/den(z) with den(0) != 0, by long division."""
    out = np.zeros(order, dtype=np.complex128)
    num = np.asarray(num, dtype=np.complex128)
    den = np.asarray(den, dtype=np.complex128)
    for n in range(order):
        acc = num[n] if n < num.size else 0.0
        kmax = min(n, den.size - 1)
        if kmax:
            acc -= np.dot(den[1 : kmax + 1], out[n - kmax : n][::-1])
        out[n] = acc / den[0]
    return out


def blaschke_coefficients(b: BlaschkeProduct, order: int) -> HardyVector:
    """Exact Taylor coefficients of B via polynomial long division."""
    num = b.phase * _poly_from_roots(b.zeros)
    den = _denominator_from_zeros(b.zeros)
    return HardyVector(_series_div(num, den, order))


def canonical_blaschke(zeros) -> BlaschkeProduct:
    """Blaschke product with the given zeros, phase fixed so that the first
    nonzero Taylor coefficient is real positive."""
    zeros = np.atleast_1d(np.asarray(zeros, dtype=np.complex128))
    raw = BlaschkeProduct(zeros, 1.0)
    c = blaschke_coefficients(raw, zeros.size + 1).coeffs
    lead = c[np.flatnonzero(np.abs(c) > 1e-12 * np.max(np.abs(c)))[0]]
    return BlaschkeProduct(zeros, np.conj(lead) / abs(lead))


def fit_unimodular_constant(target: np.ndarray, candidate: np.ndarray) -> tuple[complex, float]:
    """Least-squares unimodular c with target ~ c*candidate on a grid.

    Returns (c, max deviation |target - c*candidate|).
    """
    num = np.vdot(candidate, target)
    if abs(num) == 0:
        raise ValueError("cannot fit a phase between orthogonal boundary functions")
    c = num / abs(num)
    return complex(c), float(np.max(np.abs(target - c * candidate)))


# ---------------------------------------------------------------------------
# model spaces


def _tm_element(zeros: np.ndarray, k: int, order: int) -> np.ndarray:
    """Coefficients of the k-th Takenaka-Malmquist element for the given zeros."""
    num = np.sqrt(1 - abs(zeros[k]) ** 2) * _poly_from_roots(zeros[:k])
    den = _denominator_from_zeros(zeros[: k + 1])
    return _series_div(num, den, order)


def tm_basis(b: BlaschkeProduct, order: int, tail_tol: float = 1e-10) -> list[HardyVector]:
    """Orthonormal Takenaka-Malmquist basis of the model space K_B.

    Element k is the normalized Szego kernel at zero a_k times the partial
    Blaschke product over the earlier zeros.  Rejects truncation orders at
    which the basis elements have not decayed to tail_tol.
    """
    d = b.degree
    if d == 0:
        return []
    if order < d + 1:
        raise ValueError(f"order {order} too small for a degree-{d} model space")
    extra = 64
    out = []
    for k in range(d):
        c = _tm_element(b.zeros, k, order + extra)
        rate = float(np.max(np.abs(b.zeros[: k + 1])))
        tail_sq = float(np.sum(np.abs(c[order:]) ** 2))
        if rate > 0:
            tail_sq += abs(c[-1]) ** 2 * rate**2 / max(1 - rate**2, 1e-16)
        if np.sqrt(tail_sq) > tail_tol:
            raise ValueError(
                f"order {order} insufficient for model-space basis: tail estimate "
                f"{np.sqrt(tail_sq):.3e} exceeds {tail_tol:.1e}"
            )
        c = c[:order]
        lead = c[np.flatnonzero(np.abs(c) > 1e-12 * np.max(np.abs(c)))[0]]
        out.append(HardyVector(c * (np.conj(lead) / abs(lead))))
    return out


def _distance_to_span(h: HardyVector, basis: list[HardyVector]) -> float:
    if not basis:
        return h.norm()
    v = basis_matrix(basis)
    c = h.coeffs
    return float(np.linalg.norm(c - v @ (v.conj().T @ c)))


def conjugation_c_theta(
    b: BlaschkeProduct,
    h: HardyVector,
    membership_tol: float = 1e-8,
    basis: list[HardyVector] | None = None,
) -> HardyVector:
    """Anti-linear involution h -> conj(z) * B(z) * conj(h(z)) on K_B.

    The input must lie in K_B (checked against the Takenaka-Malmquist span,
    which may be passed in to avoid recomputation); the image is computed on
    the boundary and projected back.
    """
    if basis is None:
        basis = tm_basis(b, h.order)
    dist = _distance_to_span(h, basis)
    if dist > membership_tol * max(h.norm(), 1.0):
        raise ValueError(f"input is {dist:.3e} away from the model space, beyond {membership_tol:.1e}")
    m = default_grid_size(h.order)
    z = grid_points(m)
    samples = np.conj(z) * blaschke_eval(b, z) * np.conj(sample_on_grid(h, m).samples)
    out, _ = boundary_to_coefficients(BoundaryGrid(samples), h.order)
    return out


# ---------------------------------------------------------------------------
# Frostman shifts


def frostman_shift(
    b: BlaschkeProduct, alpha: complex, order: int
) -> tuple[BlaschkeProduct, HardyVector]:
    """Frostman shift of an inner function.

    Returns (B_alpha, g_alpha) with

        B_alpha = (alpha - B) / (1 - conj(alpha) B),
        g_alpha = (1 - conj(alpha) B) / sqrt(1 - |alpha|^2),

    B_alpha realized as a Blaschke product of the same degree (zeros are the
    disk roots of alpha*Q - phase*P where B = phase*P/Q), phase fitted on the
    boundary, and g_alpha returned as an order-`order` coefficient vector.
    """
    alpha = complex(alpha)
    if abs(alpha) >= 1:
        raise ValueError(f"Frostman parameter must satisfy |alpha| < 1, got {abs(alpha)}")
    num = b.phase * _poly_from_roots(b.zeros)
    den = _denominator_from_zeros(b.zeros)
    d = b.degree
    poly = alpha * np.pad(den, (0, d + 1 - den.size)) - np.pad(num, (0, d + 1 - num.size))
    roots = _stable_roots(poly)
    if roots.size != d:
        raise ValueError(f"Frostman root finding returned {roots.size} roots, expected {d}")
    if roots.size and np.max(np.abs(roots)) > 1 - 1e-10:
        raise ValueError(
            f"Frostman shift produced a zero of modulus {np.max(np.abs(roots)):.12f}, too close to the circle"
        )
    roots = _sort_complex(roots)
    m = default_grid_size(max(order, 4 * (d + 1)))
    z = grid_points(m)
    bz = blaschke_eval(b, z)
    target = (alpha - bz) / (1 - np.conj(alpha) * bz)
    shifted = BlaschkeProduct(roots, 1.0)
    phase, dev = fit_unimodular_constant(target, blaschke_eval(shifted, z))
    if dev > 1e-9:
        raise ValueError(f"Frostman phase fit deviates by {dev:.3e} on the boundary")
    shifted = BlaschkeProduct(roots, phase)
    g = (one(order).coeffs - np.conj(alpha) * blaschke_coefficients(b, order).coeffs) / np.sqrt(
        1 - abs(alpha) ** 2
    )
    return shifted, HardyVector(g)


def _stable_roots(poly_ascending: np.ndarray) -> np.ndarray:
    """Roots of a polynomial given by ascending coefficients, trailing zeros trimmed."""
    c = np.asarray(poly_ascending, dtype=np.complex128)
    scale = np.max(np.abs(c))
    if scale == 0:
        return np.empty(0, dtype=np.complex128)
    nz = np.flatnonzero(np.abs(c) > 1e-14 * scale)
    c = c[: nz[-1] + 1]
    if c.size <= 1:
        return np.empty(0, dtype=np.complex128)
    return np.roots(c[::-1])


def _sort_complex(values: np.ndarray) -> np.ndarray:
    order = np.lexsort((values.imag, values.real))
    return values[order]


# ---------------------------------------------------------------------------
# Moebius conjugation


def mobius_conjugate_function(
    f: HardyVector, m: MobiusMap, order: int | None = None, oversample: int = 2
) -> tuple[HardyVector, float]:
    """Unitary change of variable U f(z) = sqrt(1-|a|^2)/(1 - conj(a) z) * f(mu(z)).

    Computed on the boundary and projected; the reported residual is the
    energy dropped by the projection (f composed with mu is no longer a
    polynomial, so the residual grows as |alpha| -> 1).
    """
    if order is None:
        order = f.order
    grid = default_grid_size(max(order, f.order), oversample)
    z = grid_points(grid)
    w = mobius_eval(m, z)
    samples = np.sqrt(1 - abs(m.alpha) ** 2) / (1 - np.conj(m.alpha) * z) * evaluate(f, w)
    return boundary_to_coefficients(BoundaryGrid(samples), order)


def mobius_conjugate_symbol(
    sym, m: MobiusMap, order: int, oversample: int = 2
) -> tuple[HardyVector, float]:
    """Symbol of the conjugated Hankel operator: w = -S*((S u) o mu).

    Returns the first `order` Taylor coefficients of w together with the
    projection residual.  The input may be any rational symbol; evaluation on
    the boundary is exact.
    """
    from .symbols import evaluate_symbol

    grid = default_grid_size(order + 1, oversample)
    z = grid_points(grid)
    w = mobius_eval(m, z)
    samples = w * evaluate_symbol(sym, w)
    g, residual = boundary_to_coefficients(BoundaryGrid(samples), order + 1)
    return HardyVector(-g.coeffs[1:]), residual


def compose_with_mobius(b: BlaschkeProduct, m: MobiusMap) -> BlaschkeProduct:
    """B o mu as a Blaschke product: zeros move to mu(a_j), phase fitted on the boundary."""
    zeros = _sort_complex(np.asarray(mobius_eval(m, b.zeros), dtype=np.complex128).reshape(-1))
    grid = default_grid_size(4 * (b.degree + 1))
    z = grid_points(grid)
    target = blaschke_eval(b, mobius_eval(m, z))
    candidate = BlaschkeProduct(zeros, 1.0)
    phase, dev = fit_unimodular_constant(target, blaschke_eval(candidate, z))
    if dev > 1e-9:
        raise ValueError(f"Moebius composition phase fit deviates by {dev:.3e}")
    return BlaschkeProduct(zeros, phase)
