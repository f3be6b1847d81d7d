"""Constructive extraction of the model-space representation of a Schmidt subspace.

Every nontrivial Schmidt subspace E(s) of a finite-rank Hankel operator
equals p K_theta for an inner theta and an isometric multiplier p, with the
anti-linear action

    f = p h  |->  s e^{i phi} p conj(z) theta conj(h),    h in K_theta.

This module recovers (p, theta, phi) from a computed SchmidtBlock.  The
direct route applies when the subspace has a usable component along the
constant function; otherwise the problem is conjugated by a Moebius map to
a base point where it does, solved there, and mapped back.  Results are
canonicalized to theta(0) = 0, p(0) >= 0 and phi in (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blaschke import (
    BlaschkeProduct,
    MobiusMap,
    blaschke_eval,
    canonical_blaschke,
    compose_with_mobius,
    conjugation_c_theta,
    fit_unimodular_constant,
    frostman_shift,
    mobius_conjugate_function,
    mobius_conjugate_symbol,
    mobius_eval,
    tm_basis,
)
from .hardy import (
    BoundaryGrid,
    HardyVector,
    basis_matrix,
    boundary_to_coefficients,
    default_grid_size,
    evaluate,
    grid_points,
    multiply_by_boundary,
    sample_on_grid,
)
from .hankel import (
    HankelMatrix,
    build_hankel_matrix,
    conjugation_C,
    hankel_apply,
    linear_hankel_apply,
)
from .spectral import SchmidtBlock, orthonormalize, subspace_gap
from .symbols import RationalSymbol, fourier_coefficients, symbol_from_coefficients

__all__ = [
    "Representation",
    "RepresentationResiduals",
    "ExtractionError",
    "extremal_projection",
    "base_point_select",
    "recover_theta",
    "extract_representation",
    "verify_representation",
    "DIRECT_BRANCH_THRESHOLD",
]

DIRECT_BRANCH_THRESHOLD = 0.1
BASE_POINT_RADII = (0.0, 0.15, 0.30, 0.45, 0.60, 0.75)
BASE_POINT_ANGLES = 16


class ExtractionError(RuntimeError):
    """Raised when a representation cannot be extracted to tolerance."""


@dataclass(frozen=True)
class Representation:
    """The triple (p, theta, phi) with E(s) = p K_theta, theta(0) = 0."""

    p: HardyVector
    theta: BlaschkeProduct
    phi: float
    canonicalized_at: complex = 0.0 + 0.0j


@dataclass(frozen=True)
class RepresentationResiduals:
    """Residual report of verify_representation; all entries are nonnegative."""

    subspace_gap: float
    isometry: float
    action: float
    near_invariance: float
    near_invariance_u: float
    linear_form: float
    u_s_cross: float
    theta_inner: float
    p_origin: float

    def as_dict(self) -> dict:
        return {
            "subspace_gap": self.subspace_gap,
            "isometry": self.isometry,
            "action": self.action,
            "near_invariance": self.near_invariance,
            "near_invariance_u": self.near_invariance_u,
            "linear_form": self.linear_form,
            "u_s_cross": self.u_s_cross,
            "theta_inner": self.theta_inner,
            "p_origin": self.p_origin,
        }

    def gated(self, p_origin_floor: float = 1e-3) -> dict:
        """The five checks gating acceptance; near-invariance only counts when
        the multiplier has a usable value at the origin."""
        out = {
            "subspace_gap": self.subspace_gap,
            "isometry": self.isometry,
            "action": self.action,
            "linear_form": self.linear_form,
        }
        if self.p_origin > p_origin_floor:
            out["near_invariance"] = max(self.near_invariance, self.near_invariance_u)
        else:
            out["near_invariance"] = 0.0
        return out


def extremal_projection(block: SchmidtBlock) -> tuple[HardyVector, float]:
    """Orthogonal projection of the constant function onto the block.

    With theta(0) = 0 this equals conj(p(0)) p, so its norm is |p(0)|; a
    norm near zero signals the orthogonal branch.
    """
    q = block.basis @ np.conj(block.basis[0, :])
    return HardyVector(q), float(np.linalg.norm(q))


def base_point_select(
    block: SchmidtBlock,
    radii: tuple[float, ...] = BASE_POINT_RADII,
    n_angles: int = BASE_POINT_ANGLES,
    threshold: float = 1e-6,
    direct_threshold: float = DIRECT_BRANCH_THRESHOLD,
) -> complex:
    """Deterministic base point for the Moebius branch.

    Returns 0 when the projection of the constant onto the block is already
    usable; otherwise the grid point (concentric rings, 16 angles) maximizing
    the block's pointwise energy sum_j |f_j(alpha)|^2.
    """
    _, nq = extremal_projection(block)
    if nq > direct_threshold:
        return 0.0 + 0.0j
    best_alpha = None
    best_val = -1.0
    for r in radii:
        angles = [0.0] if r == 0.0 else [2 * np.pi * k / n_angles for k in range(n_angles)]
        for t in angles:
            alpha = r * np.exp(1j * t)
            vec = np.power(alpha, np.arange(block.order)) @ block.basis
            val = float(np.sum(np.abs(vec) ** 2))
            if val > best_val:
                best_val = val
                best_alpha = alpha
    if best_val <= threshold:
        raise ExtractionError(
            f"no base point on the selection grid carries energy above {threshold:.1e}; "
            "the subspace is numerically zero on the grid"
        )
    return complex(best_alpha)


# ---------------------------------------------------------------------------
# inner-function recovery


def recover_theta(
    p: HardyVector, hup: HardyVector, s: float, d: int, inner_tol: float = 1e-6
) -> tuple[BlaschkeProduct, float, float]:
    """Recover theta (theta(0) = 0, degree d) and the phase from H_u p = s e^{i phi} p S* theta.

    Solves the triangular convolution system jointly for the numerator and
    denominator of S* theta: the smallest singular vector of

        [ T_p[:, :d] | -T_rhs[:, :d+1] ]

    gives polynomials (R, D) with p R = rhs D as power series, so
    theta = z R / D up to the unimodular constant, which is then fitted on
    the boundary.  Returns (theta, phi, boundary fit residual).  Fails if
    the recovered function is not inner to inner_tol.
    """
    if d < 1:
        raise ValueError("theta degree must be at least 1")
    if s <= 0:
        raise ValueError("singular value must be positive")
    n = p.order
    nrm = hup.norm()
    if abs(nrm - s) > 0.01 * s:
        raise ExtractionError(
            f"inconsistent data: ||H_u p|| = {nrm:.6g} but s = {s:.6g}; "
            "the input is not a unit multiplier of this block"
        )
    rhs = hup.coeffs / s
    cols = np.zeros((n, 2 * d + 1), dtype=np.complex128)
    for j in range(d):
        cols[j:, j] = p.coeffs[: n - j]
    for j in range(d + 1):
        cols[j:, d + j] = -rhs[: n - j]
    _, _, vh = np.linalg.svd(cols, full_matrices=False)
    null = np.conj(vh[-1])
    num = null[:d]
    den = null[d:]
    if abs(den[0]) < 1e-8 * np.linalg.norm(den):
        raise ExtractionError("degenerate rational fit: denominator vanishes at the origin")
    num = num / den[0]
    den = den / den[0]

    den_roots = _poly_roots(den)
    if den_roots.size and np.min(np.abs(den_roots)) <= 1.0:
        raise ExtractionError(
            "recovered denominator has a root inside the closed disk; theta is not inner"
        )
    zero_list = _poly_roots(num)
    if zero_list.size != d - 1:
        raise ExtractionError(
            f"recovered numerator has degree {zero_list.size}, expected {d - 1}; "
            "block multiplicity and inner degree disagree"
        )
    if zero_list.size and np.max(np.abs(zero_list)) >= 1.0:
        raise ExtractionError(
            f"recovered inner function has a zero of modulus "
            f"{np.max(np.abs(zero_list)):.6f} outside the open disk"
        )

    grid = grid_points(default_grid_size(max(16, 4 * (d + 1))))
    y = grid * _polyval_ascending(num, grid) / _polyval_ascending(den, grid)
    inner_dev = float(np.max(np.abs(np.abs(y) - 1.0)))
    if inner_dev > inner_tol:
        raise ExtractionError(
            f"fitted function deviates from unit boundary modulus by {inner_dev:.3e}; "
            "upstream data does not define an inner function"
        )
    zeros = np.concatenate([np.zeros(1, dtype=np.complex128), zero_list])
    theta = canonical_blaschke(zeros)
    phase, fit_residual = fit_unimodular_constant(y, blaschke_eval(theta, grid))
    phi = _wrap_phase(np.angle(phase))
    return theta, phi, fit_residual


def _poly_roots(coeffs_ascending: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs_ascending, dtype=np.complex128)
    scale = np.max(np.abs(c))
    if scale == 0:
        return np.empty(0, dtype=np.complex128)
    nz = np.flatnonzero(np.abs(c) > 1e-10 * scale)
    c = c[: nz[-1] + 1]
    if c.size <= 1:
        return np.empty(0, dtype=np.complex128)
    roots = np.roots(c[::-1])
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def _polyval_ascending(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def _wrap_phase(phi: float) -> float:
    out = math.remainder(float(phi), 2 * math.pi)
    if out <= -math.pi:
        out += 2 * math.pi
    return out


# ---------------------------------------------------------------------------
# extraction


def extract_representation(
    sym,
    block: SchmidtBlock,
    tol: float = 1e-7,
    branch: str = "auto",
    base_point: complex | None = None,
    gamma: HankelMatrix | None = None,
    oversample: int = 2,
) -> Representation:
    """Extract the canonical representation of a Schmidt block.

    branch: "auto" picks the direct route when the projection of the constant
    onto the block exceeds the 0.1 threshold, otherwise conjugates to a base
    point; "direct"/"mobius" force a route.  All representation invariants
    (multiplier isometry, subspace equality, action formula) are asserted at
    tolerance `tol` before returning.
    """
    sym = _coerce_symbol(sym)
    if branch not in ("auto", "direct", "mobius"):
        raise ValueError(f"unknown branch {branch!r}")
    n = block.order
    if gamma is None:
        gamma = build_hankel_matrix(sym, n)
    _, nq = extremal_projection(block)
    use_direct = branch == "direct" or (branch == "auto" and nq > DIRECT_BRANCH_THRESHOLD)
    if use_direct:
        p, theta, phi = _extract_direct(gamma, block)
        alpha = 0.0 + 0.0j
    else:
        alpha = complex(base_point) if base_point is not None else base_point_select(block)
        if abs(alpha) >= 1:
            raise ValueError("base point must lie in the open disk")
        p, theta, phi = _extract_via_mobius(sym, block, alpha, oversample=oversample)
    p, theta, phi = _canonicalize(p, theta, phi, oversample=oversample)
    _assert_invariants(gamma, block, p, theta, phi, tol, oversample=oversample)
    return Representation(p=p, theta=theta, phi=phi, canonicalized_at=alpha)


def _coerce_symbol(sym) -> RationalSymbol:
    if isinstance(sym, RationalSymbol):
        return sym
    return symbol_from_coefficients(sym)


def _extract_direct(
    gamma: HankelMatrix, block: SchmidtBlock
) -> tuple[HardyVector, BlaschkeProduct, float]:
    q, nq = extremal_projection(block)
    if nq < 1e-6:
        raise ExtractionError(
            f"projection of the constant onto the block is {nq:.3e}; "
            "the direct route cannot normalize the multiplier"
        )
    p = HardyVector(q.coeffs / nq)
    hup = hankel_apply(gamma, p)
    theta, phi, _ = recover_theta(p, hup, block.s, block.multiplicity)
    return p, theta, phi


def _extract_via_mobius(
    sym: RationalSymbol,
    block: SchmidtBlock,
    alpha: complex,
    work_order: int | None = None,
    oversample: int = 2,
) -> tuple[HardyVector, BlaschkeProduct, float]:
    # Conjugated functions decay like 1/|mu(1/conj(b))| per coefficient, which
    # can be slow; the conjugated subproblem therefore runs at a higher
    # internal order and everything is mapped back to the block's order at the end.
    n = block.order
    n_w = work_order if work_order is not None else min(max(4 * n, 512), 1024)
    m = MobiusMap(alpha)
    w, _ = mobius_conjugate_symbol(sym, m, 2 * n_w - 1, oversample=oversample)
    gamma_w = build_hankel_matrix(w.coeffs, n_w)

    mapped = []
    for j in range(block.multiplicity):
        g, _ = mobius_conjugate_function(HardyVector(block.basis[:, j]), m, n_w, oversample)
        mapped.append(g)
    basis_w = orthonormalize(basis_matrix(mapped))
    block_w = SchmidtBlock(s=block.s, basis=basis_w)

    p_w, theta_w, phi_w = _extract_direct(gamma_w, block_w)

    grid = grid_points(default_grid_size(n_w, oversample))
    p_samples = evaluate(p_w, mobius_eval(m, grid))
    p, _ = boundary_to_coefficients(BoundaryGrid(p_samples), n)
    theta = compose_with_mobius(theta_w, m)
    return p, theta, _wrap_phase(phi_w + math.pi)


def _canonicalize(
    p: HardyVector, theta: BlaschkeProduct, phi: float, oversample: int = 2
) -> tuple[HardyVector, BlaschkeProduct, float]:
    """Normalize to theta(0) = 0 (Frostman shift, flipping the phase sign),
    canonical theta phase, p(0) >= 0, phi in (-pi, pi]."""
    n = p.order
    t0 = complex(blaschke_eval(theta, 0.0))
    if abs(t0) > 1e-10:
        shifted, _ = frostman_shift(theta, t0, n)
        grid = grid_points(default_grid_size(n, oversample))
        g_samples = (1 - np.conj(t0) * blaschke_eval(theta, grid)) / np.sqrt(1 - abs(t0) ** 2)
        p, _ = multiply_by_boundary(p, g_samples, n)
        theta = shifted
        phi = phi + math.pi
    canon = canonical_blaschke(theta.zeros)
    rel = canon.phase / theta.phase
    phi = phi - np.angle(rel)
    theta = canon

    c = p.coeffs
    mags = np.abs(c)
    idx = np.flatnonzero(mags > 1e-8 * mags.max())
    lead = c[idx[0]] if idx.size else 1.0
    rot = np.conj(lead) / abs(lead)
    p = HardyVector(c * rot)
    phi = phi - 2 * np.angle(rot)
    return p, theta, _wrap_phase(phi)


def _assert_invariants(
    gamma: HankelMatrix,
    block: SchmidtBlock,
    p: HardyVector,
    theta: BlaschkeProduct,
    phi: float,
    tol: float,
    oversample: int = 2,
) -> None:
    n = block.order
    if theta.degree != block.multiplicity:
        raise ExtractionError(
            f"inner degree {theta.degree} != block multiplicity {block.multiplicity}"
        )
    basis = tm_basis(theta, n, tail_tol=max(1e-10, 1e-2 * tol))
    grid_m = default_grid_size(n, oversample)
    p_samples = sample_on_grid(p, grid_m).samples
    prods = []
    iso = 0.0
    for e in basis:
        pe, _ = multiply_by_boundary(e, p_samples, n)
        prods.append(pe)
        iso = max(iso, abs(pe.norm() - 1.0))
    if iso > 0.1 * tol:
        raise ExtractionError(f"multiplier is not isometric: deviation {iso:.3e}")
    gap = subspace_gap(block.basis, orthonormalize(basis_matrix(prods)))
    if gap > tol:
        raise ExtractionError(f"subspace gap {gap:.3e} exceeds tolerance {tol:.1e}")
    action = _action_residual(gamma, block.s, p_samples, basis, theta, phi, n)
    if action > tol:
        raise ExtractionError(f"action residual {action:.3e} exceeds tolerance {tol:.1e}")


def _action_residual(
    gamma: HankelMatrix,
    s: float,
    p_samples: np.ndarray,
    basis: list[HardyVector],
    theta: BlaschkeProduct,
    phi: float,
    n: int,
) -> float:
    phase = np.exp(1j * phi)
    worst = 0.0
    for e in basis:
        pe, _ = multiply_by_boundary(e, p_samples, n)
        lhs = hankel_apply(gamma, pe)
        ce = conjugation_c_theta(theta, e, basis=basis)
        rhs, _ = multiply_by_boundary(ce, p_samples, n)
        worst = max(worst, float(np.linalg.norm(lhs.coeffs - s * phase * rhs.coeffs)))
    return worst


# ---------------------------------------------------------------------------
# verification


def verify_representation(
    sym,
    block: SchmidtBlock,
    rep: Representation,
    gamma: HankelMatrix | None = None,
    model_tail_tol: float = 1e-8,
    oversample: int = 2,
) -> RepresentationResiduals:
    """Residual report for a representation against its block and symbol.

    Checks, in order: the subspace equality, the isometric-multiplier
    property, the anti-linear action formula, near-S*-invariance of the
    block (distance of S*f to the block and the normalized pairing with the
    symbol, for f in the block orthogonal to constants), the linear-Hankel
    form with the phase absorbed into the inner factor, and the projection
    of the symbol onto the block against its closed form.  model_tail_tol
    relaxes the basis truncation gate; anything it admits stays far below
    the reported residual scale.
    """
    sym = _coerce_symbol(sym)
    n = block.order
    if gamma is None:
        gamma = build_hankel_matrix(sym, n)
    u = fourier_coefficients(sym, n).coeffs
    s = block.s
    phase = np.exp(1j * rep.phi)

    basis = tm_basis(rep.theta, n, tail_tol=model_tail_tol)
    grid_m = default_grid_size(n, oversample)
    grid = grid_points(grid_m)
    p_samples = sample_on_grid(rep.p, grid_m).samples

    prods = []
    iso = 0.0
    for e in basis:
        pe, _ = multiply_by_boundary(e, p_samples, n)
        prods.append(pe)
        iso = max(iso, abs(pe.norm() - 1.0))
    gap = subspace_gap(block.basis, orthonormalize(basis_matrix(prods)))

    action = 0.0
    for e, pe in zip(basis, prods):
        lhs = hankel_apply(gamma, pe)
        ce = conjugation_c_theta(rep.theta, e, basis=basis)
        rhs, _ = multiply_by_boundary(ce, p_samples, n)
        action = max(action, float(np.linalg.norm(lhs.coeffs - s * phase * rhs.coeffs)))

    near_dist, near_u = _near_invariance(block, u)
    linear = _linear_form_residual(gamma, block, rep, p_samples, basis, grid, n)
    u_s = _symbol_projection_residual(block, rep, u, p_samples, grid, n)
    inner_dev = float(np.max(np.abs(np.abs(blaschke_eval(rep.theta, grid)) - 1.0)))
    return RepresentationResiduals(
        subspace_gap=gap,
        isometry=iso,
        action=action,
        near_invariance=near_dist,
        near_invariance_u=near_u,
        linear_form=linear,
        u_s_cross=u_s,
        theta_inner=inner_dev,
        p_origin=float(abs(rep.p.coeffs[0])),
    )


def _near_invariance(block: SchmidtBlock, u: np.ndarray) -> tuple[float, float]:
    v = block.basis
    row = v[0:1, :]
    null = _nullspace_of_row(row)
    if null.shape[1] == 0:
        return 0.0, 0.0
    w = v @ null
    u_scale = max(1.0, float(np.linalg.norm(u)))
    worst_dist = 0.0
    worst_ip = 0.0
    for j in range(w.shape[1]):
        f = w[:, j]
        sf = np.empty_like(f)
        sf[:-1] = f[1:]
        sf[-1] = 0.0
        resid = sf - v @ (v.conj().T @ sf)
        worst_dist = max(worst_dist, float(np.linalg.norm(resid)))
        worst_ip = max(worst_ip, float(abs(np.vdot(u, sf))) / u_scale)
    return worst_dist, worst_ip


def _nullspace_of_row(row: np.ndarray) -> np.ndarray:
    d = row.shape[1]
    if np.linalg.norm(row) < 1e-14:
        return np.eye(d, dtype=np.complex128)
    _, _, vh = np.linalg.svd(row)
    return np.conj(vh[1:, :]).T


def _linear_form_residual(
    gamma: HankelMatrix,
    block: SchmidtBlock,
    rep: Representation,
    p_samples: np.ndarray,
    basis: list[HardyVector],
    grid: np.ndarray,
    n: int,
) -> float:
    """Residual of G_u C(p e_k) = s p * (e^{i phi} theta / z) * conj(e_k).

    With theta(0) = 0 the inner factor theta/z is again a Blaschke product,
    so the identity takes the phase-absorbed product form.
    """
    zero_idx = np.flatnonzero(np.abs(rep.theta.zeros) < 1e-8)
    if zero_idx.size == 0:
        inner_samples = np.conj(grid) * blaschke_eval(rep.theta, grid)
    else:
        rest = np.delete(rep.theta.zeros, zero_idx[0])
        reduced = BlaschkeProduct(rest, -rep.theta.phase)
        inner_samples = blaschke_eval(reduced, grid)
    inner_samples = np.exp(1j * rep.phi) * inner_samples
    worst = 0.0
    for e in basis:
        pe, _ = multiply_by_boundary(e, p_samples, n)
        lhs = linear_hankel_apply(gamma, conjugation_C(pe))
        e_samples = sample_on_grid(e, grid.size).samples
        rhs, _ = boundary_to_coefficients(
            BoundaryGrid(p_samples * inner_samples * np.conj(e_samples)), n
        )
        worst = max(worst, float(np.linalg.norm(lhs.coeffs - block.s * rhs.coeffs)))
    return worst


def _symbol_projection_residual(
    block: SchmidtBlock,
    rep: Representation,
    u: np.ndarray,
    p_samples: np.ndarray,
    grid: np.ndarray,
    n: int,
) -> float:
    """Cross-check the block projection of the symbol against s e^{i phi} p(0) p (theta/z)."""
    u_s = block.basis @ (block.basis.conj().T @ u)
    p0 = rep.p.coeffs[0]
    samples = p_samples * np.conj(grid) * blaschke_eval(rep.theta, grid)
    target, _ = boundary_to_coefficients(BoundaryGrid(samples), n)
    rhs = block.s * np.exp(1j * rep.phi) * p0 * target.coeffs
    return float(np.linalg.norm(u_s - rhs))
