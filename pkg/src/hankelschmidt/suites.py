"""Seeded randomized verification suites.

Each suite draws its inputs from a seeded generator, exercises one family
of identities at fixed truncation order, and returns a plain dict of
worst-case residuals plus a pass flag.  The same functions back both the
command-line `verify` subcommand and the acceptance tests.
"""

from __future__ import annotations

import numpy as np

from .blaschke import (
    BlaschkeProduct,
    MobiusMap,
    blaschke_coefficients,
    blaschke_eval,
    compose_with_mobius,
    frostman_shift,
    mobius_conjugate_function,
    mobius_conjugate_symbol,
    mobius_eval,
    tm_basis,
)
from .extraction import (
    DIRECT_BRANCH_THRESHOLD,
    ExtractionError,
    extract_representation,
    extremal_projection,
    verify_representation,
)
from .hankel import build_hankel_matrix, identity_residuals
from .hardy import (
    HardyVector,
    basis_matrix,
    default_grid_size,
    evaluate,
    grid_points,
    multiply_by_boundary,
    sample_on_grid,
)
from .spectral import orthonormalize, schmidt_decompose, subspace_gap
from .symbols import PoleTerm, RationalSymbol, fourier_coefficients, tail_bound

__all__ = [
    "random_blaschke",
    "random_symbol",
    "suite_identities",
    "suite_model_spaces",
    "suite_mobius",
    "suite_theorem",
    "suite_branch_b",
]


def random_blaschke(rng: np.random.Generator, max_degree: int = 5, max_radius: float = 0.7,
                    min_degree: int = 1) -> BlaschkeProduct:
    d = int(rng.integers(min_degree, max_degree + 1))
    radii = max_radius * np.sqrt(rng.uniform(0, 1, d))
    angles = rng.uniform(0, 2 * np.pi, d)
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
    return BlaschkeProduct(radii * np.exp(1j * angles), phase)


def random_symbol(rng: np.random.Generator, max_poles: int = 4, max_radius: float = 0.8,
                  min_radius: float = 0.1, min_separation: float = 0.05) -> RationalSymbol:
    """Random symbol with simple, pairwise separated poles and O(1) residues."""
    k = int(rng.integers(1, max_poles + 1))
    bs: list[complex] = []
    while len(bs) < k:
        r = rng.uniform(min_radius, max_radius)
        b = r * np.exp(1j * rng.uniform(0, 2 * np.pi))
        if all(abs(b - other) >= min_separation for other in bs):
            bs.append(complex(b))
    coeffs = (rng.normal(size=k) + 1j * rng.normal(size=k)) / np.sqrt(2)
    poles = tuple(PoleTerm(b=b, m=1, c=complex(c)) for b, c in zip(bs, coeffs))
    return RationalSymbol(poles=poles)


def _random_unit_hardy(rng: np.random.Generator, order: int, support: int | None = None) -> HardyVector:
    n = order if support is None else min(support, order)
    c = np.zeros(order, dtype=np.complex128)
    c[:n] = rng.normal(size=n) + 1j * rng.normal(size=n)
    return HardyVector(c / np.linalg.norm(c))


# ---------------------------------------------------------------------------


def suite_identities(seed: int, count: int = 50, order: int = 128, perturb: float = 0.0) -> dict:
    """Operator identities on random rational symbols.

    Residuals must stay below max(1e-10, 10 * tail_bound) per symbol; with
    perturb > 0 the matrix symmetry is deliberately broken to confirm the
    checks can fail.
    """
    rng = np.random.default_rng(seed)
    names = ["shift_intertwine", "square_compression", "square_commutator", "symmetry",
             "toeplitz_compression"]
    worst = {k: 0.0 for k in names}
    failures = {k: 0 for k in names}
    for _ in range(count):
        sym = random_symbol(rng)
        if perturb > 0.0:
            from .hankel import residuals_from_matrix

            gamma = build_hankel_matrix(sym, order).gamma.copy()
            gamma[0, -1] += perturb
            res = residuals_from_matrix(gamma, fourier_coefficients(sym, order).coeffs)
        else:
            res = identity_residuals(sym, order)
        threshold = max(1e-10, 10 * tail_bound(sym, order))
        for name, value in res.as_dict().items():
            worst[name] = max(worst[name], value)
            if value > threshold:
                failures[name] += 1
    n_failed = sum(failures.values())
    return {
        "count": count,
        "order": order,
        "max_residuals": worst,
        "failures": failures,
        "pass": n_failed == 0,
    }


def suite_model_spaces(seed: int, n_blaschke: int = 30, n_alpha: int = 3,
                       order: int = 128) -> dict:
    """Model-space algebra: the S*-compression identity and Frostman shifts."""
    rng = np.random.default_rng(seed)
    worst_lemma = 0.0
    worst_frostman_gap = 0.0
    worst_isometry = 0.0
    worst_boundary = 0.0
    skipped = 0
    done = 0
    while done < n_blaschke:
        b = random_blaschke(rng)
        try:
            basis = tm_basis(b, order)
        except ValueError:
            skipped += 1
            continue
        v = basis_matrix(basis)
        worst_lemma = max(worst_lemma, _lemma_backward_shift_gap(b, v, order))
        hits = 0
        while hits < n_alpha:
            alpha = 0.5 * np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            result = _frostman_invariance_check(b, alpha, order)
            if result is None:
                # shifted zeros too close to the circle even at the escalated
                # orders; redraw the shift parameter
                skipped += 1
                continue
            hits += 1
            gap, iso, boundary = result
            worst_frostman_gap = max(worst_frostman_gap, gap)
            worst_isometry = max(worst_isometry, iso)
            worst_boundary = max(worst_boundary, boundary)
        done += 1
    ok = worst_lemma < 1e-8 and worst_frostman_gap < 1e-8 and worst_boundary < 1e-10
    return {
        "n_blaschke": n_blaschke,
        "n_alpha": n_alpha,
        "order": order,
        "skipped_draws": skipped,
        "max_residuals": {
            "backward_shift_identity": worst_lemma,
            "frostman_subspace_gap": worst_frostman_gap,
            "frostman_isometry": worst_isometry,
            "frostman_boundary_identity": worst_boundary,
        },
        "pass": bool(ok and worst_isometry < 1e-8),
    }


def _frostman_invariance_check(
    b: BlaschkeProduct, alpha: complex, order: int, max_order: int = 1024
) -> tuple[float, float, float] | None:
    """Check K_B = g_alpha K_{B_alpha} at the smallest order that resolves the shift.

    Returns (subspace gap, multiplier isometry deviation, boundary identity
    residual), or None if the shifted zeros sit too close to the circle for
    any order up to max_order.
    """
    work = order
    while work <= max_order:
        try:
            shifted, _ = frostman_shift(b, alpha, work)
            shifted_basis = tm_basis(shifted, work)
        except ValueError:
            work *= 2
            continue
        grid = grid_points(default_grid_size(work))
        v = basis_matrix(tm_basis(b, work))
        g_samples = (1 - np.conj(alpha) * blaschke_eval(b, grid)) / np.sqrt(1 - abs(alpha) ** 2)
        iso = 0.0
        cols = []
        for h in shifted_basis:
            gh, _ = multiply_by_boundary(h, g_samples, work)
            iso = max(iso, abs(gh.norm() - 1.0))
            cols.append(gh)
        gap = subspace_gap(v, orthonormalize(basis_matrix(cols)))
        ident = g_samples * blaschke_eval(shifted, grid) + blaschke_eval(b, grid) * np.conj(g_samples)
        return gap, iso, float(np.max(np.abs(ident)))
    return None


def _lemma_backward_shift_gap(b: BlaschkeProduct, v: np.ndarray, order: int) -> float:
    """Gap between S*(K meet constants-perp) and K meet (S*B)-perp."""
    lhs_null = _nullspace_of_functional(v[0, :][None, :])
    if lhs_null.shape[1] == 0:
        lhs = np.zeros((order, 0), dtype=np.complex128)
    else:
        w = v @ lhs_null
        shifted = np.vstack([w[1:, :], np.zeros((1, w.shape[1]))])
        lhs = orthonormalize(shifted)
    s_theta = np.zeros(order, dtype=np.complex128)
    theta_c = blaschke_coefficients(b, order + 1).coeffs
    s_theta[:order] = theta_c[1:]
    c = v.conj().T @ s_theta
    rhs_null = _nullspace_of_functional(c[None, :].conj())
    rhs = v @ rhs_null if rhs_null.shape[1] else np.zeros((order, 0), dtype=np.complex128)
    if lhs.shape[1] != rhs.shape[1]:
        return 1.0
    if lhs.shape[1] == 0:
        return 0.0
    return subspace_gap(lhs, rhs)


def _nullspace_of_functional(row: np.ndarray) -> np.ndarray:
    if np.linalg.norm(row) < 1e-14:
        return np.eye(row.shape[1], dtype=np.complex128)
    _, _, vh = np.linalg.svd(row)
    return np.conj(vh[1:, :]).T


def suite_mobius(seed: int, count: int = 20, order: int = 128, alpha_max: float = 0.5) -> dict:
    """Moebius covariance: spectrum invariance, mapped Schmidt bases, involution."""
    rng = np.random.default_rng(seed)
    worst_sigma = 0.0
    worst_gap = 0.0
    worst_double = 0.0
    worst_lemma32 = 0.0
    ok = True
    for _ in range(count):
        sym = random_symbol(rng)
        alpha = alpha_max * np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        m = MobiusMap(alpha)
        w, _ = mobius_conjugate_symbol(sym, m, 2 * order - 1)
        # truncation allowance for this draw, from the exact pole images
        tail_w = _conjugated_tail_estimate(sym, m, w.coeffs)
        gamma_u = build_hankel_matrix(sym, order)
        gamma_w = build_hankel_matrix(w.coeffs, order)
        sig_u = np.linalg.svd(gamma_u.gamma, compute_uv=False)
        sig_w = np.linalg.svd(gamma_w.gamma, compute_uv=False)
        smax = max(sig_u[0], 1.0)
        keep = sig_u > 1e-6 * smax
        diff = float(np.max(np.abs(sig_u[keep] - sig_w[keep]))) if np.any(keep) else 0.0
        worst_sigma = max(worst_sigma, diff)
        ok = ok and diff <= 1e-6 + 10 * tail_w * (1 + smax)

        blocks_u = schmidt_decompose(gamma_u)
        blocks_w = schmidt_decompose(gamma_w)
        for bu in blocks_u:
            if not bu.reliable:
                continue
            match = [bw for bw in blocks_w if abs(bw.s - bu.s) < 1e-3 * max(bu.s, 1.0)]
            if len(match) != 1 or match[0].multiplicity != bu.multiplicity:
                continue
            mapped = [mobius_conjugate_function(HardyVector(bu.basis[:, j]), m, order)[0]
                      for j in range(bu.multiplicity)]
            gap = subspace_gap(orthonormalize(basis_matrix(mapped)), match[0].basis)
            worst_gap = max(worst_gap, gap)
            ok = ok and gap <= 1e-6 + 100 * tail_w

        u_exact = fourier_coefficients(sym, order).coeffs
        w2, _ = mobius_conjugate_symbol(RationalSymbol(poly=w.coeffs), m, order)
        double = float(np.linalg.norm(w2.coeffs - u_exact))
        worst_double = max(worst_double, double)
        ok = ok and double <= 1e-8 + 10 * tail_w

        worst_lemma32 = max(worst_lemma32, _lemma_change_of_variable_gap(rng, order))
    ok = ok and worst_lemma32 < 1e-8
    return {
        "count": count,
        "order": order,
        "max_residuals": {
            "singular_values": worst_sigma,
            "mapped_basis_gap": worst_gap,
            "double_conjugation": worst_double,
            "weighted_subspace_covariance": worst_lemma32,
        },
        "pass": bool(ok),
    }


def _conjugated_tail_estimate(sym: RationalSymbol, m: MobiusMap, w_coeffs: np.ndarray) -> float:
    """Tail proxy for a conjugated symbol from the exact images of its poles."""
    rates = [abs(1.0 / mobius_eval(m, 1.0 / np.conj(t.b))) for t in sym.poles if t.b != 0]
    rate = max(rates) if rates else 0.0
    chunk = float(np.linalg.norm(w_coeffs[-8:]))
    return chunk / max(1 - rate, 1e-6)


def _lemma_change_of_variable_gap(rng: np.random.Generator, order: int) -> float:
    """U (p K_B) versus (p o mu) K_{B o mu} for random polynomial weights."""
    order = max(order, 128)  # composed zeros need this much resolution
    b = random_blaschke(rng, max_degree=4, max_radius=0.5)
    alpha = 0.3 * np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    m = MobiusMap(alpha)
    p = _random_unit_hardy(rng, order, support=8)
    grid = grid_points(default_grid_size(order))
    p_samples = sample_on_grid(p, grid.size).samples
    lhs_cols = []
    for e in tm_basis(b, order):
        pe, _ = multiply_by_boundary(e, p_samples, order)
        mapped, _ = mobius_conjugate_function(pe, m, order)
        lhs_cols.append(mapped)
    composed = compose_with_mobius(b, m)
    pmu_samples = evaluate(p, mobius_eval(m, grid))
    rhs_cols = []
    for e in tm_basis(composed, order):
        pe, _ = multiply_by_boundary(e, pmu_samples, order)
        rhs_cols.append(pe)
    return subspace_gap(
        orthonormalize(basis_matrix(lhs_cols)), orthonormalize(basis_matrix(rhs_cols))
    )


def suite_theorem(seed: int, count: int = 100, order: int = 128, tol: float = 1e-6) -> dict:
    """End-to-end extraction and verification over random rational symbols."""
    rng = np.random.default_rng(seed)
    worst = {
        "subspace_gap": 0.0,
        "isometry": 0.0,
        "action": 0.0,
        "near_invariance": 0.0,
        "linear_form": 0.0,
    }
    worst_inner = 0.0
    n_blocks = 0
    n_unreliable = 0
    failures: list[str] = []
    for i in range(count):
        sym = random_symbol(rng)
        gamma = build_hankel_matrix(sym, order)
        for block in schmidt_decompose(gamma):
            if not block.reliable:
                n_unreliable += 1
                continue
            n_blocks += 1
            try:
                rep = extract_representation(sym, block, tol=tol, gamma=gamma)
                res = verify_representation(sym, block, rep, gamma=gamma)
            except (ExtractionError, ValueError) as exc:
                failures.append(f"symbol {i}, s = {block.s:.6g}: {exc}")
                continue
            for name, value in res.gated().items():
                worst[name] = max(worst[name], value)
                if value > tol:
                    failures.append(f"symbol {i}, s = {block.s:.6g}: {name} = {value:.3e}")
            worst_inner = max(worst_inner, res.theta_inner)
            if res.theta_inner > 1e-8:
                failures.append(
                    f"symbol {i}, s = {block.s:.6g}: theta_inner = {res.theta_inner:.3e}"
                )
    worst["theta_inner"] = worst_inner
    return {
        "count": count,
        "order": order,
        "n_blocks": n_blocks,
        "n_unreliable": n_unreliable,
        "max_residuals": worst,
        "failures": failures[:20],
        "pass": not failures,
    }


def suite_branch_b(seed: int, count: int = 20, order: int = 128, tol: float = 1e-6,
                   max_attempts: int = 500) -> dict:
    """Moebius-branch coverage via conjugation at an interior zero of a Schmidt vector.

    Two-pole symbols whose top Schmidt vectors vanish at some z* with
    |z*| <= 0.6 are conjugated at alpha = z*; the conjugated block is then
    orthogonal to constants, so extraction must take the Moebius route, and
    the recovered subspace is compared with the mapped original.
    """
    rng = np.random.default_rng(seed)
    cases = 0
    attempts = 0
    worst_gap = 0.0
    worst_res = 0.0
    failures: list[str] = []
    n_mobius = 0
    while cases < count and attempts < max_attempts:
        attempts += 1
        sym = random_symbol(rng, max_poles=2, max_radius=0.8)
        if len(sym.poles) != 2:
            continue
        gamma = build_hankel_matrix(sym, order)
        blocks = schmidt_decompose(gamma)
        hit = None
        for block in blocks:
            if block.multiplicity != 1 or not block.reliable:
                continue
            zstar = _kernel_combination_zero(sym, block.basis[:, 0])
            if zstar is not None and abs(zstar) <= 0.6:
                hit = (block, zstar)
                break
        if hit is None:
            continue
        block, zstar = hit
        cases += 1
        m = MobiusMap(zstar)
        w, _ = mobius_conjugate_symbol(sym, m, 2 * order - 1)
        gamma_w = build_hankel_matrix(w.coeffs, order)
        blocks_w = [bw for bw in schmidt_decompose(gamma_w)
                    if abs(bw.s - block.s) < 1e-3 * max(block.s, 1.0)]
        if len(blocks_w) != 1:
            failures.append(f"case {cases}: no unique matching block after conjugation")
            continue
        bw = blocks_w[0]
        _, nq = extremal_projection(bw)
        if nq <= DIRECT_BRANCH_THRESHOLD:
            n_mobius += 1
        try:
            rep = extract_representation(w.coeffs, bw, tol=tol, gamma=gamma_w)
            res = verify_representation(w.coeffs, bw, rep, gamma=gamma_w)
        except (ExtractionError, ValueError) as exc:
            failures.append(f"case {cases}: {exc}")
            continue
        worst_res = max(worst_res, max(res.gated().values()))
        mapped, _ = mobius_conjugate_function(HardyVector(block.basis[:, 0]), m, order)
        image = orthonormalize(basis_matrix([mapped]))
        prods = _weighted_model_basis(rep, order)
        gap = subspace_gap(image, prods)
        worst_gap = max(worst_gap, gap)
        if gap > tol:
            failures.append(f"case {cases}: image gap {gap:.3e}")
    ok = cases == count and not failures and n_mobius == count
    return {
        "count": cases,
        "requested": count,
        "attempts": attempts,
        "order": order,
        "mobius_branch_fired": n_mobius,
        "max_residuals": {"image_gap": worst_gap, "verification": worst_res},
        "failures": failures[:20],
        "pass": bool(ok),
    }


def _kernel_combination_zero(sym: RationalSymbol, f: np.ndarray) -> complex | None:
    """Interior zero of a two-kernel combination, from its expansion coefficients."""
    b1, b2 = (t.b for t in sym.poles)
    n = np.arange(f.size)
    k1 = np.conj(b1) ** n
    k2 = np.conj(b2) ** n
    beta, *_ = np.linalg.lstsq(np.column_stack([k1, k2]), f, rcond=None)
    denom = beta[0] * np.conj(b2) + beta[1] * np.conj(b1)
    if abs(denom) < 1e-12:
        return None
    z = (beta[0] + beta[1]) / denom
    return complex(z)


def _weighted_model_basis(rep, order: int) -> np.ndarray:
    p_samples = sample_on_grid(rep.p, default_grid_size(order)).samples
    cols = []
    for e in tm_basis(rep.theta, order, tail_tol=1e-8):
        pe, _ = multiply_by_boundary(e, p_samples, order)
        cols.append(pe)
    return orthonormalize(basis_matrix(cols))
