"""Analysis pipeline and report assembly.

Reports are plain dicts with fixed key order and complex numbers rendered
as [re, im] pairs, so serialized output is diffable and deterministic for a
fixed (input, config, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .extraction import (
    ExtractionError,
    Representation,
    extract_representation,
    verify_representation,
)
from .hankel import build_hankel_matrix, residuals_from_matrix
from .spectral import schmidt_decompose
from .suites import suite_identities, suite_mobius, suite_model_spaces, suite_theorem
from .symbols import (
    RationalSymbol,
    fourier_coefficients,
    kronecker_rank_bound,
    symbol_to_dict,
    tail_bound,
)

__all__ = [
    "AnalysisConfig",
    "analyze_symbol",
    "analysis_exit_code",
    "verify_suites",
    "verify_exit_code",
    "complex_pair",
]


@dataclass(frozen=True)
class AnalysisConfig:
    """Knobs shared by every analysis; defaults are desk-scale."""

    n: int = 128
    grid_oversample: int = 2
    cluster_tol: float = 1e-8
    verify_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.n < 16 or self.n > 1024 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"truncation order must be a power of two in [16, 1024], got {self.n}")
        for name in ("cluster_tol", "verify_tol"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if self.grid_oversample < 1:
            raise ValueError("grid_oversample must be >= 1")


def complex_pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _vector_pairs(coeffs: np.ndarray, keep_at_least: int = 1) -> list[list[float]]:
    c = np.asarray(coeffs)
    nz = np.flatnonzero(np.abs(c) > 1e-14)
    last = max(int(nz[-1]) + 1 if nz.size else 1, keep_at_least)
    return [complex_pair(v) for v in c[:last]]


def _representation_entry(rep: Representation) -> dict:
    return {
        "p": _vector_pairs(rep.p.coeffs),
        "theta": {
            "zeros": [complex_pair(z) for z in rep.theta.zeros],
            "phase": complex_pair(rep.theta.phase),
        },
        "phi": float(rep.phi),
        "canonicalized_at": complex_pair(rep.canonicalized_at),
    }


def analyze_symbol(sym: RationalSymbol, config: AnalysisConfig | None = None) -> dict:
    """Full pipeline: coefficients, Hankel matrix, Schmidt blocks, representations.

    Block pass/fail flags come from verify_tol alone; numerically suspect
    clusters are carried through but marked unreliable.
    """
    config = config or AnalysisConfig()
    n = config.n
    u = fourier_coefficients(sym, n)
    gamma = build_hankel_matrix(sym, n)
    sing = np.linalg.svd(gamma.gamma, compute_uv=False)
    smax = float(sing[0]) if sing.size else 0.0
    numerical_rank = int(np.sum(sing > 1e-10 * smax)) if smax > 0 else 0
    identities = residuals_from_matrix(gamma.gamma, u.coeffs)

    blocks = schmidt_decompose(gamma, config.cluster_tol)
    block_entries = []
    warnings: list[str] = []
    all_pass = True
    any_unreliable = False
    for block in blocks:
        entry = {
            "s": float(block.s),
            "multiplicity": int(block.multiplicity),
            "cluster_spread": float(block.spread),
            "cluster_separation": float(block.separation),
            "reliable": bool(block.reliable),
            "warnings": list(block.warnings),
        }
        try:
            rep = extract_representation(
                sym, block, tol=config.verify_tol, gamma=gamma,
                oversample=config.grid_oversample,
            )
            residuals = verify_representation(
                sym, block, rep, gamma=gamma, oversample=config.grid_oversample
            )
            gated = residuals.gated()
            passed = all(v <= config.verify_tol for v in gated.values())
            entry["representation"] = _representation_entry(rep)
            entry["residuals"] = {k: float(v) for k, v in residuals.as_dict().items()}
            entry["pass"] = bool(passed)
        except (ExtractionError, ValueError) as exc:
            entry["error"] = str(exc)
            entry["pass"] = False
            entry["reliable"] = False
        if not entry["pass"]:
            all_pass = False
        if not entry["reliable"]:
            any_unreliable = True
            warnings.extend(f"s = {block.s:.6g}: {w}" for w in block.warnings)
        block_entries.append(entry)

    return {
        "symbol": symbol_to_dict(sym),
        "config": {
            "n": config.n,
            "grid_oversample": config.grid_oversample,
            "cluster_tol": config.cluster_tol,
            "verify_tol": config.verify_tol,
            "seed": config.seed,
        },
        "tail_bound": float(gamma.tail),
        "kronecker_rank_bound": int(kronecker_rank_bound(sym)),
        "numerical_rank": numerical_rank,
        "singular_values": [float(s) for s in sing if smax > 0 and s > 1e-10 * smax],
        "blocks": block_entries,
        "identity_residuals": {k: float(v) for k, v in identities.as_dict().items()},
        "warnings": warnings,
        "pass": bool(all_pass),
    }


def analysis_exit_code(report: dict) -> int:
    if report["pass"] and not any(not b["reliable"] for b in report["blocks"]):
        return 0
    return 2


def verify_suites(
    config: AnalysisConfig | None = None,
    perturb: float = 0.0,
    identity_count: int = 50,
    blaschke_count: int = 30,
    alpha_count: int = 3,
    mobius_count: int = 20,
    theorem_count: int = 20,
) -> dict:
    """Seeded identity and lemma suites across all modules.

    Deterministic for a fixed seed; the perturbation knob corrupts the
    Hankel symmetry inside the identity suite so that failure paths are
    exercised.
    """
    config = config or AnalysisConfig()
    identity = suite_identities(config.seed, identity_count, config.n, perturb=perturb)
    model = suite_model_spaces(config.seed + 1, blaschke_count, alpha_count, config.n)
    mobius = suite_mobius(config.seed + 2, mobius_count, config.n)
    theorem = suite_theorem(config.seed + 3, theorem_count, config.n, tol=config.verify_tol)
    suites = {
        "identities": identity,
        "model_spaces": model,
        "mobius_covariance": mobius,
        "structure_theorem": theorem,
    }
    return {
        "config": {
            "n": config.n,
            "grid_oversample": config.grid_oversample,
            "cluster_tol": config.cluster_tol,
            "verify_tol": config.verify_tol,
            "seed": config.seed,
        },
        "perturb": float(perturb),
        "suites": suites,
        "pass": bool(all(s["pass"] for s in suites.values())),
    }


def verify_exit_code(report: dict) -> int:
    return 0 if report["pass"] else 3
