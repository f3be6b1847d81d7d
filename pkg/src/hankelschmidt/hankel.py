"""Truncated Hankel matrices and the operator identities they satisfy.

The anti-linear operator acts as f -> Gamma @ conj(f) on coefficient
vectors, where Gamma[n, m] = u_hat(n + m) is filled from 2N-1 exactly
generated coefficients.  The linear realization is f -> Gamma @ f, and the
two are linked by plain coefficientwise conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .hardy import HardyVector, hardy
from .symbols import RationalSymbol, fourier_coefficients, symbol_from_coefficients, tail_bound

__all__ = [
    "HankelMatrix",
    "IdentityResiduals",
    "build_hankel_matrix",
    "hankel_apply",
    "hankel_square",
    "linear_hankel_apply",
    "conjugation_C",
    "toeplitz_multiplier",
    "identity_residuals",
    "residuals_from_matrix",
]


@dataclass(frozen=True)
class HankelMatrix:
    """N x N block of the Hankel matrix of a symbol, with its truncation tail."""

    gamma: np.ndarray
    tail: float = 0.0

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=np.complex128)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {g.shape}")
        object.__setattr__(self, "gamma", g)
        self.gamma.setflags(write=False)

    @property
    def order(self) -> int:
        return self.gamma.shape[0]


def _as_symbol(sym) -> RationalSymbol:
    if isinstance(sym, RationalSymbol):
        return sym
    return symbol_from_coefficients(sym)


def build_hankel_matrix(sym, order: int) -> HankelMatrix:
    """Gamma[n, m] = u_hat(n + m) from 2*order - 1 exact coefficients.

    Accepts a RationalSymbol or a raw coefficient vector (treated as a
    polynomial symbol).
    """
    sym = _as_symbol(sym)
    u = fourier_coefficients(sym, 2 * order - 1).coeffs
    gamma = scipy.linalg.hankel(u[:order], u[order - 1 :])
    return HankelMatrix(gamma=gamma, tail=tail_bound(sym, order))


def hankel_apply(h: HankelMatrix, f: HardyVector) -> HardyVector:
    """Anti-linear action f -> Gamma @ conj(f)."""
    f = hardy(f)
    if f.order != h.order:
        raise ValueError(f"order mismatch: matrix {h.order}, vector {f.order}")
    return HardyVector(h.gamma @ np.conj(f.coeffs))


def hankel_square(h: HankelMatrix) -> np.ndarray:
    """The Hermitian PSD matrix Gamma Gamma^* whose eigenspaces are the Schmidt subspaces."""
    return h.gamma @ np.conj(h.gamma)


def linear_hankel_apply(h: HankelMatrix, f: HardyVector) -> HardyVector:
    """Linear action f -> Gamma @ f."""
    f = hardy(f)
    if f.order != h.order:
        raise ValueError(f"order mismatch: matrix {h.order}, vector {f.order}")
    return HardyVector(h.gamma @ f.coeffs)


def conjugation_C(f: HardyVector) -> HardyVector:
    """Coefficientwise conjugation, realizing C f(z) = conj(f(conj(z)))."""
    return HardyVector(np.conj(hardy(f).coeffs))


def toeplitz_multiplier(p, order: int) -> np.ndarray:
    """Lower-triangular Toeplitz matrix of multiplication by an analytic p."""
    c = p.coeffs if isinstance(p, HardyVector) else np.asarray(p, dtype=np.complex128)
    col = np.zeros(order, dtype=np.complex128)
    k = min(order, c.size)
    col[:k] = c[:k]
    row = np.zeros(order, dtype=np.complex128)
    row[0] = col[0]
    return scipy.linalg.toeplitz(col, row)


def _shift_matrix(order: int) -> np.ndarray:
    return np.eye(order, k=-1, dtype=np.complex128)


@dataclass(frozen=True)
class IdentityResiduals:
    """Interior-block operator-norm residuals of the Hankel identities."""

    shift_intertwine: float        # S* H = H S, entrywise on the interior block
    square_compression: float      # S* H^2 S = H^2 - (., u) u
    square_commutator: float       # S* H^2 - H^2 S* = (., 1) S* H u - (., S u) u
    symmetry: float                # (H f, g) = (H g, f), i.e. Gamma = Gamma^T
    toeplitz_compression: float    # S* T_p S = T_p for analytic Toeplitz

    def as_dict(self) -> dict:
        return {
            "shift_intertwine": self.shift_intertwine,
            "square_compression": self.square_compression,
            "square_commutator": self.square_commutator,
            "symmetry": self.symmetry,
            "toeplitz_compression": self.toeplitz_compression,
        }

    def max(self) -> float:
        return max(self.as_dict().values())


def identity_residuals(sym, order: int) -> IdentityResiduals:
    """Residuals of the defining operator identities for the given symbol.

    All comparisons restrict to the leading (order-1) block so that exact
    identities are not polluted by the truncation edge.
    """
    sym = _as_symbol(sym)
    h = build_hankel_matrix(sym, order)
    u = fourier_coefficients(sym, order).coeffs
    return residuals_from_matrix(h.gamma, u)


def residuals_from_matrix(gamma: np.ndarray, u: np.ndarray) -> IdentityResiduals:
    """Identity residuals computed from an explicit matrix (fault injection entry point)."""
    gamma = np.asarray(gamma, dtype=np.complex128)
    u = np.asarray(u, dtype=np.complex128)
    n = gamma.shape[0]
    s = _shift_matrix(n)
    st = s.T

    # S* H = H S: both sides read u_hat(n+m+1); compare the common interior.
    b2 = float(np.linalg.norm((st @ gamma)[: n - 1, : n - 1] - (gamma @ s)[: n - 1, : n - 1], 2))

    m2 = gamma @ np.conj(gamma)
    lhs = (st @ m2 @ s)[: n - 1, : n - 1]
    rhs = (m2 - np.outer(u, np.conj(u)))[: n - 1, : n - 1]
    b3 = float(np.linalg.norm(lhs - rhs, 2))

    hu = gamma @ np.conj(u)
    lhs4 = (st @ m2 - m2 @ st)[: n - 1, : n - 1]
    rank1 = np.outer(st @ hu, _unit(n, 0)) - np.outer(u, np.conj(s @ u))
    b4 = float(np.linalg.norm(lhs4 - rank1[: n - 1, : n - 1], 2))

    b5 = float(np.linalg.norm(gamma - gamma.T, 2))

    t = toeplitz_multiplier(u, n)
    toep = float(np.linalg.norm((st @ t @ s)[: n - 1, : n - 1] - t[: n - 1, : n - 1], 2))

    return IdentityResiduals(
        shift_intertwine=b2,
        square_compression=b3,
        square_commutator=b4,
        symmetry=b5,
        toeplitz_compression=toep,
    )


def _unit(n: int, k: int) -> np.ndarray:
    e = np.zeros(n, dtype=np.complex128)
    e[k] = 1.0
    return e
