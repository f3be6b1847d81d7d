"""Truncated Hardy-space arithmetic on the unit disk.

Elements of H^2 are represented by their first N Taylor coefficients.
Boundary values live on equispaced grids e^{2*pi*i*k/M}; the analytic
projection back to coefficients is a plain FFT that keeps the band
0..N-1 and reports the dropped energy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HardyVector",
    "BoundaryGrid",
    "ProjectionError",
    "TruncationWarning",
    "hardy",
    "one",
    "unit",
    "szego_kernel",
    "inner_product",
    "shift",
    "coshift",
    "evaluate",
    "grid_points",
    "default_grid_size",
    "sample_on_grid",
    "boundary_to_coefficients",
    "multiply_by_boundary",
    "basis_matrix",
]


class ProjectionError(ValueError):
    """Raised when a boundary projection drops more energy than allowed."""


class TruncationWarning(UserWarning):
    """Emitted when a shift pushes a nonzero coefficient past the truncation order."""


def _as_coeffs(values) -> np.ndarray:
    c = np.atleast_1d(np.asarray(values, dtype=np.complex128))
    if c.ndim != 1:
        raise ValueError(f"coefficient array must be 1-D, got shape {c.shape}")
    if c.size == 0:
        raise ValueError("coefficient array must be nonempty")
    if not np.all(np.isfinite(c.real)) or not np.all(np.isfinite(c.imag)):
        raise ValueError("coefficients must be finite")
    return c


@dataclass(frozen=True)
class HardyVector:
    """Order-N truncation of an H^2 element, stored by Taylor coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))
        self.coeffs.setflags(write=False)

    @property
    def order(self) -> int:
        return self.coeffs.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def padded(self, order: int) -> np.ndarray:
        """Coefficients zero-padded (never truncated) to the requested order."""
        if order < self.order:
            raise ValueError(f"cannot pad order {self.order} down to {order}")
        out = np.zeros(order, dtype=np.complex128)
        out[: self.order] = self.coeffs
        return out

    def __len__(self) -> int:
        return self.coeffs.size


def hardy(values) -> HardyVector:
    return values if isinstance(values, HardyVector) else HardyVector(values)


def one(order: int) -> HardyVector:
    """The constant function 1 at the given truncation order."""
    return unit(0, order)


def unit(n: int, order: int) -> HardyVector:
    """The monomial z^n at the given truncation order."""
    if not 0 <= n < order:
        raise ValueError(f"monomial degree {n} outside truncation order {order}")
    c = np.zeros(order, dtype=np.complex128)
    c[n] = 1.0
    return HardyVector(c)


def szego_kernel(a: complex, order: int) -> HardyVector:
    """Truncated reproducing kernel k_a(z) = 1/(1 - conj(a) z), |a| < 1."""
    a = complex(a)
    if abs(a) >= 1:
        raise ValueError(f"kernel point must lie in the open disk, got |a| = {abs(a)}")
    return HardyVector(np.conj(a) ** np.arange(order))


def inner_product(f: HardyVector, g: HardyVector) -> complex:
    """Hermitian inner product sum_n f_n conj(g_n); shorter input is zero-padded."""
    n = max(f.order, g.order)
    return complex(np.vdot(g.padded(n), f.padded(n)))


def shift(f: HardyVector) -> HardyVector:
    """Multiplication by z: prepend a zero, dropping the top coefficient.

    A nonzero dropped coefficient is reported as a TruncationWarning; callers
    comparing interior blocks may safely ignore it.
    """
    lost = abs(f.coeffs[-1])
    scale = max(f.norm(), 1.0)
    if lost > 1e-12 * scale:
        warnings.warn(
            f"shift dropped coefficient of magnitude {lost:.3e}", TruncationWarning, stacklevel=2
        )
    out = np.empty_like(f.coeffs)
    out[0] = 0.0
    out[1:] = f.coeffs[:-1]
    return HardyVector(out)


def coshift(f: HardyVector) -> HardyVector:
    """Adjoint shift S*: drop the constant term, append a zero."""
    out = np.empty_like(f.coeffs)
    out[:-1] = f.coeffs[1:]
    out[-1] = 0.0
    return HardyVector(out)


def evaluate(f: HardyVector, z) -> complex | np.ndarray:
    """Evaluate the truncated Taylor series by Horner's scheme; requires |z| <= 1."""
    zs = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(zs) > 1 + 1e-12):
        raise ValueError("evaluation point outside the closed unit disk")
    acc = np.zeros_like(zs)
    for c in f.coeffs[::-1]:
        acc = acc * zs + c
    return complex(acc) if np.isscalar(z) or zs.ndim == 0 else acc


# ---------------------------------------------------------------------------
# boundary grids


@dataclass(frozen=True)
class BoundaryGrid:
    """Samples of a function at the M-th roots of unity, M a power of two."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.complex128)
        if s.ndim != 1 or s.size < 2 or (s.size & (s.size - 1)) != 0:
            raise ValueError("samples must be a 1-D array of power-of-two length >= 2")
        object.__setattr__(self, "samples", s)
        self.samples.setflags(write=False)

    @property
    def size(self) -> int:
        return self.samples.size


def default_grid_size(order: int, oversample: int = 2) -> int:
    """Power-of-two grid size >= 2*oversample*order (Nyquist x oversample)."""
    m = 1
    while m < 2 * oversample * order:
        m *= 2
    return m


def grid_points(m: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(m) / m)


def sample_on_grid(f: HardyVector, m: int | None = None, oversample: int = 2) -> BoundaryGrid:
    """Boundary samples of f via zero-padded inverse FFT."""
    if m is None:
        m = default_grid_size(f.order, oversample)
    if m < f.order:
        raise ValueError(f"grid size {m} below truncation order {f.order}")
    return BoundaryGrid(np.fft.ifft(f.padded(m)) * m)


def boundary_to_coefficients(
    grid: BoundaryGrid, order: int, max_residual: float | None = None
) -> tuple[HardyVector, float]:
    """Analytic projection of boundary samples onto coefficients 0..order-1.

    Returns the projected HardyVector together with the l2 norm of the
    discarded bins (negative frequencies and the positive tail alike).  With
    max_residual set, a larger drop raises ProjectionError.
    """
    m = grid.size
    if m < 2 * order:
        raise ValueError(f"grid size {m} < 2*order = {2 * order}: projection would alias")
    bins = np.fft.fft(grid.samples) / m
    residual = float(np.linalg.norm(bins[order:]))
    if max_residual is not None and residual > max_residual:
        raise ProjectionError(
            f"projection residual {residual:.3e} exceeds allowed {max_residual:.3e}"
        )
    return HardyVector(bins[:order]), residual


def multiply_by_boundary(
    f: HardyVector, boundary_values: np.ndarray, order: int | None = None
) -> tuple[HardyVector, float]:
    """Project f(z) * g(z) given g's samples on a grid of matching size."""
    g = np.asarray(boundary_values, dtype=np.complex128)
    fs = sample_on_grid(f, g.size)
    if order is None:
        order = f.order
    return boundary_to_coefficients(BoundaryGrid(fs.samples * g), order)


def basis_matrix(vectors) -> np.ndarray:
    """Stack HardyVectors (or coefficient arrays) as the columns of a matrix."""
    cols = [v.coeffs if isinstance(v, HardyVector) else np.asarray(v) for v in vectors]
    return np.column_stack(cols)
