"""Rational symbols and their Fourier coefficients.

A symbol is a polynomial plus a sum of terms c / (1 - conj(b) z)^m with
|b| < 1, which keeps the analytic continuation past the closed disk and
makes the associated Hankel matrix finite rank.  Coefficients are generated
exactly, so truncation error is controlled by an analytic tail bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blaschke import BlaschkeProduct, blaschke_coefficients
from .hardy import HardyVector

__all__ = [
    "PoleTerm",
    "RationalSymbol",
    "SymbolFormatError",
    "fourier_coefficients",
    "evaluate_symbol",
    "tail_bound",
    "kronecker_rank_bound",
    "symbol_from_inner",
    "symbol_from_coefficients",
    "parse_symbol",
    "symbol_to_dict",
]

MAX_MULTIPLICITY = 4


class SymbolFormatError(ValueError):
    """Raised for malformed symbol descriptions (bad pole, bad field, ...)."""


@dataclass(frozen=True)
class PoleTerm:
    """One term c / (1 - conj(b) z)^m of a rational symbol."""

    b: complex
    m: int
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "c", complex(self.c))
        if abs(self.b) >= 1:
            raise SymbolFormatError(
                f"pole parameter b = {self.b} has |b| = {abs(self.b):.6g} >= 1; "
                "symbols must be analytic past the closed disk"
            )
        if not isinstance(self.m, (int, np.integer)) or not 1 <= int(self.m) <= MAX_MULTIPLICITY:
            raise SymbolFormatError(
                f"pole multiplicity must be an integer in 1..{MAX_MULTIPLICITY}, got {self.m!r}"
            )
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True)
class RationalSymbol:
    """Polynomial part plus finitely many pole terms."""

    poly: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=np.complex128))
    poles: tuple[PoleTerm, ...] = ()

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.poly, dtype=np.complex128))
        if p.ndim != 1:
            raise SymbolFormatError("polynomial part must be a 1-D coefficient list")
        if not np.all(np.isfinite(p.real)) or not np.all(np.isfinite(p.imag)):
            raise SymbolFormatError("polynomial coefficients must be finite")
        object.__setattr__(self, "poly", p)
        object.__setattr__(self, "poles", tuple(self.poles))
        self.poly.setflags(write=False)

    @property
    def is_zero(self) -> bool:
        return not self.poles and not np.any(self.poly)


def symbol_from_coefficients(coeffs) -> RationalSymbol:
    """Treat a raw coefficient list as a polynomial symbol."""
    c = coeffs.coeffs if isinstance(coeffs, HardyVector) else coeffs
    return RationalSymbol(poly=np.asarray(c, dtype=np.complex128))


def _binomial_weights(n: np.ndarray, m: int) -> np.ndarray:
    """C(n + m - 1, m - 1) for m = 1..4, exact in double precision at desk scale."""
    if m == 1:
        return np.ones_like(n, dtype=np.float64)
    if m == 2:
        return (n + 1).astype(np.float64)
    if m == 3:
        return (n + 1) * (n + 2) / 2.0
    return (n + 1) * (n + 2) * (n + 3) / 6.0


def fourier_coefficients(sym: RationalSymbol, order: int) -> HardyVector:
    """Exact Taylor coefficients u_hat(0) .. u_hat(order-1)."""
    n = np.arange(order)
    out = np.zeros(order, dtype=np.complex128)
    k = min(order, sym.poly.size)
    out[:k] = sym.poly[:k]
    for term in sym.poles:
        out += term.c * _binomial_weights(n, term.m) * np.conj(term.b) ** n
    return HardyVector(out)


def evaluate_symbol(sym: RationalSymbol, z) -> np.ndarray | complex:
    """Evaluate the rational symbol on |z| <= 1 in closed form."""
    zs = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(zs)
    for c in sym.poly[::-1]:
        acc = acc * zs + c
    for term in sym.poles:
        acc = acc + term.c / (1 - np.conj(term.b) * zs) ** term.m
    return complex(acc) if acc.ndim == 0 else acc


def tail_bound(sym: RationalSymbol, order: int) -> float:
    """Upper bound on the l2 norm of the coefficients u_hat(n), n >= order.

    Poles of multiplicity one use the exact geometric tail
    |c| |b|^order / sqrt(1 - |b|^2); higher multiplicities use a monotone
    ratio majorant.  The polynomial part contributes its exact leftover norm.
    """
    total = 0.0
    if sym.poly.size > order:
        total += float(np.linalg.norm(sym.poly[order:]))
    for term in sym.poles:
        total += _pole_tail(abs(term.c), abs(term.b), term.m, order)
    return total


def _pole_tail(c: float, b: float, m: int, start: int, max_steps: int = 100_000) -> float:
    if b == 0.0:
        return 0.0 if start >= m else c * float(_binomial_weights(np.array([0]), m)[0])
    if m == 1:
        return c * b**start / np.sqrt(1 - b * b)

    def term(n: int) -> float:
        return c * float(_binomial_weights(np.array([n]), m)[0]) * b**n

    acc = 0.0
    n = start
    while (n + m) / (n + 1) * b >= 1.0 - 1e-12:
        acc += term(n) ** 2
        n += 1
        if n - start > max_steps:
            return float("inf")
    rho = (n + m) / (n + 1) * b
    acc += term(n) ** 2 / (1 - rho * rho)
    return float(np.sqrt(acc))


def kronecker_rank_bound(sym: RationalSymbol) -> int:
    """Finite-rank bound for the Hankel matrix of the symbol.

    A nonzero polynomial of degree D contributes D + 1, each pole its
    multiplicity.
    """
    nz = np.flatnonzero(sym.poly)
    poly_part = int(nz[-1] + 1) if nz.size else 0
    return poly_part + sum(t.m for t in sym.poles)


# ---------------------------------------------------------------------------
# symbols derived from inner functions


def symbol_from_inner(b: BlaschkeProduct, order: int = 64) -> RationalSymbol:
    """Rational form of u = S* B for a finite Blaschke product B.

    The poles sit at the nonzero zeros of B (b-parameters coincide); the
    polynomial part absorbs anything left over (e.g. B = z^d gives the pure
    monomial z^{d-1}).  `order` controls the length of the exact series used
    for the coefficient fit and its self-check.
    """
    d = b.degree
    if d == 0:
        return RationalSymbol()
    rows = max(order, 4 * d + 16)
    series = blaschke_coefficients(b, rows + 1).coeffs
    target = series[1:]

    pole_params: list[tuple[complex, int]] = []
    for a in b.zeros:
        if a == 0:
            continue
        for i, (bp, mp) in enumerate(pole_params):
            if abs(bp - a) < 1e-13:
                pole_params[i] = (bp, mp + 1)
                break
        else:
            pole_params.append((complex(a), 1))
    for bp, mp in pole_params:
        if mp > MAX_MULTIPLICITY:
            raise SymbolFormatError(
                f"inner function has a zero of multiplicity {mp} > {MAX_MULTIPLICITY}"
            )

    n_pole_cols = sum(mp for _, mp in pole_params)
    n_poly_cols = d - n_pole_cols
    n = np.arange(rows)
    cols = []
    for j in range(n_poly_cols):
        col = np.zeros(rows, dtype=np.complex128)
        col[j] = 1.0
        cols.append(col)
    layout: list[tuple[complex, int]] = []
    for bp, mp in pole_params:
        for i in range(1, mp + 1):
            cols.append(_binomial_weights(n, i) * np.conj(bp) ** n)
            layout.append((bp, i))
    a_mat = np.column_stack(cols)
    coeffs, *_ = np.linalg.lstsq(a_mat, target, rcond=None)
    resid = float(np.linalg.norm(a_mat @ coeffs - target))
    if resid > 1e-9 * max(1.0, float(np.linalg.norm(target))):
        raise ValueError(f"rational fit of the shifted inner function failed, residual {resid:.3e}")

    poly = coeffs[:n_poly_cols] if n_poly_cols else np.zeros(1, dtype=np.complex128)
    poles = tuple(
        PoleTerm(b=bp, m=i, c=complex(coeffs[n_poly_cols + j]))
        for j, (bp, i) in enumerate(layout)
        if abs(coeffs[n_poly_cols + j]) > 1e-13
    )
    return RationalSymbol(poly=np.asarray(poly, dtype=np.complex128), poles=poles)


# ---------------------------------------------------------------------------
# JSON interchange


def _parse_complex(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) for v in value)
    ):
        return complex(value[0], value[1])
    raise SymbolFormatError(f"{where}: expected [re, im], got {value!r}")


def parse_symbol(doc: dict) -> RationalSymbol:
    """Parse the JSON symbol document {"poly": [[re, im], ...], "poles": [...]}."""
    if not isinstance(doc, dict):
        raise SymbolFormatError("symbol document must be a JSON object")
    unknown = set(doc) - {"poly", "poles"}
    if unknown:
        raise SymbolFormatError(f"unknown symbol fields: {sorted(unknown)}")
    poly_raw = doc.get("poly", [])
    if not isinstance(poly_raw, list):
        raise SymbolFormatError("'poly' must be a list of [re, im] pairs")
    poly = [_parse_complex(v, f"poly[{i}]") for i, v in enumerate(poly_raw)] or [0.0]
    poles = []
    poles_raw = doc.get("poles", [])
    if not isinstance(poles_raw, list):
        raise SymbolFormatError("'poles' must be a list of objects")
    for i, entry in enumerate(poles_raw):
        if not isinstance(entry, dict) or set(entry) - {"b", "m", "c"}:
            raise SymbolFormatError(f"poles[{i}]: expected an object with fields b, m, c")
        b = _parse_complex(entry.get("b"), f"poles[{i}].b")
        c = _parse_complex(entry.get("c", 1.0), f"poles[{i}].c")
        m = entry.get("m", 1)
        if not isinstance(m, int):
            raise SymbolFormatError(f"poles[{i}].m: expected an integer, got {m!r}")
        if abs(b) >= 1:
            raise SymbolFormatError(
                f"poles[{i}].b = [{b.real}, {b.imag}] has |b| = {abs(b):.6g} >= 1"
            )
        poles.append(PoleTerm(b=b, m=m, c=c))
    return RationalSymbol(poly=np.asarray(poly, dtype=np.complex128), poles=tuple(poles))


def symbol_to_dict(sym: RationalSymbol) -> dict:
    return {
        "poly": [[float(v.real), float(v.imag)] for v in sym.poly],
        "poles": [
            {
                "b": [float(t.b.real), float(t.b.imag)],
                "m": t.m,
                "c": [float(t.c.real), float(t.c.imag)],
            }
            for t in sym.poles
        ],
    }
