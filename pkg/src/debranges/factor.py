"""Fejér–Riesz factorization of a nonnegative trigonometric polynomial."""

from __future__ import annotations

import numpy as np

from .errors import InnerFunctionError, TrigPolynomialError
from .poly import (
    CLUSTER_TOL,
    DEFECT_GRID,
    EPS_NEG,
    Polynomial,
    TrigPolynomial,
    poly_roots,
)

UNIMODULAR_TOL = 1e-6
MERGE_TOL = 1e-3
PAIR_TOL = 1e-3


def _pair_roots(roots: list[tuple[complex, int]], tol: float) -> list[tuple[complex, int]]:
    """Keep one representative (|alpha| >= 1) of every pair alpha, 1/conj(alpha)."""
    kept: list[tuple[complex, int]] = []
    inside: list[tuple[complex, int]] = []
    outside: list[tuple[complex, int]] = []
    odd: list[tuple[complex, int]] = []
    for r, m in roots:
        if abs(abs(r) - 1.0) <= UNIMODULAR_TOL:
            if m % 2:
                odd.append((r, m))
            else:
                kept.append((r / abs(r), m // 2))
        elif abs(r) > 1:
            outside.append((r, m))
        else:
            inside.append((r, m))
    # w >= 0 forces even order on the circle; two close odd roots there are a
    # double root split by rounding (sup of |q| attained at a grid-fitted point)
    odd.sort(key=lambda rm: np.angle(rm[0]))
    while odd:
        r, m = odd.pop(0)
        j = next((i for i, (s, _) in enumerate(odd) if abs(s - r) <= MERGE_TOL), None)
        if j is None:
            raise TrigPolynomialError(
                f"not a valid nonnegative trig polynomial: odd multiplicity {m} at unimodular root {r}"
            )
        s, k = odd.pop(j)
        mid = (r * m + s * k) / (m + k)
        if (m + k) % 2:
            odd.insert(0, (mid, m + k))
        else:
            kept.append((mid / abs(mid), (m + k) // 2))
    # Individual roots of a cluster carry eps**(1/m) noise but the cluster's
    # symmetric functions do not, so pairing is checked as multisets: equal
    # counts, and every outside root has an inside mirror nearby.
    n_out = sum(m for _, m in outside)
    n_in = sum(m for _, m in inside)
    if n_out != n_in:
        raise TrigPolynomialError(
            f"not a valid nonnegative trig polynomial: {n_out} roots outside vs {n_in} inside the circle"
        )
    for r, m in outside:
        mirror = 1.0 / np.conj(r)
        gap = min((abs(s - mirror) for s, _ in inside), default=np.inf)
        if gap > PAIR_TOL * max(1.0, abs(mirror)):
            raise TrigPolynomialError(f"not a valid nonnegative trig polynomial: root {r} has no partner (gap {gap:.2e})")
        kept.append((r, m))
    return kept


def fejer_riesz(w: TrigPolynomial, tol: float = 1e-9, cluster_tol: float = CLUSTER_TOL) -> Polynomial:
    """Outer polynomial p with |p(e^{it})|^2 = w(e^{it}) and p(0) > 0.

    Roots of s(z) = z^n w(z) come in pairs alpha, 1/conj(alpha); the factor
    keeps the member with |alpha| >= 1 (half the multiplicity on the circle).
    """
    scale = float(np.max(np.abs(w.c)))
    if scale == 0.0:
        raise InnerFunctionError("inner symbol: defect identically zero")
    w = w.shrink(1e-12)
    vals = w.grid_values(DEFECT_GRID)
    if vals.min() < -EPS_NEG * max(1.0, scale):
        raise TrigPolynomialError(f"not a valid nonnegative trig polynomial (min {vals.min():.3e})")
    n = w.n
    if n == 0:
        c0 = w.coeff(0).real
        if c0 <= 0:
            raise InnerFunctionError("inner symbol: defect identically zero")
        return Polynomial([np.sqrt(c0)])

    s = Polynomial(w.c)  # coefficient of z^k in z^n w(z) is c_{k-n}
    kept = _pair_roots(poly_roots(s, cluster_tol), cluster_tol)
    if sum(m for _, m in kept) != n:
        raise TrigPolynomialError("not a valid nonnegative trig polynomial: root count mismatch")

    monic = Polynomial.from_roots(kept)
    # leading coefficient of s is c * prod(-conj(alpha_j))
    denom = np.prod([(-np.conj(r)) ** m for r, m in kept])
    c = abs(w.coeff(n) / denom)
    p = monic * np.sqrt(c)
    p0 = p.coeffs[0]
    p = p * (abs(p0) / p0)
    p = Polynomial([p.coeffs[0].real, *p.coeffs[1:]])

    err = np.max(np.abs(np.abs(p(np.exp(2j * np.pi * np.arange(DEFECT_GRID) / DEFECT_GRID))) ** 2 - vals))
    if err > tol * max(1.0, float(np.max(np.abs(vals)))):
        raise TrigPolynomialError(f"factorization check failed: max | |p|^2 - w | = {err:.3e}")
    return p
