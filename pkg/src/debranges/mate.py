"""Pythagorean mates of rational ball functions, their boundary zeros,
corona estimates and the extreme/non-extreme classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BallError, InnerFunctionError
from .factor import fejer_riesz
from .poly import (
    DEFECT_GRID,
    Polynomial,
    RationalFunction,
    boundary_defect,
    poly_divide_exact,
    poly_roots,
)

BOUNDARY_TOL = 1e-6
PAIR_TOL = 1e-9


@dataclass(frozen=True)
class PythagoreanPair:
    q: RationalFunction
    a: RationalFunction

    def defect(self, points: int = 1024) -> float:
        """max over a grid of | |a|^2 + |q|^2 - 1 | on the circle."""
        z = np.exp(2j * np.pi * np.arange(points) / points)
        return float(np.max(np.abs(np.abs(self.a(z)) ** 2 + np.abs(self.q(z)) ** 2 - 1)))

    def to_json(self) -> dict:
        return {"q": self.q.to_json(), "a": self.a.to_json()}


@dataclass(frozen=True)
class BoundaryZeroSet:
    zeros: tuple[tuple[complex, int], ...]

    @property
    def N(self) -> int:
        return sum(m for _, m in self.zeros)

    def index(self) -> list[tuple[int, int]]:
        """(j, ell) pairs in Gram order: zero by zero, ell = 0..m_j - 1."""
        return [(j, ell) for j, (_, m) in enumerate(self.zeros) for ell in range(m)]

    def monic_product(self) -> Polynomial:
        return Polynomial.from_roots(self.zeros)

    def find(self, lam: complex, tol: float = 1e-8) -> int | None:
        for j, (zeta, _) in enumerate(self.zeros):
            if abs(zeta - lam) <= tol:
                return j
        return None

    def to_json(self) -> dict:
        return {
            "zeros": [{"zeta": [z.real, z.imag], "m": m} for z, m in self.zeros],
            "N": self.N,
        }

    @classmethod
    def from_json(cls, data: dict) -> "BoundaryZeroSet":
        return cls(tuple((complex(*d["zeta"]), int(d["m"])) for d in data["zeros"]))


class Classification(str, enum.Enum):
    NON_EXTREME = "NonExtreme"
    EXTREME_INVERTIBLE = "ExtremeInvertible"
    EXTREME_NON_INVERTIBLE = "ExtremeNonInvertible"


def _is_inner(w, q: RationalFunction) -> bool:
    ref = max(1.0, max(q.den.max_norm(), q.num.max_norm() if not q.num.is_zero else 0.0) ** 2)
    return w.is_zero(1e-12, ref)


def pythagorean_mate(q: RationalFunction) -> PythagoreanPair:
    w = boundary_defect(q)
    if _is_inner(w, q):
        raise InnerFunctionError("q is inner: extreme point, no mate")
    p = fejer_riesz(w)
    # q.den is normalized with den(0) = 1, so a(0) = p(0) > 0
    a = RationalFunction(p, q.den)
    a0 = a(0.0)
    if a0.real <= 0:
        a = a * (abs(a0) / a0)
    pair = PythagoreanPair(q, a)
    err = pair.defect()
    if err > PAIR_TOL * 10:
        raise BallError(f"mate check failed: | |a|^2+|q|^2-1 | = {err:.3e}")
    return pair


def boundary_zeros(a: RationalFunction) -> tuple[BoundaryZeroSet, RationalFunction]:
    """Unimodular zeros of a and the residual factor s with a = s * prod(z - zeta_j)^m_j."""
    if a.num.is_zero or a.num.degree == 0:
        return BoundaryZeroSet(()), a
    found: list[tuple[complex, int]] = []
    for r, m in poly_roots(a.num):
        if abs(abs(r) - 1.0) <= BOUNDARY_TOL:
            zeta = r / abs(r)
            for i, (z0, m0) in enumerate(found):
                if abs(z0 - zeta) <= BOUNDARY_TOL:
                    found[i] = (z0, m0 + m)
                    break
            else:
                found.append((complex(zeta), m))
    found.sort(key=lambda zm: (np.angle(zm[0]) % (2 * np.pi)))
    zs = BoundaryZeroSet(tuple(found))
    if not found:
        return zs, a
    s_num = poly_divide_exact(a.num, zs.monic_product(), rem_tol=1e-7)
    return zs, RationalFunction(s_num, a.den, reduce=False)


@lru_cache(maxsize=256)
def mate_data(q: RationalFunction) -> tuple[PythagoreanPair, BoundaryZeroSet, RationalFunction]:
    """Mate, boundary zeros and residual factor of q (cached by value)."""
    pair = pythagorean_mate(q)
    zs, s = boundary_zeros(pair.a)
    return pair, zs, s


@dataclass(frozen=True)
class CoronaEstimate:
    value: float
    slack: float
    argmin: complex

    @property
    def lower_bound(self) -> float:
        return max(0.0, self.value - self.slack)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "slack": self.slack,
            "lower_bound": self.lower_bound,
            "argmin": [self.argmin.real, self.argmin.imag],
        }


def corona_infimum(
    a: RationalFunction, q: RationalFunction, depth: int = 8, n_r: int = 33, n_t: int = 128, keep: int = 4000
) -> CoronaEstimate:
    """Estimate inf over the closed disk of |a| + |q| by adaptive polar refinement.

    Cells whose corner minimum is within a factor 2 of the running minimum are
    split in four each round. The reported slack is a Lipschitz bound
    (sup |a'| + |q'| sampled) times half the diameter of the finest cell.
    """
    da, dq = a.derivative(), q.derivative()

    def f(z):
        return np.abs(a(z)) + np.abs(q(z))

    def lip(z):
        return np.abs(da(z)) + np.abs(dq(z))

    r_edges = np.linspace(0.0, 1.0, n_r)
    t_edges = np.linspace(0.0, 2 * np.pi, n_t + 1)
    R0, T0 = np.meshgrid(r_edges[:-1], t_edges[:-1], indexing="ij")
    cells = np.stack([R0.ravel(), T0.ravel()], axis=1)
    dr, dt = r_edges[1] - r_edges[0], t_edges[1] - t_edges[0]

    best, best_z, L = np.inf, 0j, 0.0
    for level in range(depth + 1):
        corners = [(0, 0), (1, 0), (0, 1), (1, 1), (0.5, 0.5)]
        vals = []
        for fr, ft in corners:
            z = (cells[:, 0] + fr * dr) * np.exp(1j * (cells[:, 1] + ft * dt))
            v = f(z)
            L = max(L, float(np.max(lip(z))))
            i = int(np.argmin(v))
            if v[i] < best:
                best, best_z = float(v[i]), complex(z[i])
            vals.append(v)
        cell_min = np.min(vals, axis=0)
        if level == depth:
            break
        sel = cells[cell_min <= 2 * best]
        if sel.shape[0] > keep:
            sel = sel[np.argsort(cell_min[cell_min <= 2 * best])[:keep]]
        dr, dt = dr / 2, dt / 2
        cells = np.concatenate([sel + [i * dr, j * dt] for i in (0, 1) for j in (0, 1)])
    diam = np.hypot(dr, dt)  # dt * r <= dt on the unit disk
    return CoronaEstimate(best, 0.5 * L * diam, best_z)


def classify(b: RationalFunction) -> Classification:
    w = boundary_defect(b)
    if not _is_inner(w, b):
        return Classification.NON_EXTREME
    if b.num.degree == 0:
        return Classification.EXTREME_INVERTIBLE
    zeros = [r for r, _ in poly_roots(b.num) if abs(r) <= 1 + 1e-9]
    return Classification.EXTREME_NON_INVERTIBLE if zeros else Classification.EXTREME_INVERTIBLE


def mate_modulus_ratio_bounds(q: RationalFunction, r: float, grid: int = DEFECT_GRID) -> tuple[float, float]:
    """min and max over the circle of sqrt((1 - |q|^(2r)) / (1 - |q|^2)).

    This is |a_r| / |a| on the circle, a_r being the mate of q**r, without
    building a_r. Points with 1 - |q|^2 < 1e-12 take the limit value sqrt(r).
    """
    if not r > 0:
        raise ValueError("r must be positive")
    z = np.exp(2j * np.pi * np.arange(grid) / grid)
    x = np.minimum(np.abs(q(z)) ** 2, 1.0)
    one_minus = 1.0 - x
    safe = one_minus >= 1e-12
    rho = np.full(grid, np.sqrt(r))
    rho[safe] = np.sqrt((1.0 - x[safe] ** r) / one_minus[safe])
    return float(rho.min()), float(rho.max())
