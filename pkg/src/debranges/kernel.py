"""Derivative reproducing kernels of H(q**r), their closed forms and Gram matrices.

The kernel of order ell at lam is the ell-th derivative in conj(lam) of
(1 - conj(Q(lam)) Q(z)) / (1 - conj(lam) z) with Q = q**r. By Leibniz,

    v(z) = sum_k C(ell, k) A_k(z) (ell - k)! z^(ell - k) / (1 - conj(lam) z)^(ell - k + 1)

with A_0 = 1 - conj(Q(lam)) Q(z) and A_k = -conj(Q^(k)(lam)) Q(z) for k >= 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import KernelUndefinedError, NotAnalyticError, NotDivisibleError
from .limits import LIMIT_TOL, radial_limit
from .mate import BoundaryZeroSet, mate_data
from .poly import Polynomial, RationalFunction, poly_divide_exact
from .power import PowerFunction

ON_CIRCLE_TOL = 1e-8


class Method(str, enum.Enum):
    RATIONAL = "rational"
    RADIAL = "radial"
    TAYLOR = "taylor"


@dataclass(frozen=True)
class KernelSpec:
    r: float
    lam: complex
    ell: int = 0

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("r must be positive")
        if self.ell < 0:
            raise ValueError("ell must be nonnegative")
        if abs(self.lam) > 1 + ON_CIRCLE_TOL:
            raise KernelUndefinedError(f"kernel undefined: |lambda| = {abs(self.lam):.6g} > 1")
        object.__setattr__(self, "lam", complex(self.lam))

    @property
    def on_circle(self) -> bool:
        return abs(abs(self.lam) - 1) <= ON_CIRCLE_TOL

    def to_json(self) -> dict:
        return {"r": self.r, "lambda": [self.lam.real, self.lam.imag], "ell": self.ell}

    @classmethod
    def from_json(cls, data: dict) -> "KernelSpec":
        return cls(float(data["r"]), complex(*data["lambda"]), int(data.get("ell", 0)))


@dataclass(frozen=True)
class KernelClosedForm:
    spec: KernelSpec
    value: RationalFunction

    def __call__(self, z):
        return self.value(z)

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "value": self.value.to_json()}


@lru_cache(maxsize=256)
def power_of(q: RationalFunction, r: float) -> PowerFunction:
    return PowerFunction(q, float(r))


def check_spec(q: RationalFunction, spec: KernelSpec) -> None:
    """Enforce the boundary rule: a unimodular lam must be a mate zero of order > ell."""
    if not spec.on_circle:
        return
    _, zeros, _ = mate_data(q)
    j = zeros.find(spec.lam, ON_CIRCLE_TOL)
    if j is None or spec.ell > zeros.zeros[j][1] - 1:
        raise KernelUndefinedError("kernel undefined: ell exceeds m_j - 1")


def _conj_derivs_at_lam(q: RationalFunction, spec: KernelSpec) -> np.ndarray:
    """conj(Q^(k)(lam)) for k = 0..ell."""
    if float(spec.r).is_integer():
        d = (q ** int(spec.r)).derivatives(spec.lam, spec.ell)
    else:
        d = power_of(q, spec.r).derivatives(spec.lam, spec.ell)
    return np.conj(d)


def _q_values(q: RationalFunction, r: float, z):
    if float(r).is_integer():
        return q(z) ** int(r)
    return power_of(q, r)(z)


def kernel_eval(q: RationalFunction, spec: KernelSpec, z):
    """Evaluate the kernel at interior points z (array or scalar)."""
    check_spec(q, spec)
    z = np.asarray(z, dtype=complex)
    ell, lb = spec.ell, np.conj(spec.lam)
    cq = _conj_derivs_at_lam(q, spec)
    Qz = _q_values(q, spec.r, z)
    u = 1 - lb * z
    out = (1 - cq[0] * Qz) * math.factorial(ell) * z**ell / u ** (ell + 1)
    for k in range(1, ell + 1):
        m = ell - k
        out = out - math.comb(ell, k) * cq[k] * Qz * math.factorial(m) * z**m / u ** (m + 1)
    if spec.on_circle:
        # the form above cancels to order ell+1 near lam; use the local series there
        coeffs, radius = _boundary_series(q, spec)
        near = np.abs(z - spec.lam) < radius
        if np.any(near):
            out = np.array(out, dtype=complex)
            out[near] = np.polynomial.polynomial.polyval(z[near] - spec.lam, coeffs)
    return out[()] if out.ndim == 0 else out


BOUNDARY_SERIES_TERMS = 40


@lru_cache(maxsize=256)
def _boundary_series(q: RationalFunction, spec: KernelSpec) -> tuple[np.ndarray, float]:
    """Taylor coefficients of the kernel at its unimodular lam and a radius where
    the truncated series is accurate: a third of the distance to the nearest
    singularity of q**r, capped at 0.1."""
    sing = list(np.roots(q.den.c[::-1])) if q.den.degree > 0 else []
    if not float(spec.r).is_integer() and q.num.degree > 0:
        sing += list(np.roots(q.num.c[::-1]))
    dist = min((abs(s - spec.lam) for s in sing), default=np.inf)
    return kernel_taylor(q, spec, spec.lam, BOUNDARY_SERIES_TERMS), float(min(0.1, dist / 3))


# truncated power series helpers (coefficients in powers of z - z0)


def _smul(a, b, K):
    return np.convolve(a[: K + 1], b[: K + 1])[: K + 1]


def _z_power_series(z0, m, K):
    out = np.zeros(K + 1, dtype=complex)
    for i in range(min(m, K) + 1):
        out[i] = math.comb(m, i) * z0 ** (m - i)
    return out


def _linear_power_series(u0, slope, k, K):
    """Series of (u0 + slope * w)^k."""
    out = np.zeros(K + 1, dtype=complex)
    for i in range(min(k, K) + 1):
        out[i] = math.comb(k, i) * u0 ** (k - i) * slope**i
    return out


def kernel_taylor(q: RationalFunction, spec: KernelSpec, z0: complex, K: int) -> np.ndarray:
    """Taylor coefficients v^(i)(z0)/i!, i = 0..K, at any z0 in the closed disk.

    The kernel is written as N(z) / (1 - conj(lam) z)^(ell+1). When z0 = lam on
    the circle the removable factor is cancelled in the series, so no limit is
    taken. q**r is expanded with exact derivatives at z0.
    """
    check_spec(q, spec)
    z0 = complex(z0)
    ell, lb = spec.ell, np.conj(spec.lam)
    cq = _conj_derivs_at_lam(q, spec)
    u0 = 1 - lb * z0
    singular = abs(u0) < 1e-12
    shift = ell + 1 if singular else 0
    KN = K + shift
    if float(spec.r).is_integer():
        qd = (q ** int(spec.r)).taylor(z0, KN)
    else:
        qd = power_of(q, spec.r).taylor(z0, KN)
    N = np.zeros(KN + 1, dtype=complex)
    for k in range(ell + 1):
        Ak = -cq[k] * qd
        if k == 0:
            Ak = Ak.copy()
            Ak[0] += 1
        term = _smul(Ak, _z_power_series(z0, ell - k, KN), KN)
        term = _smul(term, _linear_power_series(u0, -lb, k, KN), KN)
        N += math.comb(ell, k) * math.factorial(ell - k) * term
    if singular:
        lead = np.abs(N[:shift])
        scale = max(1.0, float(np.max(np.abs(N))))
        if np.any(lead > 1e-7 * scale):
            raise NotAnalyticError("kernel not analytic: spec inconsistent with mate zeros")
        # (1 - conj(lam) z)^(ell+1) = (-conj(lam))^(ell+1) (z - lam)^(ell+1)
        return N[shift:] / (-lb) ** shift
    # 1/(u0 - lb w)^(ell+1) = u0^-(ell+1) sum_i C(ell+i, i) (lb w / u0)^i
    inv = np.array([math.comb(ell + i, i) * (lb / u0) ** i for i in range(K + 1)]) / u0 ** (ell + 1)
    return _smul(N, inv, K)


def kernel_z_derivatives(q: RationalFunction, spec: KernelSpec, z: complex, K: int) -> np.ndarray:
    """[v(z), v'(z), ..., v^(K)(z)]."""
    t = kernel_taylor(q, spec, z, K)
    return t * np.array([math.factorial(i) for i in range(K + 1)])


def kernel_rational_form(q: RationalFunction, spec: KernelSpec, rem_tol: float = 1e-9) -> KernelClosedForm:
    if not float(spec.r).is_integer():
        raise ValueError("closed form needs an integer power r")
    check_spec(q, spec)
    n = int(spec.r)
    ell, lam = spec.ell, spec.lam
    lb = np.conj(lam)
    P1, P2 = q.num**n, q.den**n
    cq = _conj_derivs_at_lam(q, spec)
    lin = Polynomial([1.0, -lb])
    z = Polynomial([0.0, 1.0])
    N = Polynomial()
    for k in range(ell + 1):
        alpha = (P2 - P1 * cq[0]) if k == 0 else P1 * (-cq[k])
        N = N + alpha * (z ** (ell - k)) * (lin**k) * (math.comb(ell, k) * math.factorial(ell - k))
    if spec.on_circle:
        try:
            num = poly_divide_exact(N, lin ** (ell + 1), rem_tol=rem_tol)
        except NotDivisibleError as exc:
            raise NotAnalyticError(f"kernel not analytic: spec inconsistent with mate zeros ({exc})") from exc
        return KernelClosedForm(spec, RationalFunction(num.trim(1e-13), P2))
    return KernelClosedForm(spec, RationalFunction(N, P2 * lin ** (ell + 1)))


def kernel_z_derivative_at_boundary(
    q: RationalFunction,
    spec: KernelSpec,
    zeta_prime: complex,
    ell_prime: int,
    method: Method | str = Method.TAYLOR,
    tol: float = LIMIT_TOL,
) -> complex:
    """ell_prime-th z-derivative of the kernel at the unimodular point zeta_prime."""
    method = Method(method)
    if method is Method.RATIONAL:
        f = kernel_rational_form(q, spec).value
        return complex(f.derivatives(zeta_prime, ell_prime)[ell_prime])
    if method is Method.TAYLOR:
        return complex(kernel_z_derivatives(q, spec, zeta_prime, ell_prime)[ell_prime])
    check_spec(q, spec)
    res = radial_limit(
        lambda z: kernel_z_derivatives(q, spec, z, ell_prime)[ell_prime], zeta_prime, tol=tol
    )
    return res.value


@dataclass(frozen=True)
class GramMatrix:
    """Entries G[a, b] = <v_b, v_a> = v_b^(ell_a)(zeta_a), so that G c = d
    with d_a = f^(ell_a)(zeta_a) gives the kernel coefficients of f."""

    index: tuple[tuple[int, int], ...]
    entries: np.ndarray
    method: str

    @property
    def size(self) -> int:
        return len(self.index)

    def asymmetry(self) -> float:
        G = self.entries
        return float(np.max(np.abs(G - G.conj().T))) if self.size else 0.0

    def min_eigenvalue(self) -> float:
        if not self.size:
            return float("inf")
        G = self.entries
        return float(np.min(np.linalg.eigvalsh((G + G.conj().T) / 2)))

    def condition(self) -> float:
        return float(np.linalg.cond(self.entries)) if self.size else 1.0

    def to_json(self) -> dict:
        return {
            "index": [list(ix) for ix in self.index],
            "entries": [[complex(v).real, complex(v).imag] for v in self.entries.ravel()],
            "method": self.method,
        }


def default_method(r: float) -> Method:
    return Method.RATIONAL if float(r).is_integer() else Method.TAYLOR


def gram_matrix(
    q: RationalFunction, r: float, zeros: BoundaryZeroSet | None = None, method: Method | str | None = None
) -> GramMatrix:
    if zeros is None:
        _, zeros, _ = mate_data(q)
    method = default_method(r) if method is None else Method(method)
    index = tuple(zeros.index())
    n = len(index)
    G = np.zeros((n, n), dtype=complex)
    for b, (jb, lb) in enumerate(index):
        spec = KernelSpec(r, zeros.zeros[jb][0], lb)
        for a, (ja, la) in enumerate(index):
            G[a, b] = kernel_z_derivative_at_boundary(q, spec, zeros.zeros[ja][0], la, method)
    return GramMatrix(index, G, method.value)


def boundary_kernels(q: RationalFunction, r: float, zeros: BoundaryZeroSet | None = None) -> list[KernelSpec]:
    if zeros is None:
        _, zeros, _ = mate_data(q)
    return [KernelSpec(r, zeros.zeros[j][0], ell) for j, ell in zeros.index()]
