"""Truncated Taylor-coefficient model of H^2: Toeplitz operators, membership in
the range of T_{conj(a)}, and the Fourier-vanishing test for boundary zeros."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import NotAnalyticError
from .limits import radial_limit
from .mate import BoundaryZeroSet, boundary_zeros
from .poly import Polynomial, RationalFunction, TrigPolynomial

DEFAULT_TRUNC = 256
MEMBER_TOL = 1e-6
NONMEMBER_TOL = 1e-2


@dataclass(frozen=True, eq=False)
class HardyVector:
    coeffs: np.ndarray
    tail: float | None = None  # estimated l2 norm of the dropped coefficients, when known

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def M(self) -> int:
        return self.coeffs.size - 1

    def truncate(self, M: int) -> "HardyVector":
        c = np.zeros(M + 1, dtype=complex)
        n = min(M + 1, self.coeffs.size)
        c[:n] = self.coeffs[:n]
        return HardyVector(c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: "HardyVector") -> complex:
        n = min(self.coeffs.size, other.coeffs.size)
        return complex(np.vdot(other.coeffs[:n], self.coeffs[:n]))

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def derivatives(self, z: complex, K: int) -> np.ndarray:
        out = np.zeros(K + 1, dtype=complex)
        c = self.coeffs
        for k in range(K + 1):
            out[k] = np.polynomial.polynomial.polyval(complex(z), c) if c.size else 0
            c = np.polynomial.polynomial.polyder(c) if c.size > 1 else np.zeros(1, dtype=complex)
        return out

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs)

    def __add__(self, other: "HardyVector") -> "HardyVector":
        n = max(self.M, other.M)
        return HardyVector(self.truncate(n).coeffs + other.truncate(n).coeffs)

    def __sub__(self, other: "HardyVector") -> "HardyVector":
        n = max(self.M, other.M)
        return HardyVector(self.truncate(n).coeffs - other.truncate(n).coeffs)

    def __mul__(self, scalar) -> "HardyVector":
        return HardyVector(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"M": self.M, "coeffs": [[v.real, v.imag] for v in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "HardyVector":
        c = [complex(*v) for v in data["coeffs"]]
        M = int(data.get("M", len(c) - 1))
        return cls(c).truncate(M)


def analytic_coeffs(h, M: int, analytic_tol: float = 1e-8, scale: float = 0.0) -> HardyVector:
    """Taylor coefficients 0..M of a rational function, a polynomial, or a
    vectorized callable analytic on the open disk.

    For callables, negative-frequency content above analytic_tol times
    max(spectrum peak, scale) is rejected; ``scale`` lets a caller whose h is
    a small difference of larger terms set the reference size.
    """
    if isinstance(h, Polynomial):
        h = RationalFunction(h)
    if isinstance(h, RationalFunction):
        tail = None
        if h.den.degree > 0:
            from .poly import poly_roots

            rho = min(abs(r) for r, _ in poly_roots(h.den))
            tail = float(rho ** -(M + 1))  # geometric decay rate, up to a constant
        return HardyVector(h.taylor(0.0, M), tail=tail)
    if isinstance(h, HardyVector):
        return h.truncate(M)
    # samples on |z| = rho with enough points that aliasing from index k + K is
    # damped by rho**K ~ exp(-32)
    K = 32 * (M + 1)
    rho = 1.0 - 1.0 / (M + 1)
    z = rho * np.exp(2j * np.pi * np.arange(K) / K)
    vals = np.asarray(h(z), dtype=complex)
    spec = np.fft.fft(vals) / K
    pos = spec[: M + 1] / rho ** np.arange(M + 1)
    neg = spec[K // 2 + 1 :]
    ref = max(float(np.max(np.abs(spec))), scale, 1e-300)
    if np.max(np.abs(neg)) > analytic_tol * ref:
        raise NotAnalyticError("not analytic to truncation accuracy")
    return HardyVector(pos)


# ---------------------------------------------------------------- Toeplitz


@dataclass(frozen=True, eq=False)
class Symbol:
    """Fourier coefficients of a symbol on indices -M..M (offset M)."""

    coeffs: np.ndarray

    @property
    def M(self) -> int:
        return (self.coeffs.size - 1) // 2

    def coeff(self, k: int) -> complex:
        i = k + self.M
        return complex(self.coeffs[i]) if 0 <= i < self.coeffs.size else 0j

    @classmethod
    def from_pairs(cls, M: int, nonneg: Sequence[complex] = (), neg: Sequence[complex] = ()) -> "Symbol":
        """nonneg[k] is the coefficient of index k, neg[k] of index -k."""
        c = np.zeros(2 * M + 1, dtype=complex)
        nonneg = np.asarray(nonneg, dtype=complex)[: M + 1]
        neg = np.asarray(neg, dtype=complex)[: M + 1]
        c[M : M + nonneg.size] += nonneg
        c[M - np.arange(neg.size)] += neg
        return cls(c)

    @classmethod
    def analytic(cls, f, M: int) -> "Symbol":
        return cls.from_pairs(M, nonneg=analytic_coeffs(f, M).coeffs)

    @classmethod
    def conj_analytic(cls, f, M: int) -> "Symbol":
        """Symbol conj(f) on the circle for analytic f: coefficient of index -k is conj(f_k)."""
        return cls.from_pairs(M, neg=np.conj(analytic_coeffs(f, M).coeffs))

    @classmethod
    def trig(cls, w: TrigPolynomial, M: int) -> "Symbol":
        c = np.zeros(2 * M + 1, dtype=complex)
        for k in range(-min(w.n, M), min(w.n, M) + 1):
            c[k + M] = w.coeff(k)
        return cls(c)

    @classmethod
    def conj_z_power(cls, n: int, M: int) -> "Symbol":
        c = np.zeros(2 * M + 1, dtype=complex)
        if n <= M:
            c[M - n] = 1
        return cls(c)


@dataclass(frozen=True, eq=False)
class ToeplitzMatrix:
    symbol: Symbol
    size: int

    @property
    def matrix(self) -> np.ndarray:
        n = self.size
        col = np.array([self.symbol.coeff(i) for i in range(n)])
        row = np.array([self.symbol.coeff(-k) for k in range(n)])
        return scipy.linalg.toeplitz(col, row)


def toeplitz_matrix(symbol: Symbol, M: int) -> np.ndarray:
    return ToeplitzMatrix(symbol, M + 1).matrix


def toeplitz_apply(symbol: Symbol, f: HardyVector) -> HardyVector:
    """Truncated P_+(symbol * f): out_i = sum_k symbol_(i-k) f_k for i = 0..M."""
    return HardyVector(toeplitz_matrix(symbol, f.M) @ f.coeffs)


def _conj_poly_apply(p: Sequence[complex], g: np.ndarray) -> np.ndarray:
    """P_+(conj(p) g) for a polynomial p, exact on the available indices."""
    p = np.asarray(p, dtype=complex)
    out = np.zeros_like(g)
    n = g.size
    for j, pj in enumerate(p):
        if j < n:
            out[: n - j] += np.conj(pj) * g[j:]
    return out


# ---------------------------------------------------------------- membership


def phi_basis(zeros: BoundaryZeroSet) -> list[Polynomial]:
    """z^ell (z - zeta_j)^(m_j - ell - 1) prod_{k != j} (z - zeta_k)^m_k, in Gram order."""
    out = []
    for j, ell in zeros.index():
        zeta, m = zeros.zeros[j]
        others = [(z, mk) for k, (z, mk) in enumerate(zeros.zeros) if k != j]
        base = Polynomial.from_roots(others + [(zeta, m - ell - 1)] if m - ell - 1 > 0 else others)
        out.append(base * Polynomial([0] * ell + [1]))
    return out


def evaluation_matrix(zeros: BoundaryZeroSet) -> np.ndarray:
    """E[a, b] = phi_b^(ell_a)(zeta_a); triangular up to ordering and nonsingular."""
    idx = zeros.index()
    basis = phi_basis(zeros)
    E = np.zeros((len(idx), len(idx)), dtype=complex)
    for a, (j, ell) in enumerate(idx):
        for b, phi in enumerate(basis):
            E[a, b] = phi.derivative(ell)(zeros.zeros[j][0]) if ell <= (phi.degree if not phi.is_zero else -1) else 0
    return E


def boundary_functionals(zeros: BoundaryZeroSet) -> list[Polynomial]:
    """psi_{j,ell} with (T_{conj(A)} g)^(ell)(zeta_j) = <g, psi_{j,ell}>, A the monic product."""
    out = []
    for (j, ell), phi in zip(zeros.index(), phi_basis(zeros)):
        zeta = zeros.zeros[j][0]
        out.append(phi * (math.factorial(ell) * (-zeta) ** (ell + 1)))
    return out


@dataclass
class MembershipRung:
    M: int
    residual: float
    fit_residual: float
    condition: float

    def to_json(self) -> dict:
        return {"M": self.M, "residual": self.residual, "fit_residual": self.fit_residual, "condition": self.condition}


@dataclass
class MembershipResult:
    g: HardyVector
    residual: float
    verdict: str
    ladder: list[MembershipRung] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "residual": self.residual,
            "ladder": [r.to_json() for r in self.ladder],
            "g": self.g.to_json(),
        }


def _solve_reduced(a_poly: Polynomial, zeros: BoundaryZeroSet, f: np.ndarray, bvals) -> tuple[np.ndarray, float, float]:
    """Solve P_+(conj(a_poly) g') = f for g' with M + 1 unknowns.

    Rows 0..M-N of the Toeplitz system only involve g'_0..g'_M, so they are
    exact. The last N rows are replaced by the boundary derivative data of f,
    which pair g' with the polynomials psi_{j,ell} of degree < N. The matrix
    is banded, so a sparse LU solve is used; the 1-norm condition number is
    estimated from the factorization.
    """
    M = f.size - 1
    N = zeros.N
    p = np.conj(a_poly.c)
    ri, ci, vals = [], [], []
    for j in range(N + 1):
        i = np.arange(M - N + 1)
        ri.append(i)
        ci.append(i + j)
        vals.append(np.full(i.size, p[j]))
    rhs = np.zeros(M + 1, dtype=complex)
    rhs[: M - N + 1] = f[: M - N + 1]
    for t, psi in enumerate(boundary_functionals(zeros)):
        c = np.conj(psi.c)
        ri.append(np.full(c.size, M - N + 1 + t))
        ci.append(np.arange(c.size))
        vals.append(c)
        rhs[M - N + 1 + t] = bvals[t]
    A = scipy.sparse.csc_matrix(
        (np.concatenate(vals), (np.concatenate(ri), np.concatenate(ci))), shape=(M + 1, M + 1)
    )
    lu = scipy.sparse.linalg.splu(A)
    sol = lu.solve(rhs)
    inv = scipy.sparse.linalg.LinearOperator(
        A.shape, matvec=lu.solve, rmatvec=lambda x: lu.solve(x, trans="H"), dtype=complex
    )
    cond = float(scipy.sparse.linalg.onenormest(A) * scipy.sparse.linalg.onenormest(inv))
    fit = float(np.linalg.norm(A @ sol - rhs) / max(np.linalg.norm(rhs), 1e-300))
    return sol, cond, fit


def boundary_data(f: HardyVector, zeros: BoundaryZeroSet) -> np.ndarray:
    """f^(ell)(zeta_j) of the truncated f, in Gram order."""
    out = []
    for j, ell in zeros.index():
        out.append(f.derivatives(zeros.zeros[j][0], ell)[ell])
    return np.array(out, dtype=complex)


def _as_rational(f) -> RationalFunction:
    return f if isinstance(f, RationalFunction) else RationalFunction(f)


def membership_solve(
    a: RationalFunction,
    f: HardyVector | Callable | RationalFunction,
    M: int = DEFAULT_TRUNC,
    boundary_values=None,
    ladder: int = 3,
    member_tol: float = MEMBER_TOL,
    nonmember_tol: float = NONMEMBER_TOL,
) -> MembershipResult:
    """Decide numerically whether f = T_{conj(a)} g for some g in H^2.

    a = s * A with A the monic product over the boundary zeros and s invertible
    in H-infinity. We solve T_{conj(A)} g' = f exactly at truncation M (see
    _solve_reduced) and set g = T_{conj(1/s)} g'. The residual of a rung is the
    fraction of the energy of g' that appears when the truncation doubles from
    M/2 to M; it tends to zero exactly when g' has finite norm.
    """
    zeros, s = boundary_zeros(a)
    a_poly = zeros.monic_product()
    top = M * 2 ** (ladder - 1)
    fv = f if isinstance(f, HardyVector) else analytic_coeffs(f, top)
    if boundary_values is None:
        if not isinstance(f, HardyVector) and zeros.N:
            bvals = np.array(
                [
                    complex(_as_rational(f).derivatives(zeros.zeros[j][0], ell)[ell])
                    if isinstance(f, (RationalFunction, Polynomial))
                    else fv.derivatives(zeros.zeros[j][0], ell)[ell]
                    for j, ell in zeros.index()
                ]
            )
        else:
            bvals = boundary_data(fv, zeros)
    else:
        bvals = np.asarray(boundary_values, dtype=complex)

    inv_s = RationalFunction(s.den, s.num)
    rungs: list[MembershipRung] = []
    solved: dict[int, tuple] = {}

    def solve(Mi):
        if Mi not in solved:
            solved[Mi] = _solve_reduced(a_poly, zeros, fv.truncate(Mi).coeffs, bvals)
        return solved[Mi]

    for i in range(ladder):
        Mi = M * 2**i
        full, cond, fit = solve(Mi)
        half = solve(Mi // 2)[0]
        e_full = float(np.vdot(full, full).real)
        e_half = float(np.vdot(half, half).real)
        resid = abs(e_full - e_half) / e_full if e_full > 0 else 0.0
        rungs.append(MembershipRung(Mi, resid, fit, cond))
    g_out = solved[top][0]
    g = toeplitz_apply(Symbol.conj_analytic(inv_s, top), HardyVector(g_out))
    final = rungs[-1].residual
    if final < member_tol:
        verdict = "member"
    elif all(r.residual > nonmember_tol for r in rungs):
        verdict = "non-member"
    else:
        verdict = "inconclusive"
    return MembershipResult(g, final, verdict, rungs)


# ---------------------------------------------------------------- Fourier vanishing


@dataclass
class VanishingReport:
    limits: list[complex]
    low_coeffs: list[float]
    coeffs_vanish: bool
    derivatives_vanish: bool
    identity_error: float | None

    @property
    def consistent(self) -> bool:
        return self.coeffs_vanish == self.derivatives_vanish

    def to_json(self) -> dict:
        return {
            "limits": [[v.real, v.imag] for v in self.limits],
            "low_coeffs": self.low_coeffs,
            "coeffs_vanish": self.coeffs_vanish,
            "derivatives_vanish": self.derivatives_vanish,
            "identity_error": self.identity_error,
            "consistent": self.consistent,
        }


def unimodular_factor(zeros: BoundaryZeroSet) -> complex:
    return complex(np.prod([(-np.conj(z)) ** m for z, m in zeros.zeros]))


def conj_identity_error(zeros: BoundaryZeroSet, points: int = 512) -> float:
    """max over the circle of |conj(A) - conj(z)^N A prod(-conj(zeta_j))^m_j|."""
    A = zeros.monic_product()
    z = np.exp(2j * np.pi * (np.arange(points) + 0.5) / points)
    lhs = np.conj(A(z))
    rhs = np.conj(z) ** zeros.N * A(z) * unimodular_factor(zeros)
    return float(np.max(np.abs(lhs - rhs)))


def fourier_vanishing_check(zeros: BoundaryZeroSet, g: HardyVector, M: int | None = None, tol: float = 1e-6) -> VanishingReport:
    """Compare the boundary derivatives of T_{conj(A)} g with the first N
    coefficients of g, A the monic product over the zeros."""
    M = g.M if M is None else M
    gv = g.truncate(M)
    A = zeros.monic_product()
    Tg = HardyVector(_conj_poly_apply(A.c, gv.coeffs))
    limits = []
    for j, ell in zeros.index():
        res = radial_limit(lambda z, ell=ell: Tg.derivatives(z, ell)[ell], zeros.zeros[j][0], strict=False)
        limits.append(res.value)
    N = zeros.N
    low = [float(abs(c)) for c in gv.coeffs[:N]]
    scale = max(1.0, gv.norm())
    coeffs_vanish = all(c < tol * scale for c in low)
    derivs_vanish = all(abs(v) < tol * scale for v in limits)
    ident = None
    if coeffs_vanish:
        shifted = np.concatenate([gv.coeffs[N:], np.zeros(N, dtype=complex)])
        rhs = unimodular_factor(zeros) * np.convolve(A.c, shifted)[: M + 1]
        # exact on indices where the shifted g is not truncated
        n = M + 1 - N
        ident = float(np.max(np.abs(Tg.coeffs[:n] - rhs[:n]))) if n > 0 else 0.0
    return VanishingReport(limits, low, coeffs_vanish, derivs_vanish, ident)
