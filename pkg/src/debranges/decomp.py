"""Split members of H(q**r) into a part divisible by the boundary-zero product
and a combination of boundary kernels; orthogonality and set-equality checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MembershipError, NotDivisibleError
from .hardy import DEFAULT_TRUNC, HardyVector, analytic_coeffs, membership_solve
from .kernel import (
    GramMatrix,
    KernelSpec,
    default_method,
    gram_matrix,
    kernel_eval,
    kernel_rational_form,
)
from .limits import radial_limit
from .mate import BoundaryZeroSet, mate_data, mate_modulus_ratio_bounds
from .poly import Polynomial, RationalFunction, poly_divide_exact

RECON_TOL = 1e-6
BACKWARD_TOL = 1e-8
ORTHO_TOL = 1e-6


def _is_int(r) -> bool:
    return float(r).is_integer()


def _as_input(f):
    if isinstance(f, Polynomial):
        return RationalFunction(f)
    return f


@dataclass
class Decomposition:
    index: list[tuple[int, int]]
    c: np.ndarray
    h: HardyVector
    d: np.ndarray
    gram: GramMatrix | None
    h_rational: RationalFunction | None = None
    diagnostics: dict = field(default_factory=dict)
    verdict: str = "member"

    def kernel_part(self, q: RationalFunction, r: float, zeros: BoundaryZeroSet, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for (j, ell), cb in zip(self.index, self.c):
            out = out + cb * kernel_eval(q, KernelSpec(r, zeros.zeros[j][0], ell), z)
        return out

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "index": [list(ix) for ix in self.index],
            "c": [[complex(v).real, complex(v).imag] for v in self.c],
            "d": [[complex(v).real, complex(v).imag] for v in self.d],
            "h": self.h.to_json(),
            "diagnostics": self.diagnostics,
        }
        if self.h_rational is not None:
            out["h_rational"] = self.h_rational.to_json()
        return out


def _boundary_data(f, zeros: BoundaryZeroSet) -> tuple[np.ndarray, float]:
    vals, err = [], 0.0
    for j, ell in zeros.index():
        zeta = zeros.zeros[j][0]
        if isinstance(f, RationalFunction):
            vals.append(complex(f.derivatives(zeta, ell)[ell]))
        else:
            res = radial_limit(lambda z, ell=ell: f.derivatives(z, ell)[ell], zeta, strict=False)
            vals.append(res.value)
            err = max(err, res.error)
    return np.array(vals, dtype=complex), err


def _kernel_sum_rational(q, r, zeros, index, c) -> RationalFunction:
    total = RationalFunction(Polynomial())
    for (j, ell), cb in zip(index, c):
        if cb != 0:
            total = total + kernel_rational_form(q, KernelSpec(r, zeros.zeros[j][0], ell)).value * complex(cb)
    return total


def decompose(
    q: RationalFunction,
    r: float,
    f,
    M: int = DEFAULT_TRUNC,
    method=None,
    seed: int = 0,
) -> Decomposition:
    """f = A h + sum c_b v_b with A the monic boundary-zero product.

    The coefficients solve G c = d with d the boundary derivatives of f.
    """
    f = _as_input(f)
    pair, zeros, _ = mate_data(q)
    diagnostics: dict = {"N": zeros.N}
    index = zeros.index()

    if isinstance(f, HardyVector):
        d, d_err = _boundary_data(f, zeros)
        diagnostics["d_limit_error"] = d_err
        mem = membership_solve(pair.a, f, M, boundary_values=d if zeros.N else None)
        diagnostics["membership_residual"] = mem.residual
        if mem.verdict != "member":
            raise MembershipError(mem.verdict, f"f is not in H(q^r): verdict {mem.verdict} (residual {mem.residual:.3e})")
    elif isinstance(f, RationalFunction):
        d, _ = _boundary_data(f, zeros)
    else:
        raise TypeError("f must be a Polynomial, RationalFunction or HardyVector")

    A = zeros.monic_product()
    if zeros.N == 0:
        h = analytic_coeffs(f, M)
        return Decomposition([], np.zeros(0, complex), h, d, None, f if isinstance(f, RationalFunction) else None,
                             {**diagnostics, "reconstruction_error": 0.0})

    G = gram_matrix(q, r, zeros, method)
    c = np.linalg.solve(G.entries, d)
    backward = float(np.linalg.norm(G.entries @ c - d))
    dnorm = float(np.linalg.norm(d))
    diagnostics.update(gram_condition=G.condition(), backward_error=backward, gram_method=G.method)
    if backward > BACKWARD_TOL * max(dnorm, 1e-300) and backward > 1e-14:
        raise np.linalg.LinAlgError(f"Gram solve backward error {backward:.3e}")

    h_rat = None
    if isinstance(f, RationalFunction) and _is_int(r) and G.method == "rational":
        K = _kernel_sum_rational(q, r, zeros, index, c)
        R = f - K
        scale = max((f.num * K.den).max_norm(), (K.num * f.den).max_norm())
        try:
            quo = poly_divide_exact(R.num, A, rem_tol=1e-8, scale=scale)
        except NotDivisibleError as exc:
            raise NotDivisibleError(exc.residual, "residual not divisible by the boundary-zero product") from exc
        h_rat = RationalFunction(quo.trim(1e-13), R.den)
        h = analytic_coeffs(h_rat, M)
    else:
        fcall = f

        def quotient(z):
            return (fcall(z) - Decomposition(index, c, None, d, G).kernel_part(q, r, zeros, z)) / A(z)

        ring = 0.9 * np.exp(2j * np.pi * np.arange(64) / 64)
        fscale = float(np.max(np.abs(fcall(ring))))
        h = analytic_coeffs(quotient, M, scale=fscale)
        tail = float(np.linalg.norm(h.coeffs[M // 2 :]) / max(h.norm(), fscale, 1e-300))
        diagnostics["tail"] = tail

    dec = Decomposition(index, c, h, d, G, h_rat, diagnostics)
    rng = np.random.default_rng(seed)
    z = 0.9 * np.sqrt(rng.uniform(0, 1, 100)) * np.exp(2j * np.pi * rng.uniform(0, 1, 100))
    hz = h_rat(z) if h_rat is not None else h(z)
    recon = A(z) * hz + dec.kernel_part(q, r, zeros, z)
    diagnostics["reconstruction_error"] = float(np.max(np.abs(recon - f(z))))
    return dec


@dataclass
class LimitReport:
    spec: KernelSpec
    value: complex
    error: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "limit": [self.value.real, self.value.imag],
            "error": self.error,
            "passed": self.passed,
        }


def verify_orthogonality(q: RationalFunction, r: float, g, spec: KernelSpec, tol: float = ORTHO_TOL) -> LimitReport:
    """Radial limit of (a g)^(ell)(t zeta): the pairing of a g with the kernel."""
    pair, _, _ = mate_data(q)
    gp = g.as_polynomial() if isinstance(g, HardyVector) else g
    ag = pair.a * RationalFunction(gp)
    ell = spec.ell
    res = radial_limit(lambda z: ag.derivatives(z, ell)[ell], spec.lam, strict=False)
    return LimitReport(spec, res.value, res.error, abs(res.value) < tol)


@dataclass
class SetsEqualReport:
    q: RationalFunction
    r: float
    items: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(it["passed"] for it in self.items)

    def to_json(self) -> dict:
        return {"passed": self.passed, "r": self.r, "items": self.items}


def kernel_function(q: RationalFunction, spec: KernelSpec):
    """The kernel as a rational function (integer r) or a vectorized closure."""
    if _is_int(spec.r):
        return kernel_rational_form(q, spec).value
    return lambda z: kernel_eval(q, spec, z)


def sets_equal_check(q: RationalFunction, r: float, M: int = DEFAULT_TRUNC) -> SetsEqualReport:
    pair, zeros, _ = mate_data(q)
    rep = SetsEqualReport(q, r)
    G = gram_matrix(q, r, zeros)
    # (i) kernels of the r-space lie in the range of T_conj(a), i.e. in H(q)
    for b, (j, ell) in enumerate(zeros.index()):
        spec = KernelSpec(r, zeros.zeros[j][0], ell)
        res = membership_solve(pair.a, kernel_function(q, spec), M, boundary_values=G.entries[:, b])
        rep.items.append(
            {
                "check": "membership",
                "kernel": [j, ell],
                "passed": res.verdict == "member",
                "verdict": res.verdict,
                "ladder": [x.to_json() for x in res.ladder],
            }
        )
    # (ii) kernels of H(q) decompose in the r-geometry
    for j, ell in zeros.index():
        v1 = kernel_rational_form(q, KernelSpec(1, zeros.zeros[j][0], ell)).value
        try:
            dec = decompose(q, r, v1, M)
            err = dec.diagnostics["reconstruction_error"]
            ok = err < RECON_TOL
            rep.items.append({"check": "decompose", "kernel": [j, ell], "passed": ok, "reconstruction_error": err})
        except Exception as exc:  # any failure marks the item
            rep.items.append({"check": "decompose", "kernel": [j, ell], "passed": False, "error": str(exc)})
    # (iii) |a_r| / |a| bounded above and below on the circle
    lo, hi = mate_modulus_ratio_bounds(q, r)
    rep.items.append(
        {"check": "ratio-bounds", "passed": bool(np.isfinite(hi) and lo > 0), "lo": lo, "hi": hi}
    )
    return rep
