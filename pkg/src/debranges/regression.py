"""Worked examples with closed forms, run as a PASS/FAIL regression suite."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .decomp import decompose, verify_orthogonality
from .factor import fejer_riesz
from .kernel import KernelSpec, gram_matrix, kernel_eval, kernel_rational_form
from .mate import corona_infimum, mate_data, pythagorean_mate
from .poly import Polynomial, RationalFunction, boundary_defect, poly_divide_exact, poly_roots
from .power import PowerFunction

SQRT2 = math.sqrt(2.0)

EXAMPLE1 = RationalFunction(Polynomial([0.5, 0.5]))  # (1+z)/2
EXAMPLE2 = RationalFunction(Polynomial([0.5, 0, -0.5]))  # (1-z)(1+z)/2
EXAMPLE3 = RationalFunction(Polynomial([0.25, 0.5, 0.25]))  # (1+z)^2/4
EXAMPLE4_C = 1.0 / (4 * (1 + SQRT2))
EXAMPLE4 = RationalFunction(Polynomial([-1, 1]) * Polynomial([3 + 2 * SQRT2, 1]) * EXAMPLE4_C)

EXAMPLES = {"example1": EXAMPLE1, "example2": EXAMPLE2, "example3": EXAMPLE3, "example4": EXAMPLE4}


@dataclass(frozen=True)
class Tolerances:
    exact: float = 1e-9
    grid: float = 1e-9
    limit: float = 1e-6


@dataclass
class CheckResult:
    name: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.error) and self.error <= self.tol)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} (err {self.error:.2e}, tol {self.tol:.0e})"


def _sample_points(n=100, radius=0.95, seed=7):
    rng = np.random.default_rng(seed)
    return radius * np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def _coeff_err(p: Polynomial, expected) -> float:
    e = Polynomial(expected)
    n = max(len(p.coeffs), len(e.coeffs), 1)
    a = np.zeros(n, complex)
    b = np.zeros(n, complex)
    a[: len(p.coeffs)] = p.coeffs
    b[: len(e.coeffs)] = e.coeffs
    return float(np.max(np.abs(a - b)))


def _roots_err(found, expected) -> float:
    if sorted(m for _, m in found) != sorted(m for _, m in expected):
        return math.inf
    err = 0.0
    for r, m in expected:
        cands = [abs(x - r) for x, k in found if k == m]
        err = max(err, min(cands))
    return err


def _fn_err(f, g, z) -> float:
    return float(np.max(np.abs(np.asarray(f(z)) - np.asarray(g(z)))))


def _trig_err(w, expected: dict) -> float:
    ks = set(range(-w.n, w.n + 1)) | set(expected)
    return max(abs(w.coeff(k) - expected.get(k, 0)) for k in ks)


def _zero_set_err(zs, expected) -> float:
    return _roots_err(list(zs.zeros), expected)


def _checks(tol: Tolerances) -> dict[str, list[tuple[str, Callable[[], float], float]]]:
    z = _sample_points()
    E1, E2, E3, E4 = EXAMPLE1, EXAMPLE2, EXAMPLE3, EXAMPLE4

    def dec(q, f, c, h):
        def run():
            d = decompose(q, 1, f)
            return max(float(np.max(np.abs(d.c - np.asarray(c)))), _coeff_err(d.h_rational.num, h))

        return run

    def gram_identity():
        return float(np.max(np.abs(gram_matrix(E2, 1).entries - np.eye(2))))

    def a2_grid():
        a = pythagorean_mate(E2).a
        t = np.exp(2j * np.pi * np.arange(4096) / 4096)
        return float(np.max(np.abs(np.abs(a(t)) ** 2 + np.abs(E2(t)) ** 2 - 1)))

    def ortho(q, g, lam, ell):
        return lambda: abs(verify_orthogonality(q, 1, g, KernelSpec(1, lam, ell)).value)

    def corona1():
        est = corona_infimum(mate_data(E1)[0].a, E1, depth=8)
        return max(0.0, 0.5 - est.lower_bound)

    ex3_p = Polynomial([1, -1]) * Polynomial([3 + 2 * SQRT2, 1]) / (4 * (1 + SQRT2))
    return {
        "example1": [
            ("mate (1-z)/2", lambda: _coeff_err(pythagorean_mate(E1).a.num, [0.5, -0.5]), tol.exact),
            ("boundary zeros {(1,1)}", lambda: _zero_set_err(mate_data(E1)[1], [(1, 1)]), tol.exact),
            ("kernel v0 at 1 is 1/2", lambda: _fn_err(lambda x: kernel_eval(E1, KernelSpec(1, 1, 0), x), lambda x: 0.5 + 0 * x, z), tol.exact),
            ("divide (1-z)/2 by 1-z", lambda: _coeff_err(poly_divide_exact(Polynomial([0.5, -0.5]), Polynomial([1, -1])), [0.5]), tol.exact),
            ("decompose 1: c=2, h=0", dec(E1, Polynomial([1]), [2], []), tol.exact),
            ("decompose z: c=2, h=1", dec(E1, Polynomial([0, 1]), [2], [1]), tol.exact),
            ("decompose (z-1)z: c=0, h=z", dec(E1, Polynomial([0, -1, 1]), [0], [0, 1]), tol.exact),
            ("orthogonality a*1 at 1", ortho(E1, Polynomial([1]), 1, 0), tol.limit),
            ("corona infimum >= 1/2", corona1, tol.grid),
        ],
        "example2": [
            ("defect coefficients", lambda: _trig_err(boundary_defect(E2), {-2: 0.25, 0: 0.5, 2: 0.25}), tol.exact),
            ("roots of s: +-i double", lambda: _roots_err(poly_roots(Polynomial(boundary_defect(E2).c)), [(1j, 2), (-1j, 2)]), tol.exact),
            ("mate (z-i)(z+i)/2", lambda: _coeff_err(pythagorean_mate(E2).a.num, [0.5, 0, 0.5]), tol.exact),
            ("|a|^2+|q|^2=1 on 4096 points", a2_grid, tol.grid),
            ("boundary zeros {(i,1),(-i,1)}", lambda: _zero_set_err(mate_data(E2)[1], [(1j, 1), (-1j, 1)]), tol.exact),
            ("kernel at i is (z+i)/(2i)", lambda: _fn_err(kernel_rational_form(E2, KernelSpec(1, 1j, 0)).value, lambda x: (x + 1j) / 2j, z), tol.exact),
            ("kernel at -i is (z-i)/(-2i)", lambda: _fn_err(kernel_rational_form(E2, KernelSpec(1, -1j, 0)).value, lambda x: (x - 1j) / -2j, z), tol.exact),
            ("Gram = identity", gram_identity, tol.limit),
            ("orthogonality a*g at i", ortho(E2, Polynomial([1, -2, 0.5j, 3]), 1j, 0), tol.limit),
        ],
        "example3": [
            ("defect coefficients", lambda: _trig_err(boundary_defect(E3), {-2: -1 / 16, -1: -0.25, 0: 0.625, 1: -0.25, 2: -1 / 16}), tol.exact),
            ("roots of s: 1 double, -3+-2sqrt2", lambda: _roots_err(poly_roots(Polynomial(boundary_defect(E3).c)), [(1, 2), (-3 - 2 * SQRT2, 1), (-3 + 2 * SQRT2, 1)]), tol.exact),
            ("outer factor (1-z)(z+3+2sqrt2)/(4(1+sqrt2))", lambda: _coeff_err(fejer_riesz(boundary_defect(E3)), ex3_p.coeffs), tol.exact),
            ("kernel (z+3)/4", lambda: _fn_err(kernel_rational_form(E3, KernelSpec(1, 1, 0)).value, lambda x: (x + 3) / 4, z), tol.exact),
            ("1 in (z-1)H2 + C(z+3): c=1, h=-1/4", dec(E3, Polynomial([1]), [1], [-0.25]), tol.limit),
            ("z+3 in (z-1)H2 + C: c=8, h=1", dec(E1, Polynomial([3, 1]), [8], [1]), tol.limit),
        ],
        "example4": [
            ("q(-1) = -1", lambda: abs(PowerFunction(E4, 1)(-1.0) + 1), tol.exact),
            ("q'(-1) = 1 - sqrt2/2", lambda: abs(PowerFunction(E4, 1).derivatives(-1.0, 1)[1] - (1 - SQRT2 / 2)), tol.exact),
            ("mate zeros {(-1,2)}", lambda: _zero_set_err(mate_data(E4)[1], [(-1, 2)]), tol.exact),
            ("mate (1+z)^2/4", lambda: _coeff_err(pythagorean_mate(E4).a.num, [0.25, 0.5, 0.25]), tol.exact),
            ("kernel v0 at -1 is (1+q)/(1+z)", lambda: _fn_err(lambda x: kernel_eval(E4, KernelSpec(1, -1, 0), x), lambda x: (1 + E4(x)) / (1 + x), z), tol.exact),
            ("kernel v1 at -1 is ((2-sqrt2)z+sqrt2)/8", lambda: _fn_err(lambda x: kernel_eval(E4, KernelSpec(1, -1, 1), x), lambda x: ((2 - SQRT2) * x + SQRT2) / 8, z), tol.exact),
            ("orthogonality a*z, ell=0", ortho(E4, Polynomial([0, 1]), -1, 0), tol.limit),
            ("orthogonality a*z, ell=1", ortho(E4, Polynomial([0, 1]), -1, 1), tol.limit),
        ],
    }


def run_suite(tol: Tolerances = Tolerances(), only: str | None = None) -> list[CheckResult]:
    out = []
    for group, items in _checks(tol).items():
        if only and only not in group:
            continue
        for name, fn, t in items:
            try:
                err = float(fn())
            except Exception:  # a crash is a failure of that item
                err = math.inf
            out.append(CheckResult(f"{group}: {name}", err, t))
    return out
