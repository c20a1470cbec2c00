"""Complex polynomials, rational functions and Hermitian trigonometric polynomials.

All three types are immutable values. Coefficients are stored in ascending
order (index k is the coefficient of z**k) as tuples of Python complex numbers
so that instances hash and compare by value; the ``c`` property exposes them as
a numpy array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    BallError,
    DiskError,
    NotDivisibleError,
    RootFindingError,
    TrigPolynomialError,
)

TAU_DISK = 1e-9
EPS_NEG = 1e-9
CLUSTER_TOL = 1e-6
REM_TOL = 1e-10
DEFECT_GRID = 4096


def _strip(values) -> tuple[complex, ...]:
    arr = np.atleast_1d(np.asarray(values, dtype=complex))
    if arr.ndim != 1:
        raise ValueError("coefficients must be one-dimensional")
    n = arr.size
    while n and arr[n - 1] == 0:
        n -= 1
    return tuple(complex(x) for x in arr[:n])


@dataclass(frozen=True, init=False)
class Polynomial:
    """Polynomial with complex coefficients, ``coeffs[k]`` multiplying ``z**k``.

    The empty coefficient tuple is the zero polynomial, whose degree is
    undefined (``degree`` raises).
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Iterable[complex] = ()):
        object.__setattr__(self, "coeffs", _strip(list(coeffs)))

    @classmethod
    def from_roots(cls, roots: Iterable[tuple[complex, int]] | Iterable[complex], lead: complex = 1.0):
        out = np.array([lead], dtype=complex)
        for item in roots:
            root, mult = item if isinstance(item, tuple) else (item, 1)
            for _ in range(mult):
                out = np.convolve(out, [-root, 1.0])
        return cls(out)

    @classmethod
    def constant(cls, value: complex):
        return cls([value])

    @cached_property
    def c(self) -> np.ndarray:
        arr = np.array(self.coeffs, dtype=complex)
        arr.setflags(write=False)
        return arr

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if self.is_zero:
            raise ValueError("degree of the zero polynomial is undefined")
        return len(self.coeffs) - 1

    @property
    def lead(self) -> complex:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, z):
        if self.is_zero:
            return np.zeros_like(np.asarray(z, dtype=complex))[()]
        return np.polyval(self.c[::-1], z)

    def derivative(self, k: int = 1) -> "Polynomial":
        if self.is_zero or k == 0:
            return self
        if k > self.degree:
            return Polynomial()
        return Polynomial(npoly.polyder(self.c, k))

    def taylor(self, z0: complex, order: int) -> np.ndarray:
        """Taylor coefficients ``p^{(k)}(z0)/k!`` for k = 0..order."""
        out = np.zeros(order + 1, dtype=complex)
        d = self
        for k in range(order + 1):
            if d.is_zero:
                break
            out[k] = d(z0) / math.factorial(k)
            d = d.derivative()
        return out

    def trim(self, rel_tol: float = 1e-14) -> "Polynomial":
        if self.is_zero:
            return self
        c = self.c
        scale = np.max(np.abs(c))
        n = c.size
        while n and abs(c[n - 1]) <= rel_tol * scale:
            n -= 1
        return Polynomial(c[:n])

    def conj(self) -> "Polynomial":
        """Polynomial with conjugated coefficients."""
        return Polynomial(np.conj(self.c))

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.c))) if self.coeffs else 0.0

    def __add__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polyadd(self.c if self.coeffs else [0], other.c if other.coeffs else [0]))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self.c)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return Polynomial()
        return Polynomial(np.convolve(self.c, other.c))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Polynomial(self.c / complex(scalar))

    def __pow__(self, n: int):
        if n < 0 or int(n) != n:
            raise ValueError("polynomial powers must be nonnegative integers")
        out = Polynomial([1.0])
        for _ in range(int(n)):
            out = out * self
        return out

    def to_json(self) -> dict:
        return {"coeffs": [[c.real, c.imag] for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        return cls([complex(re, im) for re, im in data["coeffs"]])

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if np.ndim(x) == 0:
        return Polynomial([x])
    return Polynomial(x)


# --------------------------------------------------------------------------
# roots


def _components(points: np.ndarray, radius: np.ndarray) -> list[list[int]]:
    """Single-linkage groups: i and j linked when |p_i - p_j| <= min radius."""
    n = points.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= min(radius[i], radius[j]):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _greedy(points: Sequence[complex], tol: float) -> list[list[complex]]:
    clusters: list[list[complex]] = []
    for r in points:
        for cl in clusters:
            centre = np.mean(cl)
            if abs(r - centre) <= tol * max(1.0, abs(centre)):
                cl.append(r)
                break
        else:
            clusters.append([r])
    return clusters


def _polish(p: Polynomial, root: complex, mult: int, iters: int = 4) -> complex:
    # Newton on p^(mult-1), which has a simple root at an exact mult-fold root.
    d0 = p.derivative(mult - 1)
    d1 = d0.derivative()
    best, best_val = root, abs(d0(root))
    x = root
    for _ in range(iters):
        dx = d1(x)
        if dx == 0:
            break
        x = x - d0(x) / dx
        val = abs(d0(x))
        if val < best_val and abs(x - root) <= 1e-6 * max(1.0, abs(root)):
            best, best_val = x, val
    return complex(best)


def _multiple_root_spread(c: np.ndarray, r: complex, m: int) -> float:
    """Expected rounding split of an m-fold root r of the polynomial with coefficients c.

    Perturbing the coefficients by eps relative moves an m-fold root by about
    (eps * sum |c_k| |r|^k / |p^(m)(r) / m!|)^(1/m).
    """
    p = Polynomial(c)
    lead = abs(p.taylor(r, m)[m])
    if lead == 0:
        return 0.0
    size = float(np.sum(np.abs(c) * abs(r) ** np.arange(c.size)))
    return (2.2e-16 * size / lead) ** (1.0 / m)


def poly_roots(p: Polynomial, cluster_tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Roots of ``p`` with multiplicities.

    Companion-matrix eigenvalues are grouped into clusters; each cluster mean
    is Newton-polished on the derivative that has a simple root there.
    """
    if p.is_zero:
        raise RootFindingError("no roots of zero polynomial")
    if p.degree == 0:
        return []
    c = p.c
    n_zero = 0
    while c[n_zero] == 0:
        n_zero += 1
    out: list[tuple[complex, int]] = [(0j, n_zero)] if n_zero else []
    rest = c[n_zero:]
    if rest.size <= 1:
        return out
    try:
        raw = np.roots(rest[::-1])
    except np.linalg.LinAlgError as exc:
        raise RootFindingError(f"eigenvalue solver failed: {exc}") from exc
    if raw.size != rest.size - 1 or not np.all(np.isfinite(raw)):
        raise RootFindingError(f"eigenvalue solver returned {raw.size} roots for degree {rest.size - 1}")

    scale = np.maximum(1.0, np.abs(raw))
    clusters: list[list[complex]] = []
    for group in _components(raw, 5e-2 * scale):
        pts = raw[group]
        if len(pts) == 1:
            clusters.append(list(pts))
            continue
        centre = pts.mean()
        spread = np.max(np.abs(pts - centre))
        allowed = max(cluster_tol * max(1.0, abs(centre)), 10.0 * _multiple_root_spread(rest, centre, len(pts)))
        if spread <= allowed:
            clusters.append(list(pts))
        else:
            clusters.extend(_greedy(pts, cluster_tol))

    rest_poly = Polynomial(rest)
    for cl in clusters:
        m = len(cl)
        root = complex(np.mean(cl))
        out.append((_polish(rest_poly, root, m), m))
    out.sort(key=lambda rm: (round(rm[0].real, 9), round(rm[0].imag, 9)))
    return out


def poly_divide_exact(p: Polynomial, d: Polynomial, rem_tol: float = REM_TOL, scale: float = 0.0) -> Polynomial:
    """Quotient ``p / d``, raising when the remainder is not negligible.

    The remainder is measured against max(|p|, scale); pass ``scale`` when p
    is a difference of larger terms that may have cancelled.
    """
    if d.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero:
        return Polynomial()
    if d.degree > p.degree:
        quo, rem = np.zeros(1, dtype=complex), p.c
    else:
        # least squares on the convolution matrix is stable whichever end of
        # d dominates, unlike synthetic division from the top
        n = p.degree - d.degree + 1
        conv = np.zeros((p.degree + 1, n), dtype=complex)
        for j in range(n):
            conv[j : j + d.degree + 1, j] = d.c
        quo = np.linalg.lstsq(conv, p.c, rcond=None)[0]
        rem = p.c - conv @ quo
    res = float(np.max(np.abs(rem))) if np.size(rem) else 0.0
    if res > rem_tol * max(p.max_norm(), scale):
        raise NotDivisibleError(res)
    return Polynomial(quo)


# --------------------------------------------------------------------------
# rational functions


@dataclass(frozen=True, init=False)
class RationalFunction:
    """Quotient ``num/den`` with ``den`` zero-free on the closed unit disk.

    The representation is normalized so that ``den(0) == 1`` and common roots
    of numerator and denominator are cancelled.
    """

    num: Polynomial
    den: Polynomial

    def __init__(self, num, den=None, *, reduce: bool = True, tau_disk: float = TAU_DISK):
        num = _as_poly(num)
        den = Polynomial([1.0]) if den is None else _as_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        d0 = den.coeffs[0]
        if d0 == 0:
            raise DiskError("denominator vanishes at 0")
        num, den = num / d0, den / d0
        if den.degree > 0:
            den_roots = poly_roots(den)
            bad = [r for r, _ in den_roots if abs(r) <= 1 + tau_disk]
            if bad:
                raise DiskError(f"denominator vanishes in the closed unit disk at {bad}")
            if reduce and not num.is_zero and num.degree > 0:
                num, den = _cancel_common(num, den, den_roots)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def polynomial(cls, coeffs) -> "RationalFunction":
        return cls(Polynomial(coeffs))

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def taylor(self, z0: complex, order: int) -> np.ndarray:
        """Taylor coefficients ``f^{(k)}(z0)/k!``, k = 0..order, by series division."""
        n = self.num.taylor(z0, order)
        d = self.den.taylor(z0, order)
        out = np.zeros(order + 1, dtype=complex)
        for k in range(order + 1):
            acc = n[k]
            for i in range(1, k + 1):
                acc -= d[i] * out[k - i]
            out[k] = acc / d[0]
        return out

    def derivatives(self, z0: complex, order: int) -> np.ndarray:
        """``[f(z0), f'(z0), ..., f^{(order)}(z0)]``."""
        t = self.taylor(z0, order)
        return t * np.array([math.factorial(k) for k in range(order + 1)])

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d, reduce=False)

    def __mul__(self, other):
        other = _as_rational(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __add__(self, other):
        other = _as_rational(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-_as_rational(other))

    def __rsub__(self, other):
        return _as_rational(other) - self

    def __truediv__(self, scalar):
        return RationalFunction(self.num / complex(scalar), self.den, reduce=False)

    def __pow__(self, n: int):
        return RationalFunction(self.num**n, self.den**n, reduce=False)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        if "num" in data:
            den = Polynomial.from_json(data["den"]) if "den" in data else None
            return cls(Polynomial.from_json(data["num"]), den)
        return cls(Polynomial.from_json(data))

    def __repr__(self) -> str:
        return f"RationalFunction(num={list(self.num.coeffs)!r}, den={list(self.den.coeffs)!r})"


def _as_rational(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x)
    return RationalFunction(Polynomial([x]))


def _cancel_common(num: Polynomial, den: Polynomial, den_roots, tol: float = CLUSTER_TOL):
    num_roots = dict(poly_roots(num))
    common: list[tuple[complex, int]] = []
    for r, m in den_roots:
        for s in list(num_roots):
            if abs(r - s) <= tol * max(1.0, abs(r)):
                k = min(m, num_roots[s])
                common.append((0.5 * (r + s), k))
                num_roots[s] -= k
                if not num_roots[s]:
                    del num_roots[s]
                break
    if not common:
        return num, den
    factor = Polynomial.from_roots(common)
    num = poly_divide_exact(num, factor, rem_tol=1e-6)
    den = poly_divide_exact(den, factor, rem_tol=1e-6)
    d0 = den.coeffs[0]
    return num / d0, den / d0


# --------------------------------------------------------------------------
# trigonometric polynomials


@dataclass(frozen=True, init=False)
class TrigPolynomial:
    """Real-valued trigonometric polynomial ``sum_{k=-n}^{n} c_k e^{ik theta}``.

    ``coeffs`` holds c_{-n}, ..., c_n. Hermitian symmetry is checked at
    construction and then enforced exactly.
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Sequence[complex], herm_tol: float = 1e-9):
        arr = np.asarray(coeffs, dtype=complex)
        if arr.ndim != 1 or arr.size % 2 == 0:
            raise TrigPolynomialError("need an odd number of coefficients indexed -n..n")
        scale = max(1.0, float(np.max(np.abs(arr))))
        asym = float(np.max(np.abs(arr - np.conj(arr[::-1]))))
        if asym > herm_tol * scale:
            raise TrigPolynomialError(f"coefficients are not Hermitian symmetric (defect {asym:.3e})")
        arr = 0.5 * (arr + np.conj(arr[::-1]))
        object.__setattr__(self, "coeffs", tuple(complex(x) for x in arr))

    @classmethod
    def from_positive(cls, c_nonneg: Sequence[complex]) -> "TrigPolynomial":
        """Build from c_0..c_n, filling negative indices by conjugation."""
        c = np.asarray(c_nonneg, dtype=complex)
        return cls(np.concatenate([np.conj(c[:0:-1]), c]))

    @classmethod
    def modulus_squared(cls, p: Polynomial) -> "TrigPolynomial":
        """The trigonometric polynomial |p(e^{i theta})|^2."""
        if p.is_zero:
            return cls([0.0])
        return cls(np.correlate(p.c, p.c, "full"))

    @cached_property
    def c(self) -> np.ndarray:
        arr = np.array(self.coeffs, dtype=complex)
        arr.setflags(write=False)
        return arr

    @property
    def n(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def coeff(self, k: int) -> complex:
        if abs(k) > self.n:
            return 0j
        return self.coeffs[k + self.n]

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        k = np.arange(-self.n, self.n + 1)
        vals = np.exp(1j * np.multiply.outer(theta, k)) @ self.c
        return vals.real

    def grid_values(self, points: int = DEFECT_GRID) -> np.ndarray:
        return self(2 * np.pi * np.arange(points) / points)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        n = max(self.n, other.n)
        a = np.pad(self.c, n - self.n)
        b = np.pad(other.c, n - other.n)
        return TrigPolynomial(a - b)

    def shrink(self, rel_tol: float = 1e-12) -> "TrigPolynomial":
        """Drop outer coefficient pairs that vanish numerically."""
        c = self.c
        scale = float(np.max(np.abs(c))) if c.size else 0.0
        n = self.n
        while n > 0 and abs(c[self.n + n]) <= rel_tol * scale:
            n -= 1
        return TrigPolynomial(c[self.n - n : self.n + n + 1])

    def is_zero(self, rel_tol: float = 1e-12, ref: float = 1.0) -> bool:
        return float(np.max(np.abs(self.c))) <= rel_tol * ref

    def to_json(self) -> dict:
        return {"n": self.n, "c": [[c.real, c.imag] for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "TrigPolynomial":
        c = [complex(re, im) for re, im in data["c"]]
        if "n" in data and len(c) != 2 * int(data["n"]) + 1:
            raise TrigPolynomialError("length of c does not match n")
        return cls(c)


def boundary_defect(q: RationalFunction, eps_neg: float = EPS_NEG, grid: int = DEFECT_GRID) -> TrigPolynomial:
    """w = |p2|^2 - |p1|^2 on the circle, for q = p1/p2 with p2(0) = 1."""
    w = TrigPolynomial.modulus_squared(q.den) - TrigPolynomial.modulus_squared(q.num)
    vals = w.grid_values(grid)
    scale = max(1.0, float(np.max(np.abs(w.c))))
    if vals.min() < -eps_neg * scale:
        raise BallError(f"q not in the closed unit ball (min defect {vals.min():.3e})")
    return w
