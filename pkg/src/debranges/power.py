"""Branch-fixed powers q**r of a rational outer function and their derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DiskError, SingularLogError
from .poly import TAU_DISK, RationalFunction, poly_roots

_SNAP = 1e-6


@dataclass(frozen=True)
class PowerFunction:
    """q**r on the closed disk with the logarithm fixed factor by factor.

    With q = C prod(z - alpha_k) / prod(z - beta_k) the logarithm is taken as

        L(z) = Log q(0) + sum Log(1 - z/alpha_k) - sum Log(1 - z/beta_k)

    using principal logarithms. Every zero and pole satisfies |.| >= 1, so each
    term is analytic on the open disk, and L(0) = Log q(0).
    """

    base: RationalFunction
    r: float
    zeros: tuple[tuple[complex, int], ...] = field(init=False, repr=False)
    poles: tuple[tuple[complex, int], ...] = field(init=False, repr=False)
    log0: complex = field(init=False, repr=False)

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("power r must be positive")
        q = self.base
        if q.num.is_zero:
            raise DiskError("the zero function is not outer")
        zeros = []
        if q.num.degree > 0:
            for a, m in poly_roots(q.num):
                if abs(a) < 1 - TAU_DISK:
                    raise DiskError(f"base has a zero at {a} inside the disk (not outer)")
                if abs(abs(a) - 1) <= _SNAP:
                    a = a / abs(a)
                zeros.append((complex(a), m))
        poles = [(complex(b), m) for b, m in poly_roots(q.den)] if q.den.degree > 0 else []
        object.__setattr__(self, "zeros", tuple(zeros))
        object.__setattr__(self, "poles", tuple(poles))
        object.__setattr__(self, "log0", complex(np.log(complex(q(0.0)))))

    @cached_property
    def is_integer_power(self) -> bool:
        return float(self.r).is_integer()

    def _check(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1 + 1e-12):
            raise ValueError("power_eval needs |z| <= 1")
        for a, _ in self.zeros:
            if abs(abs(a) - 1) < 1e-15 and np.any(np.abs(z - a) < 1e-14):
                raise SingularLogError(f"logarithm singular at boundary zero {a}")
        return z

    def log(self, z):
        z = self._check(z)
        out = np.full(z.shape, self.log0, dtype=complex)
        for a, m in self.zeros:
            out += m * np.log(1 - z / a)
        for b, m in self.poles:
            out -= m * np.log(1 - z / b)
        return out[()] if out.ndim == 0 else out

    def __call__(self, z):
        return np.exp(self.r * self.log(z))

    def log_derivatives(self, z: complex, K: int) -> np.ndarray:
        """[L'(z), L''(z), ..., L^{(K)}(z)]."""
        out = np.zeros(K, dtype=complex)
        for k in range(1, K + 1):
            acc = 0j
            for a, m in self.zeros:
                acc += m / (a - z) ** k
            for b, m in self.poles:
                acc -= m / (b - z) ** k
            out[k - 1] = -math.factorial(k - 1) * acc
        return out

    def derivatives(self, z: complex, K: int) -> np.ndarray:
        """[F(z), F'(z), ..., F^{(K)}(z)] for F = q**r.

        Uses F' = r L' F and the Leibniz rule:
        F^{(n+1)} = sum_k C(n, k) r L^{(k+1)} F^{(n-k)}.
        """
        z = complex(z)
        out = np.zeros(K + 1, dtype=complex)
        out[0] = self(z)
        if K == 0:
            return out
        dl = self.r * self.log_derivatives(z, K)
        for n in range(K):
            acc = 0j
            for k in range(n + 1):
                acc += math.comb(n, k) * dl[k] * out[n - k]
            out[n + 1] = acc
        return out

    def taylor(self, z: complex, K: int) -> np.ndarray:
        """F^{(n)}(z)/n!, n = 0..K, without factorials.

        With L(z + w) = L(z) + sum_j l_j w^j, l_j = -(1/j) (sum over zeros of
        m (a - z)^-j minus the same over poles), F' = r L' F gives
        (n + 1) t_{n+1} = r sum_k (k + 1) l_{k+1} t_{n-k}.
        """
        z = complex(z)
        j = np.arange(1, K + 1)
        lj = np.zeros(K, dtype=complex)
        for a, m in self.zeros:
            lj += m / (a - z) ** j
        for b, m in self.poles:
            lj -= m / (b - z) ** j
        lj = -lj / j
        dl = self.r * j * lj  # (k+1) l_{k+1} r, k = 0..K-1
        t = np.zeros(K + 1, dtype=complex)
        t[0] = self(z)
        for n in range(K):
            t[n + 1] = np.dot(dl[: n + 1], t[n::-1]) / (n + 1)
        return t

    def to_json(self) -> dict:
        return {"q": self.base.to_json(), "r": self.r}


def power_eval(F: PowerFunction, z):
    return F(z)


def power_derivatives(F: PowerFunction, z: complex, K: int) -> np.ndarray:
    return F.derivatives(z, K)
