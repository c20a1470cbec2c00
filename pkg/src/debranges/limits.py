"""Radial boundary limits by Richardson extrapolation on dyadic radii."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import LimitError

DEFAULT_STEPS = tuple(range(4, 13))
LIMIT_TOL = 1e-8


@dataclass(frozen=True)
class LimitResult:
    value: complex
    error: float
    samples: tuple

    def to_json(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "error": self.error}


def richardson(samples, ratio: float = 2.0) -> tuple[complex, float]:
    """Extrapolate x(h) -> x(0) for samples at h, h/ratio, h/ratio^2, ...

    Returns the diagonal entry whose change from the previous diagonal entry
    is smallest, together with that change as the error estimate.
    """
    x = np.asarray(samples, dtype=complex)
    n = len(x)
    table = [x.copy()]
    for k in range(1, n):
        prev = table[-1]
        f = ratio**k - 1.0
        table.append(prev[1:] + (prev[1:] - prev[:-1]) / f)
    diag = np.array([table[k][-1] for k in range(n)])
    if n == 1:
        return complex(diag[0]), float("inf")
    diffs = np.abs(np.diff(diag))
    i = int(np.argmin(diffs))
    return complex(diag[i + 1]), float(diffs[i])


def radial_limit(
    fn: Callable[[complex], complex],
    zeta: complex,
    steps=DEFAULT_STEPS,
    tol: float = LIMIT_TOL,
    strict: bool = True,
) -> LimitResult:
    """Limit of fn(t * zeta) as t -> 1 along t = 1 - 2**-s."""
    xs = tuple(complex(fn((1.0 - 2.0**-s) * zeta)) for s in steps)
    value, err = richardson(xs)
    if strict and not err <= tol * max(1.0, abs(value)):
        raise LimitError(f"limit does not stabilize (last change {err:.3e})")
    return LimitResult(value, err, xs)
