import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import ball_corpus, disk_points
from debranges.errors import KernelUndefinedError, NotAnalyticError
from debranges.kernel import (
    KernelSpec,
    Method,
    boundary_kernels,
    gram_matrix,
    kernel_eval,
    kernel_rational_form,
    kernel_z_derivative_at_boundary,
    kernel_z_derivatives,
)
from debranges.mate import mate_data
from debranges.poly import Polynomial, RationalFunction


def brute_kernel(q, r, lam, ell, z, h=1e-3):
    """d^ell/d conj(lam)^ell of (1 - conj(q(lam)^r) q(z)^r)/(1 - conj(lam) z) by
    a central difference in w = conj(lam), at interior lam."""
    from debranges.power import PowerFunction

    F = PowerFunction(q, r)

    def k(w):
        return (1 - np.conj(F(np.conj(w))) * F(z)) / (1 - w * z)

    w0 = np.conj(lam)
    # Cauchy integral on a small circle around w0 (k is analytic in w)
    n = 64
    t = np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.array([k(w0 + h * s) for s in t])
    return math.factorial(ell) * np.mean(vals * t ** (-ell)) / h**ell


def test_example1_kernel_constant(ex1, rng):
    z = disk_points(rng)
    assert np.max(np.abs(kernel_eval(ex1, KernelSpec(1, 1, 0), z) - 0.5)) < 1e-12


def test_example2_kernels(ex2, rng):
    z = disk_points(rng)
    vi = kernel_rational_form(ex2, KernelSpec(1, 1j, 0)).value
    vmi = kernel_rational_form(ex2, KernelSpec(1, -1j, 0)).value
    assert np.max(np.abs(vi(z) - (z + 1j) / 2j)) < 1e-12
    assert np.max(np.abs(vmi(z) - (z - 1j) / -2j)) < 1e-12


def test_example3_kernel(ex3, rng):
    z = disk_points(rng)
    v = kernel_rational_form(ex3, KernelSpec(1, 1, 0)).value
    assert np.max(np.abs(v(z) - (z + 3) / 4)) < 1e-12


def test_lambda_zero_kernel(ex3, rng):
    z = disk_points(rng)
    expect = 1 - np.conj(ex3(0)) * ex3(z)
    assert np.max(np.abs(kernel_eval(ex3, KernelSpec(1, 0, 0), z) - expect)) < 1e-12


@pytest.mark.parametrize("r", [1, 0.5, 2.5])
@pytest.mark.parametrize("ell", [0, 1, 2])
def test_kernel_eval_matches_derivative_of_kernel(ex4, rng, r, ell):
    lam = 0.4 - 0.3j
    for z in disk_points(rng, 5, 0.8):
        got = kernel_eval(ex4, KernelSpec(r, lam, ell), z)
        assert abs(got - brute_kernel(ex4, r, lam, ell, z)) < 1e-8


def test_ell_too_large_is_rejected(ex1):
    with pytest.raises(KernelUndefinedError, match="ell exceeds"):
        kernel_eval(ex1, KernelSpec(1, 1, 1), 0.2)


def test_boundary_point_not_a_zero_is_rejected(ex1):
    with pytest.raises((KernelUndefinedError, NotAnalyticError)):
        kernel_rational_form(ex1, KernelSpec(1, -1, 0))


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3", "ex4"])
def test_rational_form_matches_eval(name, request, rng):
    q = request.getfixturevalue(name)
    z = disk_points(rng)
    for n in (1, 2, 3):
        for spec in boundary_kernels(q, n):
            cf = kernel_rational_form(q, spec)
            assert np.max(np.abs(cf(z) - kernel_eval(q, spec, z))) < 1e-9
            # no pole left on the closed disk
            assert all(abs(p) > 1 + 1e-9 for p in np.roots(cf.value.den.coeffs[::-1] if len(cf.value.den.coeffs) > 1 else [1]))


def test_boundary_derivatives_examples(ex1, ex2):
    assert abs(kernel_z_derivative_at_boundary(ex1, KernelSpec(1, 1, 0), 1, 1)) < 1e-12
    spec = KernelSpec(1, 1j, 0)
    for method in Method:
        assert abs(kernel_z_derivative_at_boundary(ex2, spec, -1j, 0, method)) < 1e-7
        assert abs(kernel_z_derivative_at_boundary(ex2, spec, 1j, 0, method) - 1) < 1e-7


@pytest.mark.parametrize("r", [1, 2, 0.5, 1.5])
def test_taylor_matches_radial_and_rational(ex2, ex4, r):
    for q in (ex2, ex4):
        _, zeros, _ = mate_data(q)
        for spec in boundary_kernels(q, r):
            for j, lp in zeros.index():
                zp = zeros.zeros[j][0]
                t = kernel_z_derivative_at_boundary(q, spec, zp, lp, Method.TAYLOR)
                if float(r).is_integer():
                    assert abs(t - kernel_z_derivative_at_boundary(q, spec, zp, lp, Method.RATIONAL)) < 1e-9
                if zeros.zeros[j][1] == 1:
                    assert abs(t - kernel_z_derivative_at_boundary(q, spec, zp, lp, Method.RADIAL)) < 1e-6


def test_z_derivatives_match_finite_differences(ex4):
    spec = KernelSpec(0.5, -1, 1)
    z0, h = 0.3 + 0.2j, 1e-4
    d = kernel_z_derivatives(ex4, spec, z0, 2)
    f = lambda z: kernel_eval(ex4, spec, z)
    assert abs(d[0] - f(z0)) < 1e-12
    assert abs(d[1] - (f(z0 + h) - f(z0 - h)) / (2 * h)) < 1e-6
    assert abs(d[2] - (f(z0 + h) - 2 * f(z0) + f(z0 - h)) / h**2) < 1e-4


def test_gram_examples(ex1, ex2):
    assert np.allclose(gram_matrix(ex1, 1).entries, [[0.5]], atol=1e-12)
    assert np.allclose(gram_matrix(ex2, 1).entries, np.eye(2), atol=1e-9)


@pytest.mark.parametrize("r", [0.5, 1, 2, 3, 1.7])
def test_gram_hermitian_positive_definite(r):
    for q in ball_corpus()[:4]:
        G = gram_matrix(q, r)
        assert G.asymmetry() < 1e-6
        assert G.min_eigenvalue() > 0


@given(st.floats(0.2, 4.0))
def test_gram_hermitian_any_power(r):
    from debranges.regression import EXAMPLE4

    G = gram_matrix(EXAMPLE4, r)
    assert G.asymmetry() < 1e-6 and G.min_eigenvalue() > 0


def test_reproducing_identity(ex4, rng):
    """<f, v_b> = f^(ell)(zeta) for f = sum c v: sum_b' c_b' G[a, b'] equals the
    radial limit of the derivative of f."""
    from debranges.limits import radial_limit

    r = 0.5
    G = gram_matrix(ex4, r)
    _, zeros, _ = mate_data(ex4)
    specs = boundary_kernels(ex4, r)
    c = rng.normal(size=len(specs)) + 1j * rng.normal(size=len(specs))
    f = lambda z: sum(cb * kernel_eval(ex4, s, z) for cb, s in zip(c, specs))
    for a, (j, ell) in enumerate(zeros.index()):
        derivs = lambda z: sum(cb * kernel_z_derivatives(ex4, s, z, ell)[ell] for cb, s in zip(c, specs))
        # shorter ladder: the Leibniz form cancels to order ell+1 near the zero
        lim = radial_limit(derivs, zeros.zeros[j][0], steps=range(3, 10), strict=False)
        assert abs(lim.value - G.entries[a] @ c) < 1e-6
    assert np.isfinite(f(0.5))


def test_kernels_bounded_along_radius(ex3):
    z0 = 0.3 + 0.1j
    vals = [abs(kernel_eval(ex3, KernelSpec(0.5, 1 - 2.0**-s, 0), z0)) for s in range(2, 14)]
    assert max(vals) < 10 * vals[-1]


def test_spec_json_roundtrip():
    s = KernelSpec(1.5, 1j, 1)
    assert KernelSpec.from_json(s.to_json()) == s
