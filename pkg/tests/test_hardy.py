import numpy as np
import pytest
from hypothesis import given, strategies as st

from debranges.errors import NotAnalyticError
from debranges.hardy import (
    HardyVector,
    Symbol,
    analytic_coeffs,
    conj_identity_error,
    evaluation_matrix,
    fourier_vanishing_check,
    membership_solve,
    toeplitz_apply,
    toeplitz_matrix,
)
from debranges.mate import BoundaryZeroSet, mate_data
from debranges.poly import Polynomial, RationalFunction

A1 = RationalFunction(Polynomial([0.5, -0.5]))  # mate of Example 1


def rand_poly(rng, deg):
    return rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)


def test_geometric_series_coeffs():
    h = analytic_coeffs(RationalFunction(Polynomial([1]), Polynomial([1, -0.5])), 40)
    assert np.max(np.abs(h.coeffs - 0.5 ** np.arange(41))) < 1e-12
    assert h.tail is not None and h.tail < 1e-11


def test_polynomial_coeffs():
    h = analytic_coeffs(RationalFunction(Polynomial([0.75, 0.25])), 8)
    assert np.allclose(h.coeffs, [0.75, 0.25] + [0] * 7, atol=1e-15)


def test_closure_coeffs_match_rational():
    f = RationalFunction(Polynomial([1, 2]), Polynomial([1, -0.3j]))
    h = analytic_coeffs(lambda z: f(z), 64)
    assert np.max(np.abs(h.coeffs - f.taylor(0.0, 64))) < 1e-10


def test_closure_not_analytic():
    with pytest.raises(NotAnalyticError, match="not analytic"):
        analytic_coeffs(lambda z: np.conj(z), 32)


def test_toeplitz_examples():
    f = HardyVector([1, 2, 3, 0])
    assert np.allclose(toeplitz_apply(Symbol.from_pairs(3, [1]), f).coeffs, f.coeffs)
    assert np.allclose(toeplitz_apply(Symbol.conj_z_power(1, 3), HardyVector([1, 0, 0, 0])).coeffs, 0)
    out = toeplitz_apply(Symbol.conj_analytic(A1, 4), HardyVector([0, 1, 0, 0, 0]))
    assert np.allclose(out.coeffs, [-0.5, 0.5, 0, 0, 0])


def test_toeplitz_entries_are_symbol_coefficients(rng):
    M = 5
    s = Symbol(rng.normal(size=2 * M + 1) + 1j * rng.normal(size=2 * M + 1))
    T = toeplitz_matrix(s, M)
    for i in range(M + 1):
        for k in range(M + 1):
            assert T[i, k] == s.coeff(i - k)


def test_toeplitz_brute_convolution(rng):
    M = 12
    phi = rng.normal(size=2 * M + 1) + 1j * rng.normal(size=2 * M + 1)
    f = rand_poly(rng, M)
    full = np.convolve(phi, f)  # index of full[n] is n - M
    expect = full[M : 2 * M + 1]
    assert np.allclose(toeplitz_apply(Symbol(phi), HardyVector(f)).coeffs, expect)


@given(st.integers(0, 2**32 - 1))
def test_toeplitz_adjoint(seed):
    rng = np.random.default_rng(seed)
    M = 64
    a = RationalFunction(Polynomial(rand_poly(rng, 3)))
    g = HardyVector(rand_poly(rng, M // 4)).truncate(M)
    h = HardyVector(rand_poly(rng, M // 4)).truncate(M)
    lhs = toeplitz_apply(Symbol.conj_analytic(a, M), g).inner(h)
    rhs = g.inner(toeplitz_apply(Symbol.analytic(a, M), h))
    assert abs(lhs - rhs) < 1e-10 * g.norm() * h.norm()


def test_membership_constant_example1():
    res = membership_solve(A1, RationalFunction(Polynomial([1.0])), 256)
    assert res.verdict == "member"
    assert [r.M for r in res.ladder] == [256, 512, 1024]
    for lo, hi in zip(res.ladder, res.ladder[1:]):
        assert hi.residual <= lo.residual + 1e-12
    assert all(np.isfinite(r.condition) for r in res.ladder)


def test_membership_roundtrip(rng):
    g0 = HardyVector(rand_poly(rng, 10)).truncate(256)
    f = toeplitz_apply(Symbol.conj_analytic(A1, 256), g0)
    res = membership_solve(A1, f, 256, ladder=1)
    assert res.residual < 1e-10
    assert np.max(np.abs(res.g.truncate(256).coeffs - g0.coeffs)) < 1e-8


def test_membership_roundtrip_double_zero(rng, ex4):
    a = mate_data(ex4)[0].a
    g0 = HardyVector(rand_poly(rng, 6)).truncate(256)
    f = toeplitz_apply(Symbol.conj_analytic(a, 256), g0)
    res = membership_solve(a, f, 256, ladder=1)
    assert res.residual < 1e-10
    assert np.max(np.abs(res.g.truncate(256).coeffs - g0.coeffs)) < 1e-8


def test_nonmember_divergent_sum():
    k = np.arange(4097)
    f = HardyVector((k + 1.0) ** -0.75)
    res = membership_solve(A1, f, 256)
    assert res.verdict == "non-member"
    assert all(r.residual > 0.05 for r in res.ladder)


def test_inconclusive_slow_decay():
    k = np.arange(4097)
    res = membership_solve(A1, HardyVector((k + 1.0) ** -2), 256)
    assert res.verdict == "inconclusive"


def test_evaluation_matrix_nonsingular(ex2, ex4):
    for q in (ex2, ex4):
        zeros = mate_data(q)[1]
        assert abs(np.linalg.det(evaluation_matrix(zeros))) > 1e-8


ZERO_SETS = [
    BoundaryZeroSet(((1 + 0j, 1),)),
    BoundaryZeroSet(((1j, 1), (-1j, 1))),
    BoundaryZeroSet(((-1 + 0j, 2),)),
]


@pytest.mark.parametrize("zeros", ZERO_SETS)
def test_conj_identity(zeros):
    assert conj_identity_error(zeros) < 1e-10


def test_vanishing_examples(rng):
    zeros = ZERO_SETS[0]
    h = rand_poly(rng, 8)
    rep = fourier_vanishing_check(zeros, HardyVector(np.concatenate([[0], h])), 64)
    assert rep.coeffs_vanish and rep.derivatives_vanish and rep.identity_error < 1e-8
    rep = fourier_vanishing_check(zeros, HardyVector(np.concatenate([[1], h])), 64)
    assert not rep.coeffs_vanish and not rep.derivatives_vanish


@pytest.mark.parametrize("zeros", ZERO_SETS)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_vanishing_equivalence(zeros, seed, kill):
    rng = np.random.default_rng(seed)
    g = rand_poly(rng, 10)
    if kill:
        g[: zeros.N] = 0
    rep = fourier_vanishing_check(zeros, HardyVector(g), 64)
    assert rep.consistent
    assert rep.coeffs_vanish == kill
    if kill:
        assert rep.identity_error < 1e-8


def test_hardy_json_roundtrip():
    h = HardyVector([1, 2j, 3])
    back = HardyVector.from_json(h.to_json())
    assert back.M == 2 and np.array_equal(back.coeffs, h.coeffs)
