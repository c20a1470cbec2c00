"""Pythagorean mates, boundary kernels and orthogonal decompositions of
de Branges-Rovnyak spaces H(q**r) for rational outer q."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .poly import Polynomial, RationalFunction, TrigPolynomial, boundary_defect, poly_divide_exact, poly_roots
from .factor import fejer_riesz
from .power import PowerFunction, power_derivatives, power_eval
from .mate import (
    BoundaryZeroSet,
    Classification,
    PythagoreanPair,
    boundary_zeros,
    classify,
    corona_infimum,
    mate_modulus_ratio_bounds,
    pythagorean_mate,
)
from .kernel import (
    KernelSpec,
    gram_matrix,
    kernel_eval,
    kernel_rational_form,
    kernel_z_derivative_at_boundary,
)
from .hardy import HardyVector, analytic_coeffs, fourier_vanishing_check, membership_solve, toeplitz_apply
from .decomp import Decomposition, decompose, sets_equal_check, verify_orthogonality
