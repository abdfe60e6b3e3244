import numpy as np
import pytest

from harmap.catalog import f_alpha
from harmap.convolution import (
    build_expression,
    convex_combination_convolve,
    hadamard,
    tilde_dilatation,
    tilde_dilatation_check,
)
from harmap.errors import InvalidParameterError
from harmap.harmonic_map import HarmonicMap, evaluate_f
from harmap.series import make_generator

N = 64
n = np.arange(1, N + 1)


def test_L_times_L_coefficients(LL):
    assert np.allclose(LL.h.coeffs[1:], ((n + 1) / 2) ** 2, rtol=0, atol=1e-12)
    assert np.allclose(LL.g.coeffs[1:], ((n - 1) / 2) ** 2, rtol=0, atol=1e-12)


@pytest.mark.parametrize("alpha", [1.0, 1j, np.exp(1j * np.pi / 3)])
def test_f_alpha_times_conjugate_is_L_times_L(alpha, LL):
    product = hadamard(f_alpha(alpha, N), f_alpha(np.conj(alpha), N)).product
    assert product.h.allclose(LL.h) and product.g.allclose(LL.g)


def test_family_products_carry_closed_forms(LL, L, F):
    assert LL.exact is not None
    z = np.array([0.3, -0.5j])
    assert np.allclose(evaluate_f(LL, z), evaluate_f(LL, z, prefer_exact=True), atol=1e-12)
    LF = hadamard(L, F)
    assert LF.left_label == "L" and LF.right_label == "F"
    assert LF.product.label == "conv(L,F)"
    assert isinstance(evaluate_f(LF.product, 0.999), complex)


def test_hadamard_commutes_and_associates(rng):
    a, b, c = (f_alpha(complex(*rng.uniform(-0.7, 0.7, 2)), N) for _ in range(3))
    ab = hadamard(a, b).product
    ba = hadamard(b, a).product
    assert ab.h.allclose(ba.h) and ab.g.allclose(ba.g)
    left = hadamard(ab, c).product
    right = hadamard(a, hadamard(b, c).product).product
    assert left.h.allclose(right.h, atol=1e-12) and left.g.allclose(right.g, atol=1e-12)


def test_convolution_identity(F):
    l = make_generator("half_plane_l", N)
    unit = HarmonicMap(h=l, g=l, label="l+conj(l)")
    product = hadamard(F, unit).product
    assert product.h.allclose(F.h) and product.g.allclose(F.g)


def test_convex_combination_convolve(F):
    l = make_generator("half_plane_l", N)
    same = convex_combination_convolve(l, 1.0, F)
    assert same.h.allclose(F.h) and same.g.allclose(F.g)
    analytic = convex_combination_convolve(l, 0.0, F)
    assert not np.any(analytic.g.coeffs)
    assert abs(analytic.g[1]) < abs(analytic.h[1])
    with pytest.raises(InvalidParameterError):
        convex_combination_convolve(l, 2.0, F)


def test_tilde_dilatation_values():
    assert tilde_dilatation(0.0, 1, 0.0) == 0
    assert abs(tilde_dilatation(0.9, 2, 0.0)) < 1


def test_tilde_dilatation_check_rejects_higher_powers():
    with pytest.raises(InvalidParameterError):
        tilde_dilatation_check(3, 0.0)


@pytest.mark.slow
@pytest.mark.parametrize("power", [1, 2])
@pytest.mark.parametrize("theta", [0.0, np.pi / 3, np.pi])
def test_tilde_dilatation_check(power, theta):
    report = tilde_dilatation_check(power, theta)
    assert report.passed, report.details
    assert report.value < 1
    assert report.details["crosscheck_error"] <= 1e-6


def test_build_expression():
    product = build_expression("conv(L,L)", N)
    assert product.h[3] == pytest.approx(4.0)
    assert product.g[3] == pytest.approx(1.0)
    nested = build_expression("conv(f_alpha:0,1,conv(F,F))", N)
    assert nested.h[2] == pytest.approx(1.5 ** 3)
    assert build_expression("example21", N).label == "polynomial_collision"


@pytest.mark.parametrize("text", ["conv(L)", "conv(L,F", "L F", "conv(L,F))"])
def test_build_expression_rejects(text):
    with pytest.raises(InvalidParameterError):
        build_expression(text, N)
