import numpy as np
import pytest

from harmap.catalog import CatalogEntry, MapName, f_alpha, g_alpha, make_named
from harmap.config import MIN_TRUNC_ORDER, SERIES_RADIUS
from harmap.convolution import build_expression, hadamard
from harmap.errors import DomainError, InvalidParameterError, NormalizationError, SingularPointError
from harmap.harmonic_map import (
    ExactForms,
    HarmonicMap,
    analytic_derivatives,
    angular_derivatives,
    conjugate_collision,
    dilatation,
    evaluate_f,
    injectivity_sample_check,
    jacobian,
    polar_grid,
    sense_preserving_check,
)
from harmap.series import ClosedForm, TruncatedSeries, generator_closed_form, make_generator


def test_normalization_is_enforced():
    with pytest.raises(NormalizationError):
        HarmonicMap(h=TruncatedSeries([0, 2, 0]), g=TruncatedSeries([0, 0, 0]))
    with pytest.raises(NormalizationError):
        HarmonicMap(h=TruncatedSeries([0.1, 1, 0]), g=TruncatedSeries([0, 0, 0]))


def test_inconsistent_closed_form_is_rejected():
    l = make_generator("half_plane_l", 32)
    k_form = generator_closed_form("koebe_k")
    zero = ClosedForm(lambda z: 0 * z, lambda z: 0 * z, lambda z: 0 * z)
    with pytest.raises(NormalizationError):
        HarmonicMap(h=l, g=TruncatedSeries(np.zeros(33)), exact=ExactForms(h=k_form, g=zero))


def test_L_dilatation(L):
    assert abs(dilatation(L, 0.2j) - (-0.2j)) < 1e-12, "L is the vertical shear of l with w(z) = -z"


def test_F_is_k_on_the_real_axis(F):
    r = np.array([0.3, 0.69, 0.71, 0.95])
    assert np.allclose(evaluate_f(F, r), r / (1 - r) ** 2, rtol=1e-7), \
        "series and closed-form branches should agree across |z| = 0.7"


def test_identity_jacobian_and_angular_derivatives(identity_map):
    z = 0.4 * np.exp(1j * np.linspace(0, 2 * np.pi, 7))
    assert np.allclose(jacobian(identity_map, z), 1.0)
    theta = np.linspace(0, 2 * np.pi, 9)
    d1, d2 = angular_derivatives(identity_map, 0.4, theta)
    zz = 0.4 * np.exp(1j * theta)
    assert np.allclose(d1, 1j * zz)
    assert np.allclose(d2, -zz)


def test_scalar_and_array_shapes(F):
    assert isinstance(evaluate_f(F, 0.2), complex)
    assert isinstance(jacobian(F, 0.2), float)
    assert evaluate_f(F, np.zeros((3, 4)) + 0.1).shape == (3, 4)


def test_domain_errors(F):
    with pytest.raises(DomainError):
        evaluate_f(F, 1.0)
    with pytest.raises(DomainError):
        angular_derivatives(F, 1.0, 0.0)


def test_polar_grid():
    radii, z = polar_grid(0.9, 3, 8)
    assert np.allclose(radii, [0.3, 0.6, 0.9])
    assert z.shape == (3, 8)
    assert np.allclose(np.abs(z[2]), 0.9)


def test_sense_preserving(collision_map):
    report = sense_preserving_check(collision_map, r_max=0.95)
    assert report.passed, f"min Jacobian {report.value}"
    assert report.necessary_only


def test_sense_preserving_violation_is_located():
    c = np.zeros(9)
    c[1] = 1.0
    g = np.zeros(9)
    g[2] = 2.0  # |g'| = 4|z| > 1 beyond |z| = 1/4
    report = sense_preserving_check(HarmonicMap(h=TruncatedSeries(c), g=TruncatedSeries(g)))
    assert not report.passed
    assert report.details["first_violation_radius"] >= 0.25


def test_injectivity_finds_known_collision(collision_map, identity_map):
    z0 = (3 + np.sqrt(3) * 1j) / 4
    assert abs(evaluate_f(collision_map, z0) - 0.75) < 1e-12
    assert abs(evaluate_f(collision_map, np.conj(z0)) - 0.75) < 1e-12
    report = injectivity_sample_check(collision_map, extra_points=(z0, np.conj(z0)))
    assert not report.passed, "f(z0) = f(conj z0) must be detected"
    assert injectivity_sample_check(identity_map, n_samples=400).passed


def test_injectivity_sample_cap(identity_map):
    with pytest.raises(DomainError):
        injectivity_sample_check(identity_map, n_samples=5000)


def test_conjugate_collision(F, L):
    assert conjugate_collision(F, 0.95) is None, "Im F = Im l keeps its sign on the upper half circle"
    LF = hadamard(L, F).product
    z = conjugate_collision(LF, 0.95)
    assert z is not None and 0 < np.angle(z) < np.pi
    assert abs(evaluate_f(LF, z) - evaluate_f(LF, np.conj(z))) < 1e-9


def test_conjugate_collision_needs_real_coefficients():
    with pytest.raises(InvalidParameterError):
        conjugate_collision(f_alpha(1j, 64), 0.5)


def test_series_only_map_refuses_points_beyond_reliable_radius():
    f = build_expression("conv(F,log_shear)", 64)
    assert f.exact is None
    assert 0.5 < f.derivative_radius < 0.9
    assert 0.5 < f.value_radius < 0.9
    assert isinstance(evaluate_f(f, 0.5), complex)
    with pytest.raises(DomainError):
        evaluate_f(f, 0.95)
    with pytest.raises(DomainError):
        angular_derivatives(f, 0.9, 0.0)


def test_reliable_radius_grows_with_order():
    low = build_expression("conv(F,log_shear)", 64)
    high = build_expression("conv(F,log_shear)", 1024)
    assert high.derivative_radius > 0.9 > low.derivative_radius
    assert isinstance(evaluate_f(high, 0.9), complex)


def test_closed_forms_take_over_where_series_stop_being_reliable():
    F = f_alpha(1.0, MIN_TRUNC_ORDER, label="F")
    assert F.derivative_radius < SERIES_RADIUS
    z = 0.5 * (F.derivative_radius + SERIES_RADIUS) * np.exp(0.4j)
    dh, _, _, d2g = analytic_derivatives(F, z)
    assert abs(dh[0] - F.exact.h.d1(z)) <= 1e-14 * abs(dh[0])
    assert abs(d2g[0] - F.exact.g.d2(z)) <= 1e-14 * abs(d2g[0])


def test_closed_form_agreement_is_checked_on_half_disk():
    with pytest.raises(NormalizationError, match="order 32"):
        f_alpha(1.0, 32)
    F = f_alpha(1.0, MIN_TRUNC_ORDER)
    z = 0.5 * np.exp(1j * np.linspace(0, 2 * np.pi, 17))
    assert np.max(np.abs(np.polynomial.polynomial.polyval(z, F.d2h.coeffs) - F.exact.h.d2(z))) < 1e-8


@pytest.mark.parametrize("name", list(MapName))
def test_angular_derivatives_match_finite_differences(name):
    f = make_named(CatalogEntry(name, 0.5), 64)
    theta = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    step = 1e-5
    for r in np.linspace(0.05, 0.6, 16):
        d1, d2 = angular_derivatives(f, r, theta)
        fd1 = (evaluate_f(f, r * np.exp(1j * (theta + step))) - evaluate_f(f, r * np.exp(1j * (theta - step)))) / (2 * step)
        fd2 = (angular_derivatives(f, r, theta + step)[0] - angular_derivatives(f, r, theta - step)[0]) / (2 * step)
        assert np.max(np.abs(d1 - fd1)) <= 1e-6 * max(1.0, np.max(np.abs(d1))), f"{name} d1 at r={r}"
        assert np.max(np.abs(d2 - fd2)) <= 1e-6 * max(1.0, np.max(np.abs(d2))), f"{name} d2 at r={r}"


def test_jacobian_factors_through_dilatation(F, rng):
    z = 0.9 * np.sqrt(rng.uniform(0, 1, 200)) * np.exp(2j * np.pi * rng.uniform(0, 1, 200))
    dh = analytic_derivatives(F, z)[0]
    w = dilatation(F, z)
    scale = np.abs(dh) ** 2
    assert np.all(np.abs(jacobian(F, z) - scale * (1 - np.abs(w) ** 2)) <= 1e-10 * scale)


def test_family_dilatations(F):
    z = np.array([0.1, 0.3j, -0.5 + 0.2j, 0.8 * np.exp(2.0j)])
    assert np.allclose(dilatation(F, z), z, atol=1e-12), "F is the horizontal shear of l with w(z) = z"
    for alpha in (0.5, -1j, 0.3 + 0.4j):
        assert np.allclose(dilatation(g_alpha(alpha, 64), z), alpha * z, atol=1e-12)


def test_dilatation_reports_critical_point():
    f = HarmonicMap(h=TruncatedSeries([0, 1, -1, 0, 0, 0, 0, 0, 0]), g=TruncatedSeries(np.zeros(9)))
    with pytest.raises(SingularPointError) as info:
        dilatation(f, np.array([0.1, 0.5, 0.2]))
    assert info.value.z == 0.5


def test_F_passes_sampled_injectivity(F):
    report = injectivity_sample_check(F, 0.9)
    assert report.passed
    assert report.value > 0
