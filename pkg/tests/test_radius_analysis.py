import numpy as np
import pytest

from harmap.convolution import build_expression
from harmap.errors import BracketingError, DomainError, InvalidParameterError, NonMonotoneError, PoleError
from harmap.harmonic_map import HarmonicMap, angular_derivatives, evaluate_f
from harmap.radius_analysis import (
    R0,
    R_CONVEX,
    R_STAR_CLASS,
    bracket_transition,
    closed_form_F,
    convex_test_at_radius,
    dq_du,
    identity_check_tangent,
    min_over_u,
    p_root_profile,
    polynomial_p,
    polynomial_q,
    q_local_minimum,
    radius_search,
    solve_special_radii,
    starlike_test_at_radius,
)
from harmap.series import TruncatedSeries


def test_identity_map_is_convex_and_starlike(identity_map):
    for test in (convex_test_at_radius, starlike_test_at_radius):
        result = test(identity_map, 0.5, 512)
        assert result.passed
        assert result.min_derivative == pytest.approx(1.0, abs=1e-12)
        assert result.total_turning == pytest.approx(2 * np.pi, abs=1e-6)


@pytest.mark.critical
def test_convexity_of_F_switches_at_two_minus_sqrt3(F):
    assert convex_test_at_radius(F, 0.25).passed, "0.25 < 2 - √3"
    failed = convex_test_at_radius(F, 0.30)
    assert not failed.passed
    assert failed.min_derivative < 0
    assert abs(failed.argmin_theta - np.pi) < 0.5, "the tangent turns back near θ = π"


@pytest.mark.critical
def test_starlikeness_of_F_switches_at_r0(F):
    assert starlike_test_at_radius(F, 0.65).passed
    assert not starlike_test_at_radius(F, 0.67).passed


def test_radius_test_rejects_bad_radius(F):
    with pytest.raises(DomainError):
        convex_test_at_radius(F, 1.0)


@pytest.mark.critical
@pytest.mark.slow
def test_radius_of_convexity_of_F(F):
    result = radius_search(F, "convexity", tol=1e-6)
    assert result.r_hi - result.r_lo <= 1e-6
    assert result.contains(R_CONVEX), f"[{result.r_lo}, {result.r_hi}] should contain 2 - √3"
    assert not result.reached_limit


@pytest.mark.critical
@pytest.mark.slow
def test_radius_of_starlikeness_of_F(F):
    result = radius_search(F, "starlikeness", tol=1e-6)
    assert result.contains(R0), f"[{result.r_lo}, {result.r_hi}] should contain r0 = {R0}"


def test_radius_search_reaches_limit(identity_map):
    result = radius_search(identity_map, "convexity", n_theta=256)
    assert result.reached_limit
    assert result.r_lo == result.r_hi == pytest.approx(0.999)
    assert result.search_limit == pytest.approx(0.999)
    assert all(result.scan_passed)


def test_radius_search_rejects_unknown_kind(F):
    with pytest.raises(InvalidParameterError):
        radius_search(F, "close-to-convex")


def test_closed_forms_match_F(F):
    r = 0.5
    theta = np.linspace(0.1, 6.2, 13)
    d1, _ = angular_derivatives(F, r, theta)
    assert np.allclose(d1.real, closed_form_F("A", r, theta))
    assert np.allclose(d1.imag, closed_form_F("B", r, theta))
    values = evaluate_f(F, r * np.exp(1j * theta))
    assert np.allclose(values.real, closed_form_F("C", r, theta))
    assert np.allclose(values.imag, closed_form_F("D", r, theta))
    assert closed_form_F("C", 0.5, 0.0) == pytest.approx(2.0)
    with pytest.raises(InvalidParameterError):
        closed_form_F("E", r, 0.0)


def test_polynomial_identities(rng):
    for r in rng.uniform(0, 1, 100):
        assert polynomial_p(r, -1.0) == pytest.approx((1 + r) ** 6 * (1 - 4 * r + r * r), abs=1e-12)
        assert polynomial_q(r, 1.0) == pytest.approx((1 - r) ** 4, abs=1e-12)
        assert polynomial_q(r, -1.0) == pytest.approx((1 + r) ** 4, abs=1e-12)


def test_tangent_identity():
    res = identity_check_tangent(0.3, 0.2)
    assert res.passed, f"residuals {res.psi_residual}, {res.phi_residual}"
    with pytest.raises(PoleError):
        identity_check_tangent(0.3, 0.6 / 1.09)
    with pytest.raises(DomainError):
        identity_check_tangent(0.3, 1.0)


def test_q_local_minimum_vanishes_at_r0():
    u_star, q_min = q_local_minimum(R0)
    assert -1 < u_star < 1
    assert abs(q_min) < 1e-9
    assert abs(dq_du(R0, u_star)) < 1e-10
    with pytest.raises(DomainError):
        q_local_minimum(0.5)


def test_q_local_minimum_is_a_critical_point():
    u_star, q_min = q_local_minimum(0.7)
    assert abs(dq_du(0.7, u_star)) < 1e-10
    assert polynomial_q(0.7, u_star - 1e-3) > q_min < polynomial_q(0.7, u_star + 1e-3)


def test_special_radii():
    radii = solve_special_radii()
    assert radii.r_convex == pytest.approx(2 - np.sqrt(3), abs=1e-14)
    assert radii.r_star == pytest.approx(radii.r_star_closed_form, abs=1e-10)
    assert radii.r_star == pytest.approx(0.6583312, abs=1e-7)
    assert radii.r_close_to_convex_star == pytest.approx(R_STAR_CLASS)
    assert R_STAR_CLASS <= radii.r_star, "4√2 - 5 <= r0"


def test_sign_flips_over_u():
    assert min_over_u("p", R_CONVEX - 1e-3) > 0
    assert min_over_u("p", R_CONVEX + 1e-3) < 0
    assert min_over_u("q", R0 - 1e-3) > 0
    assert min_over_u("q", R0 + 1e-3) < 0
    with pytest.raises(InvalidParameterError):
        min_over_u("r", 0.5)


def test_p_root_profile():
    report = p_root_profile(np.linspace(-1.0, 1.0, 41))
    assert report.passed, "roots of p(·, u) increase with u"
    rows = report.details["rows"]
    assert rows[0]["root"] == pytest.approx(R_CONVEX, abs=1e-12)
    assert rows[-1]["root"] is None, "p(r, 1) = (1 - r)^6 (1 + 4r + r^2) has no root in (0, 1)"
    roots = [row["root"] for row in rows if row["root"] is not None]
    assert len(roots) >= 30
    assert all(R_CONVEX - 1e-12 <= r < 1 for r in roots)


def test_bracket_transition_bisects_to_tolerance():
    lo, hi, radii, passed = bracket_transition(lambda r: r < 0.4, 0.01, 0.99, 50, 1e-8)
    assert lo < 0.4 <= hi
    assert hi - lo <= 1e-8
    assert len(radii) == len(passed) == 50


def test_bracket_transition_rejects_pass_above_failure():
    with pytest.raises(NonMonotoneError) as info:
        bracket_transition(lambda r: not 0.3 < r < 0.5, 0.01, 0.99, 50, 1e-6)
    assert not all(info.value.passed)
    assert info.value.passed[-1]
    assert len(info.value.radii) == 50


def test_radius_search_without_inner_radius():
    # f = z + 2 conj(z) reverses orientation, so no circle has a starlike image
    f = HarmonicMap(h=TruncatedSeries([0, 1, 0, 0, 0, 0, 0, 0, 0]), g=TruncatedSeries([0, 2, 0, 0, 0, 0, 0, 0, 0]))
    with pytest.raises(BracketingError):
        radius_search(f, "starlikeness", n_theta=64)


@pytest.mark.slow
def test_series_only_search_stops_at_reliable_radius():
    f = build_expression("conv(L,log_shear)", 64)
    result = radius_search(f, "starlikeness", n_theta=512)
    assert result.reached_limit
    assert result.r_hi == result.search_limit
    assert result.search_limit < min(f.value_radius, f.derivative_radius) < 0.85
