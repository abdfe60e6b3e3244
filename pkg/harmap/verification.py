"""
Verification suites

Each suite recomputes a group of results about the catalog maps and records
computed vs expected values. A suite passes iff every record passes.

    python -m harmap verify --suite radii
"""

import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from .catalog import f_alpha, g_alpha, log_shear, make_M_alpha_member, polynomial_collision
from .classifiers import area_series, jacobian_area, kaplan_sweep, lemma13_orders, m_alpha_check, thm31_bounds_check
from .config import DEFAULT_CROSSCHECK_ORDER, DEFAULT_THETA_GRID, DEFAULT_TRUNC_ORDER
from .convolution import convex_combination_convolve, hadamard, tilde_dilatation_check
from .errors import InvalidParameterError, PoleError
from .harmonic_map import HarmonicMap, conjugate_collision, evaluate_f, injectivity_sample_check, sense_preserving_check
from .radius_analysis import (
    R0,
    R_CONVEX,
    R_STAR_CLASS,
    identity_check_tangent,
    polynomial_p,
    polynomial_q,
    radius_search,
    solve_special_radii,
    starlike_test_at_radius,
)
from .reports import VerificationRecord, VerificationReport
from .series import GeneratorKind, TruncatedSeries, generator_closed_form, make_generator

logger = logging.getLogger(__name__)

SUITES = ("coefficients", "bounds", "radii", "convolution")
ALPHAS = (1.0, -1.0, 1j, 0.5)

# claim id (without its [parameter] suffix) -> result group it reproduces
CLAIM_ANCHORS: Dict[str, str] = {
    "f_alpha_coefficients": "m-alpha/coefficient-bounds",
    "growth_bound": "m-alpha/coefficient-bounds",
    "f1_times_f1_outside_M1": "m-alpha/coefficient-bounds",
    "growth_equality_f1": "m-alpha/growth-equality",
    "area_series": "m-alpha/area",
    "area_quadrature": "m-alpha/area",
    "kaplan_full_period": "m-alpha/close-to-convex",
    "kaplan_worst_arc": "m-alpha/close-to-convex",
    "f_i_in_M_i": "m-alpha/membership",
    "starlike_order_z_plus_quarter_z2": "coefficient-conditions/fully-starlike-order",
    "log_shear_coefficients": "examples/log-shear",
    "collision_value": "examples/polynomial-collision",
    "collision_sense_preserving": "examples/polynomial-collision",
    "collision_not_univalent": "examples/polynomial-collision",
    "convexity_radius_root": "radii/convexity",
    "convexity_radius_of_F": "radii/convexity",
    "p_at_u_minus_one": "radii/convexity",
    "starlikeness_radius_closed_form": "radii/starlikeness",
    "starlikeness_radius_of_F": "radii/starlikeness",
    "q_at_u_plus_minus_one": "radii/starlikeness",
    "tangent_identities": "radii/tangent-identities",
    "class_radius_below_r0": "radii/starlike-class",
    "L_times_L_coefficients": "convolution/L-times-L",
    "L_times_L_starlike": "convolution/L-times-L",
    "f_alpha_times_conjugate": "convolution/unimodular-family",
    "product_dilatation": "convolution/product-dilatation",
    "L_times_F_sense_preserving": "convolution/L-times-F",
    "L_times_F_not_univalent": "convolution/L-times-F",
    "identity_convolution": "convolution/identity",
}


def _record(claim_id: str, statement: str, computed, expected, tolerance: Optional[float] = None, passed: Optional[bool] = None) -> VerificationRecord:
    if passed is None:
        passed = abs(float(computed) - float(expected)) <= tolerance
    if isinstance(computed, (np.floating, np.integer)):
        computed = float(computed)
    return VerificationRecord(
        claim_id=claim_id,
        anchor=CLAIM_ANCHORS[claim_id.split("[")[0]],
        statement=statement,
        computed=computed,
        expected=expected,
        tolerance=tolerance,
        passed=bool(passed),
    )


def _alpha_tag(alpha: complex) -> str:
    alpha = complex(alpha)
    return f"{alpha.real:g},{alpha.imag:g}"


# ========================================
# COEFFICIENTS
# ========================================

def coefficients_suite(order: int = DEFAULT_TRUNC_ORDER) -> List[VerificationRecord]:
    records = []
    n = np.arange(1, order + 1)
    for alpha in ALPHAS:
        f = f_alpha(alpha, order)
        err = max(
            np.max(np.abs(np.abs(f.h.coeffs[1:]) - (n + 1) / 2)),
            np.max(np.abs(np.abs(f.g.coeffs[1:]) - (n - 1) * abs(alpha) / 2)),
        )
        records.append(_record(
            f"f_alpha_coefficients[{_alpha_tag(alpha)}]",
            "f_alpha attains |a_n| = (n+1)/2 and |b_n| = (n-1)|alpha|/2",
            err, 0.0, 1e-12,
        ))

    c = np.zeros(order + 1)
    c[1], c[2] = 1.0, 0.25
    small = HarmonicMap(h=TruncatedSeries(c), g=TruncatedSeries(np.zeros(order + 1)), label="z+z^2/4")
    first, _ = lemma13_orders(small)
    records.append(_record(
        "starlike_order_z_plus_quarter_z2",
        "h = z + z^2/4, g = 0 is fully starlike of order 2(1-λ)/(2+λ) = 0.4",
        first.order_starlike, 0.4, 1e-12,
    ))

    f_i = f_alpha(1j, order)
    report = m_alpha_check(f_i, 1j)
    records.append(_record(
        "f_i_in_M_i",
        "f_i satisfies the M(i) coefficient relation and Re(1 + zh''/h') > -1/2",
        report.details["relation_residual"], 0.0, passed=report.passed,
    ))

    lg = log_shear(order)
    b_err = np.max(np.abs(lg.g.coeffs[1:] - (1 - 1 / n)))
    records.append(_record(
        "log_shear_coefficients",
        "z/(1-z) + log(1-z) has coefficients 1 - 1/n",
        b_err, 0.0, 1e-12,
    ))

    pc = polynomial_collision(order)
    z0 = (3 + np.sqrt(3) * 1j) / 4
    for tag, z in (("z0", z0), ("conj_z0", np.conj(z0))):
        records.append(_record(
            f"collision_value[{tag}]",
            "h = z - z^2/2, g = z^2/2 - z^3/3 sends z0 = (3+√3i)/4 and its conjugate to 3/4",
            abs(evaluate_f(pc, z) - 0.75), 0.0, 1e-12,
        ))
    sp = sense_preserving_check(pc, r_max=0.95)
    records.append(_record(
        "collision_sense_preserving",
        "the polynomial collision map is sense-preserving on |z| <= 0.95",
        sp.value, 0.0, passed=sp.passed,
    ))
    inj = injectivity_sample_check(pc, extra_points=(z0, np.conj(z0)))
    records.append(_record(
        "collision_not_univalent",
        "the polynomial collision map is not univalent (sampled check must fail)",
        inj.value, 0.0, passed=not inj.passed,
    ))
    return records


# ========================================
# BOUNDS
# ========================================

def _m_alpha_members(order: int) -> List[tuple]:
    l_form = generator_closed_form(GeneratorKind.HALF_PLANE_L)
    members = [(alpha, f_alpha(alpha, order)) for alpha in ALPHAS]
    for alpha in (0.3, -0.7j, np.exp(1j * np.pi / 4), 0.0):
        h = make_generator(GeneratorKind.HALF_PLANE_L, order)
        members.append((alpha, make_M_alpha_member(h, alpha, h_form=l_form)))
    return members


def bounds_suite(order: int = DEFAULT_TRUNC_ORDER) -> List[VerificationRecord]:
    records = []
    for alpha, f in _m_alpha_members(order):
        report = thm31_bounds_check(f, alpha)
        records.append(_record(
            f"growth_bound[{f.label}]",
            "|f(z)| <= |z|/(1-|z|)^2 (1 - (1-|alpha|)|z|/2) at 10^4 sampled points",
            report.details["min_growth_slack"], 0.0, passed=report.passed,
        ))

    f1 = f_alpha(1.0, order)
    r = np.linspace(0.05, 0.95, 19)
    err = np.max(np.abs(np.abs(evaluate_f(f1, r.astype(complex))) - r / (1 - r) ** 2))
    records.append(_record("growth_equality_f1", "f_1 attains the growth bound on the positive real axis", err, 0.0, 1e-9))

    for alpha in (0.0, 0.5, 0.8j, 1.0):
        g = g_alpha(alpha, order)
        expected = np.pi * (1 - abs(alpha) ** 2 / 2)
        area = area_series(g, alpha)
        records.append(_record(f"area_series[{_alpha_tag(alpha)}]", "area of g_alpha(D) is π(1 - |alpha|²/2)", area, expected, 1e-12))
        quad_area = jacobian_area(g)
        records.append(_record(
            f"area_quadrature[{_alpha_tag(alpha)}]",
            "polar quadrature of the Jacobian matches the area series (relative 1e-4)",
            quad_area, area, 1e-4 * area,
        ))

    product = hadamard(f1, f1).product
    report = thm31_bounds_check(product, 1.0)
    records.append(_record(
        "f1_times_f1_outside_M1",
        "f_1 * f_1 violates |a_n| <= (n+1)/2 (a_3 = 4 > 2), so it is not in M(1)",
        abs(product.h[3]), 2.0, passed=not report.details["coefficients_passed"],
    ))

    F = f_alpha(1.0, order, label="F")
    for radius in (0.5, 0.9):
        sweep = kaplan_sweep(F, radius)
        records.append(_record(
            f"kaplan_full_period[r={radius}]",
            "the full-period Kaplan integral of F equals 2π for 16 values of epsilon",
            sweep.details["full_period_max_error"], 0.0, 1e-6,
        ))
        records.append(_record(
            f"kaplan_worst_arc[r={radius}]",
            "every scanned sub-arc Kaplan integral of F exceeds -π",
            sweep.value, -np.pi, passed=sweep.passed,
        ))
    return records


# ========================================
# RADII
# ========================================

def radii_suite(order: int = DEFAULT_TRUNC_ORDER, n_theta: int = DEFAULT_THETA_GRID, tol: float = 1e-6) -> List[VerificationRecord]:
    records = []
    radii = solve_special_radii()
    records.append(_record("convexity_radius_root", "2 - √3 is the root of 1 - 4r + r² in (0, 1/2)", radii.r_convex, R_CONVEX, 1e-12))
    records.append(_record(
        "starlikeness_radius_closed_form",
        "the root of q(r, u*) = 0 equals (1/3)√((37 - 8√10)/3)",
        radii.r_star, R0, 1e-10,
    ))
    records.append(_record(
        "class_radius_below_r0",
        "4√2 - 5 <= r0",
        R_STAR_CLASS, R0, passed=R_STAR_CLASS <= R0,
    ))

    F = f_alpha(1.0, order, label="F")
    for kind, target in (("convexity", R_CONVEX), ("starlikeness", R0)):
        res = radius_search(F, kind, tol=tol, n_theta=n_theta)
        records.append(_record(
            f"{kind}_radius_of_F",
            f"the sampled {kind} radius of F brackets {target:.10f}",
            res.midpoint, target, tol, passed=res.contains(target),
        ))

    rng = np.random.default_rng(4)
    rs = rng.uniform(0.0, 1.0, 100)
    p_err = max(abs(polynomial_p(r, -1.0) - (1 + r) ** 6 * (1 - 4 * r + r * r)) for r in rs)
    q_err = max(max(abs(polynomial_q(r, s) - (1 + s * r) ** 4) for s in (1.0, -1.0)) for r in rs)
    records.append(_record("p_at_u_minus_one", "p(r, -1) = (1+r)^6 (1 - 4r + r²)", p_err, 0.0, 1e-12))
    records.append(_record("q_at_u_plus_minus_one", "q(r, ±1) = (1 ± r)^4", q_err, 0.0, 1e-12))

    worst = 0.0
    skipped = 0
    for r in np.linspace(0.05, 0.95, 20):
        for u in np.linspace(-0.95, 0.95, 20):
            try:
                res = identity_check_tangent(float(r), float(u))
            except PoleError:
                skipped += 1
                continue
            worst = max(worst, res.psi_residual, res.phi_residual)
    logger.info({"event": "tangent_identities", "max_residual": worst, "skipped_poles": skipped})
    records.append(_record(
        "tangent_identities",
        "derivatives of tan Ψ and tan Φ reduce to p and q on a 20x20 (r, u) grid",
        worst, 0.0, 1e-5,
    ))
    return records


# ========================================
# CONVOLUTION
# ========================================

def convolution_suite(order: int = DEFAULT_TRUNC_ORDER, crosscheck_order: int = DEFAULT_CROSSCHECK_ORDER) -> List[VerificationRecord]:
    records = []
    n = np.arange(1, order + 1)
    L = f_alpha(-1.0, order, label="L")
    F = f_alpha(1.0, order, label="F")
    LL = hadamard(L, L).product
    err = max(
        np.max(np.abs(LL.h.coeffs[1:] - ((n + 1) / 2) ** 2)),
        np.max(np.abs(LL.g.coeffs[1:] - ((n - 1) / 2) ** 2)),
    )
    records.append(_record("L_times_L_coefficients", "L*L has coefficients ((n+1)/2)² and ((n-1)/2)²", err, 0.0, 1e-12))

    for alpha in (1.0, 1j, np.exp(1j * np.pi / 3)):
        prod = hadamard(f_alpha(alpha, order), f_alpha(np.conj(alpha), order)).product
        diff = max(np.max(np.abs(prod.h.coeffs - LL.h.coeffs)), np.max(np.abs(prod.g.coeffs - LL.g.coeffs)))
        records.append(_record(
            f"f_alpha_times_conjugate[{_alpha_tag(alpha)}]",
            "f_alpha * f_conj(alpha) = L*L for |alpha| = 1",
            diff, 0.0, 1e-12,
        ))

    for r in (0.5, 0.9, 0.99):
        test = starlike_test_at_radius(LL, r)
        records.append(_record(
            f"L_times_L_starlike[r={r}]",
            "L*L maps |z| = r onto a starlike curve",
            test.min_derivative, 0.0, passed=test.passed,
        ))

    for power in (1, 2):
        for theta in (0.0, np.pi / 3, np.pi):
            report = tilde_dilatation_check(power, theta, crosscheck_order=crosscheck_order)
            records.append(_record(
                f"product_dilatation[n={power},theta={theta:.6f}]",
                "the dilatation of F*f stays below 1 in modulus and matches the product series",
                report.value, 1.0, passed=report.passed,
            ))

    LF = hadamard(L, F).product
    sp = sense_preserving_check(LF)
    records.append(_record("L_times_F_sense_preserving", "L*F is sense-preserving", sp.value, 0.0, passed=sp.passed))
    z = conjugate_collision(LF, 0.95)
    if z is None:
        records.append(_record("L_times_F_not_univalent", "L*F is not univalent", "no collision found", "collision", passed=False))
    else:
        inj = injectivity_sample_check(LF, extra_points=(z, np.conj(z)))
        records.append(_record(
            "L_times_F_not_univalent",
            "L*F is not univalent (sampled check must fail)",
            inj.value, 0.0, passed=not inj.passed,
        ))

    l = make_generator(GeneratorKind.HALF_PLANE_L, order)
    same = convex_combination_convolve(l, 1.0, F)
    diff = max(np.max(np.abs(same.h.coeffs - F.h.coeffs)), np.max(np.abs(same.g.coeffs - F.g.coeffs)))
    records.append(_record("identity_convolution", "(l + conj(l)) * F = F", diff, 0.0, 1e-15))
    return records


# (order, n_theta, crosscheck_order) -> records
_RUNNERS: Dict[str, Callable[[int, int, int], List[VerificationRecord]]] = {
    "coefficients": lambda order, n_theta, cross: coefficients_suite(order),
    "bounds": lambda order, n_theta, cross: bounds_suite(order),
    "radii": lambda order, n_theta, cross: radii_suite(order, n_theta),
    "convolution": lambda order, n_theta, cross: convolution_suite(order, cross),
}


def run_suite(
    suite: str,
    order: int = DEFAULT_TRUNC_ORDER,
    n_theta: int = DEFAULT_THETA_GRID,
    crosscheck_order: int = DEFAULT_CROSSCHECK_ORDER,
) -> VerificationReport:
    if suite != "all" and suite not in _RUNNERS:
        raise InvalidParameterError(f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    names = SUITES if suite == "all" else (suite,)
    records: List[VerificationRecord] = []
    for name in names:
        records.extend(_RUNNERS[name](order, n_theta, crosscheck_order))
        logger.info({"event": "suite_done", "suite": name, "records": len(records)})
    return VerificationReport(suite=suite, records=records)
