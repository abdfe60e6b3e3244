"""
Coefficient classifiers and M(alpha) checks

Truncated sums stand in for the infinite coefficient series; every report
records the truncation order. Grid checks are necessary conditions only.

Usage:
    f = make_named(CatalogEntry("F"), 64)
    m_alpha_check(f, 1.0).passed
    lemma13_orders(f)
"""

import logging
from typing import Dict, List, Tuple

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, InvalidParameterError, NormalizationError, SingularPointError
from .harmonic_map import ExactForms, HarmonicMap, analytic_derivatives, evaluate_f, jacobian, polar_grid
from .radius_analysis import convex_test_at_radius, starlike_test_at_radius
from .reports import CheckReport, ClassificationReport, cpair
from .series import ClosedForm, TruncatedSeries, scale

logger = logging.getLogger(__name__)

COEFF_TOL = 1e-10
BOUND_TOL = 1e-12
GROWTH_TOL = 1e-9
KAPLAN_TOL = 1e-6
KAPLAN_EPSILONS = 16
ORDER_CAP = float(np.nextafter(1.0, 0.0))


def _order(value: float) -> Tuple[float, bool]:
    """Clamp an order into [0, 1); exact 1 is flagged degenerate."""
    if value >= 1.0:
        return ORDER_CAP, True
    return max(value, 0.0), False


def _weighted_sum(f: HarmonicMap, power: int) -> float:
    n = np.arange(f.order + 1)
    a = np.abs(f.h.coeffs[: f.order + 1])
    b = np.abs(f.g.coeffs[: f.order + 1])
    return float(np.sum((n[2:] ** power) * (a[2:] + b[2:])))


# ========================================
# ORDER CLASSIFIERS
# ========================================

def lemma13_orders(f: HarmonicMap) -> Tuple[ClassificationReport, ClassificationReport]:
    """Fully starlike / convex orders from Σ n(|a_n|+|b_n|) and Σ n²(|a_n|+|b_n|)."""
    if abs(f.g[1]) > 1e-12:
        raise NormalizationError(f"{f.label or 'map'}: coefficient condition needs b_1 = 0")

    lam1 = _weighted_sum(f, 1)
    lam2 = _weighted_sum(f, 2)

    passed1 = lam1 <= 1.0
    star1, degen1 = _order(2 * (1 - lam1) / (2 + lam1)) if passed1 else (None, False)
    first = ClassificationReport(
        condition_name="sum n(|a_n|+|b_n|) <= 1",
        condition_value=lam1,
        threshold=1.0,
        passed=passed1,
        order_starlike=star1,
        degenerate=degen1,
        truncation_order=f.order,
    )

    passed2 = lam2 <= 1.0
    star2 = conv2 = None
    degen2 = False
    if passed2:
        star2, d_s = _order(2 * (2 - lam2) / (4 + lam2))
        conv2, d_c = _order(2 * (1 - lam2) / (2 + lam2))
        degen2 = d_s or d_c
    second = ClassificationReport(
        condition_name="sum n^2(|a_n|+|b_n|) <= 1",
        condition_value=lam2,
        threshold=1.0,
        passed=passed2,
        order_starlike=star2,
        order_convex=conv2,
        degenerate=degen2,
        truncation_order=f.order,
    )
    logger.info({"event": "lemma13_orders", "map": f.label, "lambda1": lam1, "lambda2": lam2})
    return first, second


def theorem2_classify(h: TruncatedSeries, alpha: complex, power: int) -> ClassificationReport:
    """Orders of f = h + conj(g), g' = α z h', from Σ n^power |a_n| <= 1."""
    if power not in (2, 3):
        raise InvalidParameterError(f"power must be 2 or 3, got {power}")
    if abs(h[0]) > 1e-12 or abs(h[1] - 1) > 1e-12:
        raise NormalizationError("h must satisfy h(0)=0, h'(0)=1")
    n = np.arange(h.order + 1)
    total = float(np.sum(n[2:] ** power * np.abs(h.coeffs[2:])))
    a = abs(complex(alpha))
    passed = total <= 1.0

    star = conv = None
    degenerate = False
    close_to_convex = None
    if passed:
        if power == 2:
            close_to_convex = a <= 1.0
            if a <= 1.0 / 3.0:
                star, degenerate = _order(2 * (1 - 3 * a) / (5 + 3 * a))
        elif a <= 2.0 / 11.0:
            star, d_s = _order(2 * (6 - 11 * a) / (18 + 11 * a))
            conv, d_c = _order(2 * (2 - 11 * a) / (10 + 11 * a))
            degenerate = d_s or d_c
    return ClassificationReport(
        condition_name=f"sum n^{power}|a_n| <= 1",
        condition_value=total,
        threshold=1.0,
        passed=passed,
        order_starlike=star,
        order_convex=conv,
        degenerate=degenerate,
        close_to_convex=close_to_convex,
        truncation_order=h.order,
    )


def coefficient_relation_residual(f: HarmonicMap, alpha: complex) -> float:
    """max_n |(n+1) b_{n+1} - n α a_n| over the truncation, including b_1."""
    N = f.order
    a = f.h.coeffs[: N + 1]
    b = f.g.coeffs[: N + 1]
    n = np.arange(1, N)
    resid = np.abs((n + 1) * b[2:] - n * complex(alpha) * a[1:-1])
    return float(max(abs(b[1]), resid.max(initial=0.0)))


# ========================================
# M(alpha) MEMBERSHIP
# ========================================

def m_alpha_check(
    f: HarmonicMap,
    alpha: complex,
    r_max: float = 0.99,
    grid: Tuple[int, int] = (64, 256),
) -> CheckReport:
    """(a) (n+1) b_{n+1} = n α a_n; (b) Re(1 + z h''/h') > -1/2 on the grid."""
    if abs(complex(alpha)) > 1 + 1e-15:
        raise InvalidParameterError(f"|alpha| must be <= 1, got {alpha}")
    if not 0.0 < r_max < 1.0:
        raise DomainError(f"r_max must lie in (0, 1), got {r_max}")

    resid = coefficient_relation_residual(f, alpha)
    relation_ok = resid <= COEFF_TOL

    _, z = polar_grid(r_max, *grid)
    dh, _, d2h, _ = analytic_derivatives(f, z)
    small = np.abs(dh) < 1e-14
    if np.any(small):
        raise SingularPointError("h' vanishes", complex(z.ravel()[np.argmax(small)]))
    re_val = np.real(1 + z * d2h / dh)
    min_re = float(re_val.min())
    convexity_ok = min_re > -0.5

    logger.info({"event": "m_alpha_check", "map": f.label, "relation_residual": resid, "min_re": min_re})
    return CheckReport(
        name="m_alpha",
        passed=relation_ok and convexity_ok,
        value=min_re,
        threshold=-0.5,
        truncation_order=f.order,
        grid=grid,
        details={
            "relation_passed": relation_ok,
            "relation_residual": resid,
            "order_condition_passed": convexity_ok,
            "argmin": cpair(z.ravel()[np.argmin(re_val)]),
            "alpha": cpair(alpha),
        },
    )


def thm31_bounds_check(f: HarmonicMap, alpha: complex, samples: int = 10_000, seed: int = 31) -> CheckReport:
    """Coefficient bounds |a_n| <= (n+1)/2, |b_n| <= (n-1)|α|/2 and the growth bound."""
    a_abs = abs(complex(alpha))
    N = f.order
    n = np.arange(2, N + 1)
    slack_a = (n + 1) / 2 - np.abs(f.h.coeffs[2 : N + 1])
    slack_b = (n - 1) * a_abs / 2 - np.abs(f.g.coeffs[2 : N + 1])
    coeff_ok = bool(slack_a.min() >= -BOUND_TOL and slack_b.min() >= -BOUND_TOL)

    rng = np.random.default_rng(seed)
    z = 0.9 * np.sqrt(rng.uniform(0, 1, samples)) * np.exp(2j * np.pi * rng.uniform(0, 1, samples))
    rz = np.abs(z)
    bound = rz / (1 - rz) ** 2 * (1 - 0.5 * (1 - a_abs) * rz)
    slack_growth = bound - np.abs(evaluate_f(f, z))
    growth_ok = bool(slack_growth.min() >= -GROWTH_TOL)

    logger.info({"event": "thm31_bounds_check", "map": f.label, "min_growth_slack": float(slack_growth.min())})
    return CheckReport(
        name="coefficient_and_growth_bounds",
        passed=coeff_ok and growth_ok,
        value=float(min(slack_a.min(), slack_b.min(), slack_growth.min())),
        threshold=0.0,
        necessary_only=False,
        truncation_order=N,
        details={
            "coefficients_passed": coeff_ok,
            "growth_passed": growth_ok,
            "min_slack_a": float(slack_a.min()),
            "min_slack_b": float(slack_b.min()),
            "max_slack_a": float(slack_a.max()),
            "max_slack_b": float(slack_b.max()),
            "min_growth_slack": float(slack_growth.min()),
            "samples": samples,
        },
    )


# ========================================
# AREA
# ========================================

def area_series(f: HarmonicMap, alpha: complex) -> float:
    """π(1 - |α|²/2) + π Σ (n - n²|α|²/(n+1)) |a_n|²."""
    a2 = abs(complex(alpha)) ** 2
    n = np.arange(2, f.h.order + 1)
    terms = (n - n ** 2 * a2 / (n + 1)) * np.abs(f.h.coeffs[2:]) ** 2
    return float(np.pi * (1 - a2 / 2) + np.pi * terms.sum())


def jacobian_area(f: HarmonicMap, r_max: float = 1.0, n_r: int = 400, n_theta: int = 400) -> float:
    """Midpoint polar quadrature of the Jacobian over |z| < r_max."""
    dr = r_max / n_r
    r = (np.arange(n_r) + 0.5) * dr
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    z = r[:, None] * np.exp(1j * theta[None, :])
    J = jacobian(f, z)
    return float(np.sum(J * r[:, None]) * dr * (2 * np.pi / n_theta))


# ========================================
# KAPLAN-TYPE ARC INTEGRALS
# ========================================

def poisson_kernel(zeta: complex, theta):
    """(1 - |ζ|²) / |e^{iθ} - ζ|²."""
    zeta = complex(zeta)
    if abs(zeta) >= 1:
        raise DomainError(f"Poisson kernel needs |zeta| < 1, got {zeta}")
    out = (1 - abs(zeta) ** 2) / np.abs(np.exp(1j * np.asarray(theta, dtype=float)) - zeta) ** 2
    return float(out) if np.ndim(out) == 0 else out


def _kaplan_integrand(f: HarmonicMap, epsilon: complex, r: float):
    def integrand(theta):
        z = r * np.exp(1j * np.atleast_1d(theta))
        dh, dg, d2h, d2g = analytic_derivatives(f, z, prefer_exact=True)
        d1 = dh + epsilon * dg
        if np.any(np.abs(d1) < 1e-14):
            raise SingularPointError("F_eps' vanishes on the arc", complex(z[np.argmin(np.abs(d1))]))
        vals = np.real(1 + z * (d2h + epsilon * d2g) / d1)
        return float(vals[0]) if np.ndim(theta) == 0 else vals

    return integrand


def kaplan_integral_check(f: HarmonicMap, epsilon: complex, r: float, theta1: float, theta2: float) -> float:
    """∫_{θ1}^{θ2} Re(1 + z F_ε''/F_ε') dθ on |z| = r, F_ε = h + ε g.

    A value above -π (up to 1e-6) is consistent with close-to-convexity.
    """
    if not 0.0 < theta2 - theta1 <= 2 * np.pi + 1e-12:
        raise DomainError("need 0 < theta2 - theta1 <= 2π")
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    integrand = _kaplan_integrand(f, complex(epsilon), r)
    points = [t for t in (0.0, 2 * np.pi, -2 * np.pi) if theta1 < t < theta2]
    value, _ = quad(integrand, theta1, theta2, epsabs=1e-11, epsrel=1e-11, limit=400, points=points or None)
    return float(value)


def worst_kaplan_arc(f: HarmonicMap, epsilon: complex, r: float, n_theta: int = 4096) -> Tuple[float, float, float]:
    """Arc [θ1, θ2] (length < 2π) minimizing the Kaplan integral; returns (θ1, θ2, value).

    Scans cumulative sums on a periodic grid, then re-integrates the best arc.
    """
    integrand = _kaplan_integrand(f, complex(epsilon), r)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    vals = integrand(theta)
    step = 2 * np.pi / n_theta
    # C[j] = integral from 0 to theta_j (left Riemann on the periodic grid)
    C = np.concatenate([[0.0], np.cumsum(vals) * step])
    total = C[-1]

    # arcs inside one period: min over i < j of C[j] - C[i]
    run_max = np.maximum.accumulate(C)
    inner = C - run_max
    j_in = int(np.argmin(inner))
    i_in = int(np.argmax(C[: j_in + 1]))
    # arcs wrapping past 2π: total - (C[i] - C[j]) with j < i
    run_min = np.minimum.accumulate(C)
    outer = total - (C - run_min)
    i_out = int(np.argmin(outer))
    j_out = int(np.argmin(C[: i_out + 1]))

    if inner[j_in] <= outer[i_out] or i_out == j_out:
        t1, t2 = i_in * step, j_in * step
    else:
        t1, t2 = i_out * step, j_out * step + 2 * np.pi
    if t2 - t1 <= 0:
        return t1, t1, 0.0
    t2 = min(t2, t1 + 2 * np.pi - step)
    return float(t1), float(t2), kaplan_integral_check(f, epsilon, r, t1, t2)


def kaplan_sweep(f: HarmonicMap, r: float, n_epsilon: int = KAPLAN_EPSILONS, n_theta: int = 4096) -> CheckReport:
    """Full-period integral and worst sub-arc for ε = e^{2πik/n}, k = 0..n-1."""
    records: List[Dict] = []
    for k in range(n_epsilon):
        eps = np.exp(2j * np.pi * k / n_epsilon)
        full = kaplan_integral_check(f, eps, r, 0.0, 2 * np.pi)
        t1, t2, worst = worst_kaplan_arc(f, eps, r, n_theta)
        records.append({"epsilon": cpair(eps), "full_period": full, "worst_arc": [t1, t2], "worst_value": worst})
    worst_value = min(rec["worst_value"] for rec in records)
    full_err = max(abs(rec["full_period"] - 2 * np.pi) for rec in records)
    passed = worst_value > -np.pi - KAPLAN_TOL
    logger.info({"event": "kaplan_sweep", "map": f.label, "r": r, "worst_value": worst_value, "full_period_error": full_err})
    return CheckReport(
        name="kaplan_sweep",
        passed=passed,
        value=worst_value,
        threshold=-np.pi,
        truncation_order=f.order,
        details={"r": r, "full_period_max_error": full_err, "epsilons": records},
    )


def epsilon_h_check(h_map: HarmonicMap, epsilon: complex, radii, n_theta: int = 1024) -> CheckReport:
    """f = h + ε conj(h), |ε| < 1: sampled fully-convex and fully-starlike tests on each radius.

    ``h_map`` supplies h (its co-analytic part is ignored).
    """
    eps = complex(epsilon)
    if abs(eps) >= 1:
        raise InvalidParameterError(f"|epsilon| must be < 1, got {eps}")
    f = epsilon_h_map(h_map, eps)
    rows = []
    for r in radii:
        cv = convex_test_at_radius(f, r, n_theta)
        st = starlike_test_at_radius(f, r, n_theta)
        rows.append({"r": r, "convex": cv.passed, "starlike": st.passed, "min_convex": cv.min_derivative, "min_starlike": st.min_derivative})
    return CheckReport(
        name="h_plus_epsilon_conj_h",
        passed=all(row["convex"] and row["starlike"] for row in rows),
        truncation_order=f.order,
        details={"epsilon": cpair(eps), "radii": rows},
    )


def epsilon_h_map(h_map: HarmonicMap, epsilon: complex) -> HarmonicMap:
    eps = complex(epsilon)
    exact = None
    if h_map.exact is not None:
        hf = h_map.exact.h
        exact = ExactForms(
            h=hf,
            g=ClosedForm(lambda z: eps * hf.value(z), lambda z: eps * hf.d1(z), lambda z: eps * hf.d2(z)),
        )
    return HarmonicMap(h=h_map.h, g=scale(h_map.h, eps), exact=exact, label=f"{h_map.label}+eps*conj(h)")
