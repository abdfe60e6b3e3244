"""
Radii of convexity and starlikeness

Numerical side: a circle |z| = r has a convex image when the tangent angle
arg ∂θf increases with θ, and a starlike image when arg f does; both tests
sample the derivative on a θ-grid, refine the grid minimum, and integrate the
total turning. radius_search bisects on r assuming the property is monotone
in r (checked against a linear r-scan first).

Closed-form side: the components A, B, C, D of ∂θF and F for the extremal
map F = Re k + i Im l, the polynomials p(r,u) and q(r,u), and the special
radii 2 - √3, r0 and 4√2 - 5.
"""

import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar

from .config import DEFAULT_THETA_GRID
from .errors import BracketingError, DomainError, InvalidParameterError, NonMonotoneError, PoleError, SingularPointError
from .harmonic_map import HarmonicMap, angular_derivatives, evaluate_f
from .reports import CheckReport, RadiusResult, RadiusTest, SpecialRadii, TangentResidual

logger = logging.getLogger(__name__)

PASS_TOL = 1e-9
TURNING_TOL = 1e-3
SEARCH_R_MIN = 0.01
SEARCH_R_MAX = 0.999
SCAN_POINTS = 50
TANGENT_TOL = 1e-5
POLE_TOL = 0.05
FD_STEP = 1e-4

R_CONVEX = 2.0 - np.sqrt(3.0)
R_STAR_CLASS = 4.0 * np.sqrt(2.0) - 5.0
R0 = np.sqrt((37.0 - 8.0 * np.sqrt(10.0)) / 3.0) / 3.0


# ========================================
# SAMPLED RADIUS TESTS
# ========================================

def _convex_rate(f: HarmonicMap, r: float) -> Callable:
    """θ -> d/dθ arg(∂θ f)."""

    def rate(theta):
        d1, d2 = angular_derivatives(f, r, theta, prefer_exact=True)
        d1 = np.asarray(d1)
        if np.any(np.abs(d1) < 1e-14):
            raise SingularPointError("∂f/∂θ vanishes", complex(np.ravel(r * np.exp(1j * np.asarray(theta)))[0]))
        return np.imag(np.asarray(d2) / d1)

    return rate


def _starlike_rate(f: HarmonicMap, r: float) -> Callable:
    """θ -> d/dθ arg f."""

    def rate(theta):
        z = r * np.exp(1j * np.asarray(theta, dtype=float))
        d1, _ = angular_derivatives(f, r, theta, prefer_exact=True)
        fz = np.asarray(evaluate_f(f, z, prefer_exact=True))
        if np.any(np.abs(fz) < 1e-14):
            raise SingularPointError("f vanishes on the circle", complex(np.ravel(z)[np.argmin(np.abs(fz))]))
        return np.imag(np.asarray(d1) / fz)

    return rate


def _radius_test(kind: str, rate: Callable, r: float, n_theta: int) -> RadiusTest:
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    step = 2 * np.pi / n_theta
    theta = step * np.arange(n_theta)
    vals = rate(theta)
    k = int(np.argmin(vals))

    # refine between the grid neighbours of the grid minimum
    res = minimize_scalar(lambda t: float(rate(t)), bounds=(theta[k] - step, theta[k] + step),
                          method="bounded", options={"xatol": 1e-12})
    if res.success and res.fun < vals[k]:
        min_val, arg = float(res.fun), float(res.x) % (2 * np.pi)
    else:
        min_val, arg = float(vals[k]), float(theta[k])

    turning = float("nan")
    passed = min_val >= -PASS_TOL
    if passed:
        turning, _ = quad(lambda t: float(rate(t)), -np.pi, np.pi, points=[0.0], limit=500, epsabs=1e-9, epsrel=1e-9)
        passed = abs(turning - 2 * np.pi) <= TURNING_TOL
    logger.debug({"event": "radius_test", "kind": kind, "r": r, "min": min_val, "turning": turning})
    return RadiusTest(kind=kind, r=r, passed=passed, min_derivative=min_val, argmin_theta=arg,
                      total_turning=turning, n_theta=n_theta)


def convex_test_at_radius(f: HarmonicMap, r: float, n_theta: int = DEFAULT_THETA_GRID) -> RadiusTest:
    return _radius_test("convexity", _convex_rate(f, r), r, n_theta)


def starlike_test_at_radius(f: HarmonicMap, r: float, n_theta: int = DEFAULT_THETA_GRID) -> RadiusTest:
    return _radius_test("starlikeness", _starlike_rate(f, r), r, n_theta)


_TESTS = {"convexity": convex_test_at_radius, "starlikeness": starlike_test_at_radius}

# distance kept from the reliable radius of a series-only map
LIMIT_MARGIN = 1e-3


def bracket_transition(
    passes: Callable[[float], bool],
    r_min: float,
    r_max: float,
    n_scan: int,
    tol: float,
    what: str = "test",
) -> Tuple[float, float, List[float], List[bool]]:
    """Scan [r_min, r_max] linearly, then bisect the first pass -> fail switch down to tol.

    Returns (lo, hi, scan_radii, scan_passed); lo == hi == r_max when every
    scanned radius passes. Raises BracketingError if r_min already fails and
    NonMonotoneError if a pass follows a failure in the scan.
    """
    if not passes(r_min):
        raise BracketingError(f"{what} fails already at r={r_min}: no inner radius")

    radii = np.linspace(r_min, r_max, n_scan)
    passed = [bool(passes(float(r))) for r in radii]
    fails = [i for i, ok in enumerate(passed) if not ok]
    if fails and any(passed[fails[0]:]):
        raise NonMonotoneError(f"{what} passes above a failing radius", radii, passed)
    scan_radii = [float(r) for r in radii]
    if not fails:
        return r_max, r_max, scan_radii, passed

    lo, hi = float(radii[fails[0] - 1]), float(radii[fails[0]])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi, scan_radii, passed


def radius_search(
    f: HarmonicMap,
    kind: str,
    tol: float = 1e-6,
    n_theta: int = DEFAULT_THETA_GRID,
    r_min: float = SEARCH_R_MIN,
    r_max: float = SEARCH_R_MAX,
    n_scan: int = SCAN_POINTS,
) -> RadiusResult:
    """Bracket [r_lo, r_hi] of width <= tol where the test switches from pass to fail.

    Assumes the property is monotone in r; a linear r-scan guards the
    assumption. If the test still passes at the upper limit the bracket
    collapses onto it with reached_limit set. For maps without closed forms
    the upper limit is the radius where the truncated series stay reliable,
    so a reached limit there says nothing about larger r.
    """
    if kind not in _TESTS:
        raise InvalidParameterError(f"kind must be convexity or starlikeness, got {kind!r}")
    test = _TESTS[kind]

    limit = r_max
    if f.exact is None:
        reliable = min(f.value_radius, f.derivative_radius) - LIMIT_MARGIN
        if reliable < limit:
            limit = reliable
            logger.warning({"event": "radius_search_truncated", "map": f.label, "order": f.order, "r_max": r_max, "limit": limit})
        if limit <= r_min:
            raise BracketingError(f"series of order {f.order} are reliable only up to r={limit + LIMIT_MARGIN:.4f}")

    lo, hi, radii, passed = bracket_transition(
        lambda r: test(f, r, n_theta).passed, r_min, limit, n_scan, tol, what=f"{kind} test"
    )
    reached = lo == hi == limit
    logger.info({"event": "radius_search", "map": f.label, "kind": kind, "r_lo": lo, "r_hi": hi, "reached_limit": reached})
    return RadiusResult(kind=kind, r_lo=lo, r_hi=hi, grid_theta=n_theta, tol=tol, reached_limit=reached,
                        search_limit=limit, scan_radii=radii, scan_passed=passed)


# ========================================
# CLOSED FORMS FOR F
# ========================================

def closed_form_F(expr: str, r: float, theta):
    """∂θF = A + iB and F = C + iD on |z| = r.

    B uses the numerator r[(1+r²)cosθ - 2r], which is Im ∂θF = Re(z/(1-z)²);
    it coincides with C.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    th = np.asarray(theta, dtype=float)
    s = 1 - 2 * r * np.cos(th) + r * r  # |1 - z|^2
    if expr == "A":
        out = -r * ((1 - 6 * r ** 2 + r ** 4) * np.sin(th) + r * (1 + r ** 2) * np.sin(2 * th)) / s ** 3
    elif expr in ("B", "C"):
        out = r * ((1 + r ** 2) * np.cos(th) - 2 * r) / s ** 2
    elif expr == "D":
        out = r * np.sin(th) / s
    else:
        raise InvalidParameterError(f"expr must be one of A, B, C, D, got {expr!r}")
    return float(out) if out.ndim == 0 else out


def polynomial_p(r: float, u):
    u = np.asarray(u, dtype=float)
    r2 = r * r
    out = (
        1 + 4 * r2 - 26 * r2 ** 2 + 4 * r2 ** 3 + r2 ** 4
        - 6 * u * r * (1 + r2) * (1 + r2 ** 2 - 6 * r2)
        - 12 * r2 * u ** 2 * (1 + r2) ** 2
        + 4 * r * u ** 3 * (1 + r2) * (1 + r2 ** 2)
    )
    return float(out) if out.ndim == 0 else out


def polynomial_q(r: float, u):
    u = np.asarray(u, dtype=float)
    r2 = r * r
    out = (1 - r2) ** 2 - 2 * r * u * (1 + r2) + 8 * r2 * u ** 2 - 2 * r * (1 + r2) * u ** 3
    return float(out) if out.ndim == 0 else out


def dq_du(r: float, u):
    u = np.asarray(u, dtype=float)
    out = -2 * r * (1 + r * r) + 16 * r * r * u - 6 * r * (1 + r * r) * u ** 2
    return float(out) if out.ndim == 0 else out


def q_discriminant(r: float) -> float:
    return -3 + 10 * r ** 2 - 3 * r ** 4


def q_local_minimum(r: float) -> Tuple[float, float]:
    """(u*, q(r, u*)) at the local minimum of the cubic q(r, ·)."""
    disc = q_discriminant(r)
    if disc < 0:
        raise DomainError(f"q(r, ·) has no critical point for r={r} (needs r >= 1/√3)")
    u_star = (4 * r - np.sqrt(disc)) / (3 * (1 + r * r))
    return float(u_star), polynomial_q(r, u_star)


def min_over_u(kind: str, r: float, n_u: int = 2001) -> float:
    """min over u in [-1, 1] of p(r, u) or q(r, u) on a uniform grid."""
    u = np.linspace(-1.0, 1.0, n_u)
    poly = {"p": polynomial_p, "q": polynomial_q}.get(kind)
    if poly is None:
        raise InvalidParameterError(f"kind must be 'p' or 'q', got {kind!r}")
    return float(np.min(poly(r, u)))


def p_root_profile(u_values: Sequence[float], r_hi: float = SEARCH_R_MAX) -> CheckReport:
    """Root r(u) of p(·, u) in (0, r_hi) where one is bracketed, and whether it increases with u."""
    rows = []
    for u in u_values:
        if polynomial_p(r_hi, u) < 0:
            rows.append({"u": float(u), "root": brentq(lambda r: polynomial_p(r, u), 1e-9, r_hi, xtol=1e-14)})
        else:
            rows.append({"u": float(u), "root": None})
    roots = [row["root"] for row in rows if row["root"] is not None]
    increasing = bool(np.all(np.diff(roots) >= -1e-12)) if len(roots) > 1 else True
    return CheckReport(
        name="p_root_profile",
        passed=increasing,
        value=roots[0] if roots else None,
        details={"rows": rows},
    )


def _tan_psi(r: float, theta):
    return closed_form_F("B", r, theta) / closed_form_F("A", r, theta)


def _tan_phi(r: float, theta):
    return closed_form_F("D", r, theta) / closed_form_F("C", r, theta)


def _five_point(fn: Callable, theta: float, h: float = FD_STEP) -> float:
    return (-fn(theta + 2 * h) + 8 * fn(theta + h) - 8 * fn(theta - h) + fn(theta - 2 * h)) / (12 * h)


def identity_check_tangent(r: float, u: float, pole_tol: float = POLE_TOL) -> TangentResidual:
    """Residuals of the derivative identities for tan Ψ (→ p) and tan Φ (→ q) at θ = arccos u."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    if not -1.0 < u < 1.0:
        raise DomainError("u = ±1 degenerates the identity (sin θ = 0)")
    psi_factor = (1 - 6 * r ** 2 + r ** 4) + 2 * r * (1 + r ** 2) * u
    phi_factor = (1 + r ** 2) * u - 2 * r
    if abs(psi_factor) < pole_tol or abs(phi_factor) < pole_tol:
        raise PoleError(f"(r={r}, u={u}) is within {pole_tol} of a tangent pole")

    theta = float(np.arccos(u))
    psi_lhs = psi_factor ** 2 * (1 - u * u) * _five_point(lambda t: _tan_psi(r, t), theta)
    phi_lhs = phi_factor ** 2 * _five_point(lambda t: _tan_phi(r, t), theta)
    p_val = polynomial_p(r, u)
    q_val = polynomial_q(r, u)
    return TangentResidual(
        r=r, u=u,
        psi_lhs=psi_lhs, p_value=p_val, psi_residual=abs(psi_lhs - p_val),
        phi_lhs=phi_lhs, q_value=q_val, phi_residual=abs(phi_lhs - q_val),
        threshold=TANGENT_TOL,
    )


def starlike_condition(r: float) -> float:
    """27(1+r²)² q(r, u*): 27 - 72r² + 58r⁴ - 72r⁶ + 27r⁸ + 4r(3 - 10r² + 3r⁴)√(-3+10r²-3r⁴)."""
    disc = max(q_discriminant(r), 0.0)
    r2 = r * r
    poly = 27 - 72 * r2 + 58 * r2 ** 2 - 72 * r2 ** 3 + 27 * r2 ** 4
    return poly + 4 * r * (3 - 10 * r2 + 3 * r2 ** 2) * np.sqrt(disc)


def solve_special_radii() -> SpecialRadii:
    try:
        r_convex = brentq(lambda r: 1 - 4 * r + r * r, 0.0, 0.5, xtol=1e-16, rtol=4.5e-16)
        r_star = brentq(starlike_condition, 1 / np.sqrt(3.0), 1.0, xtol=1e-16, rtol=4.5e-16)
    except ValueError as e:
        raise BracketingError(f"root bracketing failed: {e}") from e
    logger.info({"event": "solve_special_radii", "r_convex": r_convex, "r_star": r_star})
    return SpecialRadii(
        r_convex=r_convex,
        r_star=r_star,
        r_star_closed_form=float(R0),
        r_close_to_convex_star=float(R_STAR_CLASS),
        r_close_to_convex_conv=float(R_CONVEX),
    )
