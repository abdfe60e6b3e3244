"""
Harmonic mappings f = h + conj(g) on the unit disk

The co-analytic part is stored as the analytic function g; conjugation
happens only in evaluate_f. A truncated series is evaluated only inside its
reliable radius, where the estimated tail stays below SERIES_TOL relative to
the series size. Closed-form evaluators (when attached) take over beyond that
radius and always beyond 0.7; maps without them refuse points outside it.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.spatial.distance import pdist, squareform

from .config import SERIES_RADIUS, SERIES_TOL
from .errors import DomainError, InvalidParameterError, NormalizationError, SingularPointError
from .reports import CheckReport, cpair
from .series import ClosedForm, TruncatedSeries, check_in_disk, differentiate, reliable_radius

logger = logging.getLogger(__name__)

CONSISTENCY_POINTS = 20
CONSISTENCY_RADIUS = 0.5
CONSISTENCY_TOL = 1e-8
GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


@dataclass(frozen=True)
class ExactForms:
    h: ClosedForm
    g: ClosedForm


@dataclass(frozen=True)
class HarmonicMap:
    h: TruncatedSeries
    g: TruncatedSeries
    exact: Optional[ExactForms] = None
    label: str = ""
    family_alpha: Optional[complex] = field(default=None, compare=False)

    def __post_init__(self):
        if abs(self.h[0]) > 1e-12 or abs(self.h[1] - 1) > 1e-12:
            raise NormalizationError(f"{self.label or 'map'}: need h(0)=0 and h'(0)=1")
        if self.exact is not None:
            self._check_exact()

    @property
    def order(self) -> int:
        return min(self.h.order, self.g.order)

    @cached_property
    def dh(self) -> TruncatedSeries:
        return differentiate(self.h, 1)

    @cached_property
    def dg(self) -> TruncatedSeries:
        return differentiate(self.g, 1)

    @cached_property
    def d2h(self) -> TruncatedSeries:
        return differentiate(self.h, 2)

    @cached_property
    def d2g(self) -> TruncatedSeries:
        return differentiate(self.g, 2)

    @cached_property
    def value_radius(self) -> float:
        """Radius up to which the series for h and g are reliable."""
        return reliable_radius((self.h, self.g), SERIES_TOL)

    @cached_property
    def derivative_radius(self) -> float:
        """Radius up to which the series for h', g', h'', g'' are reliable."""
        return reliable_radius((self.dh, self.dg, self.d2h, self.d2g), SERIES_TOL)

    def _check_exact(self):
        rho = CONSISTENCY_RADIUS
        rng = np.random.default_rng(20)
        z = rho * np.sqrt(rng.uniform(0, 1, CONSISTENCY_POINTS)) * np.exp(2j * np.pi * rng.uniform(0, 1, CONSISTENCY_POINTS))
        pairs = [
            (self.h, self.exact.h.value), (self.g, self.exact.g.value),
            (self.dh, self.exact.h.d1), (self.dg, self.exact.g.d1),
            (self.d2h, self.exact.h.d2), (self.d2g, self.exact.g.d2),
        ]
        for series, fn in pairs:
            err = np.max(np.abs(np.polynomial.polynomial.polyval(z, series.coeffs) - fn(z)))
            if err > CONSISTENCY_TOL:
                raise NormalizationError(
                    f"{self.label or 'map'}: closed form disagrees with series by {err:.3e} on |z| <= {rho}"
                    f" (order {self.order})"
                )


def _use_exact(f: HarmonicMap, zz: np.ndarray, prefer_exact: bool, radius: float) -> np.ndarray:
    """Mask of points evaluated by closed form; radius is where the series stop being reliable."""
    if f.exact is None:
        worst = float(np.max(np.abs(zz), initial=0.0))
        if worst > radius:
            raise DomainError(
                f"{f.label or 'map'}: series truncated at order {f.order} is not accurate beyond "
                f"r={radius:.4f} (asked for |z|={worst:.4f}); raise the truncation order"
            )
        return np.zeros(zz.shape, dtype=bool)
    if prefer_exact:
        return np.ones(zz.shape, dtype=bool)
    return np.abs(zz) > min(SERIES_RADIUS, radius)


def _mixed(series: TruncatedSeries, exact_fn, zz: np.ndarray, mask: np.ndarray) -> np.ndarray:
    out = np.empty(zz.shape, dtype=np.complex128)
    if np.any(~mask):
        out[~mask] = np.polynomial.polynomial.polyval(zz[~mask], series.coeffs)
    if np.any(mask):
        out[mask] = exact_fn(zz[mask])
    return out


def _shaped(zin, out: np.ndarray, cast=complex):
    """Scalar for scalar input, array of the input's shape otherwise."""
    if np.ndim(zin) == 0:
        return cast(out.ravel()[0])
    return out.reshape(np.shape(zin))


def analytic_values(f: HarmonicMap, z, prefer_exact: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    zz = np.atleast_1d(check_in_disk(z))
    mask = _use_exact(f, zz, prefer_exact, f.value_radius)
    ex = f.exact
    h = _mixed(f.h, ex.h.value if ex else None, zz, mask)
    g = _mixed(f.g, ex.g.value if ex else None, zz, mask)
    return h, g


def analytic_derivatives(f: HarmonicMap, z, prefer_exact: bool = False):
    """(h', g', h'', g'') at z, arrays of the broadcast shape of z."""
    zz = np.atleast_1d(check_in_disk(z))
    mask = _use_exact(f, zz, prefer_exact, f.derivative_radius)
    ex = f.exact
    return (
        _mixed(f.dh, ex.h.d1 if ex else None, zz, mask),
        _mixed(f.dg, ex.g.d1 if ex else None, zz, mask),
        _mixed(f.d2h, ex.h.d2 if ex else None, zz, mask),
        _mixed(f.d2g, ex.g.d2 if ex else None, zz, mask),
    )


def evaluate_f(f: HarmonicMap, z, prefer_exact: bool = False):
    h, g = analytic_values(f, z, prefer_exact)
    return _shaped(z, h + np.conj(g))


def dilatation(f: HarmonicMap, z, prefer_exact: bool = False):
    """w = g'/h'."""
    dh, dg, _, _ = analytic_derivatives(f, z, prefer_exact)
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    bad = np.abs(dh) < 1e-14
    if np.any(bad):
        raise SingularPointError("h' vanishes", complex(zz.ravel()[np.argmax(bad)]))
    return _shaped(z, dg / dh)


def jacobian(f: HarmonicMap, z, prefer_exact: bool = False):
    """|h'|^2 - |g'|^2."""
    dh, dg, _, _ = analytic_derivatives(f, z, prefer_exact)
    return _shaped(z, np.abs(dh) ** 2 - np.abs(dg) ** 2, cast=float)


def angular_derivatives(f: HarmonicMap, r: float, theta, prefer_exact: bool = False):
    """(∂f/∂θ, ∂²f/∂θ²) on the circle |z| = r at the angles theta."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    th = np.asarray(theta, dtype=float)
    z = r * np.exp(1j * np.atleast_1d(th))
    dh, dg, d2h, d2g = analytic_derivatives(f, z, prefer_exact)
    zh, zg = z * dh, z * dg
    d1 = 1j * zh - 1j * np.conj(zg)
    d2 = -(zh + z * z * d2h) - np.conj(zg + z * z * d2g)
    if th.ndim == 0:
        return complex(d1[0]), complex(d2[0])
    return d1, d2


def polar_grid(r_max: float, n_r: int, n_theta: int) -> Tuple[np.ndarray, np.ndarray]:
    """Radii r_max*j/n_r (j=1..n_r) and uniform angles; returns (radii, z[n_r, n_theta])."""
    radii = r_max * np.arange(1, n_r + 1) / n_r
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    return radii, radii[:, None] * np.exp(1j * theta[None, :])


def sense_preserving_check(f: HarmonicMap, r_max: float = 0.95, grid: Tuple[int, int] = (32, 128)) -> CheckReport:
    n_r, n_theta = grid
    if r_max >= 1.0 or r_max <= 0.0:
        raise DomainError(f"r_max must lie in (0, 1), got {r_max}")
    if min(grid) < 8:
        raise DomainError(f"grid dimensions must be >= 8, got {grid}")

    _, z = polar_grid(r_max, n_r, n_theta)
    J = jacobian(f, z)
    bad = np.argwhere(J <= 0.0)
    details = {"min_jacobian": float(J.min())}
    if bad.size:
        j, k = bad[0]
        details["first_violation"] = cpair(z[j, k])
        details["first_violation_radius"] = float(abs(z[j, k]))
    logger.info({"event": "sense_preserving_check", "map": f.label, "min_jacobian": float(J.min()), "violations": int(len(bad))})
    return CheckReport(
        name="sense_preserving",
        passed=not bad.size,
        value=float(J.min()),
        threshold=0.0,
        truncation_order=f.order,
        grid=(n_r, n_theta),
        details=details,
    )


def sunflower_sample(r_max: float, n: int) -> np.ndarray:
    """Quasi-uniform deterministic points in |z| <= r_max."""
    k = np.arange(n)
    return r_max * np.sqrt((k + 0.5) / n) * np.exp(1j * GOLDEN_ANGLE * k)


def injectivity_sample_check(
    f: HarmonicMap,
    r_max: float = 0.9,
    n_samples: int = 1000,
    delta: float = 0.05,
    extra_points: Sequence[complex] = (),
    collision_tol: float = 1e-9,
) -> CheckReport:
    """Smallest image distance between preimages at least delta apart.

    A necessary test only: passing never certifies univalence.
    """
    if n_samples > 2000:
        raise DomainError(f"n_samples must be <= 2000 (quadratic cost), got {n_samples}")
    z = np.concatenate([sunflower_sample(r_max, n_samples), np.asarray(extra_points, dtype=np.complex128)])
    w = np.atleast_1d(evaluate_f(f, z))

    dom = squareform(pdist(np.column_stack([z.real, z.imag])))
    img = squareform(pdist(np.column_stack([w.real, w.imag])))
    img[dom < delta] = np.inf
    i, j = np.unravel_index(np.argmin(img), img.shape)
    min_dist = float(img[i, j])
    collided = min_dist < collision_tol
    logger.info({"event": "injectivity_sample_check", "map": f.label, "min_image_distance": min_dist, "collision": bool(collided)})
    return CheckReport(
        name="injectivity_sample",
        passed=not collided,
        value=min_dist,
        threshold=collision_tol,
        truncation_order=f.order,
        details={
            "pair": [cpair(z[i]), cpair(z[j])],
            "images": [cpair(w[i]), cpair(w[j])],
            "delta": delta,
            "n_points": int(z.size),
        },
    )


def conjugate_collision(f: HarmonicMap, r: float, n_theta: int = 2048) -> Optional[complex]:
    """A point z = re^{iθ}, 0 < θ < π, with f(z) real, hence f(z) = f(conj z).

    Needs real coefficients so that f(conj z) = conj f(z). Returns None when
    Im f keeps its sign on the upper half circle.
    """
    if np.any(np.abs(f.h.coeffs.imag) > 0) or np.any(np.abs(f.g.coeffs.imag) > 0):
        raise InvalidParameterError("conjugate collisions need real coefficients")
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")

    def im_f(theta):
        return float(np.imag(evaluate_f(f, r * np.exp(1j * theta))))

    theta = np.linspace(0.0, np.pi, n_theta + 2)[1:-1]
    vals = np.imag(evaluate_f(f, r * np.exp(1j * theta)))
    flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if not flips.size:
        return None
    k = int(flips[0])
    t = brentq(im_f, theta[k], theta[k + 1], xtol=1e-15)
    logger.debug({"event": "conjugate_collision", "map": f.label, "r": r, "theta": t})
    return complex(r * np.exp(1j * t))
