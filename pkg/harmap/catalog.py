"""
Catalog of named harmonic mappings and the shearing construction

Names double as the CLI ``--function`` vocabulary:

    f_alpha:<re>,<im>   h = (l + k)/2, g = α(k - l)/2
    L                   f_alpha with α = -1 (vertical shear of l, w = -z)
    F                   f_alpha with α = 1  (horizontal shear of l, w = z)
    g_alpha:<re>,<im>   h = z, g = α z^2 / 2
    polynomial_collision  h = z - z^2/2, g = z^2/2 - z^3/3 (not univalent)
    log_shear           h = z/(1-z), g = z/(1-z) + log(1-z)
    M_alpha_member:<re>,<im>  h = z/(1-z) with g' = α z h'

where l(z) = z/(1-z) and k(z) = z/(1-z)^2.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .config import MIN_TRUNC_ORDER
from .errors import InvalidParameterError, NormalizationError, SingularPointError
from .harmonic_map import ExactForms, HarmonicMap, polar_grid
from .series import (
    ClosedForm,
    GeneratorKind,
    TruncatedSeries,
    combine,
    differentiate,
    generator_closed_form,
    integrate,
    integrate_from_origin,
    make_generator,
    scale,
)

logger = logging.getLogger(__name__)


class MapName(str, Enum):
    F_ALPHA = "f_alpha"
    L = "L"
    F = "F"
    G_ALPHA = "g_alpha"
    POLYNOMIAL_COLLISION = "polynomial_collision"
    LOG_SHEAR = "log_shear"
    M_ALPHA_MEMBER = "M_alpha_member"


# Older CLI spellings
ALIASES = {"example21": MapName.POLYNOMIAL_COLLISION, "example22": MapName.LOG_SHEAR}

_NEEDS_ALPHA = {MapName.F_ALPHA, MapName.G_ALPHA, MapName.M_ALPHA_MEMBER}


@dataclass(frozen=True)
class CatalogEntry:
    name: MapName
    alpha: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "name", MapName(self.name))
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.name in _NEEDS_ALPHA and abs(self.alpha) > 1 + 1e-15:
            raise InvalidParameterError(f"{self.name.value} needs |alpha| <= 1, got {self.alpha}")

    @property
    def m_alpha_parameter(self) -> Optional[complex]:
        """The alpha with g' = alpha z h', or None when the map is not of that form."""
        if self.name in _NEEDS_ALPHA:
            return self.alpha
        return {MapName.L: -1.0 + 0j, MapName.F: 1.0 + 0j, MapName.LOG_SHEAR: 1.0 + 0j}.get(self.name)

    @property
    def label(self) -> str:
        if self.name in _NEEDS_ALPHA:
            return f"{self.name.value}:{_fmt(self.alpha.real)},{_fmt(self.alpha.imag)}"
        return self.name.value


def _fmt(x: float) -> str:
    return format(x, ".12g")


def parse_entry(text: str) -> CatalogEntry:
    """Parse ``name`` or ``name:<re>,<im>``."""
    name, _, params = text.strip().partition(":")
    if name in ALIASES:
        name = ALIASES[name]
    try:
        map_name = MapName(name)
    except ValueError:
        raise InvalidParameterError(f"unknown function name: {name!r}") from None
    if not params:
        return CatalogEntry(map_name)
    if map_name not in _NEEDS_ALPHA:
        raise InvalidParameterError(f"{map_name.value} takes no parameters")
    try:
        re_part, im_part = (float(p) for p in params.split(","))
    except ValueError:
        raise InvalidParameterError(f"expected <re>,<im> after ':', got {params!r}") from None
    return CatalogEntry(map_name, complex(re_part, im_part))


# ========================================
# DILATATIONS
# ========================================

@dataclass(frozen=True)
class Dilatation:
    """A polynomial dilatation w with its series and closed form."""
    series: TruncatedSeries
    form: ClosedForm


def monomial_dilatation(coef: complex, n: int, order: int) -> Dilatation:
    """w(z) = coef * z^n."""
    if n < 1:
        raise InvalidParameterError(f"dilatation must vanish at 0, got power {n}")
    coef = complex(coef)
    c = np.zeros(order + 1, dtype=np.complex128)
    if n <= order:
        c[n] = coef
    return Dilatation(
        series=TruncatedSeries(c),
        form=ClosedForm(
            value=lambda z: coef * z ** n,
            d1=lambda z: n * coef * z ** (n - 1),
            d2=lambda z: n * (n - 1) * coef * z ** max(n - 2, 0),
        ),
    )


# ========================================
# SHEARING
# ========================================

def _geometric(w: TruncatedSeries, sign: float, order: int) -> TruncatedSeries:
    """1 / (1 - sign*w) truncated to `order`, for w(0) = 0."""
    sw = sign * w.coeffs[: order + 1]
    term = np.zeros(order + 1, dtype=np.complex128)
    term[0] = 1.0
    total = term.copy()
    for _ in range(order):
        term = np.convolve(term, sw)[: order + 1]
        if not np.any(term):
            break
        total += term
    return TruncatedSeries(total)


def _shear(phi: TruncatedSeries, phi_form: Optional[ClosedForm], w: Dilatation, sign: float, label: str) -> HarmonicMap:
    # h' (1 - sign*w) = phi'; sign=+1 horizontal (h - g = phi), -1 vertical (h + g = phi)
    if abs(phi[0]) > 1e-12 or abs(phi[1] - 1) > 1e-12:
        raise NormalizationError("shear needs a normalized conformal map phi(0)=0, phi'(0)=1")
    if abs(w.series[0]) > 0:
        raise InvalidParameterError("dilatation must vanish at 0")

    _, zs = polar_grid(0.99, 16, 64)
    wz = w.form.value(zs)
    if np.any(np.abs(wz) >= 1):
        raise InvalidParameterError("dilatation must satisfy |w| < 1 on the sample grid")
    denom = 1 - sign * wz
    if np.any(np.abs(denom) < 1e-12):
        raise SingularPointError("1 ∓ w vanishes", complex(zs.ravel()[np.argmin(np.abs(denom))]))

    order = phi.order
    if w.series.order < order - 1:
        raise InvalidParameterError(f"dilatation series order {w.series.order} below {order - 1}")
    dh = combine(differentiate(phi, 1), _geometric(w.series, sign, order - 1), "mul")
    dg = combine(w.series.truncate(order - 1), dh, "mul")
    h = integrate(dh)
    g = integrate(dg)

    exact = None
    if phi_form is not None:
        wf = w.form

        def dh_exact(z):
            return phi_form.d1(z) / (1 - sign * wf.value(z))

        def d2h_exact(z):
            D = 1 - sign * wf.value(z)
            return (phi_form.d2(z) * D + sign * phi_form.d1(z) * wf.d1(z)) / D ** 2

        def dg_exact(z):
            return wf.value(z) * dh_exact(z)

        def d2g_exact(z):
            return wf.d1(z) * dh_exact(z) + wf.value(z) * d2h_exact(z)

        exact = ExactForms(
            h=ClosedForm(integrate_from_origin(dh_exact), dh_exact, d2h_exact),
            g=ClosedForm(integrate_from_origin(dg_exact), dg_exact, d2g_exact),
        )
    logger.debug({"event": "shear", "label": label, "order": order, "sign": sign})
    return HarmonicMap(h=h, g=g, exact=exact, label=label)


def shear_horizontal(phi: TruncatedSeries, w: Dilatation, phi_form: Optional[ClosedForm] = None, label: str = "shear_h") -> HarmonicMap:
    """h - g = phi, g' = w h'."""
    return _shear(phi, phi_form, w, +1.0, label)


def shear_vertical(phi: TruncatedSeries, w: Dilatation, phi_form: Optional[ClosedForm] = None, label: str = "shear_v") -> HarmonicMap:
    """h + g = phi, g' = w h'."""
    return _shear(phi, phi_form, w, -1.0, label)


# ========================================
# M(alpha) MEMBERS
# ========================================

def make_M_alpha_member(h: TruncatedSeries, alpha: complex, h_form: Optional[ClosedForm] = None, label: str = "") -> HarmonicMap:
    """g from g' = α z h', i.e. (n+1) b_{n+1} = n α a_n and b_1 = 0.

    The condition Re(1 + z h''/h') > -1/2 is not checked here.
    """
    alpha = complex(alpha)
    if abs(alpha) > 1 + 1e-15:
        raise InvalidParameterError(f"|alpha| must be <= 1, got {alpha}")
    a = h.coeffs
    n = np.arange(h.order + 1)
    b = np.zeros(h.order + 1, dtype=np.complex128)
    b[2:] = (n[1:-1] * alpha * a[1:-1]) / (n[1:-1] + 1)
    g = TruncatedSeries(b)

    exact = None
    if h_form is not None:
        def dg(z):
            return alpha * z * h_form.d1(z)

        def d2g(z):
            return alpha * (h_form.d1(z) + z * h_form.d2(z))

        exact = ExactForms(h=h_form, g=ClosedForm(integrate_from_origin(dg), dg, d2g))
    return HarmonicMap(h=h, g=g, exact=exact, label=label or f"M_alpha_member:{_fmt(alpha.real)},{_fmt(alpha.imag)}")


# ========================================
# NAMED MAPS
# ========================================

def f_alpha(alpha: complex, order: int, label: str = "") -> HarmonicMap:
    alpha = complex(alpha)
    l = make_generator(GeneratorKind.HALF_PLANE_L, order)
    k = make_generator(GeneratorKind.KOEBE_K, order)
    h = scale(combine(l, k, "add"), 0.5)
    g = scale(combine(k, l, "sub"), 0.5 * alpha)
    exact = ExactForms(
        h=ClosedForm(
            value=lambda z: 0.5 * (z / (1 - z) + z / (1 - z) ** 2),
            d1=lambda z: 1 / (1 - z) ** 3,
            d2=lambda z: 3 / (1 - z) ** 4,
        ),
        g=ClosedForm(
            value=lambda z: alpha * z * z / (2 * (1 - z) ** 2),
            d1=lambda z: alpha * z / (1 - z) ** 3,
            d2=lambda z: alpha * (1 + 2 * z) / (1 - z) ** 4,
        ),
    )
    return HarmonicMap(h=h, g=g, exact=exact, label=label or f"f_alpha:{_fmt(alpha.real)},{_fmt(alpha.imag)}", family_alpha=alpha)


def g_alpha(alpha: complex, order: int) -> HarmonicMap:
    alpha = complex(alpha)
    h = make_generator(GeneratorKind.IDENTITY, order)
    c = np.zeros(order + 1, dtype=np.complex128)
    c[2] = alpha / 2
    exact = ExactForms(
        h=generator_closed_form(GeneratorKind.IDENTITY),
        g=ClosedForm(
            value=lambda z: alpha * z * z / 2,
            d1=lambda z: alpha * z,
            d2=lambda z: alpha * np.ones_like(z),
        ),
    )
    return HarmonicMap(h=h, g=TruncatedSeries(c), exact=exact, label=f"g_alpha:{_fmt(alpha.real)},{_fmt(alpha.imag)}")


def polynomial_collision(order: int) -> HarmonicMap:
    """h' = z g' with h non-convex: sense-preserving yet f(z0) = f(conj z0) = 3/4."""
    h = np.zeros(order + 1, dtype=np.complex128)
    g = np.zeros(order + 1, dtype=np.complex128)
    h[1], h[2] = 1.0, -0.5
    g[2], g[3] = 0.5, -1.0 / 3.0
    exact = ExactForms(
        h=ClosedForm(lambda z: z - z * z / 2, lambda z: 1 - z, lambda z: -np.ones_like(z)),
        g=ClosedForm(lambda z: z * z / 2 - z ** 3 / 3, lambda z: z - z * z, lambda z: 1 - 2 * z),
    )
    return HarmonicMap(h=TruncatedSeries(h), g=TruncatedSeries(g), exact=exact, label="polynomial_collision")


def log_shear(order: int) -> HarmonicMap:
    """h = l, g' = z h', so g = l + log(1 - z) with b_n = 1 - 1/n."""
    l = make_generator(GeneratorKind.HALF_PLANE_L, order)
    g = combine(l, make_generator(GeneratorKind.LOG_ONE_MINUS_Z, order), "add")
    exact = ExactForms(
        h=generator_closed_form(GeneratorKind.HALF_PLANE_L),
        g=ClosedForm(
            value=lambda z: z / (1 - z) + np.log(1 - z),
            d1=lambda z: z / (1 - z) ** 2,
            d2=lambda z: (1 + z) / (1 - z) ** 3,
        ),
    )
    return HarmonicMap(h=l, g=g, exact=exact, label="log_shear")


def make_named(entry: CatalogEntry, order: int) -> HarmonicMap:
    if order < MIN_TRUNC_ORDER:
        raise InvalidParameterError(f"catalog maps need order >= {MIN_TRUNC_ORDER}, got {order}")
    name = entry.name
    if name is MapName.F_ALPHA:
        return f_alpha(entry.alpha, order)
    if name is MapName.L:
        return f_alpha(-1.0, order, label="L")
    if name is MapName.F:
        return f_alpha(1.0, order, label="F")
    if name is MapName.G_ALPHA:
        return g_alpha(entry.alpha, order)
    if name is MapName.POLYNOMIAL_COLLISION:
        return polynomial_collision(order)
    if name is MapName.LOG_SHEAR:
        return log_shear(order)
    return make_M_alpha_member(
        make_generator(GeneratorKind.HALF_PLANE_L, order),
        entry.alpha,
        h_form=generator_closed_form(GeneratorKind.HALF_PLANE_L),
        label=entry.label,
    )
