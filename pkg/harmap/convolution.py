"""
Harmonic Hadamard products

f*F = h*H + conj(g*G), coefficientwise on both parts. Two members of the
f_alpha family convolve into a map with a known closed form, which is
attached so the product can be evaluated near the unit circle.
"""

import logging
import re
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .catalog import f_alpha, make_named, monomial_dilatation, parse_entry, shear_vertical
from .config import DEFAULT_CROSSCHECK_ORDER
from .errors import InvalidParameterError, NormalizationError, SingularPointError
from .harmonic_map import ExactForms, HarmonicMap, dilatation, polar_grid
from .reports import CheckReport, cpair
from .series import ClosedForm, GeneratorKind, TruncatedSeries, hadamard as series_hadamard, make_generator, scale

logger = logging.getLogger(__name__)

CROSSCHECK_TOL = 1e-6
CROSSCHECK_R_MAX = 0.9


@dataclass(frozen=True)
class ConvolutionResult:
    product: HarmonicMap
    left_label: str
    right_label: str


def family_product_forms(alpha: complex, beta: complex) -> ExactForms:
    """Closed form of f_alpha * f_beta.

    H = [(1+z)/(1-z)^3 - 1]/4 and G = αβ z^2 (1+z) / (4 (1-z)^3).
    """
    c = complex(alpha) * complex(beta)
    return ExactForms(
        h=ClosedForm(
            value=lambda z: 0.25 * ((1 + z) / (1 - z) ** 3 - 1),
            d1=lambda z: (2 + z) / (2 * (1 - z) ** 4),
            d2=lambda z: (9 + 3 * z) / (2 * (1 - z) ** 5),
        ),
        g=ClosedForm(
            value=lambda z: c * z * z * (1 + z) / (4 * (1 - z) ** 3),
            d1=lambda z: c * z * (1 + 2 * z) / (2 * (1 - z) ** 4),
            d2=lambda z: c * (1 + 7 * z + 4 * z * z) / (2 * (1 - z) ** 5),
        ),
    )


def hadamard(f: HarmonicMap, F: HarmonicMap) -> ConvolutionResult:
    h = series_hadamard(f.h, F.h)
    g = series_hadamard(f.g, F.g)
    exact = None
    if f.family_alpha is not None and F.family_alpha is not None:
        exact = family_product_forms(f.family_alpha, F.family_alpha)
    label = f"conv({f.label},{F.label})"
    logger.debug({"event": "hadamard", "label": label, "order": h.order, "closed_form": exact is not None})
    return ConvolutionResult(
        product=HarmonicMap(h=h, g=g, exact=exact, label=label),
        left_label=f.label,
        right_label=F.label,
    )


def convex_combination_convolve(phi: TruncatedSeries, beta: complex, f: HarmonicMap) -> HarmonicMap:
    """(β conj(φ) + φ) * f = H + conj(G) with H = φ*h, G = conj(β)(φ*g)."""
    beta = complex(beta)
    if abs(beta) > 1 + 1e-15:
        raise InvalidParameterError(f"|beta| must be <= 1, got {beta}")
    if abs(phi[0]) > 1e-12 or abs(phi[1] - 1) > 1e-12:
        raise NormalizationError("phi must satisfy phi(0)=0, phi'(0)=1")
    H = series_hadamard(phi, f.h)
    G = scale(series_hadamard(phi, f.g), np.conj(beta))
    return HarmonicMap(h=H, g=G, label=f"convex_combination({beta.real:.6g},{beta.imag:.6g})*{f.label}")


# ========================================
# DILATATION OF F * f FOR w = e^{iθ} z^n
# ========================================

def tilde_dilatation(z, n: int, theta: float):
    """z (w² + w - w'z/2 + w'/2) / (1 + w - w'z/2 + w'z²/2) for w = e^{iθ} z^n."""
    zz = np.asarray(z, dtype=np.complex128)
    rot = np.exp(1j * theta)
    w = rot * zz ** n
    dw = n * rot * zz ** (n - 1)
    num = w * w + w - 0.5 * dw * zz + 0.5 * dw
    den = 1 + w - 0.5 * dw * zz + 0.5 * dw * zz * zz
    small = np.abs(den) < 1e-14
    if np.any(small):
        raise SingularPointError("denominator of the product dilatation vanishes", complex(np.ravel(zz)[np.argmax(np.ravel(small))]))
    out = zz * num / den
    return complex(out) if out.ndim == 0 else out


def product_for_dilatation(n: int, theta: float, order: int = DEFAULT_CROSSCHECK_ORDER) -> HarmonicMap:
    """F * f where f is the vertical shear of l = z/(1-z) with dilatation e^{iθ} z^n."""
    l = make_generator(GeneratorKind.HALF_PLANE_L, order)
    f = shear_vertical(l, monomial_dilatation(np.exp(1j * theta), n, order), label=f"shear_v(l,e^{{i{theta:.6g}}}z^{n})")
    return hadamard(f_alpha(1.0, order, label="F"), f).product


def tilde_dilatation_check(
    n: int,
    theta: float,
    grid: Tuple[int, int] = (64, 256),
    r_max: float = 0.999,
    crosscheck_order: int = DEFAULT_CROSSCHECK_ORDER,
) -> CheckReport:
    """max |w̃| over a polar grid, with a series cross-check on r <= 0.9."""
    if n not in (1, 2):
        raise InvalidParameterError(f"n must be 1 or 2, got {n}")
    _, z = polar_grid(r_max, *grid)
    wt = tilde_dilatation(z, n, theta)
    mod = np.abs(wt)
    j, k = np.unravel_index(np.argmax(mod), mod.shape)
    max_mod = float(mod[j, k])

    product = product_for_dilatation(n, theta, crosscheck_order)
    _, zc = polar_grid(CROSSCHECK_R_MAX, 16, 64)
    err = float(np.max(np.abs(dilatation(product, zc) - tilde_dilatation(zc, n, theta))))

    passed = max_mod < 1.0 and err <= CROSSCHECK_TOL
    logger.info({"event": "tilde_dilatation_check", "n": n, "theta": theta, "max_modulus": max_mod, "crosscheck_error": err})
    return CheckReport(
        name="tilde_dilatation",
        passed=passed,
        value=max_mod,
        threshold=1.0,
        truncation_order=crosscheck_order,
        grid=tuple(grid),
        details={
            "argmax": cpair(z[j, k]),
            "crosscheck_error": err,
            "crosscheck_tol": CROSSCHECK_TOL,
            "crosscheck_r_max": CROSSCHECK_R_MAX,
        },
    )


# ========================================
# FUNCTION EXPRESSIONS
# ========================================

_TERM = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*(?::[-+0-9.eE]+,[-+0-9.eE]+)?)\s*")


def _parse(text: str, pos: int, order: int) -> Tuple[HarmonicMap, int]:
    if text.startswith("conv(", pos):
        left, pos = _parse(text, pos + len("conv("), order)
        if pos >= len(text) or text[pos] != ",":
            raise InvalidParameterError(f"expected ',' at position {pos} in {text!r}")
        right, pos = _parse(text, pos + 1, order)
        if pos >= len(text) or text[pos] != ")":
            raise InvalidParameterError(f"expected ')' at position {pos} in {text!r}")
        return hadamard(left, right).product, pos + 1
    m = _TERM.match(text, pos)
    if m is None:
        raise InvalidParameterError(f"cannot parse function expression {text!r} at position {pos}")
    return make_named(parse_entry(m.group(1)), order), m.end()


def build_expression(text: str, order: int) -> HarmonicMap:
    """``name[:re,im]`` or ``conv(left,right)``, nested freely."""
    f, pos = _parse(text.strip(), 0, order)
    if pos != len(text.strip()):
        raise InvalidParameterError(f"trailing input in function expression {text!r}")
    return f
