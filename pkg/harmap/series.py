"""
Truncated power series

A TruncatedSeries holds the Taylor coefficients c_0..c_N of an analytic
function at 0. Arithmetic never extends N: products truncate to the smaller
input order. There is no division or composition; dilatations are evaluated
pointwise instead.

Usage:
    l = make_generator("half_plane_l", 64)
    k = make_generator("koebe_k", 64)
    h = combine(l, k, "add", scalar=1.0)      # l + k
    evaluate(h, 0.3 + 0.1j)
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import quad_vec
from scipy.optimize import brentq

from .errors import DomainError, InvalidParameterError

ComplexLike = Union[complex, float, np.ndarray]
Evaluator = Callable[[np.ndarray], np.ndarray]


class GeneratorKind(str, Enum):
    HALF_PLANE_L = "half_plane_l"          # z/(1-z)
    KOEBE_K = "koebe_k"                    # z/(1-z)^2
    LOG_ONE_MINUS_Z = "log_one_minus_z"    # log(1-z)
    IDENTITY = "identity"                  # z


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c_0..c_N of a polynomial truncation, N >= 1."""
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).ravel()
        if c.size < 2:
            raise InvalidParameterError(f"series needs order >= 1, got {c.size - 1} coefficients-1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __getitem__(self, n: int) -> complex:
        return complex(self.coeffs[n])

    def truncate(self, order: int) -> "TruncatedSeries":
        if order < 1 or order > self.order:
            raise InvalidParameterError(f"cannot truncate order {self.order} series to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def allclose(self, other: "TruncatedSeries", atol: float = 1e-12) -> bool:
        n = min(self.order, other.order)
        return bool(np.allclose(self.coeffs[: n + 1], other.coeffs[: n + 1], rtol=0.0, atol=atol))


@dataclass(frozen=True)
class ClosedForm:
    """Exact evaluators of an analytic function and its first two derivatives."""
    value: Evaluator
    d1: Evaluator
    d2: Evaluator


def make_generator(kind: Union[str, GeneratorKind], order: int) -> TruncatedSeries:
    try:
        kind = GeneratorKind(kind)
    except ValueError:
        raise InvalidParameterError(f"unknown generator kind: {kind!r}") from None
    if order < 1:
        raise InvalidParameterError(f"order must be >= 1, got {order}")

    n = np.arange(order + 1, dtype=float)
    c = np.zeros(order + 1, dtype=np.complex128)
    if kind is GeneratorKind.HALF_PLANE_L:
        c[1:] = 1.0
    elif kind is GeneratorKind.KOEBE_K:
        c[:] = n
    elif kind is GeneratorKind.LOG_ONE_MINUS_Z:
        c[1:] = -1.0 / n[1:]
    else:
        c[1] = 1.0
    return TruncatedSeries(c)


def generator_closed_form(kind: Union[str, GeneratorKind]) -> ClosedForm:
    kind = GeneratorKind(kind)
    if kind is GeneratorKind.HALF_PLANE_L:
        return ClosedForm(
            value=lambda z: z / (1 - z),
            d1=lambda z: 1 / (1 - z) ** 2,
            d2=lambda z: 2 / (1 - z) ** 3,
        )
    if kind is GeneratorKind.KOEBE_K:
        return ClosedForm(
            value=lambda z: z / (1 - z) ** 2,
            d1=lambda z: (1 + z) / (1 - z) ** 3,
            d2=lambda z: (4 + 2 * z) / (1 - z) ** 4,
        )
    if kind is GeneratorKind.LOG_ONE_MINUS_Z:
        # principal branch; 1 - z stays in the right half-plane on the disk
        return ClosedForm(
            value=lambda z: np.log(1 - z),
            d1=lambda z: -1 / (1 - z),
            d2=lambda z: -1 / (1 - z) ** 2,
        )
    return ClosedForm(
        value=lambda z: np.asarray(z, dtype=np.complex128) + 0,
        d1=lambda z: np.ones_like(np.asarray(z, dtype=np.complex128)),
        d2=lambda z: np.zeros_like(np.asarray(z, dtype=np.complex128)),
    )


def _cauchy(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(a[: order + 1], b[: order + 1])[: order + 1]


def combine(a: TruncatedSeries, b: TruncatedSeries, op: str, scalar: Optional[complex] = None) -> TruncatedSeries:
    """a op (scalar * b) for op in {add, sub, mul}."""
    bc = b.coeffs if scalar is None else complex(scalar) * b.coeffs
    order = min(a.order, b.order)
    if op == "add":
        return TruncatedSeries(a.coeffs[: order + 1] + bc[: order + 1])
    if op == "sub":
        return TruncatedSeries(a.coeffs[: order + 1] - bc[: order + 1])
    if op == "mul":
        return TruncatedSeries(_cauchy(a.coeffs, bc, order))
    raise InvalidParameterError(f"unknown series operation: {op!r}")


def scale(a: TruncatedSeries, c: complex) -> TruncatedSeries:
    return TruncatedSeries(complex(c) * a.coeffs)


def hadamard(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise product, truncated to the smaller order."""
    order = min(a.order, b.order)
    return TruncatedSeries(a.coeffs[: order + 1] * b.coeffs[: order + 1])


def differentiate(a: TruncatedSeries, times: int = 1) -> TruncatedSeries:
    if times not in (1, 2):
        raise InvalidParameterError(f"times must be 1 or 2, got {times}")
    if a.order - times < 1:
        raise InvalidParameterError(f"order {a.order} too small to differentiate {times} time(s)")
    return TruncatedSeries(P.polyder(a.coeffs, m=times))


def integrate(a: TruncatedSeries) -> TruncatedSeries:
    """Termwise antiderivative vanishing at 0; the order grows by one."""
    c = np.zeros(a.order + 2, dtype=np.complex128)
    c[1:] = a.coeffs / np.arange(1, a.order + 2)
    return TruncatedSeries(c)


def check_in_disk(z: ComplexLike) -> np.ndarray:
    zz = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(zz) >= 1.0):
        raise DomainError("evaluation requires |z| < 1")
    return zz


def evaluate(a: TruncatedSeries, z: ComplexLike):
    """Horner evaluation; scalar in, complex out, array in, array out."""
    zz = check_in_disk(z)
    out = P.polyval(zz, a.coeffs)
    return complex(out) if np.ndim(out) == 0 else out


def integrate_from_origin(d1: Evaluator) -> Evaluator:
    """Value of the primitive F(z) = ∫_0^z d1 along the segment [0, z].

    Uses adaptive vector quadrature over all requested points at once.
    """

    def value(z):
        zz = np.asarray(z, dtype=np.complex128)
        flat = zz.ravel()
        n = flat.size

        def integrand(t):
            v = flat * d1(t * flat)
            return np.concatenate([v.real, v.imag])

        out, _ = quad_vec(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12, norm="max")
        res = (out[:n] + 1j * out[n:]).reshape(zz.shape)
        return complex(res) if res.ndim == 0 else res

    return value


# ========================================
# TRUNCATION TAILS
# ========================================

TAIL_WINDOW = 4


def _tail_excess(a: TruncatedSeries, r: float, rel_tol: float) -> float:
    """log(tail / allowed error) on |z| = r; <= 0 where the truncation is accurate.

    The tail continues the size of the last few coefficients with polynomial
    growth: max|c_{N-3..N}| r^{N+1} / (1-r)^2.
    """
    m = float(np.max(np.abs(a.coeffs[-TAIL_WINDOW:])))
    if m == 0.0:
        return -np.inf
    log_tail = np.log(m) + (a.order + 1) * np.log(r) - 2.0 * np.log1p(-r)
    majorant = float(P.polyval(r, np.abs(a.coeffs)))
    return float(log_tail - np.log(rel_tol * max(1.0, majorant)))


def reliable_radius(series: Sequence[TruncatedSeries], rel_tol: float) -> float:
    """Largest r where every tail estimate stays below rel_tol times the series' majorant.

    1.0 when no series has a nonzero tail (polynomials of degree below N - 3).
    """
    lo, hi = 1e-6, 1.0 - 1e-9

    def excess(r: float) -> float:
        return max(_tail_excess(a, r, rel_tol) for a in series)

    if excess(hi) <= 0.0:
        return 1.0
    if excess(lo) > 0.0:
        return 0.0
    return float(brentq(excess, lo, hi, xtol=1e-10))
