"""Reusable numerical kernels.

Adaptive quadrature on finite and semi-infinite intervals, high-order
derivatives by Cauchy contour integrals, numerical inverse Laplace
transforms, cumulative-integral interpolants and the fixed Gauss-Legendre
rules the vectorized shot-process kernels are assembled from.
"""

# Skysplit - quad.py
# Copyright (C) 2026 The Skysplit Contributors

from __future__ import annotations

import functools
import logging
import math
from enum import StrEnum
from typing import TYPE_CHECKING

import attrs
import numpy as np
import numpy.typing as npt
from scipy import integrate
from scipy.interpolate import PchipInterpolator
from scipy.special import comb, roots_legendre

from src import config
from src.errors import ConvergenceError, DomainError

if TYPE_CHECKING:
    from collections.abc import Callable

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]

# Abate-Whitt Euler summation: discretization error ~ exp(-EULER_A).
EULER_A = 18.4
EULER_TERMS = 11


def _positive(
    _instance: object,
    attribute: attrs.Attribute[float],
    value: float,
) -> None:
    if not value > 0:
        raise DomainError(f"{attribute.name} must be positive, got {value!r}")


@attrs.frozen(kw_only=True)
class QuadratureSettings:
    """Tolerances of the adaptive integrators."""

    rel_tol: float = attrs.field(default=config.QUAD_REL_TOL, validator=_positive)
    abs_tol: float = attrs.field(default=config.QUAD_ABS_TOL, validator=_positive)
    max_subdivisions: int = attrs.field(
        default=config.QUAD_MAX_SUBDIVISIONS,
        validator=_positive,
    )


@attrs.frozen(kw_only=True)
class ContourSettings:
    """Circle used for Cauchy derivatives.

    radius is absolute; when None it is relative_radius * |point|.
    """

    radius: float | None = None
    relative_radius: float = attrs.field(
        default=config.CONTOUR_RADIUS,
        validator=_positive,
    )
    nodes: int = attrs.field(default=config.CONTOUR_NODES, validator=_positive)
    tol: float = attrs.field(default=config.CONTOUR_TOL, validator=_positive)

    def __attrs_post_init__(self) -> None:
        """Nodes must be even so the half rule nests in the full one."""
        if self.nodes % 2:
            raise DomainError(f"contour nodes must be even, got {self.nodes}")
        if self.radius is not None and not self.radius > 0:
            raise DomainError(f"contour radius must be positive: {self.radius}")


class InversionMethod(StrEnum):
    """Contours available for the inverse Laplace transform."""

    TALBOT = "talbot"
    EULER = "euler"


@attrs.frozen(kw_only=True)
class LaplaceSettings:
    """Node count, tolerance and contour of the inverse Laplace transform."""

    nodes: int = attrs.field(default=config.LAPLACE_NODES, validator=_positive)
    tol: float = attrs.field(default=config.LAPLACE_TOL, validator=_positive)
    method: InversionMethod = attrs.field(
        default=InversionMethod.TALBOT,
        converter=InversionMethod,
    )

    def __attrs_post_init__(self) -> None:
        """The error estimate reruns with half the nodes."""
        if self.nodes < 4:
            raise DomainError(f"need at least 4 inversion nodes: {self.nodes}")


def _checked_quad(
    g: Callable[[float], float],
    a: float,
    b: float,
    settings: QuadratureSettings,
) -> float:
    result = integrate.quad(
        g,
        a,
        b,
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=settings.max_subdivisions,
        full_output=1,
    )
    value, error = float(result[0]), float(result[1])
    if len(result) > 3 or not math.isfinite(value):
        message = str(result[3]) if len(result) > 3 else "non-finite result"
        raise ConvergenceError(
            f"adaptive quadrature failed: {message.strip()}",
            estimate=value,
            error_bound=error,
        )
    return value


def integrate_finite(
    f: Callable[[float], float],
    a: float,
    b: float,
    settings: QuadratureSettings | None = None,
) -> float:
    """Integrate f over [a, b].

    Integrable endpoint singularities are fine: no node sits on an endpoint.
    """
    settings = settings or QuadratureSettings()
    if a > b:
        raise DomainError(f"lower limit {a} exceeds upper limit {b}")
    if a == b:
        return 0.0
    return _checked_quad(f, a, b, settings)


def integrate_semi_infinite(
    f: Callable[[float], float],
    a: float,
    settings: QuadratureSettings | None = None,
    *,
    scale: float = 1.0,
) -> float:
    """Integrate f over [a, inf) through t = a + scale * u / (1 - u).

    scale should sit near where f lives so the mass is not squeezed
    against u = 1.
    """
    settings = settings or QuadratureSettings()
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale}")

    def compact(u: float) -> float:
        if u >= 1.0:
            return 0.0
        one_minus = 1.0 - u
        return f(a + scale * u / one_minus) * scale / one_minus**2

    return _checked_quad(compact, 0.0, 1.0, settings)


def cauchy_derivative(
    f: Callable[[ComplexArray], ComplexArray],
    order: int,
    point: float,
    settings: ContourSettings | None = None,
) -> float:
    """Real part of the order-th derivative of f at point.

    Trapezoid rule on a circle around point. f must be analytic on the
    closed disc and accept complex arrays. The rule is evaluated with all
    nodes and with every second node; disagreement above tolerance is a
    convergence error.
    """
    settings = settings or ContourSettings()
    if order < 0:
        raise DomainError(f"derivative order must be >= 0, got {order}")
    if order == 0:
        return float(np.real(f(np.array([point], dtype=np.complex128))[0]))

    if settings.radius is not None:
        radius = settings.radius
    elif point != 0:
        radius = settings.relative_radius * abs(point)
    else:
        radius = settings.relative_radius

    count = 2 * settings.nodes
    theta = 2 * np.pi * np.arange(count) / count
    values = f(point + radius * np.exp(1j * theta))
    weighted = values * np.exp(-1j * order * theta)

    scale = math.factorial(order) / radius**order
    full = scale * np.mean(weighted)
    half = scale * np.mean(weighted[::2])
    error = abs(full - half)
    estimate = float(full.real)
    if not (math.isfinite(estimate) and error <= settings.tol * max(1.0, abs(estimate))):
        raise ConvergenceError(
            f"contour derivative of order {order} at {point:g} did not "
            f"converge (gap {error:.3g})",
            estimate=estimate,
            error_bound=error,
        )
    return estimate


def _talbot(
    transform: Callable[[ComplexArray], ComplexArray],
    t: float,
    nodes: int,
) -> float:
    # Fixed Talbot contour, r = 2M/5.
    theta = np.pi * np.arange(1, nodes) / nodes
    cot = 1.0 / np.tan(theta)
    r = 2.0 * nodes / 5.0
    points = np.concatenate(
        ([r / t + 0j], (r / t) * theta * (cot + 1j)),
    )
    gamma = np.concatenate(
        (
            [np.exp(r) / 2 + 0j],
            np.exp(t * points[1:])
            * (1 + 1j * theta * (1 + cot**2) - 1j * cot),
        ),
    )
    values = transform(points)
    return float((2.0 / (5.0 * t)) * np.real(np.dot(gamma, values)))


def _euler_terms(
    transform: Callable[[ComplexArray], ComplexArray],
    t: float,
    count: int,
) -> FloatArray:
    k = np.arange(count)
    points = (EULER_A + 2j * np.pi * k) / (2 * t)
    values = np.real(transform(points.astype(np.complex128)))
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    terms = math.exp(EULER_A / 2) / t * signs * values
    terms[0] /= 2
    return np.asarray(terms, dtype=np.float64)


def _euler_sum(terms: FloatArray, n: int) -> float:
    partial = np.cumsum(terms)[n : n + EULER_TERMS + 1]
    binomial = comb(EULER_TERMS, np.arange(EULER_TERMS + 1)) / 2**EULER_TERMS
    return float(np.dot(binomial, partial))


def inverse_laplace(
    transform: Callable[[ComplexArray], ComplexArray],
    t: float,
    settings: LaplaceSettings | None = None,
) -> float:
    """Invert a Laplace transform at time t > 0.

    TALBOT deforms the Bromwich line into the left half-plane and needs
    the transform analytic off the negative real axis. EULER keeps every
    node on Re s = EULER_A / (2t) and only needs the transform analytic in
    the right half-plane. Both estimate their error from a rerun with half
    the nodes.
    """
    settings = settings or LaplaceSettings()
    if not t > 0:
        raise DomainError(f"inversion time must be positive, got {t!r}")

    nodes = settings.nodes
    match settings.method:
        case InversionMethod.TALBOT:
            value = _talbot(transform, t, nodes)
            check = _talbot(transform, t, nodes // 2)
        case InversionMethod.EULER:
            terms = _euler_terms(transform, t, nodes + EULER_TERMS + 1)
            value = _euler_sum(terms, nodes)
            check = _euler_sum(terms, nodes // 2)

    error = abs(value - check)
    if not (math.isfinite(value) and error <= settings.tol * max(1.0, abs(value))):
        raise ConvergenceError(
            f"inverse Laplace at t={t:g} did not converge "
            f"({settings.method}, gap {error:.3g})",
            estimate=value,
            error_bound=error,
        )
    return value


@attrs.frozen(eq=False)
class CumulativeInterpolant:
    """Monotone interpolant of z -> integral of f from 0 to z.

    Beyond the last node the integral is extended linearly with the last
    integrand value.
    """

    nodes: FloatArray
    values: FloatArray
    tail_slope: float
    _forward: PchipInterpolator

    @functools.cached_property
    def _backward(self) -> PchipInterpolator:
        if np.any(np.diff(self.values) <= 0):
            raise DomainError("integral is not strictly increasing; no inverse")
        return PchipInterpolator(self.values, self.nodes, extrapolate=False)

    @property
    def grid_max(self) -> float:
        """Last grid node."""
        return float(self.nodes[-1])

    def __call__(self, z: FloatArray | float) -> FloatArray:
        """Evaluate the cumulative integral at z (clipped below at 0)."""
        z = np.maximum(np.asarray(z, dtype=np.float64), 0.0)
        z_max = self.nodes[-1]
        inside = np.minimum(z, z_max)
        out = np.asarray(self._forward(inside), dtype=np.float64)
        beyond = z > z_max
        if np.any(beyond):
            out = np.where(
                beyond,
                self.values[-1] + self.tail_slope * (z - z_max),
                out,
            )
        return out

    def inverse(self, value: FloatArray | float) -> FloatArray:
        """Point z at which the integral reaches value."""
        value = np.maximum(np.asarray(value, dtype=np.float64), 0.0)
        top = self.values[-1]
        inside = np.minimum(value, top)
        out = np.asarray(self._backward(inside), dtype=np.float64)
        beyond = value > top
        if np.any(beyond):
            out = np.where(
                beyond,
                self.nodes[-1] + (value - top) / self.tail_slope,
                out,
            )
        return out


def cumulative_interpolant(
    f: Callable[[FloatArray], FloatArray],
    grid_max: float,
    grid_points: int,
    *,
    spacing: str = "uniform",
) -> CumulativeInterpolant:
    """Tabulate the running integral of a nonnegative f on [0, grid_max].

    f is called with arrays. Each cell is integrated with 5-point
    Gauss-Legendre; "quadratic" spacing packs nodes toward z = 0.
    """
    if grid_points < 2:
        raise DomainError(f"need at least 2 grid points, got {grid_points}")
    if not grid_max > 0:
        raise DomainError(f"grid_max must be positive, got {grid_max}")
    unit = np.linspace(0.0, 1.0, grid_points)
    match spacing:
        case "uniform":
            nodes = grid_max * unit
        case "quadratic":
            nodes = grid_max * unit**2
        case _:
            raise DomainError(f"unknown grid spacing {spacing!r}")

    x, w = gauss_legendre_unit(5)
    lo, width = nodes[:-1, None], np.diff(nodes)[:, None]
    samples = np.asarray(f(lo + width * x), dtype=np.float64)
    cells = np.sum(samples * w * width, axis=1)
    values = np.concatenate(([0.0], np.cumsum(cells)))
    tail = float(np.asarray(f(np.array([grid_max])), dtype=np.float64)[0])
    return CumulativeInterpolant(
        nodes,
        values,
        tail,
        PchipInterpolator(nodes, values, extrapolate=False),
    )


@functools.cache
def gauss_legendre_unit(n: int) -> tuple[FloatArray, FloatArray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = roots_legendre(n)
    nodes = (np.asarray(x) + 1.0) / 2.0
    weights = np.asarray(w) / 2.0
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def log_panel_rule(
    log_lo: FloatArray,
    log_hi: FloatArray,
    panels: int,
    per_panel: int = 8,
) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights for the integral of f(r) dr over [e^lo, e^hi].

    The log interval is cut into equal panels with per_panel Gauss-Legendre
    nodes each. Bounds broadcast; the rule runs along a new last axis.
    """
    log_lo = np.asarray(log_lo, dtype=np.float64)[..., None]
    log_hi = np.asarray(log_hi, dtype=np.float64)[..., None]
    x, w = gauss_legendre_unit(per_panel)
    offsets = (np.arange(panels)[:, None] + x[None, :]).ravel() / panels
    weights = np.tile(w, panels) / panels
    t = log_lo + (log_hi - log_lo) * offsets
    r = np.exp(t)
    return r, weights * (log_hi - log_lo) * r


def power_tail_rule(
    start: FloatArray,
    exponent: float,
    nodes: int,
) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights for the integral over [start, inf).

    Uses r = start * (1 - u)^(-exponent); an integrand decaying like
    r^(-1 - 1/exponent) then maps to a smooth function of u.
    """
    start = np.asarray(start, dtype=np.float64)[..., None]
    u, w = gauss_legendre_unit(nodes)
    one_minus = 1.0 - u
    r = start * one_minus**-exponent
    return r, start * exponent * w * one_minus ** (-exponent - 1)


def panel_span(
    log_lo: FloatArray,
    log_knee: FloatArray,
    *,
    pad: float = 6.0,
    max_span: float = 160.0,
) -> FloatArray:
    """Upper log bound of the panelled body: knee + pad, at most lo + max_span."""
    log_lo = np.asarray(log_lo, dtype=np.float64)
    return np.minimum(
        np.maximum(np.asarray(log_knee, dtype=np.float64), log_lo) + pad,
        log_lo + max_span,
    )


def semi_infinite_rule(
    log_lo: FloatArray,
    log_knee: FloatArray,
    exponent: float,
    *,
    panels: int | None = None,
    tail_nodes: int | None = None,
    pad: float = 6.0,
    max_span: float = 160.0,
) -> tuple[FloatArray, FloatArray]:
    """Log panels from e^lo to e^(knee + pad), then a power-law tail.

    Every feature of the integrand should sit below e^knee. The log span
    is capped at max_span; within it the panel count grows so that no
    panel is wider than config.INTERFERENCE_PANEL_WIDTH.
    """
    tail_nodes = tail_nodes or config.INTERFERENCE_TAIL_NODES
    log_lo = np.asarray(log_lo, dtype=np.float64)
    log_hi = panel_span(log_lo, log_knee, pad=pad, max_span=max_span)
    widest = float(np.max(log_hi - log_lo, initial=0.0))
    panels = max(
        panels or config.INTERFERENCE_PANELS,
        math.ceil(widest / config.INTERFERENCE_PANEL_WIDTH),
    )
    body_r, body_w = log_panel_rule(log_lo, log_hi, panels)
    tail_r, tail_w = power_tail_rule(np.exp(log_hi), exponent, tail_nodes)
    return (
        np.concatenate((body_r, tail_r), axis=-1),
        np.concatenate((body_w, tail_w), axis=-1),
    )
