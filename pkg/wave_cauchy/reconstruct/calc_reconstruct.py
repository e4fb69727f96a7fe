"""Regularized reconstruction of u(x0, y0, t0) from boundary data.

    u_h = int int_U K_h(x - x0, y0, t - t0) v(x, t) dx dt

The outer integral runs over t = t0 + y0 sin(theta), the inner one over
the slice |x - x0| <= D(sqrt(y0^2 - (t - t0)^2)) + epsilon, both with
Gauss-Legendre rules.
"""

from typing import NamedTuple

import numpy as np

from wave_cauchy.geometry.calc_geometry import Aperture, slice_halfwidth
from wave_cauchy.kernel.calc_kernel import KernelParams, evaluate_kernel
from wave_cauchy.kernel.decay_kernel import decay_constant
from wave_cauchy.synthetic.trace_synthetic import SampledTrace
from wave_cauchy.utils.errors import (
    CoverageError,
    DomainError,
    PrecisionLossError,
    SupportError,
)
from wave_cauchy.utils.logger import WaveCauchyLogger
from wave_cauchy.utils.quadrature_helpers import (
    QuadratureSpec,
    composite_gauss_legendre,
    gauss_legendre,
    noise_floor,
    refine,
)

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger

SUPPORT_THRESHOLD = 1e-12


class Reconstruction(NamedTuple):
    """An estimate with the diagnostics of its quadrature."""

    estimate: float
    level: int
    converged: bool
    max_exponent: float
    noise_floor: float


def aperture_max_exponent(y0: float, c: float, h: float) -> float:
    """Largest Re F on U, attained at x = x0, t = t0: y0^2 / (4hc)."""
    return y0 * y0 / (4.0 * h * c)


def _check_h(h: float) -> None:
    if not h > 0:
        raise DomainError(f"Regularization parameter must be positive, got {h}")


def _time_nodes(n: int, y0: float, t0: float):
    theta, w = gauss_legendre(n, -np.pi / 2, np.pi / 2)
    return t0 + y0 * np.sin(theta), y0 * np.cos(theta) * w


def _check_sampled(trace, x_lo, x_hi, t_lo, t_hi, h, c) -> None:
    if not isinstance(trace, SampledTrace):
        return
    if not trace.covers(x_lo, x_hi, t_lo, t_hi):
        raise CoverageError(
            f"Trace grid [{trace.x[0]:g}, {trace.x[-1]:g}] x "
            f"[{trace.t[0]:g}, {trace.t[-1]:g}] does not cover "
            f"[{x_lo:g}, {x_hi:g}] x [{t_lo:g}, {t_hi:g}]"
        )
    scale = np.sqrt(h * c) / 4.0
    if trace.dx > scale or trace.dt > scale:
        logger.warning(
            f"Trace spacing ({trace.dx:g}, {trace.dt:g}) exceeds "
            f"sqrt(hc) / 4 = {scale:.3g}; the kernel is under-resolved"
        )


def _integrate(trace, nodes, params, quad, x0, t0) -> Reconstruction:
    """Refine the quadrature whose offsets and weights come from nodes(level).

    The rounding floor uses sum |w v| times the s-integral magnitude of the
    kernel, which bounds the rounding error of the kernel values as well as
    the cancellation in the outer sum. The guard measures the floor against
    the data scale sum |w v|, never against the estimate.
    """
    data_scale = {}

    def evaluate(level):
        xo, to, w = nodes(level)
        kernel = evaluate_kernel(xo, to, params, quad)
        data = trace(xo + x0, to + t0)
        weighted = np.abs(w * data)
        data_scale[level] = float(np.sum(weighted))
        estimate = np.sum(w * kernel.values * data)
        return estimate, np.sum(weighted * kernel.magnitude)

    result = refine(evaluate, quad.refinement, quad.rel_tol)
    estimate = float(result.value)
    floor = float(noise_floor(result.magnitude))
    if floor > quad.noise_tol * (1.0 + data_scale[result.level]):
        raise PrecisionLossError(floor, params.h)
    if not result.converged:
        logger.warning(
            f"Aperture quadrature not converged after {result.level} "
            f"doublings at h = {params.h:g}"
        )
    return Reconstruction(
        estimate=estimate,
        level=result.level,
        converged=result.converged,
        max_exponent=aperture_max_exponent(params.y0, params.c, params.h),
        noise_floor=floor,
    )


def integrate_aperture(
    trace, ap: Aperture, h: float, quad: QuadratureSpec | None = None
) -> Reconstruction:
    """Aperture quadrature of K_h v with its diagnostics.

    Args:
        trace (AnalyticTrace | SampledTrace): Boundary data v(x, t).
        ap (Aperture): The aperture U and the point (x0, y0, t0).
        h (float): Regularization parameter.
        quad (QuadratureSpec, optional): Node counts and refinement policy.

    Returns:
        Reconstruction: Estimate, refinement level, convergence flag,
        maximum kernel exponent and rounding floor.

    Raises:
        DomainError: If h <= 0.
        CoverageError: If a sampled trace misses part of the rectangle.
        KernelOverflowError: If the kernel exponent exceeds the budget.
        PrecisionLossError: If rounding noise swamps the estimate.
    """
    _check_h(h)
    quad = quad or QuadratureSpec()
    params = KernelParams(y0=ap.y0, c=ap.c, h=h)
    half = ap.rect_halfwidth
    _check_sampled(
        trace, ap.x0 - half, ap.x0 + half, ap.t0 - ap.y0, ap.t0 + ap.y0, h, ap.c
    )

    def nodes(level):
        t, wt = _time_nodes(quad.nodes_t * 2**level, ap.y0, 0.0)
        xi, wx = gauss_legendre(quad.nodes_x * 2**level, -1.0, 1.0)
        width = slice_halfwidth(ap, t + ap.t0)
        xo = width[:, None] * xi[None, :]
        to = np.broadcast_to(t[:, None], xo.shape)
        w = (wt * width)[:, None] * wx[None, :]
        return xo.ravel(), to.ravel(), w.ravel()

    return _integrate(trace, nodes, params, quad, ap.x0, ap.t0)


def reconstruct_local(
    trace, ap: Aperture, h: float, quad: QuadratureSpec | None = None
) -> float:
    """Regularized value u_h(x0, y0, t0) from data on the aperture U.

    Args:
        trace (AnalyticTrace | SampledTrace): Boundary data v(x, t); sampled
            data are interpolated bilinearly.
        ap (Aperture): The aperture U and the point (x0, y0, t0).
        h (float): Regularization parameter.
        quad (QuadratureSpec, optional): Node counts and refinement policy.

    Returns:
        float: The estimate.
    """
    return integrate_aperture(trace, ap, h, quad).estimate


def check_support(
    trace: SampledTrace,
    y0: float,
    x_halfwidth: float,
    x0: float = 0.0,
    t0: float = 0.0,
) -> None:
    """Require |v| <= 1e-12 for |x - x0| > x_halfwidth within |t - t0| <= y0.

    Raises:
        SupportError: If the data reach beyond the declared half-width.
    """
    in_time = np.abs(trace.t - t0) <= y0
    outside = np.abs(trace.x - x0) > x_halfwidth
    leak = np.abs(trace.values[np.ix_(outside, in_time)])
    if leak.size and np.max(leak) > SUPPORT_THRESHOLD:
        raise SupportError(
            f"Trace reaches {np.max(leak):.3g} beyond |x - x0| = "
            f"{x_halfwidth:g}"
        )


def integrate_extended(
    trace,
    y0: float,
    c: float,
    h: float,
    x_halfwidth: float,
    quad: QuadratureSpec | None = None,
    x0: float = 0.0,
    t0: float = 0.0,
) -> Reconstruction:
    """Quadrature of K_h v over |x - x0| <= x_halfwidth, |t - t0| <= y0.

    Raises:
        DomainError: If h, y0, c or x_halfwidth is not positive.
        CoverageError: If a sampled trace misses part of the rectangle.
        SupportError: If sampled data are non-zero beyond x_halfwidth.
    """
    _check_h(h)
    if not x_halfwidth > 0:
        raise DomainError(f"x_halfwidth must be positive, got {x_halfwidth}")
    quad = quad or QuadratureSpec()
    params = KernelParams(y0=y0, c=c, h=h)
    _check_sampled(
        trace, x0 - x_halfwidth, x0 + x_halfwidth, t0 - y0, t0 + y0, h, c
    )
    if isinstance(trace, SampledTrace):
        check_support(trace, y0, x_halfwidth, x0, t0)
    # Panels no wider than the aperture keep the kernel's x-scale resolved.
    aperture = Aperture(y0=y0, c=c, epsilon=1e-12)
    n_panels = int(np.ceil(x_halfwidth / aperture.rect_halfwidth))

    def nodes(level):
        t, wt = _time_nodes(quad.nodes_t * 2**level, y0, 0.0)
        xs, wx = composite_gauss_legendre(
            -x_halfwidth, x_halfwidth, n_panels, quad.nodes_x * 2**level
        )
        xo, to = np.meshgrid(xs, t)
        w = wt[:, None] * wx[None, :]
        return xo.ravel(), to.ravel(), w.ravel()

    return _integrate(trace, nodes, params, quad, x0, t0)


def reconstruct_extended(
    trace,
    y0: float,
    c: float,
    h: float,
    x_halfwidth: float,
    quad: QuadratureSpec | None = None,
    x0: float = 0.0,
    t0: float = 0.0,
) -> float:
    """Regularized value from the full rectangle instead of the aperture.

    Exact restriction of the non-local formula when the data vanish beyond
    x_halfwidth; differs from reconstruct_local by the band integral, which
    decays like h^{-1/2} exp(-a epsilon^2 / h).

    Args:
        trace (AnalyticTrace | SampledTrace): Boundary data v(x, t).
        y0 (float): Height of the reconstructed point.
        c (float): Regularization-shape parameter.
        h (float): Regularization parameter.
        x_halfwidth (float): Half-width of the data support.
        quad (QuadratureSpec, optional): Node counts and refinement policy.
        x0 (float): Abscissa of the reconstructed point.
        t0 (float): Time of the reconstructed point.

    Returns:
        float: The estimate.
    """
    return integrate_extended(
        trace, y0, c, h, x_halfwidth, quad, x0, t0
    ).estimate


def band_area(ap: Aperture, x_halfwidth: float, n: int = 256) -> float:
    """Area of {D(sqrt(y0^2 - t^2)) + epsilon <= |x| <= x_halfwidth}."""
    t, wt = _time_nodes(n, ap.y0, ap.t0)
    width = np.maximum(x_halfwidth - slice_halfwidth(ap, t), 0.0)
    return float(2.0 * np.sum(wt * width))


def tail_bound(
    ap: Aperture, h: float, x_halfwidth: float, v_max: float, envelope: float
) -> float:
    """Bound on |reconstruct_extended - reconstruct_local|.

    band area * max|v| * C h^{-1/2} exp(-a epsilon^2 / h) with
    a = decay_constant(c, x_halfwidth) and C the empirical envelope.
    """
    a = decay_constant(ap.c, x_halfwidth)
    return (
        band_area(ap, x_halfwidth)
        * v_max
        * envelope
        * np.exp(-a * ap.epsilon**2 / h)
        / np.sqrt(h)
    )
