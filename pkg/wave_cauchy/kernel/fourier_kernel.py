"""Fourier representation of K_h, used as an independent oracle.

    K_h(x, t) = 1/(4 pi) * sum_{+-} int dk exp(-ikx - h k^2 (c +- ix))
                * H(+- k sqrt(y0^2 - t^2)).

The integrand is entire in k and decays like exp(-hc (Re k)^2) in every
horizontal strip, so the integral is taken along the line Im k = kappa. On
the real axis the integrand reaches exp(z^2 / (4hc)) while the result can
be of order one, which would leave nothing but rounding noise; kappa is
chosen to keep the integrand modulus at the size of the result.
"""

import numpy as np

from wave_cauchy.geometry.calc_geometry import cone_height
from wave_cauchy.kernel.calc_kernel import (
    CHUNK_ELEMENTS,
    KernelParams,
    log_h_function,
)
from wave_cauchy.utils.errors import DomainError, TailTruncationError
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

TAIL_BOUND = 1e-14
PANEL_ORDER = 8


def default_k_cutoff(params: KernelParams) -> float:
    """Default cutoff sqrt(35 / (hc)) + max(y0, (y0 + c)/2) / (hc).

    The padding covers the centre of the Gaussian factor on the shifted
    line, which lies within (y0 + c) / (2hc) of the origin; for c <= y0 it
    reduces to y0 / (hc).
    """
    hc = params.h * params.c
    return np.sqrt(35.0 / hc) + max(params.y0, 0.5 * (params.y0 + params.c)) / hc


def check_k_cutoff(params: KernelParams, k_cutoff: float) -> float:
    """Check exp(-hc kc^2) * H(kc y0) < 1e-14 and return its logarithm.

    Raises:
        TailTruncationError: If the cutoff leaves a larger tail.
    """
    hc = params.h * params.c
    log_tail = -hc * k_cutoff**2 + log_h_function(k_cutoff * params.y0)
    if log_tail >= np.log(TAIL_BOUND):
        raise TailTruncationError(
            f"k_cutoff = {k_cutoff:.6g} leaves an integrand tail "
            f"exp({log_tail:.3g}) >= {TAIL_BOUND:g}"
        )
    return float(log_tail)


def contour_shift(x: float, z: float, params: KernelParams) -> float:
    """Choose Im k = kappa for the dk integral.

    Along Im k = kappa the integrand modulus is bounded by exp(g(sigma,
    kappa)) with g convex and quadratic in kappa. kappa minimises
    max(g(0, kappa), g(1, kappa)); at the minimiser of g(sigma, .) the bound
    equals Re F(sigma), the exponent of the closed form.

    Args:
        x (float): Abscissa offset.
        z (float): Cone height sqrt(y0^2 - t^2).
        params (KernelParams): Kernel parameters.

    Returns:
        float: The imaginary shift kappa.
    """
    c, h = params.c, params.h
    curvature = h * (x * x + c * c) / c

    def bound(sigma, kappa):
        return (
            curvature * kappa * kappa
            + kappa * (x * z * sigma / c + x)
            + z * z * sigma * sigma / (4.0 * h * c)
        )

    candidates = [-x / (2.0 * curvature), -x * (z / c + 1.0) / (2.0 * curvature)]
    if x != 0.0 and z > 0.0:
        candidates.append(-z / (4.0 * h * x))
    return min(candidates, key=lambda k: max(bound(0.0, k), bound(1.0, k)))


def _panel_count(
    x: float, kappa: float, params: KernelParams, k_cutoff: float
) -> int:
    """Panels so each resolves the local oscillation of the chirped phase."""
    h, c = params.h, params.c
    width = np.pi / (4.0 * (abs(x) + h * k_cutoff))
    frequency = abs(x) * (1.0 + 2.0 * h * k_cutoff) + 2.0 * h * c * abs(kappa)
    width = min(width, np.pi / (2.0 * frequency + 1e-300))
    return int(np.ceil(2.0 * k_cutoff / width))


def kernel_fourier_oracle(
    x: float,
    t: float,
    params: KernelParams,
    k_cutoff: float | None = None,
    quad: QuadratureSpec | None = None,
) -> float:
    """Evaluate K_h from its Fourier representation.

    Args:
        x (float): Abscissa offset x - x0.
        t (float): Time offset t - t0, |t| <= y0.
        params (KernelParams): Kernel parameters.
        k_cutoff (float, optional): Half-length of the Re k window; the
            default comes from default_k_cutoff.
        quad (QuadratureSpec, optional): s-quadrature policy for H.

    Returns:
        float: Real part of the representation.

    Raises:
        DomainError: If |t| > y0.
        TailTruncationError: If the cutoff leaves a non-negligible tail.
    """
    quad = quad or QuadratureSpec()
    x, t = float(x), float(t)
    if abs(t) > params.y0 * (1.0 + 1e-12):
        raise DomainError(f"Kernel requires |t| <= y0 = {params.y0}")
    if k_cutoff is None:
        k_cutoff = default_k_cutoff(params)
    check_k_cutoff(params, k_cutoff)

    h, c = params.h, params.c
    z = cone_height(params.y0, t)
    kappa = contour_shift(x, z, params)
    n_panels = _panel_count(x, kappa, params, k_cutoff)
    p, wp = composite_gauss_legendre(
        -k_cutoff, k_cutoff, n_panels, PANEL_ORDER
    )
    k = p + 1j * kappa

    def evaluate(level):
        s, ws = gauss_legendre(quad.nodes_s * 2**level, 0.0, np.pi / 2)
        sigma = np.sin(s)
        total = 0.0 + 0.0j
        magnitude = 0.0
        step = max(1, CHUNK_ELEMENTS // sigma.size)
        for sign in (1.0, -1.0):
            for start in range(0, k.size, step):
                block = slice(start, start + step)
                kb = k[block]
                outer = -1j * kb * x - h * kb * kb * (c + 1j * sign * x)
                f = np.exp(
                    outer[:, None] + sign * z * kb[:, None] * sigma[None, :]
                )
                total += wp[block] @ (f @ ws)
                magnitude += wp[block] @ (np.abs(f) @ ws)
        scale = 1.0 / (4.0 * np.pi * np.pi)
        return np.asarray(scale * total), np.asarray(scale * magnitude)

    result = refine(evaluate, quad.refinement, quad.rel_tol)
    value = complex(result.value)
    residue_tol = quad.rel_tol * abs(value.real) + float(
        noise_floor(result.magnitude)
    )
    if abs(value.imag) > max(residue_tol, 1e-12 * (1.0 + abs(value.real))):
        logger.warning(
            f"Fourier oracle imaginary residue {value.imag:.3g} at "
            f"(x, t) = ({x:g}, {t:g}), h = {h:g}"
        )
    return value.real
