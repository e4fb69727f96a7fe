"""Transfer factor, G-functions and the Bessel propagator.

Conventions: the forward transform in (x, t) uses exp(-i(kx + wt)) with
measure dx dt; the inverse carries 1/(2 pi) per axis. With
v = du/dy(x, 0, t) the interior spectrum is

    u~(k, y, w) = v~(k, w) * sin(y sqrt(w^2 - k^2)) / sqrt(w^2 - k^2).
"""

import numpy as np
from scipy.special import i0

from wave_cauchy.kernel.calc_kernel import CHUNK_ELEMENTS, EXPONENT_LIMIT
from wave_cauchy.utils.errors import KernelOverflowError
from wave_cauchy.utils.logger import WaveCauchyLogger
from wave_cauchy.utils.quadrature_helpers import (
    QuadratureSpec,
    gauss_legendre,
    refine,
)

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger


def _scalar_or_array(values):
    values = np.asarray(values)
    return float(values) if values.ndim == 0 else values


def transfer_factor(k, omega, y0: float):
    """Evaluate sin(y0 sqrt(w^2 - k^2)) / sqrt(w^2 - k^2).

    At w^2 = k^2 the value is the limit y0; for |w| < |k| the analytic
    continuation sinh(y0 sqrt(k^2 - w^2)) / sqrt(k^2 - w^2) is returned.

    Args:
        k (float | np.ndarray): Spatial frequency.
        omega (float | np.ndarray): Temporal frequency.
        y0 (float): Height of the interior point.

    Returns:
        float | np.ndarray: The transfer factor in the broadcast shape.
    """
    k, omega = np.broadcast_arrays(
        np.asarray(k, dtype=float), np.asarray(omega, dtype=float)
    )
    q = omega * omega - k * k
    root = np.sqrt(np.abs(q))
    # np.sinc(u) = sin(pi u) / (pi u) carries the removable singularity.
    propagating = y0 * np.sinc(y0 * root / np.pi)
    safe = np.where(root > 0.0, root, 1.0)
    evanescent = np.where(root > 0.0, np.sinh(y0 * safe) / safe, y0)
    return _scalar_or_array(np.where(q >= 0.0, propagating, evanescent))


def _angular_nodes(n: int, y0: float):
    """Nodes of t = y0 sin(theta) on [0, y0] with the matching weights."""
    theta, w = gauss_legendre(n, 0.0, np.pi / 2)
    return y0 * np.sin(theta), y0 * np.cos(theta), y0 * np.cos(theta) * w


def _check_exponent(k: np.ndarray, y0: float) -> None:
    if k.size and np.max(np.abs(k)) * y0 > EXPONENT_LIMIT:
        raise KernelOverflowError(np.max(np.abs(k)) * y0)


def g_functions(k, omega, y0: float, quad: QuadratureSpec | None = None):
    """Evaluate G+(k, w) and G-(k, w).

        G+-(k, w) = (1 / 2 pi^2) int_{-y0}^{y0} exp(iwt)
                    int_0^{pi/2} exp(+-k sqrt(y0^2 - t^2) sin s) ds dt.

    The t-integrand is even after the s-integral, so G+- is real and even
    in w. With t = y0 sin(theta) both integrands are analytic.

    Args:
        k (float | np.ndarray): Spatial frequency.
        omega (float | np.ndarray): Temporal frequency.
        y0 (float): Height of the interior point.
        quad (QuadratureSpec, optional): Uses nodes_t for theta and nodes_s
            for s, with the same refinement policy as the kernel.

    Returns:
        tuple: (G+, G-), each a float or an array in the broadcast shape.

    Raises:
        KernelOverflowError: If |k| y0 exceeds the exponent budget.
    """
    quad = quad or QuadratureSpec()
    k_arr, w_arr = np.broadcast_arrays(
        np.asarray(k, dtype=float), np.asarray(omega, dtype=float)
    )
    shape = k_arr.shape
    k_flat, w_flat = k_arr.ravel(), w_arr.ravel()
    _check_exponent(k_flat, y0)

    def evaluate(level):
        t, z, wt = _angular_nodes(quad.nodes_t * 2**level, y0)
        s, ws = gauss_legendre(quad.nodes_s * 2**level, 0.0, np.pi / 2)
        sigma = np.sin(s)
        values = np.empty((2, k_flat.size))
        magnitude = np.empty((2, k_flat.size))
        step = max(1, CHUNK_ELEMENTS // (t.size * s.size))
        for start in range(0, k_flat.size, step):
            block = slice(start, start + step)
            kb, wb = k_flat[block], w_flat[block]
            cosine = np.cos(wb[:, None] * t[None, :])
            for row, sign in enumerate((1.0, -1.0)):
                arg = sign * kb[:, None, None] * z[None, :, None]
                h_vals = np.exp(arg * sigma[None, None, :]) @ ws / np.pi
                f = cosine * h_vals
                values[row, block] = f @ wt / np.pi
                magnitude[row, block] = np.abs(f) @ wt / np.pi
        return values, magnitude

    result = refine(evaluate, quad.refinement, quad.rel_tol)
    if not result.converged:
        logger.warning("G-function quadrature not converged")
    g_plus = result.value[0].reshape(shape)
    g_minus = result.value[1].reshape(shape)
    return _scalar_or_array(g_plus), _scalar_or_array(g_minus)


def bessel_propagator(k, omega, y0: float, quad: QuadratureSpec | None = None):
    """Evaluate (1 / 2 pi) int_{-y0}^{y0} exp(iwt) I0(k sqrt(y0^2 - t^2)) / 2 dt.

    Equals transfer_factor(k, w, y0) / (2 pi).

    Args:
        k (float | np.ndarray): Spatial frequency.
        omega (float | np.ndarray): Temporal frequency.
        y0 (float): Height of the interior point.
        quad (QuadratureSpec, optional): Uses nodes_t for theta.

    Returns:
        float | np.ndarray: The propagator value.

    Raises:
        KernelOverflowError: If |k| y0 exceeds the exponent budget.
    """
    quad = quad or QuadratureSpec()
    k_arr, w_arr = np.broadcast_arrays(
        np.asarray(k, dtype=float), np.asarray(omega, dtype=float)
    )
    shape = k_arr.shape
    k_flat, w_flat = k_arr.ravel(), w_arr.ravel()
    _check_exponent(k_flat, y0)

    def evaluate(level):
        t, z, wt = _angular_nodes(quad.nodes_t * 2**level, y0)
        f = np.cos(w_flat[:, None] * t[None, :]) * i0(
            k_flat[:, None] * z[None, :]
        )
        return f @ wt / (2.0 * np.pi), np.abs(f) @ wt / (2.0 * np.pi)

    result = refine(evaluate, quad.refinement, quad.rel_tol)
    return _scalar_or_array(result.value.reshape(shape))
