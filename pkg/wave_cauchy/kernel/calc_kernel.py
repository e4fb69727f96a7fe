"""Closed-form evaluation of the regularization kernel K_h and its helpers.

The kernel is

    K_h(x, t) = 1 / (2 pi^{3/2} sqrt(h))
                * Re[ (c + ix)^{-1/2} * int_0^{pi/2} exp(F(s)) ds ],
    F(s) = -(x + i z sin s)^2 / (4h (c + ix)),  z = sqrt(y0^2 - t^2),

with the principal square root (Re(c + ix) = c > 0, so Re sqrt > 0).
"""

from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from wave_cauchy.geometry.calc_geometry import cone_height
from wave_cauchy.utils.errors import DomainError, KernelOverflowError
from wave_cauchy.utils.logger import WaveCauchyLogger
from wave_cauchy.utils.quadrature_helpers import (
    QuadratureSpec,
    gauss_legendre,
    refine,
)

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger

# e^709 is the largest double; keep headroom for the prefactors.
EXPONENT_LIMIT = 700.0
# Complex elements per vectorised block of the s-integral.
CHUNK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class KernelParams:
    """Parameters (y0, c, h) of the kernel K_h.

    Args:
        y0 (float): Height of the reconstructed point, y0 > 0.
        c (float): Regularization-shape parameter, c > 0.
        h (float): Regularization parameter, h > 0.
    """

    y0: float
    c: float
    h: float

    def __post_init__(self):
        for name in ("y0", "c", "h"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(
                    f"KernelParams.{name} must be positive, got {value}"
                )

    def with_h(self, h: float) -> "KernelParams":
        """Return a copy with a different regularization parameter."""
        return KernelParams(y0=self.y0, c=self.c, h=h)

    def to_dict(self) -> dict:
        return asdict(self)


class KernelEvaluation(NamedTuple):
    """Kernel values with the diagnostics of their s-quadrature."""

    values: np.ndarray
    level: int
    converged: bool
    max_exponent: float
    magnitude: np.ndarray


def _scalar_or_array(values: np.ndarray):
    return float(values) if np.ndim(values) == 0 else values


def h_function(z, quad: QuadratureSpec | None = None):
    """Evaluate H(z) = (1/pi) * int_0^{pi/2} exp(z sin s) ds.

    H(0) = 1/2, H is strictly increasing and H(z) + H(-z) = I0(z).

    Args:
        z (float | np.ndarray): Real argument(s).
        quad (QuadratureSpec, optional): s-quadrature policy.

    Returns:
        float | np.ndarray: H(z).

    Raises:
        KernelOverflowError: If |z| > 700.
    """
    quad = quad or QuadratureSpec()
    z_arr = np.asarray(z, dtype=float)
    if z_arr.size and np.max(np.abs(z_arr)) > EXPONENT_LIMIT:
        raise KernelOverflowError(np.max(np.abs(z_arr)))
    flat = z_arr.ravel()

    def evaluate(level):
        s, w = gauss_legendre(quad.nodes_s * 2**level, 0.0, np.pi / 2)
        f = np.exp(flat[:, None] * np.sin(s)[None, :])
        value = f @ w / np.pi
        return value, value

    result = refine(evaluate, quad.refinement, quad.rel_tol)
    return _scalar_or_array(result.value.reshape(z_arr.shape))


def log_h_function(z, quad: QuadratureSpec | None = None):
    """Evaluate log H(z) without overflow for large positive z.

    Uses H(z) = exp(z) * (1/pi) * int_0^{pi/2} exp(z (sin s - 1)) ds for
    z > 0.

    Args:
        z (float | np.ndarray): Real argument(s).
        quad (QuadratureSpec, optional): s-quadrature policy.

    Returns:
        float | np.ndarray: log H(z).
    """
    quad = quad or QuadratureSpec()
    z_arr = np.asarray(z, dtype=float)
    flat = z_arr.ravel()
    shift = np.maximum(flat, 0.0)

    def evaluate(level):
        s, w = gauss_legendre(quad.nodes_s * 2**level, 0.0, np.pi / 2)
        f = np.exp(flat[:, None] * np.sin(s)[None, :] - shift[:, None])
        value = f @ w / np.pi
        return value, value

    result = refine(evaluate, quad.refinement, quad.rel_tol)
    log_h = np.log(result.value) + shift
    return _scalar_or_array(log_h.reshape(z_arr.shape))


def i0_series(z, max_terms: int = 400):
    """Modified Bessel function I0 from its power series.

    I0(z) = sum_m (z^2 / 4)^m / (m!)^2. Kept independent of scipy so it can
    serve as an oracle for the identity H(z) + H(-z) = I0(z).

    Args:
        z (float | np.ndarray): Real argument(s).
        max_terms (int): Upper bound on the number of series terms.

    Returns:
        float | np.ndarray: I0(z).
    """
    q = 0.25 * np.asarray(z, dtype=float) ** 2
    term = np.ones_like(q)
    total = np.ones_like(q)
    for m in range(1, max_terms):
        term = term * q / (m * m)
        total = total + term
        if np.all(term <= 1e-17 * total):
            break
    return _scalar_or_array(total)


def re_f(x, z, sigma, params: KernelParams):
    """Real part of the kernel exponent F at sigma = sin s.

    Re F = (c (-x^2 + z^2 sigma^2) - 2 x^2 z sigma) / (4h (c^2 + x^2)),
    convex in sigma.

    Args:
        x (float | np.ndarray): Abscissa offset(s).
        z (float | np.ndarray): Cone height(s) sqrt(y0^2 - t^2) >= 0.
        sigma (float | np.ndarray): Values in [0, 1].
        params (KernelParams): Kernel parameters.

    Returns:
        float | np.ndarray: Re F.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    c, h = params.c, params.h
    numerator = c * (-x * x + z * z * sigma * sigma) - 2.0 * x * x * z * sigma
    return _scalar_or_array(numerator / (4.0 * h * (c * c + x * x)))


def max_re_f(x, z, params: KernelParams):
    """Maximum of Re F over sigma in [0, 1] (attained at an endpoint)."""
    return np.maximum(re_f(x, z, 0.0, params), re_f(x, z, 1.0, params))


def _check_time_window(t: np.ndarray, y0: float) -> None:
    if np.any(np.abs(t) > y0 * (1.0 + 1e-12)):
        raise DomainError(f"Kernel requires |t| <= y0 = {y0}")


def _s_integral(
    x: np.ndarray, z: np.ndarray, params: KernelParams, n_s: int
) -> tuple[np.ndarray, np.ndarray]:
    """Kernel values and sum |w integrand| on flat point arrays."""
    c, h = params.c, params.h
    s, w = gauss_legendre(n_s, 0.0, np.pi / 2)
    sigma = np.sin(s)
    prefactor = 1.0 / np.sqrt(c + 1j * x)
    denominator = 4.0 * h * (c + 1j * x)
    integral = np.empty(x.shape, dtype=complex)
    magnitude = np.empty(x.shape, dtype=float)
    step = max(1, CHUNK_ELEMENTS // n_s)
    for start in range(0, x.size, step):
        block = slice(start, start + step)
        arg = x[block, None] + 1j * z[block, None] * sigma[None, :]
        f = np.exp(-(arg * arg) / denominator[block, None])
        integral[block] = f @ w
        magnitude[block] = np.abs(f) @ w
    scale = 1.0 / (2.0 * np.pi**1.5 * np.sqrt(h))
    values = scale * (prefactor * integral).real
    return values, scale * np.abs(prefactor) * magnitude


def evaluate_kernel(
    x, t, params: KernelParams, quad: QuadratureSpec | None = None
) -> KernelEvaluation:
    """Evaluate K_h(x, y0, t) with s-refinement and overflow guard.

    Args:
        x (float | np.ndarray): Abscissa offset(s) x - x0.
        t (float | np.ndarray): Time offset(s) t - t0, |t| <= y0.
        params (KernelParams): Kernel parameters.
        quad (QuadratureSpec, optional): s-quadrature policy.

    Returns:
        KernelEvaluation: Values in the broadcast shape of x and t, the
        refinement level, convergence flag, maximum of Re F and the sum of
        |w integrand| used for the rounding floor.

    Raises:
        DomainError: If |t| > y0.
        KernelOverflowError: If max Re F exceeds the exponent budget.
    """
    quad = quad or QuadratureSpec()
    x_arr, t_arr = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(t, dtype=float)
    )
    shape = x_arr.shape
    _check_time_window(t_arr, params.y0)
    x_flat = x_arr.ravel()
    z_flat = cone_height(params.y0, t_arr.ravel())
    z_flat = np.atleast_1d(z_flat)

    if x_flat.size == 0:
        empty = np.zeros(shape)
        return KernelEvaluation(empty, 0, True, -np.inf, empty)

    max_exponent = float(np.max(max_re_f(x_flat, z_flat, params)))
    if max_exponent > EXPONENT_LIMIT:
        raise KernelOverflowError(max_exponent, params.h, EXPONENT_LIMIT)

    def evaluate(level):
        return _s_integral(x_flat, z_flat, params, quad.nodes_s * 2**level)

    result = refine(evaluate, quad.refinement, quad.rel_tol)
    if not result.converged:
        logger.warning(
            f"Kernel s-quadrature not converged after {result.level} "
            f"doublings (h = {params.h:g})"
        )
    return KernelEvaluation(
        values=result.value.reshape(shape),
        level=result.level,
        converged=result.converged,
        max_exponent=max_exponent,
        magnitude=result.magnitude.reshape(shape),
    )


def kernel_closed_form(
    x, t, params: KernelParams, quad: QuadratureSpec | None = None
):
    """Evaluate the regularization kernel K_h from its closed form.

    Args:
        x (float | np.ndarray): Abscissa offset(s) x - x0.
        t (float | np.ndarray): Time offset(s) t - t0, |t| <= y0.
        params (KernelParams): Kernel parameters.
        quad (QuadratureSpec, optional): s-quadrature policy.

    Returns:
        float | np.ndarray: Real kernel values.
    """
    return _scalar_or_array(evaluate_kernel(x, t, params, quad).values)
