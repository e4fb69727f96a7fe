"""Decay diagnostics of K_h on the band outside the aperture.

On the band D(sqrt(y0^2 - t^2)) + epsilon <= |x| <= d the kernel exponent
satisfies Re F <= -a epsilon^2 / h with a = c / (4 (c^2 + d^2)), hence
|K_h| <= C h^{-1/2} exp(-a epsilon^2 / h).
"""

from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd

from wave_cauchy.geometry.calc_geometry import aperture_d, cone_height
from wave_cauchy.kernel.calc_kernel import (
    KernelParams,
    evaluate_kernel,
    re_f,
)
from wave_cauchy.utils.errors import PreconditionError
from wave_cauchy.utils.logger import WaveCauchyLogger
from wave_cauchy.utils.quadrature_helpers import QuadratureSpec

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger

DECAY_COLUMNS = ["h", "x", "t", "log_abs_K", "bound_rhs", "a", "envelope"]


@dataclass(frozen=True)
class ExponentDiagnostics:
    """Endpoint values of Re F and the decay bound at one point."""

    re_f_at_sigma0: float
    re_f_at_sigma1: float
    re_f_max_over_sigma: float
    bound_rhs: float
    a: float

    def to_dict(self) -> dict:
        return asdict(self)


def decay_constant(c: float, d: float) -> float:
    """Return a = c / (4 (c^2 + d^2))."""
    return c / (4.0 * (c * c + d * d))


def band_lower_edge(params: KernelParams, epsilon: float, t):
    """Inner edge D(sqrt(y0^2 - t^2)) + epsilon of the band."""
    return aperture_d(cone_height(params.y0, t), params.c) + epsilon


def decay_diagnostics(
    x: float, t: float, params: KernelParams, epsilon: float, d: float
) -> ExponentDiagnostics:
    """Evaluate Re F at sigma = 0 and 1 and the bound -a epsilon^2 / h.

    Re F is convex in sigma, so its maximum over [0, 1] is the larger
    endpoint value; on the band it never exceeds bound_rhs.

    Args:
        x (float): Abscissa offset.
        t (float): Time offset, |t| <= y0.
        params (KernelParams): Kernel parameters.
        epsilon (float): Aperture margin.
        d (float): Support radius of the data.

    Returns:
        ExponentDiagnostics: The endpoint values, their max and the bound.

    Raises:
        PreconditionError: If (x, t) lies inside the aperture or |x| > d.
    """
    if abs(t) > params.y0:
        raise PreconditionError(f"|t| = {abs(t):g} exceeds y0 = {params.y0}")
    lower = band_lower_edge(params, epsilon, t)
    if abs(x) < lower or abs(x) > d:
        raise PreconditionError(
            f"(x, t) = ({x:g}, {t:g}) is outside the band "
            f"{lower:g} <= |x| <= {d:g}"
        )
    z = cone_height(params.y0, t)
    at_zero = re_f(x, z, 0.0, params)
    at_one = re_f(x, z, 1.0, params)
    a = decay_constant(params.c, d)
    return ExponentDiagnostics(
        re_f_at_sigma0=at_zero,
        re_f_at_sigma1=at_one,
        re_f_max_over_sigma=max(at_zero, at_one),
        bound_rhs=-a * epsilon**2 / params.h,
        a=a,
    )


def sample_band(
    params: KernelParams, epsilon: float, d: float, n_t: int, n_x: int
) -> tuple[np.ndarray, np.ndarray]:
    """Sample the band on a uniform grid, both signs of x.

    Args:
        params (KernelParams): Kernel parameters (h unused).
        epsilon (float): Aperture margin.
        d (float): Outer edge of the band.
        n_t (int): Time samples over [-y0, y0].
        n_x (int): Abscissa samples per sign and time.

    Returns:
        tuple[np.ndarray, np.ndarray]: Flat x and t arrays; empty if the band
        is empty (epsilon > d).
    """
    xs, ts = [], []
    for t in np.linspace(-params.y0, params.y0, n_t):
        lower = band_lower_edge(params, epsilon, t)
        if lower > d:
            continue
        x = np.linspace(lower, d, n_x)
        xs.append(np.concatenate([-x[::-1], x]))
        ts.append(np.full(2 * n_x, t))
    if not xs:
        return np.empty(0), np.empty(0)
    return np.concatenate(xs), np.concatenate(ts)


def decay_envelope(
    y0: float,
    c: float,
    h_list: list[float],
    epsilon: float,
    d: float,
    n_t: int = 21,
    n_x: int = 21,
    quad: QuadratureSpec | None = None,
) -> pd.DataFrame:
    """Sample log|K_h| on the band for each h with the rescaled envelope.

    The envelope for h is max over the band of |K_h| h^{1/2} e^{a eps^2/h};
    it stays bounded as h decreases.

    Args:
        y0 (float): Height of the reconstructed point.
        c (float): Regularization-shape parameter.
        h_list (list[float]): Regularization parameters.
        epsilon (float): Aperture margin.
        d (float): Outer edge of the band.
        n_t (int): Time samples.
        n_x (int): Abscissa samples per sign and time.
        quad (QuadratureSpec, optional): s-quadrature policy.

    Returns:
        pd.DataFrame: Columns h, x, t, log_abs_K, bound_rhs, a, envelope;
        no rows when epsilon > d.
    """
    a = decay_constant(c, d)
    frames = []
    for h in h_list:
        params = KernelParams(y0=y0, c=c, h=h)
        x, t = sample_band(params, epsilon, d, n_t, n_x)
        if x.size == 0:
            logger.info(f"Band is empty for epsilon = {epsilon} > d = {d}")
            break
        kernel = evaluate_kernel(x, t, params, quad).values
        log_abs = np.log(np.maximum(np.abs(kernel), np.finfo(float).tiny))
        log_envelope = np.max(log_abs + 0.5 * np.log(h) + a * epsilon**2 / h)
        logger.info(f"Decay envelope at h = {h:g}: {np.exp(log_envelope):.6g}")
        frames.append(
            pd.DataFrame(
                {
                    "h": np.full(x.size, float(h)),
                    "x": x,
                    "t": t,
                    "log_abs_K": log_abs,
                    "bound_rhs": np.full(
                        x.size, -a * epsilon**2 / h - 0.5 * np.log(h)
                    ),
                    "a": np.full(x.size, a),
                    "envelope": np.full(x.size, np.exp(log_envelope)),
                }
            )
        )
    if not frames:
        return pd.DataFrame({name: pd.Series(dtype=float) for name in DECAY_COLUMNS})
    return pd.concat(frames, ignore_index=True)


def envelope_non_increasing(frame: pd.DataFrame, slack: float = 0.2) -> bool:
    """Check the per-h envelope does not grow as h decreases.

    Args:
        frame (pd.DataFrame): Output of decay_envelope.
        slack (float): Allowed relative growth between consecutive h.

    Returns:
        bool: True if every envelope is within (1 + slack) of the envelope at
        the previous, larger h.
    """
    if frame.empty:
        return True
    per_h = (
        frame.groupby("h")["envelope"].first().sort_index(ascending=False)
    )
    values = per_h.to_numpy()
    return bool(np.all(values[1:] <= (1.0 + slack) * values[:-1]))
