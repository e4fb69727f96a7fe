"""Aperture function D(z) and the boundary integration set U."""

from dataclasses import asdict, dataclass

import numpy as np

from wave_cauchy.utils.errors import DomainError


def aperture_d(z, c: float):
    """Evaluate the aperture function D(z) = z * sqrt(c / (c + 2z)).

    D is zero only at z = 0, strictly increasing, and D(z) < z for z > 0.

    Args:
        z (float | np.ndarray): Non-negative length(s).
        c (float): Positive regularization-shape parameter.

    Returns:
        float | np.ndarray: D(z), same shape as ``z``.

    Raises:
        DomainError: If any z < 0 or c <= 0.
    """
    if not c > 0:
        raise DomainError(f"aperture_d requires c > 0, got c = {c}")
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 0) or np.any(np.isnan(z_arr)):
        raise DomainError("aperture_d requires z >= 0")
    result = z_arr * np.sqrt(c / (c + 2.0 * z_arr))
    return float(result) if result.ndim == 0 else result


def cone_height(y0: float, dt):
    """Return sqrt(y0**2 - dt**2) with the radicand clamped at zero.

    Args:
        y0 (float): Height of the interior point.
        dt (float | np.ndarray): Time offset(s) t - t0.

    Returns:
        float | np.ndarray: The height z of the cone section.
    """
    dt_arr = np.asarray(dt, dtype=float)
    result = np.sqrt(np.maximum(y0 * y0 - dt_arr * dt_arr, 0.0))
    return float(result) if result.ndim == 0 else result


@dataclass(frozen=True)
class Aperture:
    """Parameters of the boundary set U for the point (x0, y0, t0).

    Args:
        y0 (float): Height of the reconstructed point, y0 > 0.
        c (float): Regularization-shape parameter, c > 0.
        epsilon (float): Margin added to D, epsilon > 0.
        x0 (float): Abscissa of the reconstructed point.
        t0 (float): Time of the reconstructed point.
    """

    y0: float
    c: float
    epsilon: float
    x0: float = 0.0
    t0: float = 0.0

    def __post_init__(self):
        if not self.y0 > 0:
            raise DomainError(f"Aperture.y0 must be positive, got {self.y0}")
        if not self.c > 0:
            raise DomainError(f"Aperture.c must be positive, got {self.c}")
        if not self.epsilon > 0:
            raise DomainError(
                f"Aperture.epsilon must be positive, got {self.epsilon}"
            )

    @property
    def rect_halfwidth(self) -> float:
        """Half-width D(y0) + epsilon of the enclosing rectangle."""
        return aperture_d(self.y0, self.c) + self.epsilon

    def to_dict(self) -> dict:
        return asdict(self)


def slice_halfwidth(ap: Aperture, t):
    """Half-width D(sqrt(y0^2 - (t - t0)^2)) + epsilon of the slice of U at t.

    Args:
        ap (Aperture): The aperture.
        t (float | np.ndarray): Time(s) with |t - t0| <= y0.

    Returns:
        float | np.ndarray: Slice half-width; exactly epsilon at the tips.

    Raises:
        DomainError: If |t - t0| > y0 for any t.
    """
    dt = np.asarray(t, dtype=float) - ap.t0
    if np.any(np.abs(dt) > ap.y0):
        raise DomainError(
            f"slice_halfwidth requires |t - t0| <= y0 = {ap.y0}"
        )
    result = aperture_d(cone_height(ap.y0, dt), ap.c) + ap.epsilon
    return float(result) if np.ndim(result) == 0 else result


def contains(ap: Aperture, x, t):
    """Test membership of boundary points (x, t) in U (closed set).

    Args:
        ap (Aperture): The aperture.
        x (float | np.ndarray): Abscissa(s).
        t (float | np.ndarray): Time(s).

    Returns:
        bool | np.ndarray: True where |t - t0| <= y0 and
        |x - x0| <= slice_halfwidth(ap, t).
    """
    x_arr, t_arr = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(t, dtype=float)
    )
    dt = t_arr - ap.t0
    in_time = np.abs(dt) <= ap.y0
    # Points outside the time window get z = 0; they are masked anyway.
    width = aperture_d(cone_height(ap.y0, np.where(in_time, dt, ap.y0)), ap.c)
    inside = in_time & (np.abs(x_arr - ap.x0) <= width + ap.epsilon)
    return bool(inside) if inside.ndim == 0 else inside
