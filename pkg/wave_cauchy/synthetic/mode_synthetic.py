"""Separated Dirichlet solutions of the wave equation on the half-space.

    u(x, y, t) = A sin(l y) X(k x) T(w t),  w = sqrt(k^2 + l^2),

with X and T each either cos or sin, solves u_tt = u_xx + u_yy and vanishes
on y = 0.
"""

from dataclasses import dataclass

import numpy as np

from wave_cauchy.utils.errors import DomainError

PHASES = {"cos": np.cos, "sin": np.sin}


@dataclass(frozen=True)
class Mode:
    """One Dirichlet mode.

    Args:
        amplitude (float): Amplitude A.
        k (float): Spatial frequency along the boundary.
        l (float): Vertical frequency, l > 0.
        x_phase (str): "cos" or "sin".
        t_phase (str): "cos" or "sin".
    """

    amplitude: float = 1.0
    k: float = 0.0
    l: float = 1.0  # noqa: E741
    x_phase: str = "cos"
    t_phase: str = "cos"

    def __post_init__(self):
        if not self.l > 0:
            raise DomainError(f"Mode.l must be positive, got {self.l}")
        for name in ("x_phase", "t_phase"):
            if getattr(self, name) not in PHASES:
                raise DomainError(
                    f"Mode.{name} must be 'cos' or 'sin', got "
                    f"{getattr(self, name)!r}"
                )

    @property
    def omega(self) -> float:
        return float(np.hypot(self.k, self.l))

    def phase_factor(self, x, t):
        """X(k x) T(w t)."""
        return PHASES[self.x_phase](self.k * np.asarray(x, dtype=float)) * PHASES[
            self.t_phase
        ](self.omega * np.asarray(t, dtype=float))

    def to_dict(self) -> dict:
        return {
            "amplitude": self.amplitude,
            "k": self.k,
            "l": self.l,
            "x_phase": self.x_phase,
            "t_phase": self.t_phase,
            "omega": self.omega,
        }


def mode_interior_value(mode: Mode, x, y, t):
    """Evaluate the mode solution u(x, y, t).

    Args:
        mode (Mode): The mode.
        x (float | np.ndarray): Abscissa.
        y (float | np.ndarray): Height.
        t (float | np.ndarray): Time.

    Returns:
        float | np.ndarray: u in the broadcast shape.
    """
    y = np.asarray(y, dtype=float)
    value = mode.amplitude * np.sin(mode.l * y) * mode.phase_factor(x, t)
    return float(value) if np.ndim(value) == 0 else value


def mode_normal_derivative(mode: Mode, x, t):
    """Exact du/dy at y = 0: A l X(k x) T(w t)."""
    value = mode.amplitude * mode.l * mode.phase_factor(x, t)
    return float(value) if np.ndim(value) == 0 else value
