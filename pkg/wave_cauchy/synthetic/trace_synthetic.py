"""Boundary traces v(x, t) = du/dy(x, 0, t), analytic or sampled on a grid."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
import pandas as pd
from scipy.interpolate import RegularGridInterpolator

from wave_cauchy.synthetic.mode_synthetic import (
    Mode,
    mode_interior_value,
    mode_normal_derivative,
)
from wave_cauchy.utils.errors import DomainError
from wave_cauchy.utils.logger import WaveCauchyLogger

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger

TRACE_COLUMNS = ["x", "t", "v"]


@dataclass(frozen=True, eq=False)
class AnalyticTrace:
    """A trace given by a closure, with the modes it is built from.

    Args:
        func (Callable): Vectorised function (x, t) -> v.
        modes (tuple | None): Pairs (weight, Mode) whose weighted sum the
            trace is, or None when the interior solution is unknown.
    """

    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    modes: tuple[tuple[float, Mode], ...] | None = ()

    def __call__(self, x, t) -> np.ndarray:
        x, t = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(t, dtype=float)
        )
        return np.zeros(x.shape) + np.asarray(self.func(x, t), dtype=float)

    def interior_value(self, x, y, t) -> float:
        """Exact u(x, y, t) of the underlying mode superposition.

        Raises:
            DomainError: If the trace does not come from modes.
        """
        if self.modes is None:
            raise DomainError("Trace has no known interior solution")
        return float(
            sum(w * mode_interior_value(m, x, y, t) for w, m in self.modes)
        )


def zero_trace() -> AnalyticTrace:
    """The trace of the zero solution."""
    return AnalyticTrace(func=lambda x, t: np.zeros(np.shape(x)), modes=())


def mode_boundary_trace(mode: Mode) -> AnalyticTrace:
    """Exact trace A l X(k x) T(w t) of a mode."""
    return AnalyticTrace(
        func=lambda x, t: mode_normal_derivative(mode, x, t),
        modes=((1.0, mode),),
    )


def superpose(traces: list[tuple[float, AnalyticTrace]]) -> AnalyticTrace:
    """Weighted sum of analytic traces; the empty sum is the zero trace.

    Args:
        traces (list[tuple[float, AnalyticTrace]]): Pairs (weight, trace).

    Returns:
        AnalyticTrace: The pointwise weighted sum.
    """
    if not traces:
        return zero_trace()
    pairs = [(float(w), tr) for w, tr in traces]

    def func(x, t):
        return sum(w * tr(x, t) for w, tr in pairs)

    if any(tr.modes is None for _, tr in pairs):
        modes = None
    else:
        modes = tuple((w * wm, m) for w, tr in pairs for wm, m in tr.modes)
    return AnalyticTrace(func=func, modes=modes)


def evenize_in_t(trace: AnalyticTrace) -> AnalyticTrace:
    """Even part (v(x, t) + v(x, -t)) / 2 in time."""
    if trace.modes is None:
        modes = None
    else:
        modes = tuple((w, m) for w, m in trace.modes if m.t_phase == "cos")
    return AnalyticTrace(
        func=lambda x, t: 0.5 * (trace(x, t) + trace(x, -np.asarray(t))),
        modes=modes,
    )


def shift_trace(
    trace: AnalyticTrace, x_shift: float, t_shift: float
) -> AnalyticTrace:
    """The trace (x, t) -> v(x + x_shift, t + t_shift)."""
    return AnalyticTrace(
        func=lambda x, t: trace(np.asarray(x) + x_shift, np.asarray(t) + t_shift),
        modes=None,
    )


def _check_uniform(name: str, axis: np.ndarray) -> float:
    if axis.ndim != 1 or axis.size < 2:
        raise DomainError(f"SampledTrace.{name} needs at least two nodes")
    steps = np.diff(axis)
    if not np.all(steps > 0):
        raise DomainError(f"SampledTrace.{name} must be strictly increasing")
    if not np.allclose(steps, steps[0], rtol=1e-6, atol=0.0):
        raise DomainError(f"SampledTrace.{name} must be uniformly spaced")
    return float((axis[-1] - axis[0]) / (axis.size - 1))


@dataclass(frozen=True, eq=False)
class SampledTrace:
    """A trace sampled on a uniform grid {x_i} x {t_j}.

    Args:
        x (np.ndarray): Abscissae, shape (nx,).
        t (np.ndarray): Times, shape (nt,).
        values (np.ndarray): v(x_i, t_j), shape (nx, nt).
        metadata (dict): Provenance, written as CSV comments.
    """

    x: np.ndarray
    t: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        _check_uniform("x", self.x)
        _check_uniform("t", self.t)
        if self.values.shape != (self.x.size, self.t.size):
            raise DomainError(
                f"SampledTrace.values has shape {self.values.shape}, "
                f"expected {(self.x.size, self.t.size)}"
            )

    @property
    def dx(self) -> float:
        return _check_uniform("x", self.x)

    @property
    def dt(self) -> float:
        return _check_uniform("t", self.t)

    def grid_metadata(self) -> dict:
        """Grid description for the CSV header."""
        return {
            "nx": self.x.size,
            "nt": self.t.size,
            "x_min": float(self.x[0]),
            "x_max": float(self.x[-1]),
            "t_min": float(self.t[0]),
            "t_max": float(self.t[-1]),
        }

    def covers(
        self, x_lo: float, x_hi: float, t_lo: float, t_hi: float
    ) -> bool:
        """True if the grid contains the rectangle [x_lo, x_hi] x [t_lo, t_hi]."""
        x_tol = 1e-9 * max(1.0, abs(self.x[0]), abs(self.x[-1]))
        t_tol = 1e-9 * max(1.0, abs(self.t[0]), abs(self.t[-1]))
        return bool(
            self.x[0] <= x_lo + x_tol
            and self.x[-1] >= x_hi - x_tol
            and self.t[0] <= t_lo + t_tol
            and self.t[-1] >= t_hi - t_tol
        )

    @cached_property
    def _interpolator(self) -> RegularGridInterpolator:
        return RegularGridInterpolator(
            (self.x, self.t),
            self.values,
            method="linear",
            bounds_error=False,
            fill_value=None,
        )

    def __call__(self, x, t) -> np.ndarray:
        """Bilinear interpolation of the grid at (x, t)."""
        x, t = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(t, dtype=float)
        )
        points = np.stack([x.ravel(), t.ravel()], axis=-1)
        return self._interpolator(points).reshape(x.shape)

    def probes(self) -> list[tuple[float, float, float]]:
        """Probe triples (x, y, u) recorded in the metadata."""
        found = []
        for key in sorted(
            (k for k in self.metadata if k.startswith("probe_")),
            key=lambda k: int(k.split("_")[1]),
        ):
            value = self.metadata[key]
            if isinstance(value, str):
                value = [float(part) for part in value.split(",")]
            found.append(tuple(float(v) for v in value))
        return found

    def probe_value(self, x: float, y: float, tol: float = 1e-9) -> float | None:
        """Recorded u(x, y, 0) at a probe location, if there is one."""
        for px, py, pu in self.probes():
            if abs(px - x) <= tol and abs(py - y) <= tol:
                return pu
        return None


def sample_trace(
    trace: AnalyticTrace,
    x_range: tuple[float, float],
    t_range: tuple[float, float],
    nx: int,
    nt: int,
    metadata: dict | None = None,
) -> SampledTrace:
    """Sample an analytic trace on a uniform grid including the endpoints.

    Args:
        trace (AnalyticTrace): The trace.
        x_range (tuple[float, float]): (x_min, x_max).
        t_range (tuple[float, float]): (t_min, t_max).
        nx (int): Number of abscissae, >= 2.
        nt (int): Number of times, >= 2.
        metadata (dict, optional): Extra provenance.

    Returns:
        SampledTrace: The sampled grid.

    Raises:
        DomainError: If a count is below 2 or a range is degenerate.
    """
    if nx < 2 or nt < 2:
        raise DomainError("sample_trace needs nx >= 2 and nt >= 2")
    if not (x_range[1] > x_range[0] and t_range[1] > t_range[0]):
        raise DomainError(f"Degenerate sampling range {x_range} x {t_range}")
    x = np.linspace(x_range[0], x_range[1], int(nx))
    t = np.linspace(t_range[0], t_range[1], int(nt))
    values = trace(x[:, None], t[None, :])
    return SampledTrace(x=x, t=t, values=values, metadata=dict(metadata or {}))


def trace_to_frame(trace: SampledTrace) -> pd.DataFrame:
    """Long table with columns x, t, v; x varies slowest."""
    xx, tt = np.meshgrid(trace.x, trace.t, indexing="ij")
    return pd.DataFrame(
        {"x": xx.ravel(), "t": tt.ravel(), "v": trace.values.ravel()}
    )


def trace_from_frame(df: pd.DataFrame, metadata: dict | None = None) -> SampledTrace:
    """Rebuild a sampled trace from its long table.

    Raises:
        DomainError: If the rows do not form a complete grid.
    """
    table = df.pivot(index="x", columns="t", values="v").sort_index(axis=0)
    table = table.sort_index(axis=1)
    if table.isna().to_numpy().any() or table.size != len(df):
        raise DomainError("Trace rows do not form a complete x-t grid")
    return SampledTrace(
        x=table.index.to_numpy(dtype=float),
        t=table.columns.to_numpy(dtype=float),
        values=table.to_numpy(dtype=float),
        metadata=dict(metadata or {}),
    )
