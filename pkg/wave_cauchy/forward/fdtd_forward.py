"""Leapfrog solver for u_tt = u_xx + u_yy on the half-plane y > 0, u = 0 on y = 0.

The grid is x_i = (i - Nx/2) dx on [-X, X] and y_j = j dx on [0, Y] (or
[-Y, Y] in full-plane mode, with odd initial data). The artificial
boundaries carry u = 0; the run is only valid while no reflection from them
can reach the observation set, which is checked before time-stepping.
"""

from dataclasses import asdict, dataclass
from typing import Callable, NamedTuple

import numpy as np
import pandas as pd

from wave_cauchy.synthetic.mode_synthetic import Mode, mode_interior_value
from wave_cauchy.synthetic.trace_synthetic import SampledTrace
from wave_cauchy.utils.errors import SolverConstraintError
from wave_cauchy.utils.logger import WaveCauchyLogger

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger

INITIAL_DATA = ("zero", "bump", "windowed_mode")
SUPPORT_THRESHOLD = 1e-12
PROBE_COLUMNS = ["probe", "x", "y", "t", "u"]


@dataclass(frozen=True)
class FdtdConfig:
    """Grid, time stepping and initial data of a forward run.

    Args:
        half_width (float): X, the grid spans [-X, X].
        height (float): Y, the grid spans [0, Y].
        dx (float): Grid spacing in x and y.
        dt (float): Time step, dt <= dx / sqrt(2).
        final_time (float): T.
        initial (str): "zero", "bump" or "windowed_mode".
        bump_center (tuple): Centre of the bump.
        bump_radius (float): Radius of the bump support.
        mode (Mode | None): Mode for "windowed_mode" (t_phase must be cos).
        window_inner (float): Radius where the window is identically 1.
        window_outer (float): Radius beyond which the window vanishes.
        trace_halfwidth (float): Recorded traces span |x| <= this.
        trace_stride (int): Keep every n-th node of the trace in x and t.
        full_plane (bool): Solve on [-Y, Y] with the odd extension.
    """

    half_width: float = 11.2
    height: float = 6.6
    dx: float = 0.02
    dt: float = 0.01
    final_time: float = 10.0
    initial: str = "bump"
    bump_center: tuple[float, float] = (0.0, 1.2)
    bump_radius: float = 0.8
    mode: Mode | None = None
    window_inner: float = 2.5
    window_outer: float = 3.5
    trace_halfwidth: float = 11.0
    trace_stride: int = 1
    full_plane: bool = False

    def __post_init__(self):
        for name in (
            "half_width", "height", "dx", "dt", "final_time", "bump_radius",
            "trace_halfwidth",
        ):
            if not getattr(self, name) > 0:
                raise SolverConstraintError(
                    f"FdtdConfig.{name} must be positive, got "
                    f"{getattr(self, name)}"
                )
        if self.dt > self.dx / np.sqrt(2.0) * (1.0 + 1e-12):
            raise SolverConstraintError(
                f"CFL violated: dt = {self.dt:g} > dx / sqrt(2) = "
                f"{self.dx / np.sqrt(2.0):.6g}"
            )
        if self.initial not in INITIAL_DATA:
            raise SolverConstraintError(
                f"FdtdConfig.initial must be one of {INITIAL_DATA}, got "
                f"{self.initial!r}"
            )
        if self.initial == "windowed_mode":
            if self.mode is None or self.mode.t_phase != "cos":
                raise SolverConstraintError(
                    "windowed_mode needs a mode with t_phase = 'cos' "
                    "(the solver starts from zero velocity)"
                )
            if not 0 < self.window_inner < self.window_outer:
                raise SolverConstraintError(
                    "windowed_mode needs 0 < window_inner < window_outer"
                )
        if int(self.trace_stride) < 1:
            raise SolverConstraintError("FdtdConfig.trace_stride must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.final_time / self.dt))

    def to_dict(self) -> dict:
        values = asdict(self)
        values["mode"] = None if self.mode is None else self.mode.to_dict()
        values["bump_center"] = list(self.bump_center)
        return values


class FdtdResult(NamedTuple):
    """Outputs of fdtd_run."""

    trace: SampledTrace
    probes: pd.DataFrame
    energy: np.ndarray
    support_margin: float
    metadata: dict


@dataclass
class _Grid:
    x: np.ndarray
    y: np.ndarray
    j0: int = 0


def bump_profile(r):
    """C-infinity profile exp(1 - 1 / (1 - r^2)) on |r| < 1, zero outside."""
    r = np.asarray(r, dtype=float)
    inside = np.abs(r) < 1.0
    safe = np.where(inside, r, 0.0)
    return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe * safe)), 0.0)


def smooth_window(r, inner: float, outer: float):
    """Equal to 1 for r <= inner, 0 for r >= outer, C-infinity between."""
    s = np.clip((outer - np.asarray(r, dtype=float)) / (outer - inner), 0, 1)

    def f(u):
        return np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)

    return f(s) / (f(s) + f(1.0 - s))


def initial_data(config: FdtdConfig) -> Callable:
    """Half-plane initial displacement u0(x, y) of the configured kind."""
    if config.initial == "zero":
        return lambda x, y: np.zeros(np.broadcast(x, y).shape)
    if config.initial == "bump":
        cx, cy = config.bump_center

        def bump(x, y):
            r = np.hypot(x - cx, y - cy) / config.bump_radius
            return bump_profile(r) * y * np.exp(-y)

        return bump

    def windowed(x, y):
        window = smooth_window(
            np.hypot(x, y), config.window_inner, config.window_outer
        )
        return window * mode_interior_value(config.mode, x, y, 0.0)

    return windowed


def _build_grid(config: FdtdConfig) -> _Grid:
    nx = int(round(2.0 * config.half_width / config.dx))
    ny = int(round(config.height / config.dx))
    x = (np.arange(nx + 1) - nx / 2) * config.dx
    if config.full_plane:
        y = (np.arange(2 * ny + 1) - ny) * config.dx
        return _Grid(x=x, y=y, j0=ny)
    return _Grid(x=x, y=np.arange(ny + 1) * config.dx, j0=0)


def _initial_field(config: FdtdConfig, grid: _Grid) -> np.ndarray:
    u0 = initial_data(config)
    xx, yy = np.meshgrid(grid.x, grid.y, indexing="ij")
    if config.full_plane:
        # Odd extension: the data vanish for y <= 0 before reflection.
        field_ = np.where(yy > 0, u0(xx, np.abs(yy)), 0.0) - np.where(
            yy < 0, u0(xx, np.abs(yy)), 0.0
        )
    else:
        field_ = u0(xx, yy)
    field_[0, :] = field_[-1, :] = 0.0
    field_[:, 0] = field_[:, -1] = 0.0
    if not config.full_plane:
        field_[:, grid.j0] = 0.0
    return field_


def support_box(field_: np.ndarray, grid: _Grid):
    """Bounding box (x_lo, x_hi, y_lo, y_hi) of |u| > threshold, or None."""
    mask = np.abs(field_) > SUPPORT_THRESHOLD
    if not mask.any():
        return None
    ix = np.flatnonzero(mask.any(axis=1))
    iy = np.flatnonzero(mask.any(axis=0))
    return (
        float(grid.x[ix[0]]),
        float(grid.x[ix[-1]]),
        float(grid.y[iy[0]]),
        float(grid.y[iy[-1]]),
    )


def support_margin(
    config: FdtdConfig,
    box,
    observation: tuple[float, float, float, float],
) -> float:
    """Smallest spare time before a boundary reflection reaches the observers.

    A signal leaving the support, reflecting off an artificial boundary and
    arriving at the observation set needs at least the distance from the
    support to that boundary plus the distance back.

    Args:
        config (FdtdConfig): The run.
        box (tuple | None): Support bounding box of the initial data.
        observation (tuple): (x_lo, x_hi, y_lo, y_hi) of trace and probes.

    Returns:
        float: min over artificial boundaries of travel time minus T; +inf
        when the initial data vanish.
    """
    if box is None:
        return np.inf
    x_lo, x_hi, y_lo, y_hi = box
    ox_lo, ox_hi, oy_lo, oy_hi = observation
    X, Y, T = config.half_width, config.height, config.final_time
    margins = [
        (x_lo + X) + (ox_lo + X) - T,
        (X - x_hi) + (X - ox_hi) - T,
        (Y - y_hi) + (Y - oy_hi) - T,
    ]
    if config.full_plane:
        margins.append((y_lo + Y) + (oy_lo + Y) - T)
    return float(min(margins))


def _touches_boundary(config: FdtdConfig, box) -> bool:
    if box is None:
        return False
    x_lo, x_hi, y_lo, y_hi = box
    X, Y, T = config.half_width, config.height, config.final_time
    gaps = [x_lo + X, X - x_hi, Y - y_hi]
    if config.full_plane:
        gaps.append(y_lo + Y)
    return min(gaps) - T < 2.0 * config.dx


def _laplacian(u: np.ndarray, dx: float, out: np.ndarray) -> np.ndarray:
    out[1:-1, 1:-1] = (
        u[2:, 1:-1] + u[:-2, 1:-1] + u[1:-1, 2:] + u[1:-1, :-2]
        - 4.0 * u[1:-1, 1:-1]
    ) / (dx * dx)
    return out


def discrete_energy(
    u_next: np.ndarray, u_now: np.ndarray, lap_now: np.ndarray, dt: float,
    dx: float,
) -> float:
    """Leapfrog energy 1/2 |(u^{n+1} - u^n) / dt|^2 - 1/2 <u^{n+1}, L u^n>.

    Exactly conserved by the scheme with homogeneous Dirichlet boundaries.
    """
    velocity = (u_next - u_now) / dt
    return float(
        0.5 * dx * dx * (np.sum(velocity * velocity) - np.sum(u_next * lap_now))
    )


def fdtd_run(
    config: FdtdConfig,
    probes: list[tuple[float, float]] | None = None,
    trace_request: tuple[tuple[float, float], tuple[float, float]] | None = None,
) -> FdtdResult:
    """Run the leapfrog scheme and record the boundary trace and probes.

    The first step is u^1 = u^0 + (dt^2 / 2) L u^0 (zero initial velocity).
    The trace v = (4 u(., dy) - u(., 2dy)) / (2 dy) is recorded for
    0 <= t <= T and mirrored to negative times, since a solution starting
    at rest is even in t.

    Args:
        config (FdtdConfig): The run.
        probes (list, optional): Interior points (x, y); default [(0, 1)].
        trace_request (tuple, optional): ((x_lo, x_hi), (t_lo, t_hi)) of the
            recorded trace; default |x| <= trace_halfwidth, |t| <= T.

    Returns:
        FdtdResult: Sampled trace, probe series, energy history, support
        margin and provenance.

    Raises:
        SolverConstraintError: If a reflection could reach the trace or a
            probe within T, or a probe lies outside the grid.
    """
    probes = [(0.0, 1.0)] if probes is None else [tuple(p) for p in probes]
    if trace_request is None:
        trace_request = (
            (-config.trace_halfwidth, config.trace_halfwidth),
            (-config.final_time, config.final_time),
        )
    (tx_lo, tx_hi), (tt_lo, tt_hi) = trace_request
    grid = _build_grid(config)
    dx, dt = config.dx, config.dt
    for px, py in probes:
        if not (abs(px) < config.half_width and 0 < py < config.height):
            raise SolverConstraintError(f"Probe ({px}, {py}) is off the grid")
    if tx_lo < grid.x[0] or tx_hi > grid.x[-1]:
        raise SolverConstraintError("Trace request exceeds the grid")

    u_now = _initial_field(config, grid)
    box = support_box(u_now, grid)
    observation = (
        min([tx_lo] + [p[0] for p in probes]),
        max([tx_hi] + [p[0] for p in probes]),
        0.0,
        max([2.0 * dx] + [p[1] for p in probes]),
    )
    margin = support_margin(config, box, observation)
    if margin < 2.0 * dx:
        raise SolverConstraintError(
            f"Boundary reflections reach the observation set: margin "
            f"{margin:.4g} < 2 dx = {2.0 * dx:g}"
        )
    if _touches_boundary(config, box):
        logger.warning(
            "Wavefront reaches an artificial boundary before T; reflections "
            "stay clear of the observation set"
        )
    n_steps = config.n_steps
    logger.info(
        f"FDTD run: {grid.x.size} x {grid.y.size} grid, {n_steps} steps, "
        f"CFL number {dt / dx:.4g}, support margin {margin:.4g}"
    )

    stencils = [_bilinear_stencil(grid, px, py) for px, py in probes]
    j1, j2 = grid.j0 + 1, grid.j0 + 2
    v_rows = np.empty((n_steps + 1, grid.x.size))
    probe_rows = np.empty((n_steps + 1, len(probes)))
    energy = np.empty(n_steps)

    def record(n, u):
        v_rows[n] = (4.0 * u[:, j1] - u[:, j2]) / (2.0 * dx)
        for p, (i, j, wx, wy) in enumerate(stencils):
            probe_rows[n, p] = (
                (1 - wx) * (1 - wy) * u[i, j]
                + wx * (1 - wy) * u[i + 1, j]
                + (1 - wx) * wy * u[i, j + 1]
                + wx * wy * u[i + 1, j + 1]
            )

    lap = _laplacian(u_now, dx, np.zeros_like(u_now))
    u_next = u_now + 0.5 * dt * dt * lap
    record(0, u_now)
    if n_steps:
        energy[0] = discrete_energy(u_next, u_now, lap, dt, dx)
    u_prev, u_now = u_now, u_next
    for n in range(1, n_steps + 1):
        record(n, u_now)
        if n == n_steps:
            break
        _laplacian(u_now, dx, lap)
        u_next = 2.0 * u_now - u_prev + dt * dt * lap
        energy[n] = discrete_energy(u_next, u_now, lap, dt, dx)
        u_prev, u_now = u_now, u_next

    drift = energy_drift(energy)
    logger.info(f"Relative energy drift {drift:.3g}")
    trace = _assemble_trace(config, grid, v_rows, trace_request)
    frame = _probe_frame(probes, probe_rows, dt)
    metadata = {
        **trace.grid_metadata(),
        "source": "fdtd",
        "cfl": dt / dx,
        "support_margin": margin,
        "energy_drift": drift,
    }
    metadata.update({f"fdtd_{k}": v for k, v in config.to_dict().items()})
    for p, (px, py) in enumerate(probes):
        metadata[f"probe_{p}"] = [
            float(px), float(py), float(probe_rows[0, p])
        ]
    trace = SampledTrace(
        x=trace.x, t=trace.t, values=trace.values, metadata=metadata
    )
    return FdtdResult(
        trace=trace,
        probes=frame,
        energy=energy,
        support_margin=margin,
        metadata=metadata,
    )


def _bilinear_stencil(grid: _Grid, px: float, py: float):
    dx = grid.x[1] - grid.x[0]
    fx = (px - grid.x[0]) / dx
    fy = (py - grid.y[0]) / dx
    i = min(int(np.floor(fx)), grid.x.size - 2)
    j = min(int(np.floor(fy)), grid.y.size - 2)
    return i, j, fx - i, fy - j


def energy_drift(energy: np.ndarray) -> float:
    """max |E_n - E_0| / |E_0|, or 0 for a vanishing field."""
    if energy.size == 0 or energy[0] == 0.0:
        return 0.0
    return float(np.max(np.abs(energy - energy[0])) / abs(energy[0]))


def _assemble_trace(
    config: FdtdConfig, grid: _Grid, v_rows: np.ndarray, trace_request
) -> SampledTrace:
    """Mirror the recorded rows to negative times and cut the request."""
    (x_lo, x_hi), (t_lo, t_hi) = trace_request
    stride = int(config.trace_stride)
    n = np.arange(-(v_rows.shape[0] - 1), v_rows.shape[0])
    t = n * config.dt
    values = v_rows[np.abs(n)].T
    tol = 1e-9 * config.dx
    x_index = np.rint(grid.x / config.dx).astype(int)
    keep_x = (grid.x >= x_lo - tol) & (grid.x <= x_hi + tol)
    keep_x &= x_index % stride == 0
    keep_t = (t >= t_lo - tol) & (t <= t_hi + tol) & (n % stride == 0)
    return SampledTrace(
        x=grid.x[keep_x], t=t[keep_t], values=values[np.ix_(keep_x, keep_t)]
    )


def _probe_frame(
    probes: list[tuple[float, float]], probe_rows: np.ndarray, dt: float
) -> pd.DataFrame:
    n_times = probe_rows.shape[0]
    t = np.arange(n_times) * dt
    frames = [
        pd.DataFrame(
            {
                "probe": np.full(n_times, p, dtype=int),
                "x": np.full(n_times, px),
                "y": np.full(n_times, py),
                "t": t,
                "u": probe_rows[:, p],
            }
        )
        for p, (px, py) in enumerate(probes)
    ]
    if not frames:
        return pd.DataFrame(
            {name: pd.Series(dtype=float) for name in PROBE_COLUMNS}
        )
    return pd.concat(frames, ignore_index=True)
