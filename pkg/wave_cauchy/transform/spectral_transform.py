"""Reconstruction of u(0, y0, 0) from the spectrum of sampled boundary data."""

import numpy as np

from wave_cauchy.synthetic.mode_synthetic import PHASES, Mode
from wave_cauchy.synthetic.trace_synthetic import SampledTrace
from wave_cauchy.transform.calc_transform import transfer_factor
from wave_cauchy.utils.errors import DomainError
from wave_cauchy.utils.logger import WaveCauchyLogger

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger

EDGE_TOLERANCE = 1e-3
NYQUIST_TOLERANCE = 1e-6
BLOCK_ROWS = 256


def mode_spectral_value(mode: Mode, y0: float) -> float:
    """Interior value at (0, y0, 0) predicted by the transfer identity.

    A single mode has v~ concentrated on w^2 = k^2 + l^2, where the transfer
    factor is sin(l y0) / l; with v = A l X(kx) T(wt) this leaves
    A sin(l y0) X(0) T(0).
    """
    return float(
        mode.amplitude
        * np.sin(mode.l * y0)
        * PHASES[mode.x_phase](0.0)
        * PHASES[mode.t_phase](0.0)
    )


def _check_edges(values: np.ndarray) -> None:
    peak = np.max(np.abs(values))
    if peak == 0.0:
        return
    edge = max(
        np.max(np.abs(values[0, :])),
        np.max(np.abs(values[-1, :])),
        np.max(np.abs(values[:, 0])),
        np.max(np.abs(values[:, -1])),
    )
    if edge > EDGE_TOLERANCE * peak:
        logger.warning(
            f"Trace carries {edge / peak:.3g} of its peak on the grid edge; "
            "the support may not be captured"
        )


def _check_nyquist(spectrum: np.ndarray) -> None:
    power = np.abs(spectrum) ** 2
    total = power.sum()
    if total == 0.0:
        return
    nk, nw = power.shape
    k_index = np.abs(np.fft.fftfreq(nk)) >= 0.45
    w_index = np.abs(np.fft.fftfreq(nw)) >= 0.45
    outer = power[k_index, :].sum() + power[:, w_index].sum()
    if outer > NYQUIST_TOLERANCE * total:
        logger.warning(
            f"Spectral energy fraction {outer / total:.3g} near the Nyquist "
            "frequencies; the data may be aliased"
        )


def spectral_reconstruct(
    trace: SampledTrace, y0: float, pad: int = 2, block_rows: int = BLOCK_ROWS
) -> float:
    """Approximate u(0, y0, 0) by summing v~ * transfer_factor / (4 pi^2).

    The trace is zero-padded to pad times its size on both axes, transformed
    with exp(-i(kx + wt)) dx dt and summed over the frequency grid with
    dk dw. Frequencies with |w| < |k| are dropped, since data from a
    solution vanish there.

    The only approximation besides sampling is the finite record: data
    beyond |t| = T are missing, and the waves that reach the boundary at
    shallow angles arrive late. For the default bump run the error falls
    roughly like (y0 / T)^2.

    Args:
        trace (SampledTrace): Data on a uniform grid covering its support.
        y0 (float): Height of the interior point.
        pad (int): Zero-padding factor, >= 1.
        block_rows (int): Spatial frequencies weighted per pass; bounds the
            memory of the weight array.

    Returns:
        float: The real part of the frequency sum.

    Raises:
        DomainError: If y0 <= 0 or pad < 1.
    """
    if not y0 > 0:
        raise DomainError(f"spectral_reconstruct requires y0 > 0, got {y0}")
    if int(pad) < 1:
        raise DomainError(f"spectral_reconstruct requires pad >= 1, got {pad}")
    _check_edges(trace.values)
    dx, dt = trace.dx, trace.dt
    n_k = int(pad) * trace.x.size
    n_w = int(pad) * trace.t.size
    spectrum = np.fft.fft2(trace.values, s=(n_k, n_w))
    _check_nyquist(spectrum)

    k = 2.0 * np.pi * np.fft.fftfreq(n_k, d=dx)
    omega = 2.0 * np.pi * np.fft.fftfreq(n_w, d=dt)
    # The FFT measures phases from the first grid node.
    k_phase = np.exp(-1j * k * trace.x[0])
    w_phase = np.exp(-1j * omega * trace.t[0])[None, :]
    ww = omega[None, :]

    total = 0.0j
    for start in range(0, n_k, block_rows):
        rows = slice(start, start + block_rows)
        kk = k[rows, None]
        propagating = np.abs(ww) >= np.abs(kk)
        k_safe = np.where(propagating, kk, 0.0)
        weight = np.where(propagating, transfer_factor(k_safe, ww, y0), 0.0)
        v_hat = k_phase[rows, None] * w_phase * spectrum[rows]
        total += np.sum(v_hat * weight)

    dk = 2.0 * np.pi / (n_k * dx)
    dw = 2.0 * np.pi / (n_w * dt)
    total *= dx * dt * dk * dw / (4.0 * np.pi**2)
    logger.info(
        f"Spectral estimate {total.real:.10g} on a {n_k} x {n_w} frequency grid"
    )
    return float(total.real)
