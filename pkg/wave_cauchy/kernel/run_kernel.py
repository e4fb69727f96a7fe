"""Kernel commands: tabulation, representation self-check and decay."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from wave_cauchy.kernel.calc_kernel import (
    KernelParams,
    h_function,
    i0_series,
    kernel_closed_form,
)
from wave_cauchy.kernel.decay_kernel import (
    decay_constant,
    decay_envelope,
    envelope_non_increasing,
)
from wave_cauchy.kernel.fourier_kernel import kernel_fourier_oracle
from wave_cauchy.transform.calc_transform import g_functions, transfer_factor
from wave_cauchy.utils.config import RunConfig
from wave_cauchy.utils.helpers import write_json, write_with_schema
from wave_cauchy.utils.logger import WaveCauchyLogger
from wave_cauchy.utils.runlog import start_run

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger


def kernel_grid(config: RunConfig) -> pd.DataFrame:
    """Tabulate K_h on the requested (x, t) grid.

    Args:
        config (RunConfig): Run settings with aperture and kernel_eval.

    Returns:
        pd.DataFrame: Columns x, t, K; x varies fastest within each t.
    """
    settings = config.kernel_eval
    params = KernelParams(y0=config.aperture.y0, c=config.aperture.c, h=settings.h)
    x = np.linspace(settings.x_min, settings.x_max, settings.nx)
    t = np.linspace(settings.t_min, settings.t_max, settings.nt)
    tt, xx = np.meshgrid(t, x, indexing="ij")
    xx, tt = xx.ravel(), tt.ravel()
    values = (
        np.asarray(kernel_closed_form(xx, tt, params, config.quad)).ravel()
        if xx.size
        else np.empty(0)
    )
    return pd.DataFrame({"x": xx, "t": tt, "K": values})


def cmd_kernel_eval(config: RunConfig) -> int:
    """Write K_h on a grid as kernel_eval.csv (or to standard output).

    Returns:
        int: Exit code 0.
    """
    logger.info("Kernel evaluation started")
    frame = kernel_grid(config)
    header = start_run(config)
    write_with_schema(
        frame,
        config.schema_path("kernel_eval"),
        config.output_path("kernel_eval.csv"),
        metadata=_metadata(config),
        header_line=header,
    )
    logger.info(f"Kernel evaluated at {len(frame)} points")
    return 0


def _dual_error(h: float, config: RunConfig) -> float:
    settings = config.kernel_check
    params = KernelParams(y0=config.aperture.y0, c=config.aperture.c, h=h)
    x = np.linspace(-settings.x_max, settings.x_max, settings.nx)
    t = np.linspace(-settings.t_max, settings.t_max, settings.nt)
    worst = 0.0
    for tj in t:
        closed = np.atleast_1d(kernel_closed_form(x, tj, params, config.quad))
        for xi, cf in zip(x, closed):
            oracle = kernel_fourier_oracle(xi, tj, params, quad=config.quad)
            worst = max(worst, abs(oracle - cf) / (1.0 + abs(cf)))
    logger.info(f"Dual representation at h = {h:g}: max error {worst:.3g}")
    return worst


def kernel_check_report(config: RunConfig) -> dict:
    """Compare the kernel representations and the H, I0 and G identities.

    The dual-representation error is |oracle - closed form| / (1 + |closed
    form|); the Bessel and G errors are absolute.

    Args:
        config (RunConfig): Run settings with aperture and kernel_check.

    Returns:
        dict: Per-block maxima, tolerances and the overall verdict.
    """
    settings = config.kernel_check
    h_list = [float(h) for h in settings.h_list]
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as executor:
            dual = list(executor.map(lambda h: _dual_error(h, config), h_list))
    else:
        dual = [_dual_error(h, config) for h in h_list]

    z = np.asarray(settings.bessel_z, dtype=float)
    bessel = np.abs(
        np.asarray(h_function(z, config.quad))
        + np.asarray(h_function(-z, config.quad))
        - np.asarray(i0_series(z))
    )

    y0 = config.aperture.y0
    axis = np.linspace(-settings.g_max, settings.g_max, settings.g_points)
    kk, ww = np.meshgrid(axis, axis, indexing="ij")
    g_plus, g_minus = g_functions(kk, ww, y0, config.quad)
    g_error = np.abs(g_plus + g_minus - transfer_factor(kk, ww, y0) / np.pi)

    blocks = {
        "dual_representation": {
            "max_error": float(max(dual)),
            "tolerance": settings.dual_tol,
            "per_h": {repr(h): e for h, e in zip(h_list, dual)},
        },
        "bessel_identity": {
            "max_error": float(np.max(bessel)),
            "tolerance": settings.bessel_tol,
            "per_z": {repr(float(v)): float(e) for v, e in zip(z, bessel)},
        },
        "g_identity": {
            "max_error": float(np.max(g_error)),
            "tolerance": settings.g_tol,
        },
    }
    for block in blocks.values():
        block["passed"] = bool(block["max_error"] <= block["tolerance"])
    return {
        **blocks,
        "passed": all(block["passed"] for block in blocks.values()),
        "config": config.provenance(),
    }


def cmd_kernel_check(config: RunConfig) -> int:
    """Write kernel_check.json; exit 1 when a block misses its tolerance.

    Returns:
        int: 0 if every block passed, else 1.
    """
    logger.info("Kernel check started")
    report = kernel_check_report(config)
    write_json(report, config.output_path("kernel_check.json"))
    if not report["passed"]:
        failed = [
            name for name, block in report.items()
            if isinstance(block, dict) and block.get("passed") is False
        ]
        logger.error(f"Kernel check failed: {', '.join(failed)}")
        return 1
    logger.info("Kernel check passed")
    return 0


def cmd_decay(config: RunConfig) -> int:
    """Write decay.csv; exit 1 when the envelope grows beyond the slack.

    Returns:
        int: 0 if the envelope is non-increasing in h, else 1.
    """
    logger.info("Decay diagnostics started")
    settings = config.decay
    frame = decay_envelope(
        config.aperture.y0,
        config.aperture.c,
        settings.h_list,
        settings.epsilon,
        settings.d,
        settings.n_t,
        settings.n_x,
        config.quad,
    )
    metadata = _metadata(config)
    metadata["a"] = decay_constant(config.aperture.c, settings.d)
    header = start_run(config)
    write_with_schema(
        frame,
        config.schema_path("decay"),
        config.output_path("decay.csv"),
        metadata=metadata,
        header_line=header,
    )
    if not envelope_non_increasing(frame, settings.slack):
        logger.error("Decay envelope grows as h decreases")
        return 1
    return 0


def _metadata(config: RunConfig) -> dict:
    return {
        f"config_{key}": value for key, value in config.provenance().items()
    }
