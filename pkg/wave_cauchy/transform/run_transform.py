"""Spectral command: u(0, y0, 0) from a trace file by the frequency sum."""

import numpy as np
import pandas as pd

from wave_cauchy.reconstruct.run_reconstruct import load_trace
from wave_cauchy.transform.spectral_transform import spectral_reconstruct
from wave_cauchy.utils.config import RunConfig
from wave_cauchy.utils.helpers import write_with_schema
from wave_cauchy.utils.logger import WaveCauchyLogger
from wave_cauchy.utils.runlog import start_run

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger


def cmd_spectral(config: RunConfig) -> int:
    """
    Apply spectral_reconstruct to a trace file and save spectral.csv.

    The target is the probe recorded at (0, y0) in the trace metadata; when
    there is none, target and rel_error are NaN.

    Args:
        config (RunConfig): Run settings with aperture and spectral.

    Returns:
        int: Exit code 0.
    """
    logger.info("Spectral reconstruction started")
    settings = config.spectral
    y0 = config.aperture.y0
    trace = load_trace(settings.trace_file, config.schema_path("trace"))
    estimate = spectral_reconstruct(trace, y0, pad=int(settings.pad))
    target = trace.probe_value(0.0, y0)
    if target is None:
        logger.warning(f"No probe at (0, {y0:g}) in {settings.trace_file}")
        target, rel_error = np.nan, np.nan
    else:
        rel_error = abs(estimate - target) / abs(target) if target else np.nan
    frame = pd.DataFrame(
        {
            "y0": [float(y0)],
            "estimate": [float(estimate)],
            "target": [float(target)],
            "rel_error": [float(rel_error)],
        }
    )
    header = start_run(config)
    write_with_schema(
        frame,
        config.schema_path("spectral"),
        config.output_path("spectral.csv"),
        metadata={"trace_file": settings.trace_file, "pad": int(settings.pad)},
        header_line=header,
    )
    logger.info(f"Spectral estimate {estimate:.10g}, target {target:.10g}")
    return 0
