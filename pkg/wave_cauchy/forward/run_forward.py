"""Forward-solver command: boundary trace and probe series from a FDTD run."""

from wave_cauchy.forward.fdtd_forward import fdtd_run
from wave_cauchy.synthetic.trace_synthetic import trace_to_frame
from wave_cauchy.utils.config import RunConfig
from wave_cauchy.utils.helpers import write_with_schema
from wave_cauchy.utils.logger import WaveCauchyLogger
from wave_cauchy.utils.runlog import start_run

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger


def cmd_fdtd(config: RunConfig) -> int:
    """
    Run the forward solver and save trace.csv and probe.csv.

    Both files carry the grid, CFL number, support margin, energy drift and
    every solver setting as '#' comments.

    Args:
        config (RunConfig): Run settings with fdtd and probes.

    Returns:
        int: Exit code 0.

    Raises:
        SolverConstraintError: Before any time-stepping when the CFL or
            support conditions fail.
    """
    logger.info("Forward solver started")
    result = fdtd_run(config.fdtd, probes=config.probes)
    header = start_run(config)
    write_with_schema(
        trace_to_frame(result.trace),
        config.schema_path("trace"),
        config.output_path("trace.csv"),
        metadata=result.metadata,
        header_line=header,
    )
    write_with_schema(
        result.probes,
        config.schema_path("probe"),
        config.output_path("probe.csv"),
        metadata=result.metadata,
        header_line=header,
    )
    logger.info(
        f"Forward run finished with support margin "
        f"{result.support_margin:.4g}"
    )
    return 0
