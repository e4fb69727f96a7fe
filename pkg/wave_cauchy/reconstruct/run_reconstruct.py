"""Reconstruct command: h sweep from analytic modes or a trace file."""

from wave_cauchy.reconstruct.sweep_reconstruct import h_sweep
from wave_cauchy.synthetic.trace_synthetic import (
    mode_boundary_trace,
    superpose,
    trace_from_frame,
)
from wave_cauchy.utils.config import RunConfig, require_file
from wave_cauchy.utils.errors import InputFileError
from wave_cauchy.utils.helpers import (
    read_with_schema,
    write_json,
    write_with_schema,
)
from wave_cauchy.utils.logger import WaveCauchyLogger
from wave_cauchy.utils.runlog import start_run

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger


def load_trace(path: str, schema_path: str):
    """
    Read a trace CSV into a SampledTrace, keeping its header metadata.

    Args:
        path (str): Trace file written by the fdtd command or by hand.
        schema_path (str): Trace column schema.

    Returns:
        SampledTrace: The grid with its metadata.

    Raises:
        ConfigError: If the file does not exist.
        InputFileError: If the CSV, its columns, its grid or its probe
            metadata cannot be parsed.
    """
    require_file(path)
    try:
        df, metadata = read_with_schema(path, schema_path)
        trace = trace_from_frame(df, metadata)
        trace.probes()
    except (ValueError, TypeError, KeyError) as e:
        raise InputFileError(f"Cannot read trace file {path}: {e}") from e
    return trace


def build_trace(config: RunConfig):
    """The boundary data of the run and the exact value, if one is known.

    A mode list gives an analytic trace whose interior value is the target.
    A trace file gives a sampled trace; the target is the probe recorded at
    (x0, y0) when t0 = 0.

    Returns:
        tuple: (trace, target or None).
    """
    settings = config.reconstruct
    ap = config.aperture
    if settings.source == "modes":
        trace = superpose(
            [(w, mode_boundary_trace(m)) for w, m in settings.modes]
        )
        return trace, trace.interior_value(ap.x0, ap.y0, ap.t0)

    trace = load_trace(settings.trace_file, config.schema_path("trace"))
    target = trace.probe_value(ap.x0, ap.y0) if ap.t0 == 0 else None
    if target is None:
        logger.warning(
            f"No probe at ({ap.x0:g}, {ap.y0:g}) in {settings.trace_file}; "
            "abs_error is left empty"
        )
    return trace, target


def cmd_reconstruct(config: RunConfig) -> int:
    """
    Run the h sweep and save report.csv and report.json.

    The exit code does not depend on how close the estimates come to the
    target; that verdict is in the report.

    Args:
        config (RunConfig): Run settings with aperture, quad and reconstruct.

    Returns:
        int: Exit code 0.

    Raises:
        CoverageError: If a sampled trace does not cover the rectangle.
    """
    logger.info("Reconstruction started")
    settings = config.reconstruct
    trace, target = build_trace(config)
    report = h_sweep(
        trace,
        config.aperture,
        settings.h_list,
        quad=config.quad,
        target=target,
        threads=config.threads,
        formula=settings.formula,
        x_halfwidth=settings.x_halfwidth,
    )
    document = report.to_dict()
    document["config"] = config.provenance()
    header = start_run(config)
    write_with_schema(
        report.to_frame(),
        config.schema_path("report"),
        config.output_path("report.csv"),
        metadata={"target": target, "guard_h": report.guard_h},
        header_line=header,
    )
    write_json(document, config.output_path("report.json"))
    logger.info("Reconstruction finished")
    return 0
