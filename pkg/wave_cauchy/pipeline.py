"""Run each command of the package based on config parameters."""

import time

from wave_cauchy.forward.run_forward import cmd_fdtd
from wave_cauchy.kernel.run_kernel import (
    cmd_decay,
    cmd_kernel_check,
    cmd_kernel_eval,
)
from wave_cauchy.reconstruct.run_reconstruct import cmd_reconstruct
from wave_cauchy.transform.run_transform import cmd_spectral
from wave_cauchy.utils.config import COMMANDS, RunConfig
from wave_cauchy.utils.errors import WaveCauchyError
from wave_cauchy.utils.helpers import load_toml_config
from wave_cauchy.utils.logger import WaveCauchyLogger, set_package_level

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger

COMMAND_FUNCS = {
    "kernel-eval": cmd_kernel_eval,
    "kernel-check": cmd_kernel_check,
    "decay": cmd_decay,
    "fdtd": cmd_fdtd,
    "reconstruct": cmd_reconstruct,
    "spectral": cmd_spectral,
}


def run_command(config_path, command: str, **overrides) -> int:
    """
    Validate the configuration for one command and run it.

    Args:
        config_path (str): Path to the TOML configuration file.
        command (str): One of COMMANDS.
        **overrides: out_dir, threads or timestamp from the command line.

    Returns:
        int: The exit code; errors of the package map to their exit_code,
        anything else to 1.
    """
    try:
        config = RunConfig.load(config_path, command, **overrides)
        set_package_level(config.log_level)
        return COMMAND_FUNCS[command](config)
    except WaveCauchyError as e:
        logger.error(f"{command} failed: {e}")
        return e.exit_code
    except Exception as e:
        logger.error(f"{command} failed unexpectedly: {e}", exc_info=True)
        return 1


def run_pipeline(config_path) -> int:
    """
    Run every command switched on in [user_settings], in dependency order.

    Args:
        config_path (str): Path to the configuration file.

    Returns:
        int: 0 if every command succeeded, else the first non-zero exit code.
    """
    logger.info("Pipeline started")
    start_time = time.time()

    config = load_toml_config(config_path)
    if config is None:
        return 2
    toggles = config.get("user_settings", {})

    exit_code = 0
    try:
        for command in COMMANDS:
            if not toggles.get(command.replace("-", "_"), False):
                continue
            code = run_command(config_path, command)
            exit_code = exit_code or code

    except Exception as e:
        logger.error(
            f"An error occurred during the pipeline execution: {e}",
            exc_info=True,
        )
        exit_code = exit_code or 1

    logger.info(
        f"Running time: {((time.time() - start_time) / 60):.2f} minutes."
    )
    return exit_code
