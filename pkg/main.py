"""Main file to run the commands enabled in the configuration."""

import sys

from wave_cauchy.pipeline import run_pipeline

# config path
config_path = "config/config.toml"

# Run the pipeline with config path
sys.exit(run_pipeline(config_path))
