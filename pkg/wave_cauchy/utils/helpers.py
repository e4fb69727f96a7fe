"""Define helper functions for configuration files and CSV artifacts."""

import io
import json
import logging
import os
import pathlib
import sys
from typing import Union

import pandas as pd
import toml
import tomli  # tomli can be upgraded to tomllib in Python 3.11+

from wave_cauchy.utils.logger import WaveCauchyLogger

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger

FLOAT_FORMAT = "%.17g"
STDOUT = "-"


def load_toml_config(path: Union[str, pathlib.Path]) -> dict | None:
    """Load a .toml file from a path, with logging and safe error handling.

    Args:
        path (Union[str, pathlib.Path]): The path to load the .toml file from.

    Returns:
        dict | None: The loaded toml file as a dictionary, or None on error.
    """
    if not os.path.exists(path):
        logger.error(f"Config file does not exist: {path}")
        return None
    ext = os.path.splitext(path)[1]
    if ext != ".toml":
        logger.error(f"Expected a .toml file. Got {ext}")
        return None
    try:
        with open(path, "rb") as f:
            return tomli.load(f)
    except tomli.TOMLDecodeError as e:
        logger.error(f"Failed to decode TOML file: {e}")
        return None


def load_schema_from_toml(schema_path: Union[str, pathlib.Path]) -> dict:
    """
    Load a column schema from a TOML file.

    Args:
        schema_path (str): Path to the TOML schema file.

    Returns:
        dict: Column name -> {"old_name", "Deduced_Data_Type"}, in file order.
    """
    raw_schema = toml.load(schema_path)
    return {
        new_name: {
            "old_name": props.get("old_name", new_name),
            "Deduced_Data_Type": props["Deduced_Data_Type"],
        }
        for new_name, props in raw_schema.items()
    }


def validate_schema(df: pd.DataFrame, schema: dict):
    """
    Validate the DataFrame against the schema.

    Args:
        df (pd.DataFrame): The DataFrame to validate.
        schema (dict): The schema sourced from a TOML file to validate against.

    Raises:
        ValueError: If a column of the schema is missing from the DataFrame.
        TypeError: If a column's dtype does not match the schema.
    """
    checks = {
        "int": pd.api.types.is_integer_dtype,
        "float": pd.api.types.is_float_dtype,
        "str": lambda s: pd.api.types.is_object_dtype(s)
        or pd.api.types.is_string_dtype(s),
        "bool": pd.api.types.is_bool_dtype,
    }
    for column, props in schema.items():
        if column not in df.columns:
            raise ValueError(f"Missing expected column: {column}")
        check = checks.get(props.get("Deduced_Data_Type"))
        if check and not check(df[column]):
            raise TypeError(
                f"Column '{column}' does not match expected type "
                f"{props.get('Deduced_Data_Type')}"
            )


def rename_columns(
    df: pd.DataFrame, schema: dict, logger: logging.Logger
) -> pd.DataFrame:
    """
    Rename columns from their 'old_name' to the schema name.

    A column that already carries its schema name is left as it is, so files
    written by write_with_schema read back under the same schema.

    Args:
        df (pd.DataFrame): The DataFrame to rename columns in.
        schema (dict): The schema containing old and new column names.
        logger (logging.Logger): Logger for logging renaming actions.

    Returns:
        pd.DataFrame: The DataFrame with renamed columns.

    Raises:
        ValueError: If neither the 'old_name' nor the schema name of a column
            is in the DataFrame.
    """
    for new_name, props in schema.items():
        old_name = props.get("old_name")
        if old_name not in df.columns and new_name in df.columns:
            continue
        if old_name not in df.columns:
            raise ValueError(
                f"Column '{old_name}' specified in schema does not exist"
                " in DataFrame"
            )
        if old_name != new_name:
            df = df.rename(columns={old_name: new_name})
            logger.info(f"Renamed column '{old_name}' to '{new_name}'")
    return df


def convert_column_types(
    df: pd.DataFrame, schema: dict, logger: logging.Logger
) -> pd.DataFrame:
    """
    Convert DataFrame columns to the data types given in the schema.

    Args:
        df (pd.DataFrame): The DataFrame to convert column types.
        schema (dict): The schema containing column names and their expected
        data types.
        logger (logging.Logger): Logger for logging conversion actions.

    Returns:
        pd.DataFrame: The DataFrame with converted column types.
    """
    for column, props in schema.items():
        expected = props.get("Deduced_Data_Type")
        if column not in df.columns:
            continue
        try:
            if expected == "int":
                df[column] = pd.to_numeric(df[column]).astype("int64")
            elif expected == "float":
                df[column] = pd.to_numeric(df[column]).astype("float64")
            elif expected == "str":
                df[column] = df[column].astype(str)
            elif expected == "bool":
                df[column] = df[column].astype(bool)
        except (TypeError, ValueError) as e:
            logger.warning(
                f"Failed to convert column '{column}' to {expected}: {e}"
            )
    return df


def format_metadata_value(value) -> str:
    """Render a metadata value so that parse_metadata_value reverses it."""
    if isinstance(value, str):
        return value
    if isinstance(value, (dict, list, tuple, bool)) or value is None:
        return json.dumps(value, sort_keys=True)
    return repr(value.item() if hasattr(value, "item") else value)


def parse_metadata_value(text: str):
    """Parse a '# key = value' value back to a number, list or string."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_csv_with_comments(path: Union[str, pathlib.Path]):
    """
    Read a CSV file whose leading '#' lines carry 'key = value' metadata.

    Args:
        path (str): Path of the CSV file.

    Returns:
        tuple[pd.DataFrame, dict]: The table and its metadata.
    """
    metadata = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            key, sep, value = line[1:].partition("=")
            if sep:
                metadata[key.strip()] = parse_metadata_value(value.strip())
    df = pd.read_csv(path, comment="#")
    return df, metadata


def read_with_schema(input_file_path: str, input_schema_path: str):
    """
    Reads in a csv file and compares it to a data dictionary schema.

    Args:
        input_file_path (string): Filepath to the csv file to be read in.
        input_schema_path (string): Filepath to the schema file in TOML format.

    Returns:
        tuple[pd.DataFrame, dict]: Formatted DataFrame containing the data
        from the csv file and the metadata of its comment header.
    """
    logger.info(f"Loading data from {input_file_path}")
    df, metadata = read_csv_with_comments(input_file_path)
    logger.info("Data loaded successfully")

    logger.info(f"Loading schema configuration from {input_schema_path}")
    expected_schema = load_schema_from_toml(input_schema_path)
    df = rename_columns(df, expected_schema, logger)
    df = convert_column_types(df, expected_schema, logger)
    logger.debug(f"Parsed expected schema: {expected_schema}")
    validate_schema(df, expected_schema)
    logger.info("Schema validation passed successfully")

    return df, metadata


def render_csv(
    df: pd.DataFrame, metadata: dict | None = None, header_line: str | None = None
) -> str:
    """
    Render a table as CSV text with a '#' metadata header.

    Floats carry 17 significant digits; the optional header_line (run id
    and timestamp) comes first and is the only non-deterministic line.

    Args:
        df (pd.DataFrame): The table.
        metadata (dict, optional): Written as '# key = value' lines.
        header_line (str, optional): Written as '# header_line'.

    Returns:
        str: The CSV document.
    """
    buffer = io.StringIO()
    if header_line:
        buffer.write(f"# {header_line}\n")
    for key, value in (metadata or {}).items():
        buffer.write(f"# {key} = {format_metadata_value(value)}\n")
    df.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def write_with_schema(
    df: pd.DataFrame,
    output_schema_path: str,
    output_path: str,
    metadata: dict | None = None,
    header_line: str | None = None,
):
    """
    Validate a DataFrame against a schema and write it as commented CSV.

    Args:
        df (pd.DataFrame): The final output DataFrame to write to CSV.
        output_schema_path (str): Path to the output schema file in TOML
        format.
        output_path (str): Destination file, or "-" for standard output.
        metadata (dict, optional): Provenance written as comments.
        header_line (str, optional): Timestamp comment line.

    Raises:
        ValueError: If the DataFrame does not match the schema.

    Returns:
        None: Writes the DataFrame to a CSV file after validating against the
        schema.
    """
    logger.info(f"Loading schema configuration from {output_schema_path}")
    expected_schema = load_schema_from_toml(output_schema_path)
    df = rename_columns(df, expected_schema, logger)
    validate_schema(df, expected_schema)
    text = render_csv(df[list(expected_schema)], metadata, header_line)

    if str(output_path) == STDOUT:
        sys.stdout.write(text)
        return
    os.makedirs(os.path.dirname(os.path.abspath(output_path)), exist_ok=True)
    logger.info(f"Saving data to {output_path}")
    with open(output_path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info("Data saved successfully")


def write_json(document: dict, output_path: str) -> None:
    """
    Write a JSON document with sorted keys.

    Args:
        document (dict): JSON-serialisable content.
        output_path (str): Destination file, or "-" for standard output.
    """
    text = json.dumps(document, indent=2, sort_keys=True) + "\n"
    if str(output_path) == STDOUT:
        sys.stdout.write(text)
        return
    os.makedirs(os.path.dirname(os.path.abspath(output_path)), exist_ok=True)
    with open(output_path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info(f"Saved {output_path}")
