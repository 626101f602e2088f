import json
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import pandas as pd
import yaml

FLOAT_FORMAT = "%.17g"


def get_version():
    """Get the version number.

    Returns
    -------
    ver : str
        the version number

    """
    try:
        ver = version("eharqsim")
    except PackageNotFoundError:
        ver = "dev"
    return ver


def write_table(frame, file_path):
    """Write a table as CSV with round-trip float precision.

    Missing values are written as empty fields.

    Parameters
    ----------
    frame : pandas.DataFrame
        the table
    file_path : str or pathlib.Path
        the CSV file to be written

    Returns
    -------
    the path of the written file

    """
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(
        file_path,
        index=False,
        float_format=FLOAT_FORMAT,
        na_rep="",
        lineterminator="\n",
    )
    return file_path


def read_table(file_path):
    """Read a CSV table written by write_table.

    Parameters
    ----------
    file_path : str or pathlib.Path
        the CSV file

    Returns
    -------
    frame : pandas.DataFrame
        the table, with empty fields as NaN

    """
    file_path = Path(file_path)
    if not file_path.is_file():
        msg = f"The table {file_path.resolve()} does not exist."
        raise FileNotFoundError(msg)

    return pd.read_csv(file_path, float_precision="round_trip")


def write_json(content, file_path):
    """Write a mapping as indented JSON with sorted keys."""
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with file_path.open("w") as f:
        json.dump(content, f, indent=2, sort_keys=True, allow_nan=True)
        f.write("\n")
    return file_path


def read_mapping(file_path):
    """Read a YAML or JSON file holding a mapping.

    Parameters
    ----------
    file_path : str or pathlib.Path
        the file to be read

    Returns
    -------
    content : dict
        the mapping

    """
    file_path = Path(file_path)
    try:
        f = file_path.open()
    except FileNotFoundError:
        msg = f"The file '{file_path.resolve()}' cannot be found."
        raise FileNotFoundError(msg) from None

    with f:
        content = yaml.safe_load(f)

    if content is None:
        content = {}

    if not isinstance(content, dict):
        msg = f"The file '{file_path}' does not hold a mapping."
        raise ValueError(msg)

    return content
