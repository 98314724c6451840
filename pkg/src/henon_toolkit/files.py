import csv
import io
import json
import logging
import math
import os
import pathlib
import sys


log = logging.getLogger(__name__)


LOG_DIR_VARIABLE = "HENON_TOOLKIT_LOG_DIR"
MAX_LOG_FILES = 100

# Static data directory location changes depending on whether the application is packaged or running from source
# See https://pyinstaller.org/en/stable/runtime-information.html
is_packaged = (getattr(sys, "frozen", False) and hasattr(sys, "_MEIPASS"))
if is_packaged:
    STATIC_DATA_DIR = pathlib.Path(sys._MEIPASS)
else:
    STATIC_DATA_DIR = pathlib.Path(__file__).resolve().parent.parent.parent

ASSETS_DIR = STATIC_DATA_DIR / "assets"
CONFIG_DIR = STATIC_DATA_DIR / "config"
DEFAULT_SETTINGS_FILE = CONFIG_DIR / "defaults.toml"
VERSION_FILE = STATIC_DATA_DIR / "version.txt"

if os.getenv("LOCALAPPDATA"):
    VARIABLE_DATA_DIR = pathlib.Path(os.getenv("LOCALAPPDATA")) / "HenonToolkit"
else:
    VARIABLE_DATA_DIR = pathlib.Path.home() / ".local" / "state" / "henon-toolkit"


def get_logs_dir() -> pathlib.Path:
    override = os.getenv(LOG_DIR_VARIABLE)
    return pathlib.Path(override) if override else VARIABLE_DATA_DIR / "logs"


def get_version() -> str:
    """
    Reads the version written by the build script, or "dev" when running from source.
    """
    try:
        return VERSION_FILE.read_text(encoding="utf-8").splitlines()[0].strip() or "dev"
    except (OSError, IndexError):
        return "dev"


def format_float(value: float, digits: int = 17) -> str:
    """
    Formats a float with a fixed number of significant digits, so that equal values always serialize identically.
    """
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, f".{digits}g")


def _csv_cell(value, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value, digits)
    if isinstance(value, (list, tuple)):
        return ";".join(_csv_cell(v, digits) for v in value)
    return str(value)


def to_csv(columns: list[str], rows: list[dict], digits: int = 17) -> str:
    """
    Serializes rows as CSV with a header line. Missing values become empty cells, sequences are joined with ";".
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c), digits) for c in columns])
    return buffer.getvalue()


def to_json(document: dict) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def write_output(text: str, out_path: pathlib.Path | None):
    """
    Writes command output to a file, or to stdout if no path is given.
    :param text: Output text.
    :param out_path: Output file path.
    """
    if out_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(text, encoding="utf-8", newline="\n")
    log.info(f"Wrote output to {out_path}")
