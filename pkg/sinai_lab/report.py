"""Markdown summary of a directory of suite results."""
import glob
import logging
import os

from .const import EXIT_ASSERTION_FAILED, EXIT_OK, EXIT_RUNTIME_ERROR, SCHEMA_VERSION
from .exceptions import ResultIoError
from .utils import read_from_json, save_as_text

_LOGGER = logging.getLogger(__name__)

REPORT_NAME = "REPORT.md"
COLUMNS = ("quantity", "x", "estimate", "prediction", "stderr", "pass")
REQUIRED_KEYS = ("schema", "name", "rows", "pass")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "PASS" if value else "FAIL"
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value).replace("|", "\\|")


def _load_result(file_path: str) -> dict:
    document = read_from_json(file_path)
    if not isinstance(document, dict) or any(key not in document for key in REQUIRED_KEYS):
        raise ResultIoError("Malformed result file " + file_path)
    if document["schema"] != SCHEMA_VERSION:
        raise ResultIoError("Unsupported schema " + str(document["schema"]) + " in " + file_path)
    return document


def _suite_section(document: dict) -> list[str]:
    status = "PASS" if document["pass"] else "FAIL"
    lines = ["## " + str(document["name"]) + " (" + status + ")", ""]
    lines.append("seed: " + str(document.get("seed", "")))
    lines.append("")
    lines.append("| " + " | ".join(COLUMNS) + " |")
    lines.append("|" + "---|" * len(COLUMNS))
    for row in document["rows"]:
        lines.append("| " + " | ".join(_cell(row.get(column)) for column in COLUMNS) + " |")
    failed = [check["name"] for check in document.get("checks", []) if not check["pass"]]
    if failed:
        lines.append("")
        lines.append("Failed checks: " + ", ".join(failed))
    lines.append("")
    return lines


def emit_report(results_dir: str) -> tuple[str, int]:
    """Summarize every suite JSON of ``results_dir`` and write REPORT.md there.

    Args:
        results_dir (str): Directory of result documents.

    Returns:
        tuple[str, int]: The markdown and the exit code (0 when every suite
        passes, 2 when one fails, 1 when a result file is unreadable).

    Raises:
        ResultIoError: If the directory does not exist or the report cannot be written.
    """
    if not os.path.isdir(results_dir):
        raise ResultIoError("No results directory " + str(results_dir))
    documents, broken = [], []
    for file_path in sorted(glob.glob(os.path.join(results_dir, "*.json"))):
        try:
            documents.append(_load_result(file_path))
        except ResultIoError as exception:
            _LOGGER.error(exception)
            broken.append(os.path.basename(file_path))

    failing = [document["name"] for document in documents if not document["pass"]]
    lines = ["# Sinai walk lab report", ""]
    lines.append("suites: " + str(len(documents)) + ", failing: " + str(len(failing)))
    lines.append("")
    for document in documents:
        lines.extend(_suite_section(document))
    if broken:
        lines.append("## Unreadable result files")
        lines.append("")
        lines.extend("- " + name for name in broken)
        lines.append("")
    text = "\n".join(lines)
    save_as_text(text, os.path.join(results_dir, REPORT_NAME))

    if broken:
        return text, EXIT_RUNTIME_ERROR
    if failing:
        return text, EXIT_ASSERTION_FAILED
    return text, EXIT_OK
