"""CSV and JSON reports.

Floats are written with 17 significant digits and files are replaced
atomically, so equal inputs give byte-identical reports and a failed run
leaves nothing half-written.
"""

import csv
import json
import os
import tempfile
from typing import Iterable, Sequence

import numpy as np
from simber import Logger

from weylscope.exceptions import ArgumentError

logger = Logger("report")

SOLVE_COLUMNS = ["x", "re_c", "im_c", "re_cp", "im_cp", "re_s", "im_s", "re_sp", "im_sp"]
ASYM_COLUMNS = ["R", "theta", "re_m_truth", "im_m_truth", "re_m_asym", "im_m_asym",
                "residual", "scaled_residual"]
DIST_COLUMNS = ASYM_COLUMNS + ["phi_center", "phi_width"]
WEYL_COLUMNS = ["x0", "re_m", "im_m", "error_radius", "re_center", "im_center",
                "radius", "re_m_exact", "im_m_exact"]


def format_number(value) -> str:
    return "%.17g" % float(value)


def make_json_safe(obj):
    """Turn complex numbers into [re, im] pairs and numpy scalars or
    arrays into plain python values, recursively.
    """
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [make_json_safe(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "_asdict"):
        return {k: make_json_safe(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): make_json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    if hasattr(obj, "z") and hasattr(obj, "k"):
        return make_json_safe(obj.z)
    return obj


def atomic_write(path: str, write) -> None:
    """Call write(stream) on a temp file next to path, then rename it."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    handle, temp_path = tempfile.mkstemp(prefix=".weylscope-", dir=directory)
    try:
        with os.fdopen(handle, "w", newline="", encoding="utf-8") as stream:
            write(stream)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise
    logger.debug("Wrote {}".format(path))


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    rows = [[format_number(v) for v in row] for row in rows]

    def write(stream):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)

    atomic_write(path, write)


def write_json(path: str, payload) -> None:
    text = json.dumps(make_json_safe(payload), indent=2, sort_keys=True)
    atomic_write(path, lambda stream: stream.write(text + "\n"))


def write_table(path: str, columns: Sequence[str], rows: Iterable[Sequence],
                fmt: str = "csv", records=None) -> None:
    """Write rows as CSV, or as JSON together with the full records."""
    rows = list(rows)
    if fmt == "csv":
        write_csv(path, columns, rows)
    elif fmt == "json":
        write_json(path, {"columns": list(columns),
                          "rows": [[float(v) for v in row] for row in rows],
                          "records": records if records is not None else []})
    else:
        raise ArgumentError("format", fmt, "csv or json")


def _parts(value: complex):
    return value.real, value.imag


def sweep_table(rows) -> list:
    return [[row.R, row.theta, *_parts(row.m_truth), *_parts(row.m_asym),
             row.residual, row.scaled_residual] for row in rows]


def distributional_table(rows) -> list:
    return [[row.R, row.theta, *_parts(row.lhs), *_parts(row.rhs),
             row.residual, row.scaled_residual, row.phi_center, row.phi_width]
            for row in rows]
