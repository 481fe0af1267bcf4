"""Table output shared by the command line tools.

CSV files start with ``#`` metadata lines (the first always carries version,
resolved config and seed), then the column header and rows. The JSON form
holds the same fields. Floats use 17 significant digits in both so values
round-trip exactly.
"""
import json
import math
import sys

import numpy as np

from . import __version__


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def _json_value(x):
    if x is None:
        return "null"
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return "%.17g" % x if math.isfinite(x) else "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_value(v) for v in x) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in x.items()) + "}"
    return json.dumps(str(x))


def _plain(obj):
    """Config/meta values reduced to JSON-friendly builtins."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def header_line(config, seed=None):
    cfg = json.dumps(_plain(config), sort_keys=True, separators=(",", ":"), default=str)
    return f"# janossy {__version__} config={cfg} seed={'' if seed is None else seed}"


def render(columns, rows, config, seed=None, meta=None, form="csv"):
    meta = meta or {}
    if form == "csv":
        lines = [header_line(config, seed)]
        lines += [f"# {k}={_json_value(_plain(v)) if not isinstance(v, str) else v}" for k, v in sorted(meta.items())]
        lines.append(",".join(columns))
        lines += [",".join(fmt(v) for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    if form == "json":
        doc = {"version": __version__, "config": _plain(config), "seed": seed, "meta": _plain(meta),
               "columns": list(columns), "rows": [list(r) for r in rows]}
        return _json_value(doc) + "\n"
    raise ValueError(f"unknown format {form!r}")


def write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w") as fh:
        fh.write(text)


def read_csv(path):
    """``(meta_lines, columns, rows)`` from a file written by :func:`render`, with
    numeric cells converted to float."""
    meta, columns, rows = [], None, []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                meta.append(line)
            elif columns is None:
                columns = line.split(",")
            elif line:
                cells = []
                for c in line.split(","):
                    try:
                        cells.append(float(c))
                    except ValueError:
                        cells.append(c)
                rows.append(cells)
    return meta, columns, rows
