"""CSV and JSON plumbing for the command-line front end.

Functions on a grid travel as CSV with header ``t,x0,x1,x2,x3`` (real
components of the bicomplex value), one row per node, uniform ``t``.
"""

from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .bicomplex import Bicomplex
from .errors import MalformedInput
from .ops import Grid, SampledFn

__all__ = [
    "FUNCTION_HEADER",
    "read_function_csv",
    "function_csv_text",
    "write_function_csv",
    "rows_csv_text",
    "load_json",
    "atomic_write",
    "parse_exponents",
]

FUNCTION_HEADER = ("t", "x0", "x1", "x2", "x3")
#: relative tolerance on node positions, in units of the spacing
UNIFORM_TOL = 1e-9


def _fmt(x: float) -> str:
    return repr(float(x))


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and ``os.replace``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def rows_csv_text(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else (_fmt(v) if isinstance(v, float) else v) for v in row])
    return buf.getvalue()


def function_csv_text(t, values: Bicomplex) -> str:
    x = values.to_real_components()
    # + 0.0 turns -0.0 into 0.0
    cols = [np.atleast_1d(np.asarray(c, dtype=float)) + 0.0 for c in x]
    t = np.atleast_1d(np.asarray(t, dtype=float))
    rows = ([float(t[i])] + [float(c[i]) for c in cols] for i in range(t.size))
    return rows_csv_text(FUNCTION_HEADER, rows)


def write_function_csv(path, f: SampledFn) -> None:
    atomic_write(path, function_csv_text(f.t, f.values))


def read_function_csv(path, exponents=None) -> SampledFn:
    """Parse a function CSV into a :class:`SampledFn` on the grid its ``t`` column spans.

    Raises
    ------
    MalformedInput
        Wrong header, non-numeric cells, fewer than two rows, or nodes that
        deviate from uniform spacing by more than ``1e-9 h`` (the message
        gives the offending data row, counting from 1).
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read function CSV {path}: {exc.strerror}") from None
    reader = csv.reader(_io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != FUNCTION_HEADER:
        raise MalformedInput(f"{path}: header must be {','.join(FUNCTION_HEADER)}, got {header}")
    data = []
    for i, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 5:
            raise MalformedInput(f"{path}: row {i} has {len(row)} fields, expected 5")
        try:
            data.append([float(c) for c in row])
        except ValueError:
            raise MalformedInput(f"{path}: row {i} has a non-numeric field: {row}") from None
    if len(data) < 2:
        raise MalformedInput(f"{path}: need at least 2 rows, got {len(data)}")
    arr = np.array(data)
    if not np.all(np.isfinite(arr)):
        bad = int(np.nonzero(~np.all(np.isfinite(arr), axis=1))[0][0]) + 1
        raise MalformedInput(f"{path}: row {bad} is not finite")
    t = arr[:, 0]
    n = t.size
    if not t[-1] > t[0]:
        raise MalformedInput(f"{path}: t must increase, got t[1]={t[0]:g}, t[{n}]={t[-1]:g}")
    h = (t[-1] - t[0]) / (n - 1)
    dev = np.abs(t - (t[0] + h * np.arange(n)))
    bad = np.nonzero(dev > UNIFORM_TOL * h)[0]
    if bad.size:
        i = int(bad[0])
        raise MalformedInput(
            f"{path}: t is not uniform at row {i + 1} (t={float(t[i])!r}, expected {float(t[0] + h * i)!r}, tolerance 1e-9*h)"
        )
    grid = Grid(float(t[0]), float(t[-1]), n)
    values = Bicomplex.from_real_components(arr[:, 1], arr[:, 2], arr[:, 3], arr[:, 4])
    return SampledFn(grid, values, exponents if exponents is not None else ((), ()))


def load_json(source):
    """Parse inline JSON (text starting with ``{`` or ``[``) or the JSON file ``source`` names."""
    if isinstance(source, (dict, list)):
        return source
    text = str(source).strip()
    where = "inline JSON"
    if not text.startswith(("{", "[")):
        where = text
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise MalformedInput(f"cannot read JSON file {where}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{where}: invalid JSON ({exc.msg} at line {exc.lineno} column {exc.colno})") from None


def parse_exponents(text: str | None) -> tuple:
    """``"0.5,0.3+0.1j"`` -> exponents shared by both components; ``None`` -> smooth."""
    if not text:
        return ((), ())
    try:
        vals = tuple(complex(s.strip().replace(" ", "")) for s in text.split(",") if s.strip())
    except ValueError:
        raise MalformedInput(f"exponents must be a comma list of Python complex literals, got {text!r}") from None
    return vals
