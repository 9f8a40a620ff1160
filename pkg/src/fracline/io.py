"""CSV and key=value report files, and loading of initial data.

Numbers are written with 17 significant digits (``%.17g``), which round
trips every double; files are written to a temporary sibling and renamed
into place so readers never see a partial file.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .fracops import GridFunction
from .profiles import BUILTIN_PROFILES
from .solvers import InitialData, Report, SolutionField

__all__ = [
    "format_number",
    "atomic_write",
    "csv_text",
    "write_csv",
    "write_field",
    "write_kernel_table",
    "report_text",
    "write_report",
    "read_csv",
    "load_initial_condition",
]

UNIFORM_RTOL = 1e-9


def format_number(v) -> str:
    return f"{float(v):.17g}"


def atomic_write(path, text: str) -> None:
    """Write text to path via a temporary file in the same directory and a rename."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else format_number(v) for v in row])
    return buf.getvalue()


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    atomic_write(path, csv_text(header, rows))


def write_field(path, field: SolutionField, column: str = "w") -> None:
    """One row per node, ordered by t then x, header ``x,t,w``."""
    write_csv(path, ("x", "t", column), field.rows())


def write_kernel_table(path, x: np.ndarray, t: np.ndarray, values: np.ndarray) -> None:
    """values[k, i] = E(x_i, t_k); header ``x,t,E``."""
    rows = ((xi, tk, values[k, i]) for k, tk in enumerate(t) for i, xi in enumerate(x))
    write_csv(path, ("x", "t", "E"), rows)


def _value_text(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return format_number(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return ",".join(_value_text(u) for u in v)
    return str(v)


def report_text(items: Iterable[Report | tuple[str, object]]) -> str:
    lines = []
    for item in items:
        if isinstance(item, Report):
            lines.extend(item.lines())
        else:
            key, value = item
            lines.append(f"{key}={_value_text(value)}")
    return "\n".join(lines) + "\n"


def write_report(path, items: Iterable[Report | tuple[str, object]]) -> None:
    atomic_write(path, report_text(items))


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header and float data of a CSV file with a header row."""
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DomainError(f"{path}: empty file") from None
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DomainError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise DomainError(f"{path}:{lineno}: non-numeric field") from None
    return header, np.asarray(rows, dtype=float).reshape(-1, len(header))


def _grid_from_csv(path) -> GridFunction:
    header, data = read_csv(path)
    if header != ["x", "g"]:
        raise DomainError(f"{path}: header must be 'x,g', found {','.join(header)!r}")
    if len(data) < 3:
        raise DomainError(f"{path}: need at least 3 samples")
    if np.any(np.isnan(data)):
        raise DomainError(f"{path}: data contain NaN")
    if not np.all(np.isfinite(data)):
        raise DomainError(f"{path}: data contain infinite values")
    x, g = data[:, 0], data[:, 1]
    if x[0] != 0.0:
        raise DomainError(f"{path}: the grid must start at x = 0")
    dx = np.diff(x)
    if np.any(dx <= 0.0):
        raise DomainError(f"{path}: x must be strictly increasing")
    h = (x[-1] - x[0]) / (len(x) - 1)
    if np.max(np.abs(dx - h)) > UNIFORM_RTOL * max(h, abs(x[-1])):
        raise DomainError(f"{path}: x is not uniformly spaced")
    nz = np.flatnonzero(g)
    return GridFunction(h, g, int(nz[-1]) if nz.size else 0)


def load_initial_condition(source, x_max: float = 10.0, nx: int = 1000,
                           bc: str = "dirichlet", p: float = 2.0) -> InitialData:
    """InitialData from a CSV file with header ``x,g`` or a built-in profile name.

    Built-in profiles are sampled at spacing x_max/nx; CSV data keep their own
    grid. support_end is the last index with g != 0. A Dirichlet problem
    needs g(0) = 0, since the boundary value and the initial value meet at
    the corner; anything else is rejected.
    """
    if bc not in ("dirichlet", "neumann"):
        raise DomainError("bc must be 'dirichlet' or 'neumann'")
    name = str(source)
    if name in BUILTIN_PROFILES:
        if not (x_max >= 1.0 and nx >= 1):
            raise DomainError("built-in profiles live on [0, 1]; need x_max >= 1")
        g = GridFunction.sample(BUILTIN_PROFILES[name], x_max / nx, nx, compact=True)
    elif os.path.exists(name):
        g = _grid_from_csv(name)
    else:
        known = ", ".join(sorted(BUILTIN_PROFILES))
        raise DomainError(f"{name!r} is neither a readable file nor a built-in profile ({known})")
    if bc == "dirichlet" and g.values[0] != 0.0:
        raise DomainError(
            f"Dirichlet data must satisfy g(0) = 0 (compatibility with the zero boundary "
            f"value); got g(0) = {g.values[0]:.17g}")
    return InitialData(g, "odd" if bc == "dirichlet" else "even", p)
