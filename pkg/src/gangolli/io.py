"""CSV writers and readers with ``#``-prefixed metadata headers."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .spectral import ZonalFunction, gauss_legendre


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def write_csv(path, columns, rows, meta=()) -> Path:
    """Write ``rows`` under a header of ``# key: value`` lines and a column line.

    Floats are written with ``repr`` so that output is exactly reproducible.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in meta:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _parse(cell: str):
    try:
        return float(cell)
    except ValueError:
        return cell


def read_csv(path):
    """Return ``(meta_lines, columns, rows)``; numeric cells are parsed as float."""
    meta, rows, columns = [], [], None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                meta.append(line[1:].strip())
                continue
            cells = next(csv.reader([line.rstrip("\n")]))
            if columns is None:
                columns = cells
            else:
                rows.append([_parse(c) for c in cells])
    return meta, columns, rows


def write_zonal(path, f: ZonalFunction, view: str = "coefficients", meta=()) -> Path:
    if view == "coefficients":
        rows = [(l, c) for l, c in enumerate(f.coeffs)]
        return write_csv(path, ["l", "coeff"], rows, [*meta, "view: coefficients"])
    if view == "samples":
        rows = list(zip(f.grid_colatitudes, f.samples))
        return write_csv(path, ["theta", "value"], rows,
                         [*meta, "view: samples", f"band_limit: {f.band_limit}"])
    raise ValueError(f"unknown view {view!r}")


def read_zonal(path) -> ZonalFunction:
    meta, _, rows = read_csv(path)
    view = next((m.split(":", 1)[1].strip() for m in meta if m.startswith("view:")), None)
    data = np.array(rows, dtype=float)
    if view == "coefficients":
        return ZonalFunction(data[np.argsort(data[:, 0]), 1])
    if view == "samples":
        L = next(int(m.split(":", 1)[1]) for m in meta if m.startswith("band_limit:"))
        order = np.argsort(np.cos(data[:, 0]))
        rule = gauss_legendre(len(data))
        return ZonalFunction(samples=data[order, 1], rule=rule, band_limit=L)
    raise ValueError(f"{path}: missing or unknown view header")
