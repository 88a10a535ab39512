"""File formats: survey CSV, ESRI ASCII grids, polygon text, report CSV.

Writers are deterministic (no timestamps, fixed key order, canonical float
formatting), so identical inputs always produce identical bytes and a
write -> read -> write cycle reproduces the first file exactly.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .costsurface import PolygonSet
from .errors import FormatError, PolygonError
from .metrics import Scalogram
from .points import PointSet
from .raster import GridGeometry, RasterGrid
from .validation import ErrorReport, PairedTestResult

POINTS_HEADER = "x,y,value"
RING_CLOSURE_TOL = 1e-9
_ASC_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")


def _fmt(value: float) -> str:
    """Canonical float text: integers without a trailing .0, repr otherwise."""
    value = float(value)
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _write_preamble(handle, metadata: dict | None):
    for key, value in (metadata or {}).items():
        handle.write(f"# {key}: {value}\n")


def _read_preamble(lines) -> tuple[dict[str, str], list[tuple[int, str]]]:
    """Split '#'-prefixed metadata from data lines; returns (meta, numbered lines)."""
    meta: dict[str, str] = {}
    data: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            if ":" in body:
                key, _, val = body.partition(":")
                meta[key.strip()] = val.strip()
            continue
        data.append((lineno, stripped))
    return meta, data


# ---------------------------------------------------------------------------
# survey points CSV
# ---------------------------------------------------------------------------

def write_points(points: PointSet, path, *, metadata: dict | None = None):
    with open(path, "w") as f:
        _write_preamble(f, metadata)
        f.write(POINTS_HEADER + "\n")
        for x, y, v in zip(points.x, points.y, points.values):
            f.write(f"{float(x)!r},{float(y)!r},{float(v)!r}\n")


def read_points(path) -> tuple[PointSet, int]:
    """Parse a survey CSV; returns (points, n_skipped) where skipped rows had NA values.

    Raises FormatError (with the line number) on a missing header or any
    malformed row.
    """
    with open(path) as f:
        _, data = _read_preamble(f)
    if not data:
        raise FormatError("missing 'x,y,value' header", path=str(path))
    lineno, header = data[0]
    if header.replace(" ", "").lower() != POINTS_HEADER:
        raise FormatError(f"expected header '{POINTS_HEADER}', got {header!r}",
                          path=str(path), line=lineno)
    records = []
    skipped = 0
    for lineno, row in data[1:]:
        parts = [p.strip() for p in row.split(",")]
        if len(parts) != 3:
            raise FormatError(f"expected 3 comma-separated fields, got {len(parts)}",
                              path=str(path), line=lineno)
        if parts[2] == "NA":
            skipped += 1
            continue
        values = []
        for col, token in enumerate(parts, start=1):
            try:
                val = float(token)
            except ValueError:
                raise FormatError(f"not a number: {token!r}", path=str(path),
                                  line=lineno, column=col) from None
            if not math.isfinite(val):
                raise FormatError(f"non-finite value {token!r}", path=str(path),
                                  line=lineno, column=col)
            values.append(val)
        records.append(tuple(values))
    return PointSet.from_records(records), skipped


# ---------------------------------------------------------------------------
# ESRI ASCII grid
# ---------------------------------------------------------------------------

def write_ascii_grid(raster: RasterGrid, path, *, decimals: int = 6):
    g = raster.geometry
    with open(path, "w") as f:
        f.write(f"ncols {g.ncols}\n")
        f.write(f"nrows {g.nrows}\n")
        f.write(f"xllcorner {_fmt(g.xll)}\n")
        f.write(f"yllcorner {_fmt(g.yll)}\n")
        f.write(f"cellsize {_fmt(g.cellsize)}\n")
        f.write(f"NODATA_value {_fmt(raster.nodata)}\n")
        for row in raster.values:
            f.write(" ".join(f"{v:.{decimals}f}" for v in row) + "\n")


def read_ascii_grid(path) -> RasterGrid:
    """Parse an ESRI ASCII grid; header keys are case-insensitive.

    Raises FormatError with line (and column) positions on missing header
    keys, dimension mismatches, or unparsable values.
    """
    with open(path) as f:
        lines = f.readlines()

    header: dict[str, float] = {}
    for i, key in enumerate(_ASC_KEYS):
        if i >= len(lines):
            raise FormatError(f"missing header line '{key}'", path=str(path), line=i + 1)
        parts = lines[i].split()
        if len(parts) != 2 or parts[0].lower() != key:
            raise FormatError(f"expected header '{key} <value>', got {lines[i].strip()!r}",
                              path=str(path), line=i + 1)
        try:
            header[key] = float(parts[1])
        except ValueError:
            raise FormatError(f"not a number: {parts[1]!r}", path=str(path),
                              line=i + 1, column=2) from None

    for key in ("ncols", "nrows"):
        if header[key] != int(header[key]) or int(header[key]) < 1:
            raise FormatError(f"{key} must be a positive integer, got {header[key]}",
                              path=str(path), line=_ASC_KEYS.index(key) + 1)
    ncols, nrows = int(header["ncols"]), int(header["nrows"])
    geom = GridGeometry(ncols, nrows, header["xllcorner"], header["yllcorner"],
                        header["cellsize"])

    data_lines = [(i + 1, line) for i, line in enumerate(lines[len(_ASC_KEYS):],
                                                         start=len(_ASC_KEYS))
                  if line.strip()]
    if len(data_lines) != nrows:
        raise FormatError(f"expected {nrows} data rows, found {len(data_lines)}",
                          path=str(path), line=len(lines))
    values = np.empty((nrows, ncols))
    for r, (lineno, line) in enumerate(data_lines):
        tokens = line.split()
        if len(tokens) != ncols:
            raise FormatError(f"row {r}: expected {ncols} values, got {len(tokens)}",
                              path=str(path), line=lineno)
        for c, token in enumerate(tokens):
            try:
                val = float(token)
            except ValueError:
                raise FormatError(f"not a number: {token!r}", path=str(path),
                                  line=lineno, column=c + 1) from None
            if not math.isfinite(val):
                raise FormatError(f"non-finite value {token!r}", path=str(path),
                                  line=lineno, column=c + 1)
            values[r, c] = val
    return RasterGrid(geom, values, header["nodata_value"])


# ---------------------------------------------------------------------------
# polygon text
# ---------------------------------------------------------------------------

def write_polygons(polygons: PolygonSet, path, *, metadata: dict | None = None):
    """Write rings as 'x y' lines, each ring terminated by END (closure included)."""
    with open(path, "w") as f:
        _write_preamble(f, metadata)
        for ring in polygons.rings:
            for x, y in ring:
                f.write(f"{float(x)!r} {float(y)!r}\n")
            f.write("END\n")


def read_polygons(path) -> PolygonSet:
    """Parse polygon text into a PolygonSet.

    An unclosed ring whose endpoints sit within 1e-9 m is snapped closed;
    a wider gap is a format error naming the ring.
    """
    with open(path) as f:
        _, data = _read_preamble(f)
    rings: list[np.ndarray] = []
    current: list[tuple[float, float]] = []
    last_line = 0
    for lineno, line in data:
        last_line = lineno
        if line == "END":
            if current:
                rings.append(_close_ring(current, len(rings), path, lineno))
                current = []
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected 'x y' or 'END', got {line!r}",
                              path=str(path), line=lineno)
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise FormatError(f"not a coordinate pair: {line!r}",
                              path=str(path), line=lineno) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise FormatError(f"non-finite coordinate: {line!r}", path=str(path), line=lineno)
        current.append((x, y))
    if current:
        raise FormatError("unterminated ring (missing END)", path=str(path), line=last_line)
    try:
        return PolygonSet(tuple(rings))
    except PolygonError as err:
        raise FormatError(str(err), path=str(path)) from err


def _close_ring(vertices, ring_index, path, lineno) -> np.ndarray:
    arr = np.array(vertices, dtype=np.float64)
    first, last = arr[0], arr[-1]
    if not np.array_equal(first, last):
        gap = math.hypot(first[0] - last[0], first[1] - last[1])
        if gap <= RING_CLOSURE_TOL:
            arr[-1] = first
        else:
            raise FormatError(
                f"ring {ring_index} is not closed (endpoint gap {gap:g} m)",
                path=str(path), line=lineno)
    return arr


# ---------------------------------------------------------------------------
# report CSVs
# ---------------------------------------------------------------------------

def write_csv_table(path, metadata: dict | None, header: str, rows: Iterable[str]):
    """Shared writer for headered CSV reports with a '#' metadata preamble."""
    with open(path, "w") as f:
        _write_preamble(f, metadata)
        f.write(header + "\n")
        for row in rows:
            f.write(row + "\n")


def write_error_report(report: ErrorReport, path, *, metadata: dict | None = None):
    meta = {
        "report": "cross-validation",
        "mae": repr(report.mae),
        "rmse": repr(report.rmse),
        "n_evaluated": report.n_evaluated,
        "n_nodata": report.n_nodata,
    }
    meta.update(metadata or {})
    rows = (f"{i},{obs!r},{pred!r},{res!r}" for i, obs, pred, res in report.residuals)
    write_csv_table(path, meta, "point_index,observed,predicted,residual", rows)


def read_error_report(path) -> ErrorReport:
    """Rebuild an ErrorReport from its CSV serialization."""
    with open(path) as f:
        meta, data = _read_preamble(f)
    if not data or data[0][1].replace(" ", "") != "point_index,observed,predicted,residual":
        raise FormatError("missing error-report header", path=str(path))
    rows = []
    for lineno, line in data[1:]:
        parts = line.split(",")
        if len(parts) != 4:
            raise FormatError(f"expected 4 fields, got {len(parts)}",
                              path=str(path), line=lineno)
        try:
            rows.append((int(parts[0]), float(parts[1]), float(parts[2]), float(parts[3])))
        except ValueError:
            raise FormatError(f"malformed row: {line!r}", path=str(path),
                              line=lineno) from None
    if not rows:
        raise FormatError("error report holds no residual rows", path=str(path))
    res = np.array([r[3] for r in rows])
    try:
        n_nodata = int(meta.get("n_nodata", 0))
    except ValueError:
        raise FormatError("n_nodata metadata is not an integer", path=str(path)) from None
    return ErrorReport(tuple(rows),
                       mae=float(np.mean(np.abs(res))),
                       rmse=float(np.sqrt(np.mean(res ** 2))),
                       n_evaluated=len(rows),
                       n_nodata=n_nodata)


def write_paired_test(result: PairedTestResult, path, *, metadata: dict | None = None):
    meta = {
        "report": "wilcoxon-signed-rank",
        "statistic_convention": "W = sum of signed ranks (W+ minus W-)",
    }
    meta.update(metadata or {})
    row = (f"{result.statistic!r},{result.p_value!r},{result.n_pairs},"
           f"{result.n_zero_diffs},{result.method}")
    write_csv_table(path, meta, "statistic,p_value,n_pairs,n_zero_diffs,method", [row])


def write_scalogram(s: Scalogram, path, *, metadata: dict | None = None):
    meta = {"report": "scalogram", "metric": s.metric_name}
    meta.update(metadata or {})
    rows = (f"{_fmt(cs)},{float(val)!r}" for cs, val in s.rows)
    write_csv_table(path, meta, f"cellsize,{s.metric_name}", rows)
