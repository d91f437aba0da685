"""Loaders for the simulation output files, validating before parsing.

Headers and key sets are frozen copies of the writer's contract. A file
that does not match raises SchemaError with the offending path; partial
or silent acceptance is never an option because a wrong file rendered
quietly is worse than no figure.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SPECTRUM_HEADER = "index,quasienergy,ipr"
MODES_HEADER = "cell_x,sub_x,cell_y,sub_y,probability,re,im"
SCAN_VALUE_COLUMNS = ("omega_0", "omega_pi", "gap0", "gap_pi")
TRAJECTORY_HEADER = "position,theta,phi,index,quasienergy,ipr"

CORNERS = ("LB", "LT", "RB", "RT")


class SchemaError(ValueError):
    """An input file does not match the writer's schema."""


def _read_text(path):
    try:
        return Path(path).read_text()
    except OSError as e:
        raise SchemaError(f"{path}: cannot read input ({e})") from e


def _table(path, lines, header):
    if not lines or lines[0] != header:
        got = lines[0] if lines else "<empty file>"
        raise SchemaError(f"{path}: header {got!r} does not match {header!r}")
    names = header.split(",")
    rows = []
    for n, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(names):
            raise SchemaError(
                f"{path}:{n}: {len(parts)} fields, schema has {len(names)}"
            )
        rows.append(parts)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    cols = {}
    for i, name in enumerate(names):
        try:
            cols[name] = np.array([float(r[i]) for r in rows])
        except ValueError as e:
            raise SchemaError(f"{path}: non-numeric value in {name!r}") from e
    return cols


def load_table(path, header):
    return _table(path, _read_text(path).splitlines(), header)


def _integral(path, name, values):
    if np.any(np.abs(values - np.round(values)) > 1e-9):
        raise SchemaError(f"{path}: column {name!r} must be integral")
    return np.round(values).astype(int)


@dataclass(frozen=True)
class ScanData:
    axis_names: tuple
    axis_a: np.ndarray
    axis_b: np.ndarray
    omega_zero: np.ndarray  # (len(a), len(b)) int
    omega_pi: np.ndarray
    gap_zero: np.ndarray
    gap_pi: np.ndarray


def load_scan(path):
    """Phase-diagram grid; rows must tile the full axis product, a-major."""
    lines = _read_text(path).splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    names = tuple(lines[0].split(","))
    if len(names) != 6 or names[2:] != SCAN_VALUE_COLUMNS:
        raise SchemaError(
            f"{path}: header {lines[0]!r} does not end in "
            f"{','.join(SCAN_VALUE_COLUMNS)!r}"
        )
    cols = _table(path, lines, lines[0])
    a_col, b_col = cols[names[0]], cols[names[1]]
    axis_a = np.unique(a_col)
    axis_b = np.unique(b_col)
    n1, n2 = len(axis_a), len(axis_b)
    if n1 < 2 or n2 < 2 or n1 * n2 != len(a_col):
        raise SchemaError(f"{path}: rows do not tile a {n1}x{n2} grid")
    order = np.lexsort((b_col, a_col))
    expect_a = np.repeat(axis_a, n2)
    expect_b = np.tile(axis_b, n1)
    if not (np.array_equal(a_col[order], expect_a)
            and np.array_equal(b_col[order], expect_b)):
        raise SchemaError(f"{path}: grid has duplicate or missing points")

    def grid(name, integral=False):
        v = cols[name][order]
        if integral:
            v = _integral(path, name, v)
        return v.reshape(n1, n2)

    return ScanData(
        axis_names=names[:2],
        axis_a=axis_a,
        axis_b=axis_b,
        omega_zero=grid("omega_0", integral=True),
        omega_pi=grid("omega_pi", integral=True),
        gap_zero=grid("gap0"),
        gap_pi=grid("gap_pi"),
    )


def load_spectrum(path):
    """index,quasienergy,ipr columns; index must be a 0-based run."""
    cols = load_table(path, SPECTRUM_HEADER)
    idx = _integral(path, "index", cols["index"])
    if not np.array_equal(idx, np.arange(len(idx))):
        raise SchemaError(f"{path}: index column is not 0..n-1")
    return cols["quasienergy"], cols["ipr"]


def load_trajectory(path):
    """Path spectra; returns (position, theta, phi, quasienergy, ipr)."""
    cols = load_table(path, TRAJECTORY_HEADER)
    _integral(path, "index", cols["index"])
    return (cols["position"], cols["theta"], cols["phi"],
            cols["quasienergy"], cols["ipr"])


def load_mode_grid(path):
    """One mode's probability on the site grid, shape (2*ly, 2*lx)."""
    cols = load_table(path, MODES_HEADER)
    x = _integral(path, "cell_x", 2 * cols["cell_x"] + cols["sub_x"])
    y = _integral(path, "cell_y", 2 * cols["cell_y"] + cols["sub_y"])
    prob = cols["probability"]
    if np.any(prob < -1e-15):
        raise SchemaError(f"{path}: negative probability")
    total = float(prob.sum())
    if abs(total - 1.0) > 1e-6:
        raise SchemaError(f"{path}: probabilities sum to {total}, not 1")
    nx, ny = int(x.max()) + 1, int(y.max()) + 1
    if nx * ny != len(prob):
        raise SchemaError(f"{path}: rows do not fill a {nx}x{ny} site grid")
    grid = np.full((ny, nx), np.nan)
    grid[y, x] = prob
    if np.any(np.isnan(grid)):
        raise SchemaError(f"{path}: duplicate or missing site rows")
    return grid


def _require(path, mapping, keys, context):
    if not isinstance(mapping, dict):
        raise SchemaError(f"{path}: {context} is not an object")
    missing = [k for k in keys if k not in mapping]
    if missing:
        raise SchemaError(f"{path}: {context} lacks keys {missing}")


def _load_json(path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON ({e})") from e


def load_corner_modes(path):
    """Corner-mode summary; mode files are named relative to the json."""
    data = _load_json(path)
    _require(path, data, ("ipr_min", "channels"), "document")
    channels = data["channels"]
    if not isinstance(channels, list) or not channels:
        raise SchemaError(f"{path}: channels must be a non-empty list")
    for ch in channels:
        _require(path, ch, ("target", "count", "modes"), "channel")
        if ch["count"] != len(ch["modes"]):
            raise SchemaError(
                f"{path}: channel count {ch['count']} != {len(ch['modes'])} modes"
            )
        for m in ch["modes"]:
            _require(path, m, ("corner", "weight", "ipr", "phase", "file"), "mode")
            if m["corner"] not in CORNERS:
                raise SchemaError(f"{path}: unknown corner {m['corner']!r}")
    return data


def load_robustness(path):
    """Perturbation/disorder outcomes with per-mode retention details."""
    data = _load_json(path)
    _require(path, data,
             ("params", "deltas", "disorder", "lengths", "predicted",
              "outcomes", "retained_fraction", "all_retained"), "document")
    if not isinstance(data["outcomes"], list) or not data["outcomes"]:
        raise SchemaError(f"{path}: outcomes must be a non-empty list")
    for o in data["outcomes"]:
        _require(path, o, ("seed", "n_zero", "n_pi", "modes"), "outcome")
        for m in o["modes"]:
            _require(path, m,
                     ("target", "corner", "retained", "phase", "ipr",
                      "corner_weight", "peak_site"), "mode")
            if m["corner"] not in CORNERS:
                raise SchemaError(f"{path}: unknown corner {m['corner']!r}")
    return data
