"""File contracts: self-describing CSV tables and JSON documents.

CSV layout (UTF-8)::

    # {"kind": "transmission", "hbar": 1.0, "mass": 1.0, "u0": 1.0}
    E,value
    0.05,0.19...

Any number of ``#`` lines may precede the column header; each carries a JSON
object and they are merged in order.  Floats are written with ``repr``, the
shortest string that round-trips (at most 17 significant digits), so equal
inputs give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .forward import CurveKind, ScatteringCurve
from .marchenko import DiscreteSpectrum
from .potentials import (
    ColdEmission,
    HarmonicWell,
    LinearRamp,
    LinearWell,
    ParabolicBarrier,
    PhysicalConstants,
    Shape,
    Tabulated,
    WidthFunction,
)
from .tabulated import TabulatedFunction

ANALYTIC_KINDS = {cls.kind: cls for cls in
                  (HarmonicWell, LinearWell, ColdEmission, ParabolicBarrier, LinearRamp)}

CURVE_COLUMNS = ("E", "value")
WIDTH_COLUMNS = ("U", "width")
POSITION_COLUMNS = ("U", "x")
POTENTIAL_COLUMNS = ("x", "U")


def format_float(v):
    return repr(float(v) + 0.0)  # + 0.0 folds -0.0 into 0.0


def atomic_write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(columns, x, y, meta=None):
    lines = []
    if meta:
        lines.append("# " + json.dumps(meta, sort_keys=True))
    lines.append(",".join(columns))
    lines.extend(f"{format_float(a)},{format_float(b)}" for a, b in zip(x, y))
    return "\n".join(lines) + "\n"


def write_csv(path, columns, x, y, meta=None):
    atomic_write_text(path, csv_text(columns, x, y, meta))


def read_csv(path):
    """Return ``(meta, columns, x, y)`` from a two-column CSV file."""
    meta = {}
    columns = None
    rows = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err.strerror or err}") from err
    for n, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            try:
                meta.update(json.loads(line[1:]))
            except json.JSONDecodeError as err:
                raise ConfigError(f"{path}:{n}: header line is not JSON") from err
            continue
        fields = [f.strip() for f in line.split(",")]
        if columns is None:
            columns = tuple(fields)
            continue
        if len(fields) != 2:
            raise ConfigError(f"{path}:{n}: expected 2 columns, got {len(fields)}")
        try:
            rows.append((float(fields[0]), float(fields[1])))
        except ValueError as err:
            raise ConfigError(f"{path}:{n}: non-numeric value") from err
    if columns is None or not rows:
        raise ConfigError(f"{path}: no data rows")
    data = np.array(rows)
    return meta, columns, data[:, 0], data[:, 1]


def file_sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def curve_meta(curve):
    meta = {"kind": curve.kind.value, "hbar": curve.consts.hbar, "mass": curve.consts.mass}
    if curve.u0 is not None:
        meta["u0"] = curve.u0
    return meta


def write_curve(path, curve, extra=None):
    meta = curve_meta(curve)
    meta.update(extra or {})
    write_csv(path, CURVE_COLUMNS, curve.energies, curve.values, meta)


def read_curve(path):
    meta, _, x, y = read_csv(path)
    try:
        kind = CurveKind(meta["kind"])
    except (KeyError, ValueError) as err:
        raise ConfigError(f"{path}: header must name a curve kind") from err
    consts = PhysicalConstants(float(meta.get("hbar", 1.0)), float(meta.get("mass", 1.0)))
    u0 = meta.get("u0")
    try:
        return ScatteringCurve(kind, TabulatedFunction(x, y), consts,
                               None if u0 is None else float(u0))
    except ValueError as err:
        raise ConfigError(f"{path}: {err}") from err


def write_width(path, width, extra=None):
    meta = {"kind": "width", "u0": width.u0}
    meta.update(extra or {})
    write_csv(path, WIDTH_COLUMNS, width.u_grid, width.width, meta)


def read_width(path):
    _, _, u, w = read_csv(path)
    try:
        return WidthFunction(u, w)
    except ValueError as err:
        raise ConfigError(f"{path}: {err}") from err


def potential_from_dict(doc, base_dir="."):
    try:
        kind = doc["kind"]
        params = dict(doc.get("params", {}))
    except (KeyError, TypeError) as err:
        raise ConfigError("potential document needs 'kind' and 'params'") from err
    if kind == Tabulated.kind:
        if "path" not in params:
            raise ConfigError("tabulated potential needs params.path to a CSV file")
        path = Path(base_dir) / params["path"]
        _, _, x, u = read_csv(path)
        shape = Shape(doc.get("shape", "barrier"))
        return Tabulated(TabulatedFunction(x, u), shape, source=str(params["path"]))
    cls = ANALYTIC_KINDS.get(kind)
    if cls is None:
        raise ConfigError(f"unknown potential kind {kind!r}")
    expected = doc.get("shape")
    if expected is not None and Shape(expected) is not cls.shape:
        raise ConfigError(f"{kind} is a {cls.shape.value}, not a {expected}")
    try:
        return cls(**{k: float(v) for k, v in params.items()})
    except (TypeError, ValueError) as err:
        raise ConfigError(f"bad parameters for {kind}: {err}") from err


def read_potential(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError(f"cannot load potential {path}: {err}") from err
    return potential_from_dict(doc, path.parent)


def write_potential(path, potential, table_path=None):
    """Write a potential JSON; tabulated kinds also write their x,U table."""
    doc = potential.to_dict()
    if isinstance(potential, Tabulated):
        path = Path(path)
        table_path = Path(table_path or path.with_suffix(".csv"))
        write_csv(table_path, POTENTIAL_COLUMNS, potential.table.abscissa,
                  potential.table.values, {"kind": "potential", "shape": potential.shape.value})
        doc["params"] = {"path": os.path.relpath(table_path, path.parent)}
    atomic_write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_spectrum(path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return DiscreteSpectrum.from_dict(doc)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"cannot load spectrum {path}: {err}") from err


def write_spectrum(path, spectrum):
    atomic_write_text(path, json.dumps(spectrum.to_dict(), indent=2) + "\n")
