"""Command-line front end.

    barrier-inverse forward   --potential p.json --kind transmission --grid 0.05:0.95:100 --out T.csv
    barrier-inverse invert    --in T.csv --out width.csv
    barrier-inverse roundtrip --potential p.json
    barrier-inverse family    --in width.csv --split zero,centered --out members
    barrier-inverse marchenko --in spectrum.json --grid -8:8:401 --out U.csv
    barrier-inverse verify

Exit codes: 0 ok, 2 bad configuration, 3 numerical or data failure,
4 acceptance threshold missed.  Every failure prints one line starting with
``ERROR <code>:`` on stderr.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import acceptance, forward, inversion, io, marchenko
from .errors import BarrierInverseError, ConfigError, NumericalError
from .forward import CurveKind, ScatteringCurve
from .potentials import PhysicalConstants, Shape, barrier_max, width_function
from .quadrature import DEFAULT_TOL
from .tabulated import TabulatedFunction

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_ACCEPTANCE = 0, 2, 3, 4
ROUNDTRIP_TOL = 1e-6


class AcceptanceFailure(BarrierInverseError):
    """A round trip or verification run missed its threshold."""


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    count: int

    def points(self):
        return np.linspace(self.lo, self.hi, self.count)


def parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be min:max:count, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as err:
        raise ConfigError(f"grid must be min:max:count, got {text!r}") from err
    if count < 2:
        raise ConfigError("grid.count must be ≥ 2")
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ConfigError("grid.min must be < grid.max")
    return Grid(lo, hi, count)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ConfigError(f"--{name.rstrip('_').replace('_', '-')} is required "
                              f"for {args.command}")


def _require_file(path, what):
    if not Path(path).is_file():
        raise ConfigError(f"{what} {path} does not exist")


def _constants(args, base=PhysicalConstants()):
    hbar = base.hbar if args.hbar is None else args.hbar
    mass = base.mass if args.mass is None else args.mass
    try:
        return PhysicalConstants(hbar, mass)
    except ValueError as err:
        raise ConfigError(str(err)) from err


def _emit(args, text):
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        io.atomic_write_text(args.out, text)


def _default_kind(potential):
    return CurveKind.GAMOW_TRANSMISSION if potential.shape is Shape.BARRIER \
        else CurveKind.CLASSICAL_PERIOD


def _check_energies(potential, kind, E):
    """Reject grids outside the legal range of ``kind`` before computing anything."""
    if kind is CurveKind.CLASSICAL_PERIOD:
        if potential.shape is not Shape.WELL:
            raise ConfigError(f"{kind.value} needs a well, got {potential.kind}")
        bad = E[E <= 0]
        rule = "E > 0"
    else:
        if potential.shape is not Shape.BARRIER:
            raise ConfigError(f"{kind.value} needs a barrier, got {potential.kind}")
        _, u0 = barrier_max(potential)
        if kind is CurveKind.TRAVERSAL_TIME:
            bad = E[E <= u0]
            rule = f"E > u0={u0!r}"
        else:
            bad = E[(E <= 0) | (E > u0)]
            rule = f"0 < E <= u0={u0!r}"
    if bad.size:
        raise ConfigError(f"grid point E={float(bad[0])!r} outside {rule} for {kind.value}")


def _default_barrier_grid(potential, count):
    _, u0 = barrier_max(potential)
    return np.linspace(0.05 * u0, 0.95 * u0, count)


def _load_potential(args):
    _require(args, "potential")
    _require_file(args.potential, "potential file")
    return io.read_potential(args.potential)


def cmd_forward(args):
    potential = _load_potential(args)
    kind = CurveKind(args.kind) if args.kind else _default_kind(potential)
    if args.grid is not None:
        E = args.grid.points()
    elif potential.shape is Shape.BARRIER and kind is not CurveKind.TRAVERSAL_TIME:
        E = _default_barrier_grid(potential, 100)
    else:
        raise ConfigError(f"--grid is required for {kind.value} curves of {potential.kind}")
    _check_energies(potential, kind, E)
    curve = forward.sample_curve(potential, kind, E, _constants(args), args.tol)
    meta = io.curve_meta(curve)
    meta["potential"] = potential.to_dict()
    _emit(args, io.csv_text(io.CURVE_COLUMNS, curve.energies, curve.values, meta))
    return EXIT_OK


def _load_curve(args):
    _require(args, "in_")
    _require_file(args.in_, "input")
    curve = io.read_curve(args.in_)
    if args.kind and CurveKind(args.kind) is not curve.kind:
        raise ConfigError(f"--kind {args.kind} but {args.in_} holds a {curve.kind.value} curve")
    if args.hbar is not None or args.mass is not None:
        curve = ScatteringCurve(curve.kind, curve.data, _constants(args, curve.consts), curve.u0)
    return curve


def invert_curve(curve, u_grid, even=False, tol=inversion.INVERSION_TOL):
    """Dispatch on curve kind; returns (columns, U, values, formula tag)."""
    kind = curve.kind
    if kind is CurveKind.GAMOW_TRANSMISSION:
        width = inversion.invert_gamow(curve, u_grid, tol)
        return io.WIDTH_COLUMNS, width.u_grid, width.width, "gamow-width"
    if kind is CurveKind.CLASSICAL_PERIOD:
        result = inversion.invert_well_period(curve, u_grid, even, tol)
        if even:
            return io.POSITION_COLUMNS, result.abscissa, result.values, "period-even-half-width"
        return io.WIDTH_COLUMNS, result.abscissa, result.values, "period-width"
    if kind is CurveKind.BACKWARD_TIME:
        result = inversion.invert_barrier_backward(curve, u_grid, tol)
        return io.POSITION_COLUMNS, result.abscissa, result.values, "backward-canonical-x"
    raise ConfigError(f"{kind.value} curves cannot be inverted")


def cmd_invert(args):
    curve = _load_curve(args)
    u_grid = curve.energies if args.grid is None else args.grid.points()
    tol = inversion.INVERSION_TOL if args.tol is None else args.tol
    columns, u, values, tag = invert_curve(curve, u_grid, args.even, tol)
    meta = {"kind": "width" if columns == io.WIDTH_COLUMNS else "position",
            "formula": tag, "input": Path(args.in_).name,
            "input_sha256": io.file_sha256(args.in_),
            "hbar": curve.consts.hbar, "mass": curve.consts.mass}
    if curve.u0 is not None:
        meta["u0"] = curve.u0
    _emit(args, io.csv_text(columns, u, values, meta))
    return EXIT_OK


def _roundtrip_report(args, label, u, errors, threshold):
    worst = float(np.max(errors))
    status = "PASS" if worst <= threshold else "FAIL"
    print(f"roundtrip {label}: max relative error {worst:.3e} "
          f"(threshold {threshold:.0e}) {status}")
    if args.out is not None:
        io.write_csv(args.out, ("U", "rel_error"), u, errors,
                     {"kind": "roundtrip", "max_rel_error": worst, "threshold": threshold})
    if status == "FAIL":
        raise AcceptanceFailure(f"round trip error {worst!r} exceeds {threshold!r}")
    return EXIT_OK


def cmd_roundtrip(args):
    threshold = ROUNDTRIP_TOL if args.threshold is None else args.threshold
    tol = inversion.INVERSION_TOL if args.tol is None else args.tol
    if args.in_ is not None:
        # data-driven: T -> width -> zero-split barrier -> T again
        curve = _load_curve(args)
        if curve.kind is not CurveKind.GAMOW_TRANSMISSION:
            raise ConfigError("roundtrip --in expects a transmission curve")
        width = inversion.invert_gamow(curve, curve.energies, tol)
        member = inversion.family_member(width, inversion.zero_split)
        E = curve.energies[curve.energies < curve.u0]
        again = forward.sample_curve(member, CurveKind.GAMOW_TRANSMISSION, E, curve.consts)
        err = np.abs(again.values / curve.data(E) - 1.0)
        return _roundtrip_report(args, Path(args.in_).name, E, err, threshold)

    potential = _load_potential(args)
    if potential.shape is not Shape.BARRIER:
        raise ConfigError("roundtrip needs a barrier potential (transmission -> width)")
    E = args.grid.points() if args.grid is not None else _default_barrier_grid(potential, 400)
    _check_energies(potential, CurveKind.GAMOW_TRANSMISSION, E)
    consts = _constants(args)
    curve = forward.sample_curve(potential, CurveKind.GAMOW_TRANSMISSION, E, consts)
    got = inversion.invert_gamow(curve, E, tol)
    exact = width_function(potential, E)
    u0 = got.u0
    core = got.u_grid < u0
    err = np.abs(got.width[core] / exact.width[core] - 1.0)
    return _roundtrip_report(args, potential.kind, got.u_grid[core], err, threshold)


def _parse_splits(text, width):
    splits = {}
    for item in (text or "zero").split(","):
        item = item.strip()
        if item == "zero":
            splits["zero"] = inversion.zero_split
        elif item == "centered":
            splits["centered"] = inversion.centered_split(width)
        elif item.startswith("file:"):
            path = item[len("file:"):]
            _require_file(path, "split file")
            _, _, u, x1 = io.read_csv(path)
            splits[Path(path).stem] = TabulatedFunction(u, x1)
        else:
            raise ConfigError(f"unknown split {item!r}; use zero, centered or file:PATH")
    return splits


def cmd_family(args):
    _require(args, "in_")
    _require_file(args.in_, "input")
    width = io.read_width(args.in_)
    splits = _parse_splits(args.split, width)
    consts = _constants(args)
    if args.grid is not None:
        E = args.grid.points()
    else:
        E = width.u_grid[(width.u_grid > 0) & (width.u_grid < width.u0)]
    prefix = args.out or Path(args.in_).with_suffix("").name
    curves = {}
    for name, split in splits.items():
        member = inversion.family_member(width, split)
        curve = forward.sample_curve(member, CurveKind.GAMOW_TRANSMISSION, E, consts)
        curves[name] = curve.values
        io.write_csv(f"{prefix}_{name}_potential.csv", io.POTENTIAL_COLUMNS,
                     member.table.abscissa, member.table.values,
                     {"kind": "potential", "shape": "barrier", "split": name})
        meta = io.curve_meta(curve)
        meta["split"] = name
        io.write_csv(f"{prefix}_{name}_transmission.csv", io.CURVE_COLUMNS, E, curve.values, meta)
    names = list(curves)
    worst = 0.0
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            gap = float(np.max(np.abs(curves[a] - curves[b])))
            worst = max(worst, gap)
            print(f"max |T_{a} - T_{b}| = {gap:.3e}")
    print(f"family of {len(names)}: max pointwise T discrepancy {worst:.3e}")
    return EXIT_OK


def cmd_marchenko(args):
    _require(args, "in_")
    _require_file(args.in_, "spectrum file")
    spectrum = io.read_spectrum(args.in_)
    grid = args.grid or Grid(-8.0, 8.0, 401)
    result = marchenko.reconstruct_potential(spectrum, grid.points())
    meta = {"kind": "potential", "source": "marchenko", "spectrum": spectrum.to_dict()}
    _emit(args, io.csv_text(io.POTENTIAL_COLUMNS, result.x_grid, result.u_values, meta))
    return EXIT_OK


def cmd_verify(args):
    results = acceptance.run_all(echo=print)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} acceptance criteria passed")
    if passed != len(results):
        raise AcceptanceFailure(f"{len(results) - passed} acceptance criteria failed")
    return EXIT_OK


COMMANDS = {
    "forward": cmd_forward,
    "invert": cmd_invert,
    "roundtrip": cmd_roundtrip,
    "family": cmd_family,
    "marchenko": cmd_marchenko,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    parser = _Parser(prog="barrier-inverse",
                     description="Forward and inverse problems for 1-d barriers and wells.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--potential", help="potential JSON document")
    parser.add_argument("--in", dest="in_", help="input CSV (curve or width) or spectrum JSON")
    parser.add_argument("--out", help="output CSV, or prefix for family; '-' for stdout")
    parser.add_argument("--grid", type=str, help="min:max:count")
    parser.add_argument("--hbar", type=float)
    parser.add_argument("--mass", type=float)
    parser.add_argument("--kind", choices=[k.value for k in CurveKind])
    parser.add_argument("--split", help="zero | centered | file:PATH, comma separated")
    parser.add_argument("--tol", type=float, help="quadrature tolerance")
    parser.add_argument("--threshold", type=float, help="roundtrip pass threshold")
    parser.add_argument("--even", action="store_true",
                        help="period inversion returns the even well's half-width x(U)")
    return parser


def _join_grid(argv):
    # "--grid -8:8:401" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for item in it:
        if item == "--grid":
            out.append("--grid=" + next(it, ""))
        else:
            out.append(item)
    return out


def run(argv=None):
    """Parse and execute; returns the exit code instead of exiting."""
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_join_grid(argv))
        args.grid = None if args.grid is None else parse_grid(args.grid)
        if args.tol is not None and not args.tol > 0:
            raise ConfigError("--tol must be positive")
        if args.command == "forward" and args.tol is None:
            args.tol = DEFAULT_TOL
        return COMMANDS[args.command](args)
    except AcceptanceFailure as err:
        code, message = EXIT_ACCEPTANCE, str(err)
    except ConfigError as err:
        code, message = EXIT_CONFIG, str(err)
    except NumericalError as err:
        code, message = EXIT_NUMERICAL, f"{type(err).__name__}: {err}"
    except ValueError as err:
        code, message = EXIT_CONFIG, str(err)
    print(f"ERROR {code}: {' '.join(message.split())}", file=sys.stderr)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
