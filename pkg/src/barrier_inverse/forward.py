"""Forward scattering data: classical periods, barrier times, Gamow transmission.

All integrals are posed in turning-point-relative form so that the
inverse-square-root behaviour at the turning points is carried by the
quadrature weight and the remaining factor is smooth.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BarrierInverseError, EnergyOutOfRange, InvalidGrid, ShapeMismatch
from .potentials import PhysicalConstants, Shape, barrier_max, turning_points
from .quadrature import DEFAULT_TOL, SingularEnd, integrate_smooth, integrate_sqrt_singular
from .tabulated import TabulatedFunction


class CurveKind(enum.Enum):
    CLASSICAL_PERIOD = "period"
    TRAVERSAL_TIME = "traversal"
    BACKWARD_TIME = "backward"
    GAMOW_TRANSMISSION = "transmission"


@dataclass(frozen=True)
class ScatteringCurve:
    """A forward curve over energy, with the constants it was computed with.

    ``u0`` is the barrier maximum and is required for transmission curves:
    the inversion integrates up to it.
    """

    kind: CurveKind
    data: TabulatedFunction
    consts: PhysicalConstants = PhysicalConstants()
    u0: float | None = None

    def __post_init__(self):
        kind = CurveKind(self.kind)
        object.__setattr__(self, "kind", kind)
        values = self.data.values
        if kind is CurveKind.GAMOW_TRANSMISSION:
            if self.u0 is None:
                raise ValueError("a transmission curve needs the barrier maximum u0")
            if np.any(values <= 0) or np.any(values > 1):
                raise ValueError("transmission values must lie in (0, 1]")
        elif np.any(values < 0):
            raise ValueError(f"{kind.value} values must be nonnegative")
        if self.u0 is not None:
            object.__setattr__(self, "u0", float(self.u0))

    @property
    def energies(self):
        return self.data.abscissa

    @property
    def values(self):
        return self.data.values


def _require_barrier(p):
    if p.shape is not Shape.BARRIER:
        raise ShapeMismatch(f"{p.kind} is not a barrier")


def _turning_ratio(p, E, xt, side, delta):
    """r(x) = |x - xt| / (E - U(x)) on the allowed side of a turning point xt.

    ``side`` is +1 if the allowed region lies right of ``xt``, -1 if left.
    Within ``delta`` of ``xt`` the direct quotient loses digits to
    cancellation, and that noise would stall adaptive quadrature; there r is
    taken from the quadratic through its values at delta, 2 delta, 3 delta.
    """
    steps = delta * np.array([1.0, 2.0, 3.0])
    r1, r2, r3 = steps / (E - np.asarray(p(xt + side * steps), dtype=float))

    def ratio(x):
        x = np.asarray(x, dtype=float)
        d = np.abs(x - xt)
        out = np.empty_like(d)
        far = d >= delta
        out[far] = d[far] / (E - np.asarray(p(x[far]), dtype=float))
        u = d[~far] / delta - 1.0
        out[~far] = r1 + u * (r2 - r1) + 0.5 * u * (u - 1.0) * (r3 - 2.0 * r2 + r1)
        return out

    return ratio


def classical_period(p, E, consts=PhysicalConstants(), tol=DEFAULT_TOL):
    """Period of oscillation in a well at energy E."""
    if p.shape is not Shape.WELL:
        raise ShapeMismatch(f"{p.kind} is not a well")
    if not E > 0:
        raise EnergyOutOfRange(f"energy must be positive, got E={E!r}")
    x1, x2 = turning_points(p, E)
    delta = 1e-5 * (x2 - x1)
    left = _turning_ratio(p, E, x1, +1, delta)
    right = _turning_ratio(p, E, x2, -1, delta)
    mid = 0.5 * (x1 + x2)

    def smooth(x):
        x = np.asarray(x, dtype=float)
        return np.sqrt(np.where(x < mid, (x2 - x) * left(x), (x - x1) * right(x)))

    res = integrate_sqrt_singular(smooth, x1, x2, SingularEnd.BOTH, tol, points=p.kinks())
    return math.sqrt(2.0 * consts.mass) * res.value


def traversal_time(p, E, consts=PhysicalConstants(), tol=DEFAULT_TOL):
    """Time to cross a barrier's support when E exceeds its maximum."""
    _require_barrier(p)
    _, u0 = barrier_max(p)
    if not E > u0:
        raise EnergyOutOfRange(f"traversal needs E > u0={u0!r}, got E={E!r}")
    lo, hi = p.support()
    res = integrate_smooth(lambda x: 1.0 / np.sqrt(E - p(x)), lo, hi, tol, points=p.kinks())
    return math.sqrt(consts.mass / 2.0) * res.value


def backward_time(p, E, consts=PhysicalConstants(), tol=DEFAULT_TOL):
    """Time from the support's left edge to the left turning point, 0 < E <= u0."""
    _require_barrier(p)
    _, u0 = barrier_max(p)
    if not 0 < E <= u0:
        raise EnergyOutOfRange(f"backward time needs 0 < E <= u0={u0!r}, got E={E!r}")
    lo, _ = p.support()
    x1, _ = turning_points(p, E)
    if x1 <= lo:
        return 0.0
    ratio = _turning_ratio(p, E, x1, -1, 1e-5 * (x1 - lo))

    def smooth(x):
        return np.sqrt(ratio(x))

    res = integrate_sqrt_singular(smooth, lo, x1, SingularEnd.UPPER, tol, points=p.kinks())
    return math.sqrt(consts.mass / 2.0) * res.value


def gamow_exponent(p, E, tol=DEFAULT_TOL):
    """Integral of sqrt(U(x) - E) between the turning points."""
    _require_barrier(p)
    _, u0 = barrier_max(p)
    if not 0 < E <= u0:
        raise EnergyOutOfRange(f"transmission needs 0 < E <= u0={u0!r}, got E={E!r}")
    if E == u0:
        return 0.0
    x1, x2 = turning_points(p, E)

    # sqrt(U - E) = smooth / sqrt((x2 - x)(x - x1)); smooth ~ linear at a true turning point
    def smooth(x):
        return np.sqrt(np.maximum(p(x) - E, 0.0) * (x2 - x) * (x - x1))

    return integrate_sqrt_singular(smooth, x1, x2, SingularEnd.BOTH, tol,
                                   points=p.kinks()).value


def gamow_transmission(p, E, consts=PhysicalConstants(), tol=DEFAULT_TOL):
    """Gamow penetrability exp(-(2/hbar) * integral of sqrt(2m(U - E)) dx)."""
    exponent = gamow_exponent(p, E, tol)
    if exponent == 0.0:
        return 1.0
    return math.exp(-2.0 * math.sqrt(2.0 * consts.mass) * exponent / consts.hbar)


_POINTWISE = {
    CurveKind.CLASSICAL_PERIOD: classical_period,
    CurveKind.TRAVERSAL_TIME: traversal_time,
    CurveKind.BACKWARD_TIME: backward_time,
    CurveKind.GAMOW_TRANSMISSION: gamow_transmission,
}


def check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise InvalidGrid("energy grid needs at least 2 points")
    if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0):
        raise InvalidGrid("energy grid must be finite and strictly increasing")
    return grid


def sample_curve(p, kind, E_grid, consts=PhysicalConstants(), tol=DEFAULT_TOL):
    """Evaluate one forward quantity on a user-supplied energy grid."""
    kind = CurveKind(kind)
    grid = check_grid(E_grid)
    func = _POINTWISE[kind]
    values = np.empty_like(grid)
    for i, E in enumerate(grid):
        try:
            values[i] = func(p, float(E), consts, tol)
        except BarrierInverseError as err:
            raise type(err)(f"at E={float(E)!r}: {err}") from err
    u0 = barrier_max(p)[1] if p.shape is Shape.BARRIER else None
    return ScatteringCurve(kind, TabulatedFunction(grid, values), consts, u0)
