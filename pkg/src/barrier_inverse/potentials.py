"""One-dimensional potentials, turning points and barrier geometry.

Wells have a single minimum with value 0.  Barriers have a single maximum
``u0 > 0`` and live on a finite support outside which they vanish.  The
support may end in a wall (the potential is still above the energy there),
in which case the wall is the turning point on that side; the cold-emission
barrier is the standard example, with its wall at the metal surface x = 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np

from .errors import (
    BracketFailure,
    EnergyOutOfRange,
    InvalidGrid,
    OutOfDomain,
    ShapeMismatch,
)
from .tabulated import TabulatedFunction

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Shape(enum.Enum):
    WELL = "well"
    BARRIER = "barrier"


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be strictly positive")


@dataclass(frozen=True)
class WidthFunction:
    """Barrier width ``x2(U) - x1(U)`` on an increasing U-grid ending at ``u0``.

    This is all a transmission curve knows about its barrier: every member
    of the family of potentials with this width has the same transmission.
    """

    u_grid: np.ndarray
    width: np.ndarray

    def __post_init__(self):
        u = np.array(self.u_grid, dtype=float)
        w = np.array(self.width, dtype=float)
        if u.ndim != 1 or u.shape != w.shape or u.size < 2:
            raise InvalidGrid("u_grid and width must be equal-length 1-d arrays (>= 2)")
        if np.any(np.diff(u) <= 0):
            raise InvalidGrid("u_grid must be strictly increasing")
        scale = max(float(np.max(np.abs(w))), 1.0)
        slack = 1e-9 * scale
        if np.any(w < -slack):
            raise ValueError("width must be nonnegative")
        if abs(w[-1]) > slack:
            raise ValueError("width must vanish at the barrier top")
        if np.any(np.diff(w) > slack):
            raise ValueError("width must be nonincreasing in U")
        w = np.clip(w, 0.0, None)
        w[-1] = 0.0
        u.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "u_grid", u)
        object.__setattr__(self, "width", w)

    @property
    def u0(self):
        return float(self.u_grid[-1])

    def as_table(self):
        return TabulatedFunction(self.u_grid, self.width)


def _bisect(func, lo, hi, target, rising):
    """Locate ``func(x) == target`` on [lo, hi], func monotone in the given sense."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        below = func(mid) < target
        if below == rising:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _golden_max(func, lo, hi):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(200):
        if b - a <= 1e-12 * max(1.0, abs(a), abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = func(d)
    x = c if fc >= fd else d
    return x, max(fc, fd)


@dataclass(frozen=True)
class PotentialSpec:
    """Base class for evaluable potentials.

    Subclasses implement :meth:`_values`, :meth:`support` and
    :meth:`extremum`; analytic kinds also give closed-form turning points.
    """

    kind: ClassVar[str] = ""
    shape: ClassVar[Shape]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = self._values(x)
        return float(out) if out.ndim == 0 else out

    def _values(self, x):
        raise NotImplementedError

    def support(self):
        """(lo, hi) outside of which the potential is zero (barriers) or undefined."""
        return -math.inf, math.inf

    def extremum(self):
        """(x, U) of the single maximum (barrier) or minimum (well)."""
        raise NotImplementedError

    def _closed_turning_points(self, E):
        return None

    def kinks(self):
        """Interior points where U(x) has a corner; quadrature splits there."""
        return ()

    @property
    def params(self):
        return {}

    def to_dict(self):
        return {"kind": self.kind, "params": self.params, "shape": self.shape.value}


@dataclass(frozen=True)
class HarmonicWell(PotentialSpec):
    omega: float = 1.0
    mass: float = 1.0
    kind: ClassVar[str] = "harmonic_well"
    shape: ClassVar[Shape] = Shape.WELL

    def __post_init__(self):
        if not (self.omega > 0 and self.mass > 0):
            raise ValueError("omega and mass must be positive")

    def _values(self, x):
        return 0.5 * self.mass * self.omega**2 * x**2

    def extremum(self):
        return 0.0, 0.0

    def _closed_turning_points(self, E):
        r = math.sqrt(2.0 * E / (self.mass * self.omega**2))
        return -r, r

    @property
    def params(self):
        return {"omega": self.omega, "mass": self.mass}


@dataclass(frozen=True)
class LinearWell(PotentialSpec):
    """U(x) = slope * |x|."""

    slope: float = 1.0
    kind: ClassVar[str] = "linear_well"
    shape: ClassVar[Shape] = Shape.WELL

    def __post_init__(self):
        if not self.slope > 0:
            raise ValueError("slope must be positive")

    def _values(self, x):
        return self.slope * np.abs(x)

    def extremum(self):
        return 0.0, 0.0

    def _closed_turning_points(self, E):
        return -E / self.slope, E / self.slope

    def kinks(self):
        return (0.0,)

    @property
    def params(self):
        return {"slope": self.slope}


@dataclass(frozen=True)
class ColdEmission(PotentialSpec):
    """U(x) = u0 - field * x for x >= 0, cut off at zero; wall at x = 0.

    ``field`` is the product of the electron charge and the applied field.
    """

    u0: float = 1.0
    field: float = 1.0
    kind: ClassVar[str] = "cold_emission"
    shape: ClassVar[Shape] = Shape.BARRIER

    def __post_init__(self):
        if not (self.u0 > 0 and self.field > 0):
            raise ValueError("u0 and field must be positive")

    def _values(self, x):
        if np.any(x < 0):
            raise OutOfDomain("cold-emission potential is defined for x >= 0 only")
        return np.maximum(self.u0 - self.field * x, 0.0)

    def support(self):
        return 0.0, self.u0 / self.field

    def extremum(self):
        return 0.0, self.u0

    def _closed_turning_points(self, E):
        return 0.0, (self.u0 - E) / self.field

    @property
    def params(self):
        return {"u0": self.u0, "field": self.field}


@dataclass(frozen=True)
class ParabolicBarrier(PotentialSpec):
    """U(x) = u0 - m omega^2 x^2 / 2, cut off at zero."""

    u0: float = 1.0
    omega: float = 1.0
    mass: float = 1.0
    kind: ClassVar[str] = "parabolic_barrier"
    shape: ClassVar[Shape] = Shape.BARRIER

    def __post_init__(self):
        if not (self.u0 > 0 and self.omega > 0 and self.mass > 0):
            raise ValueError("u0, omega and mass must be positive")

    def _values(self, x):
        return np.maximum(self.u0 - 0.5 * self.mass * self.omega**2 * x**2, 0.0)

    def support(self):
        r = math.sqrt(2.0 * self.u0 / (self.mass * self.omega**2))
        return -r, r

    def extremum(self):
        return 0.0, self.u0

    def _closed_turning_points(self, E):
        r = math.sqrt(2.0 * (self.u0 - E) / (self.mass * self.omega**2))
        return -r, r

    @property
    def params(self):
        return {"u0": self.u0, "omega": self.omega, "mass": self.mass}


@dataclass(frozen=True)
class LinearRamp(PotentialSpec):
    """U(x) = slope * x on [0, length], zero elsewhere.

    The canonical shape for classical barrier data: rises monotonically and
    drops to zero at the far edge.  ``slope = 0`` gives the free case.
    """

    slope: float = 1.0
    length: float = 1.0
    kind: ClassVar[str] = "linear_ramp"
    shape: ClassVar[Shape] = Shape.BARRIER

    def __post_init__(self):
        if not (self.slope >= 0 and self.length > 0):
            raise ValueError("slope must be >= 0 and length > 0")

    def _values(self, x):
        return np.where((x >= 0) & (x <= self.length), self.slope * x, 0.0)

    def support(self):
        return 0.0, self.length

    def extremum(self):
        return self.length, self.slope * self.length

    def _closed_turning_points(self, E):
        return E / self.slope, self.length

    @property
    def params(self):
        return {"slope": self.slope, "length": self.length}


@dataclass(frozen=True)
class Tabulated(PotentialSpec):
    """Potential given by a table over x, interpolated shape-preservingly."""

    table: TabulatedFunction = None
    tab_shape: Shape = Shape.BARRIER
    source: str | None = field(default=None, compare=False)
    kind: ClassVar[str] = "tabulated"

    def __post_init__(self):
        if not isinstance(self.table, TabulatedFunction):
            raise TypeError("Tabulated needs a TabulatedFunction")
        object.__setattr__(self, "tab_shape", Shape(self.tab_shape))

    @property
    def shape(self):
        return self.tab_shape

    def _values(self, x):
        return np.asarray(self.table(x), dtype=float)

    def support(self):
        return self.table.domain

    def kinks(self):
        return self.table.breaks

    def extremum(self):
        return self._extremum

    @property
    def _extremum(self):
        cached = self.__dict__.get("_ext")
        if cached is None:
            cached = _tabulated_extremum(self.table, self.tab_shape)
            object.__setattr__(self, "_ext", cached)
        return cached

    @property
    def params(self):
        return {"path": self.source} if self.source else {}

    @classmethod
    def from_potential(cls, potential, grid):
        grid = np.asarray(grid, dtype=float)
        return cls(TabulatedFunction(grid, potential(grid)), potential.shape)


def _tabulated_extremum(table, shape):
    x, y = table.abscissa, table.values
    sign = 1.0 if shape is Shape.BARRIER else -1.0
    i = int(np.argmax(sign * y))
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, x.size - 1)]
    xs, fs = _golden_max(lambda t: sign * table(t), lo, hi)
    if fs < sign * y[i]:
        xs, fs = x[i], sign * y[i]
    return float(xs), float(sign * fs)


def evaluate(p, x):
    """U(x) for a potential; raises OutOfDomain outside a tabulated grid."""
    return p(x)


def barrier_max(p):
    """Location and value of a barrier's single maximum."""
    if p.shape is not Shape.BARRIER:
        raise ShapeMismatch(f"{p.kind} is a well, not a barrier")
    x, u = p.extremum()
    return float(x), float(u)


def well_min(p):
    if p.shape is not Shape.WELL:
        raise ShapeMismatch(f"{p.kind} is a barrier, not a well")
    x, u = p.extremum()
    return float(x), float(u)


def turning_points(p, E):
    """The two solutions x1 <= x2 of U(x) = E around the extremum.

    For a barrier, 0 < E <= u0 and the points bracket the maximum; a side
    whose support edge is still above E returns that edge (a wall).  For a
    well, E > 0 and the points bracket the minimum.
    """
    E = float(E)
    if not E > 0:
        raise EnergyOutOfRange(f"energy must be positive, got E={E!r}")
    x_ext, u_ext = p.extremum()
    if p.shape is Shape.BARRIER:
        if E > u_ext:
            raise EnergyOutOfRange(f"E={E!r} exceeds the barrier maximum {float(u_ext)!r}")
        if E == u_ext:
            return float(x_ext), float(x_ext)
    closed = p._closed_turning_points(E)
    if closed is not None:
        return float(closed[0]), float(closed[1])

    lo, hi = p.support()
    barrier = p.shape is Shape.BARRIER
    x1 = _branch_root(p, E, lo, x_ext, increasing=barrier, outer=lo)
    x2 = _branch_root(p, E, x_ext, hi, increasing=not barrier, outer=hi)
    return x1, x2


def _branch_root(p, E, a, b, increasing, outer):
    """Root of U = E on one monotone branch [a, b] by grid scan + bisection."""
    if p.shape is Shape.BARRIER:
        if p(outer) >= E:
            return float(outer)
    elif p(outer) < E:
        raise BracketFailure(f"tabulated well does not reach E={E!r} at x={float(outer)!r}")
    if a == b:
        return float(a)
    x = p.table.abscissa
    nodes = np.concatenate([[a], x[(x > a) & (x < b)], [b]])
    below = p(nodes) < E
    j = int(np.argmax(~below)) if increasing else int(np.argmax(below))
    if j == 0 or below[j] == below[j - 1]:
        raise BracketFailure(f"no sign change of U - E on [{float(a)!r}, {float(b)!r}] for E={E!r}")
    return _bisect(p, float(nodes[j - 1]), float(nodes[j]), E, rising=increasing)


def width_function(p, u_grid):
    """Geometric width x2(U) - x1(U) of a barrier from its turning points.

    ``u0`` is appended to the grid (with width 0) if it is not already last.
    """
    _, u0 = barrier_max(p)
    u = np.asarray(u_grid, dtype=float)
    if u[-1] < u0:
        u = np.append(u, u0)
    width = []
    for U in u:
        x1, x2 = turning_points(p, U)
        width.append(x2 - x1)
    return WidthFunction(u, np.array(width))
