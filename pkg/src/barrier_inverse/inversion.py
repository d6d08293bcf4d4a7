"""Abel-type inversions: well shapes, canonical barriers, Gamow widths, families.

Two orientations of Abel's equation appear:

* standard,  ``integral_0^E phi(U) / sqrt(E - U) dU = f(E)``, solved in closed
  form by one more Abel integral (classical periods and backward times);
* modified,  ``integral_E^a phi(U) / sqrt(U - E) dU = f(E)``, with solution
  ``phi(U) = -(1/pi) d/dU integral_U^a f(E) / sqrt(E - U) dE``.

Tabulated right-hand sides are interpolated in a square-root variable
(``sqrt(E)`` or ``sqrt(a - E)``).  For the data these equations produce the
right-hand side is a smooth function of that variable even though it has a
square-root branch in E, so a cubic spline in it is accurate right up to the
end point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    BranchOverlap,
    DomainError,
    GridTooCoarse,
    NonMonotoneData,
    NonMonotoneResult,
)
from .forward import CurveKind, ScatteringCurve
from .potentials import PhysicalConstants, Shape, Tabulated, WidthFunction
from .quadrature import (
    SingularEnd,
    _evaluate,
    integrate_smooth,
    integrate_sqrt_singular,
)
from .tabulated import TabulatedFunction

INVERSION_TOL = 1e-12


class Orientation(enum.Enum):
    STANDARD = "standard"
    MODIFIED = "modified"


@dataclass(frozen=True)
class AbelProblem:
    """Known right-hand side ``f`` of an Abel equation.

    For the modified orientation ``upper_limit`` is the constant upper limit
    ``a``; ``f(a) = 0`` holds for any bounded solution and is supplied when the
    table stops short of ``a``.
    """

    f: TabulatedFunction
    upper_limit: float
    orientation: Orientation = Orientation.MODIFIED

    def __post_init__(self):
        orientation = Orientation(self.orientation)
        object.__setattr__(self, "orientation", orientation)
        lo, hi = self.f.domain
        if orientation is Orientation.MODIFIED and self.upper_limit < hi:
            raise DomainError("modified problem needs upper_limit >= max abscissa")
        if orientation is Orientation.STANDARD and lo < 0:
            raise DomainError("standard problem needs abscissa >= 0")


def sqrt_spaced_grid(lo, top, n):
    """n energies on [lo, top], uniform in sqrt(top - E).

    Such grids resolve the square-root branch of modified-Abel data at the
    constant limit ``top``; the points crowd towards ``top``.
    """
    s = np.linspace(np.sqrt(top - lo), 0.0, n)
    grid = top - s**2
    grid[0], grid[-1] = lo, top
    return grid


def _check_u_grid(u_grid, lo, hi):
    u = np.asarray(u_grid, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise DomainError("u_grid must be a non-empty 1-d array")
    if np.any(np.diff(u) <= 0):
        raise DomainError("u_grid must be strictly increasing")
    if u[0] < lo or u[-1] > hi:
        raise DomainError(f"u_grid [{float(u[0])!r}, {float(u[-1])!r}] leaves the data range [{float(lo)!r}, {float(hi)!r}]")
    return u


def _spline_below_top(E, y, top, anchor_value=None, clamp=False):
    """Cubic spline of y against s = sqrt(top - E), increasing in s.

    ``anchor_value`` is the known value at s = 0, added if the data stop
    short of ``top``.  ``clamp`` imposes zero slope at s = 0.
    """
    s = np.sqrt(np.maximum(top - E, 0.0))[::-1]
    y = np.asarray(y, dtype=float)[::-1]
    if s[0] > 0 and anchor_value is not None:
        s = np.concatenate([[0.0], s])
        y = np.concatenate([[anchor_value], y])
    if s.size == 2:
        return CubicSpline(s, y, bc_type="natural")
    bc = ((1, 0.0), "not-a-knot") if clamp and s[0] == 0 else "not-a-knot"
    return CubicSpline(s, y, bc_type=bc)


def _spline_above_zero(E, y, odd=False):
    """Interpolant of y as a function of r = sqrt(E), usable down to r = 0.

    Without ``odd`` a cubic spline in r whose first piece continues to r = 0.
    With ``odd`` the data are known to be sqrt(E) times a smooth function of
    E; that smooth factor is splined in E instead, which extrapolates over
    the gap to E = 0 far more accurately.
    """
    E = np.asarray(E, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.sqrt(E)
    bc = "natural" if r.size == 2 else "not-a-knot"
    if odd:
        if r[0] == 0:
            E, y, r = E[1:], y[1:], r[1:]
        factor = CubicSpline(E, y / r, bc_type=bc if E.size > 2 else "natural",
                             extrapolate=True)
        return lambda rr: factor(np.square(rr)) * rr
    return CubicSpline(r, y, bc_type=bc, extrapolate=True)


def _central_derivative(g, u, h, lo, hi):
    """Fourth-order derivative of g at u by a 5-point stencil kept inside [lo, hi]."""
    if u - 2 * h >= lo and u + 2 * h <= hi:
        return (g(u - 2 * h) - 8 * g(u - h) + 8 * g(u + h) - g(u + 2 * h)) / (12 * h)
    if u + 4 * h <= hi:
        pts = [g(u + k * h) for k in range(5)]
        sign = 1.0
    elif u - 4 * h >= lo:
        pts = [g(u - k * h) for k in range(5)]
        sign = -1.0
    else:
        raise GridTooCoarse(f"derivative stencil of step {float(h)!r} does not fit at U={float(u)!r}")
    return sign * (-25 * pts[0] + 48 * pts[1] - 36 * pts[2] + 16 * pts[3] - 3 * pts[4]) / (12 * h)


def modified_abel_solve(prob, u_grid, step=None, tol=INVERSION_TOL):
    """Solve the modified Abel equation for phi on ``u_grid``.

    ``g(U) = integral_U^a f(E)/sqrt(E - U) dE`` is computed by quadrature and
    differentiated with a fourth-order five-point stencil of width ``step``
    (default: a thousandth of the data span).
    """
    if prob.orientation is not Orientation.MODIFIED:
        raise ValueError("modified_abel_solve needs a MODIFIED problem")
    a = float(prob.upper_limit)
    E = prob.f.abscissa
    lo = float(E[0])
    u = _check_u_grid(u_grid, lo, a)
    spline = _spline_below_top(E, prob.f.values, a, anchor_value=0.0)
    h = step if step is not None else 1e-3 * (a - lo)

    def g(U):
        if U >= a:
            return 0.0
        # f(E)/sqrt(E - U) = [f(E) sqrt(a - E)] / sqrt((E - U)(a - E))
        def smooth(e):
            s = np.sqrt(np.maximum(a - e, 0.0))
            return spline(s) * s
        return integrate_sqrt_singular(smooth, U, a, SingularEnd.BOTH, tol).value

    phi = np.array([-_central_derivative(g, U, h, lo, a) / math.pi for U in u])
    return TabulatedFunction(u, phi)


def modified_abel_forward(phi, E, a, tol=INVERSION_TOL):
    """Right-hand side ``integral_E^a phi(U)/sqrt(U - E) dU`` for a callable phi."""
    E = np.atleast_1d(np.asarray(E, dtype=float))
    out = np.empty_like(E)
    for i, e in enumerate(E):
        out[i] = 0.0 if e >= a else integrate_sqrt_singular(
            phi, e, a, SingularEnd.LOWER, tol).value
    return out


def gamow_log_profile(curve):
    """Spline of ln T against s = sqrt(u0 - E), with ln T(u0) = 0 and zero slope there."""
    if curve.kind is not CurveKind.GAMOW_TRANSMISSION:
        raise ValueError("expected a transmission curve")
    E = curve.energies
    log_t = np.log(curve.values)
    scale = max(1.0, float(np.max(np.abs(log_t))))
    if np.any(np.diff(log_t) < -1e-13 * scale):
        k = int(np.argmax(np.diff(log_t) < -1e-13 * scale))
        raise NonMonotoneData(
            f"ln T decreases between E={float(E[k])!r} and E={float(E[k + 1])!r}; "
            "data are not from a single-maximum barrier")
    if E[-1] > curve.u0:
        raise DomainError(f"transmission data above the barrier top u0={curve.u0!r}")
    return _spline_below_top(E, log_t, curve.u0, anchor_value=0.0, clamp=True)


def invert_gamow(curve, u_grid, tol=INVERSION_TOL):
    """Barrier width x2(U) - x1(U) reproducing a Gamow transmission curve.

    Uses ``width(U) = hbar/(pi sqrt(2m)) * integral_U^u0 (d ln T/dE) / sqrt(E - U) dE``.
    Writing E = u0 - s^2 turns ``d ln T/dE`` into ``-(d ln T/ds) / (2 sqrt(u0 - E))``,
    so the integrand carries the two-sided weight and no derivative is
    divided by a vanishing T.  The returned grid ends at u0 with width 0.
    """
    profile = gamow_log_profile(curve)
    slope = profile.derivative()
    u0 = curve.u0
    u = _check_u_grid(u_grid, float(curve.energies[0]), u0)
    prefactor = curve.consts.hbar / (math.pi * math.sqrt(2.0 * curve.consts.mass))

    def smooth(e):
        return -0.5 * slope(np.sqrt(np.maximum(u0 - e, 0.0)))

    widths = [0.0 if U >= u0 else
              prefactor * integrate_sqrt_singular(smooth, U, u0, SingularEnd.BOTH, tol).value
              for U in u]
    if u[-1] < u0:
        u = np.append(u, u0)
        widths.append(0.0)
    try:
        return WidthFunction(u, np.array(widths))
    except ValueError as err:
        raise NonMonotoneResult(str(err)) from err


def invert_gamow_by_abel(curve, u_grid, step=None, tol=INVERSION_TOL):
    """Same width as :func:`invert_gamow`, via :func:`modified_abel_solve`.

    The Gamow exponent is itself a modified Abel transform of the width:
    ``-hbar ln T(E) / sqrt(2m) = integral_E^u0 width(U) / sqrt(U - E) dU``.
    Independent of the log-derivative route; used as a cross-check.
    """
    gamow_log_profile(curve)
    consts = curve.consts
    rhs = -consts.hbar * np.log(curve.values) / math.sqrt(2.0 * consts.mass)
    prob = AbelProblem(TabulatedFunction(curve.energies, rhs), curve.u0, Orientation.MODIFIED)
    u = _check_u_grid(u_grid, float(curve.energies[0]), curve.u0)
    widths = modified_abel_solve(prob, u, step, tol).values
    if u[-1] < curve.u0:
        u, widths = np.append(u, curve.u0), np.append(widths, 0.0)
    try:
        return WidthFunction(u, widths)
    except ValueError as err:
        raise NonMonotoneResult(str(err)) from err


def _standard_abel(table, u_grid, factor, tol, odd=False):
    """factor * integral_0^U f(E)/sqrt(U - E) dE for a table of f, gap to E = 0 closed."""
    E = table.abscissa
    if E[0] < 0:
        raise DomainError("energies must be nonnegative")
    u = _check_u_grid(u_grid, 0.0, float(E[-1]))
    if u[0] <= 0:
        raise DomainError("u_grid must be strictly positive")
    spline = _spline_above_zero(E, table.values, odd)

    # f(E)/sqrt(U - E) = [f(E) sqrt(E)] / sqrt(E (U - E))
    def smooth(e):
        r = np.sqrt(np.maximum(e, 0.0))
        return spline(r) * r

    values = [factor * integrate_sqrt_singular(smooth, 0.0, U, SingularEnd.BOTH, tol).value
              for U in u]
    return TabulatedFunction(u, np.array(values))


def invert_well_period(curve, u_grid, even=False, tol=INVERSION_TOL):
    """Well geometry from its period curve.

    ``even=False`` gives the width x2(U) - x1(U); ``even=True`` gives the
    half-width x(U) of the unique even well, i.e. the inverse of U(x) for x > 0.
    """
    if curve.kind is not CurveKind.CLASSICAL_PERIOD:
        raise ValueError("expected a classical-period curve")
    factor = 1.0 / (math.pi * math.sqrt(2.0 * curve.consts.mass))
    if even:
        factor *= 0.5
    return _standard_abel(curve.data, u_grid, factor, tol)


def invert_barrier_backward(curve, u_grid, tol=INVERSION_TOL):
    """x(U) of the canonical (monotone nondecreasing) barrier from backward times."""
    if curve.kind is not CurveKind.BACKWARD_TIME:
        raise ValueError("expected a backward-time curve")
    factor = math.sqrt(2.0 / curve.consts.mass) / math.pi
    # a face rising from U = 0 has R(E) = sqrt(E) * (smooth in E): odd in sqrt(E)
    result = _standard_abel(curve.data, u_grid, factor, tol, odd=True)
    steps = np.diff(result.values)
    if np.any(steps < -1e-8):
        k = int(np.argmin(steps))
        raise NonMonotoneResult(
            f"canonical x(U) decreases by {float(-steps[k])!r} near U={float(result.abscissa[k])!r}")
    return result


def canonical_potential(x_of_u):
    """Tabulated canonical barrier from its inverse x(U) (U increasing with x)."""
    x = x_of_u.values
    if np.any(np.diff(x) <= 0):
        raise BranchOverlap("x(U) must be strictly increasing to define U(x)")
    return Tabulated(TabulatedFunction(x, x_of_u.abscissa), Shape.BARRIER)


def family_member(width, split, u0=None):
    """One member of the family of barriers sharing ``width``.

    ``split(U)`` is the left turning point x1(U); the right one is
    x1(U) + width(U).  A branch that is constant in U is a vertical wall and
    is dropped, so ``split = 0`` applied to a linear width gives back the
    cold-emission barrier.
    """
    u = width.u_grid
    if u0 is not None and not math.isclose(u0, width.u0, rel_tol=1e-12, abs_tol=1e-15):
        raise ValueError(f"u0={u0!r} does not match the width function's top {width.u0!r}")
    x1 = np.asarray(_evaluate(split, u), dtype=float)
    x2 = x1 + width.width
    peak = float(x1[-1])
    scale = max(1.0, float(np.max(np.abs(np.concatenate([x1, x2])))))
    left = x1[:-1]
    right = x2[:-1][::-1]
    u_left = u[:-1]
    u_right = u[:-1][::-1]
    if np.all(np.abs(left - peak) <= 1e-14 * scale):
        left, u_left = left[:0], u_left[:0]
    if np.all(np.abs(right - peak) <= 1e-14 * scale):
        right, u_right = right[:0], u_right[:0]
    x = np.concatenate([left, [peak], right])
    values = np.concatenate([u_left, [width.u0], u_right])
    if x.size < 2 or np.any(np.diff(x) <= 0):
        raise BranchOverlap("split and width do not give a single-valued U(x)")
    return Tabulated(TabulatedFunction(x, values, breaks=(peak,)), Shape.BARRIER)


def zero_split(u):
    return np.zeros_like(np.asarray(u, dtype=float))


def centered_split(width):
    """Split placing the barrier symmetrically about x = 0."""
    table = width.as_table()
    return lambda u: -0.5 * table(u)


def kernel_composition_orders(phi, alpha, a, tol=1e-12):
    """Both integration orders over the triangle alpha <= E <= U <= a.

    Returns ``(nested, swapped)`` where

    * nested  = integral_alpha^a dE/sqrt(E - alpha) * integral_E^a phi(U) dU/sqrt(U - E)
    * swapped = integral_alpha^a phi(U) dU * integral_alpha^U dE/sqrt((U - E)(E - alpha))

    Analytically both equal pi times the integral of phi over [alpha, a].
    """

    def inner(e):
        return 0.0 if e >= a else integrate_sqrt_singular(
            phi, e, a, SingularEnd.LOWER, tol).value

    def outer_smooth(E):
        E = np.atleast_1d(E)
        return np.array([inner(e) * math.sqrt(max(a - e, 0.0)) for e in E])

    nested = integrate_sqrt_singular(outer_smooth, alpha, a, SingularEnd.BOTH, tol).value

    def kernel(U):
        return integrate_sqrt_singular(lambda e: 1.0, alpha, U, SingularEnd.BOTH, tol).value

    def swapped_integrand(U):
        U = np.atleast_1d(U)
        return np.array([_evaluate(phi, np.array([v]))[0] * kernel(v) if v > alpha else 0.0
                         for v in U])

    swapped = integrate_smooth(swapped_integrand, alpha, a, tol).value
    return nested, swapped
