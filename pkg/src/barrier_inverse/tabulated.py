"""Tabulated functions with a shape-preserving cubic Hermite interpolant."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PPoly

from .errors import InvalidGrid, OutOfDomain


def _limited(d, lo, hi):
    """Clip slope ``d`` into the Fritsch-Carlson box of two same-sign secants."""
    if d * lo <= 0:
        return 0.0
    bound = 3.0 * min(abs(lo), abs(hi))
    return float(np.sign(d) * min(abs(d), bound))


def hermite_slopes(x, y):
    """Node derivatives for a monotonicity-preserving cubic Hermite interpolant.

    Starts from three-point (second order) estimates, which reproduce
    quadratics exactly, and clips them wherever the data are locally
    monotone so that each monotone stretch of data gives a monotone curve.
    At a strict local extremum the estimate is left alone; that keeps smooth
    peaks sampled off-node accurate.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    h = np.diff(x)
    delta = np.diff(y) / h
    if n == 2:
        return np.array([delta[0], delta[0]])

    d = np.empty(n)
    d[1:-1] = (h[1:] * delta[:-1] + h[:-1] * delta[1:]) / (h[:-1] + h[1:])
    d[0] = ((2 * h[0] + h[1]) * delta[0] - h[0] * delta[1]) / (h[0] + h[1])
    d[-1] = ((2 * h[-1] + h[-2]) * delta[-1] - h[-1] * delta[-2]) / (h[-1] + h[-2])

    # secants at roundoff level count as flat, so that noise in symmetric
    # samples cannot disguise an extremum as a monotone run
    scale = float(np.max(np.abs(delta)))
    sd = np.where(np.abs(delta) <= 64 * np.finfo(float).eps * scale, 0.0, delta)
    for i in range(1, n - 1):
        left, right = sd[i - 1], sd[i]
        if left * right > 0:
            d[i] = _limited(d[i], left, right)
        elif left == 0 and right == 0:
            d[i] = 0.0
        elif right == 0:
            # flat interval to the right: extremum only if the data turn beyond it
            beyond = sd[i + 1] if i + 1 < n - 1 else 0.0
            if not left * beyond < 0:
                d[i] = 0.0
        elif left == 0:
            before = sd[i - 2] if i >= 2 else 0.0
            if not before * right < 0:
                d[i] = 0.0
    for end, first, second in ((0, sd[0], sd[1]), (-1, sd[-1], sd[-2])):
        if d[end] * first <= 0:
            d[end] = 0.0
        else:
            d[end] = _limited(d[end], first, first)
    return d


def shape_preserving_cubic(x, y, breaks=()):
    """Piecewise cubic Hermite interpolant as a :class:`scipy.interpolate.PPoly`.

    ``breaks`` lists node abscissae where the curve may have a corner; the
    slopes on either side are estimated independently.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    cut = sorted({int(np.searchsorted(x, b)) for b in breaks} - {0, x.size - 1})
    bounds = [0, *cut, x.size - 1]
    coeffs = []
    for i0, i1 in zip(bounds[:-1], bounds[1:]):
        xs, ys = x[i0:i1 + 1], y[i0:i1 + 1]
        coeffs.append(CubicHermiteSpline(xs, ys, hermite_slopes(xs, ys)).c)
    return PPoly(np.concatenate(coeffs, axis=1), x, extrapolate=False)


@dataclass(frozen=True)
class TabulatedFunction:
    """Values on a strictly increasing abscissa grid.

    Evaluation uses :func:`shape_preserving_cubic`; points outside the grid
    raise :class:`OutOfDomain`.
    """

    abscissa: np.ndarray
    values: np.ndarray
    breaks: tuple = field(default=())

    def __post_init__(self):
        x = np.array(self.abscissa, dtype=float)
        y = np.array(self.values, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise InvalidGrid("abscissa and values must be 1-d arrays of equal length")
        if x.size < 2:
            raise InvalidGrid("a tabulated function needs at least 2 points")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidGrid("abscissa and values must be finite")
        if np.any(np.diff(x) <= 0):
            raise InvalidGrid("abscissa must be strictly increasing")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "abscissa", x)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "breaks", tuple(float(b) for b in self.breaks))

    def __len__(self):
        return self.abscissa.size

    @property
    def domain(self):
        return float(self.abscissa[0]), float(self.abscissa[-1])

    @cached_property
    def _spline(self):
        return shape_preserving_cubic(self.abscissa, self.values, self.breaks)

    def _check(self, x):
        lo, hi = self.domain
        if np.any(x < lo) or np.any(x > hi):
            bad = x[(x < lo) | (x > hi)].ravel()[0]
            raise OutOfDomain(f"x={float(bad)!r} outside tabulated range [{float(lo)!r}, {float(hi)!r}]")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        self._check(x)
        out = self._spline(x)
        return float(out) if out.ndim == 0 else out

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        self._check(x)
        out = self._spline(x, 1)
        return float(out) if out.ndim == 0 else out

    @classmethod
    def sample(cls, func, grid):
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.asarray(func(grid), dtype=float))
