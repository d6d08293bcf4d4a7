"""Quadrature for integrands with inverse-square-root endpoint behaviour.

Every kernel in this package has the form ``f(E) / sqrt(E - a)``,
``f(E) / sqrt(b - E)`` or ``f(E) / sqrt((b - E)(E - a))`` with ``f`` smooth.
The singular weight is removed by substitution before any rule is applied:

* lower end:  ``E = a + t**2``  ->  ``2 f(a + t**2) dt``
* upper end:  ``E = b - t**2``  ->  ``2 f(b - t**2) dt``
* both ends:  ``E = (a + b)/2 + (b - a)/2 cos(theta)``  ->  ``f(E(theta)) dtheta``

The two-sided case is first attacked with Chebyshev-Gauss rules (equal
weights, cosine-spaced nodes), which are exact for polynomial ``f``.  If the
smooth factor has kinks the rule sequence stalls and the integral falls back
to adaptive Gauss-Kronrod panels in ``theta``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInterval, NonConvergence

DEFAULT_TOL = 1e-10
DEFAULT_BUDGET = 10**6

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
_GAUSS[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])

_CHEBYSHEV_ORDERS = (8, 24, 72, 216, 648, 1944, 5832)


class SingularEnd(enum.Enum):
    """Which endpoint(s) carry the inverse-square-root weight."""

    LOWER = "lower"
    UPPER = "upper"
    BOTH = "both"


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    est_error: float
    evaluations: int

    def __post_init__(self):
        if self.est_error < 0 or self.evaluations < 1:
            raise ValueError("est_error must be >= 0 and evaluations >= 1")

    def __float__(self):
        return float(self.value)


def _evaluate(f, x):
    """Call ``f`` on an array, falling back to a scalar loop if needed."""
    try:
        y = np.asarray(f(x), dtype=float)
    except (TypeError, ValueError):
        y = None
    if y is None or (y.shape != x.shape and y.size != 1):
        y = np.array([f(float(xi)) for xi in x], dtype=float)
    y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        raise NonConvergence("integrand returned non-finite values")
    return y


def _check_interval(a, b):
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise InvalidInterval(f"need finite a < b, got a={float(a)!r}, b={float(b)!r}")


def _adaptive_gk(g, edges, tol, budget):
    """Level-synchronous adaptive Gauss-Kronrod 7/15 over the panels ``edges``.

    All panels still open at a given depth are evaluated in a single call
    of ``g``.  A panel is accepted once ``|K15 - G7|`` drops below its share
    of ``tol`` (proportional to its width) or below the roundoff floor.
    Returns ``(value, error, evaluations)``.
    """
    edges = np.asarray(edges, dtype=float)
    total = edges[-1] - edges[0]
    left = edges[:-1].copy()
    right = edges[1:].copy()
    value = 0.0
    error = 0.0
    evaluations = 0
    while left.size:
        if evaluations + 15 * left.size > budget:
            raise NonConvergence(
                f"evaluation budget {budget} exhausted with {left.size} open panels"
            )
        centre = 0.5 * (left + right)
        half = 0.5 * (right - left)
        x = centre[:, None] + half[:, None] * _NODES[None, :]
        y = _evaluate(g, x.ravel()).reshape(x.shape)
        evaluations += y.size
        kronrod = half * (y @ _KRONROD)
        gauss = half * (y @ _GAUSS)
        err = np.abs(kronrod - gauss)
        floor = 50 * np.finfo(float).eps * (half * (np.abs(y) @ _KRONROD))
        tiny = half < 1e-14 * total
        done = (err <= tol * (2 * half) / total) | (err <= floor) | tiny
        value += kronrod[done].sum()
        error += err[done].sum()
        keep = ~done
        left, right, centre = left[keep], right[keep], centre[keep]
        left, right = np.concatenate([left, centre]), np.concatenate([centre, right])
    return value, error, evaluations


def _roundoff_ok(error, value, tol):
    return error <= tol or error <= 1e3 * np.finfo(float).eps * abs(value)


def _transformed(f, a, b, end):
    """Return ``(g, lo, hi, to_new)`` with the singular weight substituted away.

    ``to_new`` maps a point of [a, b] to the new variable.
    """
    if end is SingularEnd.LOWER:
        return ((lambda t: 2.0 * _evaluate(f, a + t * t)), 0.0, math.sqrt(b - a),
                lambda x: math.sqrt(x - a))
    if end is SingularEnd.UPPER:
        return ((lambda t: 2.0 * _evaluate(f, b - t * t)), 0.0, math.sqrt(b - a),
                lambda x: math.sqrt(b - x))
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return ((lambda th: _evaluate(f, mid + half * np.cos(th))), 0.0, math.pi,
            lambda x: math.acos(min(1.0, max(-1.0, (x - mid) / half))))


def _panel_edges(lo, hi, to_new, points, a, b):
    inner = sorted({to_new(float(x)) for x in points if a < x < b})
    return np.array([lo, *(t for t in inner if lo < t < hi), hi])


def integrate_sqrt_singular(f, a, b, end=SingularEnd.LOWER, tol=DEFAULT_TOL,
                            max_evaluations=DEFAULT_BUDGET, points=()):
    """Integrate ``f(E) * w(E)`` over ``[a, b]`` for an inverse-sqrt weight ``w``.

    Parameters
    ----------
    f : callable
        Smooth factor left after the singular weight is split off.  It may be
        vectorised; scalar-only callables are looped over.
    a, b : float
        Integration limits, ``a < b``.
    end : SingularEnd
        ``LOWER`` for ``1/sqrt(E - a)``, ``UPPER`` for ``1/sqrt(b - E)``,
        ``BOTH`` for ``1/sqrt((b - E)(E - a))``.
    tol : float
        Absolute error target.
    max_evaluations : int
        Integrand-call budget before :class:`NonConvergence` is raised.
    points : sequence of float
        Interior points of [a, b] where ``f`` has a corner or jump.  The
        adaptive rule starts with panels split there; an error estimate
        cannot see a corner that falls between a panel's outermost nodes
        and its end.

    Returns
    -------
    QuadratureResult
    """
    a, b = float(a), float(b)
    _check_interval(a, b)
    if tol <= 0:
        raise ValueError("tol must be positive")
    end = SingularEnd(end)
    g, lo, hi, to_new = _transformed(f, a, b, end)
    edges = _panel_edges(lo, hi, to_new, points, a, b)

    evaluations = 0
    if end is SingularEnd.BOTH and edges.size == 2:
        previous = None
        for n in _CHEBYSHEV_ORDERS:
            theta = (np.arange(1, n + 1) - 0.5) * (math.pi / n)
            current = math.pi / n * g(theta).sum()
            evaluations += n
            if previous is not None:
                diff = abs(current - previous)
                if _roundoff_ok(diff, current, tol):
                    return QuadratureResult(current, diff, evaluations)
            previous = current

    value, error, n_adaptive = _adaptive_gk(g, edges, tol, max_evaluations - evaluations)
    evaluations += n_adaptive
    if not _roundoff_ok(error, value, tol):
        raise NonConvergence(f"estimated error {error:.3e} exceeds tol {tol:.3e}")
    return QuadratureResult(value, error, evaluations)


def integrate_smooth(f, a, b, tol=DEFAULT_TOL, max_evaluations=DEFAULT_BUDGET, points=()):
    """Adaptive Gauss-Kronrod integral of a nonsingular integrand."""
    a, b = float(a), float(b)
    _check_interval(a, b)
    edges = _panel_edges(a, b, lambda x: x, points, a, b)
    value, error, evaluations = _adaptive_gk(lambda x: _evaluate(f, x), edges, tol,
                                             max_evaluations)
    if not _roundoff_ok(error, value, tol):
        raise NonConvergence(f"estimated error {error:.3e} exceeds tol {tol:.3e}")
    return QuadratureResult(value, error, evaluations)


def fixed_rule(f, a, b, end, n):
    """Non-adaptive n-point rule after the singular substitution.

    Gauss-Legendre in the substituted variable for one-sided weights,
    n-point Chebyshev-Gauss for ``BOTH``.  Used to check that converged
    results do not depend on the node count.
    """
    a, b = float(a), float(b)
    _check_interval(a, b)
    end = SingularEnd(end)
    g, lo, hi, _ = _transformed(f, a, b, end)
    if end is SingularEnd.BOTH:
        theta = (np.arange(1, n + 1) - 0.5) * (math.pi / n)
        return float(math.pi / n * g(theta).sum())
    nodes, weights = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return float(half * weights @ g(lo + half * (nodes + 1.0)))


def appendix_I(alpha, beta):
    """Closed form of the integral of 1/sqrt((beta - E)(E - alpha)) over [alpha, beta].

    The value is pi whatever the endpoints.
    """
    _check_interval(alpha, beta)
    return math.pi


def appendix_J(alpha, beta):
    """Closed form of the integral of sqrt((beta - E)/(E - alpha)) over [alpha, beta]."""
    _check_interval(alpha, beta)
    return (beta - alpha) * math.pi / 2


def appendix_J_antiderivative(E, alpha, beta):
    """Antiderivative of sqrt((beta - E)/(E - alpha)) for alpha <= E <= beta."""
    E = np.asarray(E, dtype=float)
    return (np.sqrt((E - alpha) * (beta - E))
            - (beta - alpha) * np.arctan2(np.sqrt(beta - E), np.sqrt(E - alpha)))
