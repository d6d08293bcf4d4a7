"""Reflectionless inverse scattering from a discrete spectrum.

With no reflection the Marchenko kernel is separable,

    F(X) = sum_n c_n^2 exp(-kappa_n X),

and the ansatz ``K(x, z) = sum_n w_n(x) exp(-kappa_n z)`` reduces the integral
equation to an N x N linear system.  In symmetric form, with
``s_n = c_n exp(-kappa_n x)`` and ``M_nm = 1 / (kappa_n + kappa_m)``,

    K(x, x) = -s^T (I + S M S)^{-1} s,

where ``I + S M S`` is symmetric positive definite for valid data.  The
potential ``U = -2 dK(x, x)/dx`` is obtained by differentiating this
expression exactly, not by finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import SingularSystem


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Bound-state data (kappa_n, c_n), stored with kappa descending."""

    levels: tuple = ()

    def __post_init__(self):
        levels = tuple(sorted(((float(k), float(c)) for k, c in self.levels),
                              key=lambda kc: -kc[0]))
        kappas = [k for k, _ in levels]
        if any(k <= 0 or c <= 0 for k, c in levels):
            raise ValueError("kappa_n and c_n must be positive")
        if len(set(kappas)) != len(kappas):
            raise ValueError("kappa_n must be pairwise distinct")
        object.__setattr__(self, "levels", levels)

    @property
    def kappa(self):
        return np.array([k for k, _ in self.levels])

    @property
    def c(self):
        return np.array([c for _, c in self.levels])

    def __len__(self):
        return len(self.levels)

    def to_dict(self):
        return {"levels": [{"kappa": k, "c": c} for k, c in self.levels]}

    @classmethod
    def from_dict(cls, doc):
        return cls(tuple((lvl["kappa"], lvl["c"]) for lvl in doc.get("levels", [])))


@dataclass(frozen=True)
class ReconstructionGrid:
    x_grid: np.ndarray
    u_values: np.ndarray = field(default=None)


def auxiliary_F(spec, X):
    """F(X) = sum_n c_n^2 exp(-kappa_n X)."""
    X = np.asarray(X, dtype=float)
    if not len(spec):
        return np.zeros_like(X) if X.ndim else 0.0
    out = np.sum(spec.c[:, None] ** 2 * np.exp(-spec.kappa[:, None] * X.ravel()[None, :]),
                 axis=0)
    return out.reshape(X.shape) if X.ndim else float(out[0])


def _solve(spec, x):
    kappa, c = spec.kappa, spec.c
    s = c * np.exp(-kappa * x)
    m = 1.0 / (kappa[:, None] + kappa[None, :])
    b = np.eye(kappa.size) + s[:, None] * m * s[None, :]
    try:
        factor = cho_factor(b)
    except LinAlgError as err:
        raise SingularSystem(f"Marchenko system not positive definite at x={x!r}") from err
    if not np.all(np.isfinite(factor[0])):
        raise SingularSystem(f"Marchenko system overflowed at x={x!r}")
    return s, m, cho_solve(factor, s)


def solve_marchenko(spec, x):
    """K(x, x) for the separable reflectionless kernel."""
    if not len(spec):
        return 0.0
    s, _, y = _solve(spec, float(x))
    return float(-s @ y)


def k_diag_derivative(spec, x):
    """d/dx K(x, x), by implicit differentiation of the linear system."""
    if not len(spec):
        return 0.0
    x = float(x)
    kappa, c = spec.kappa, spec.c
    # K = d/dx log det B with B = I + S M S.  Levels with s_i > 1 are scaled
    # out, B = T A T, so A stays O(1) on the left tail where B blows up and
    # the two terms below do not cancel.
    log_s = np.log(c) - kappa * x
    big = log_s > 0
    r = np.where(big, 1.0, np.exp(np.minimum(log_s, 0.0)))
    dr = np.where(big, 0.0, -kappa * r)
    ddr = np.where(big, 0.0, kappa**2 * r)
    d = np.where(big, np.exp(-2.0 * np.maximum(log_s, 0.0)), 1.0)
    dd = np.where(big, 2.0 * kappa * d, 0.0)
    ddd = np.where(big, 4.0 * kappa**2 * d, 0.0)
    m = 1.0 / (kappa[:, None] + kappa[None, :])
    a = np.diag(d) + r[:, None] * m * r[None, :]
    da = np.diag(dd) + dr[:, None] * m * r[None, :] + r[:, None] * m * dr[None, :]
    dda = (np.diag(ddd) + ddr[:, None] * m * r[None, :] + 2.0 * dr[:, None] * m * dr[None, :]
           + r[:, None] * m * ddr[None, :])
    try:
        factor = cho_factor(a)
    except LinAlgError as err:
        raise SingularSystem(f"Marchenko system not positive definite at x={x!r}") from err
    g = cho_solve(factor, da)
    # d^2/dx^2 log det A = tr(A^-1 A'') - tr((A^-1 A')^2)
    return float(np.trace(cho_solve(factor, dda)) - np.sum(g * g.T))


def reconstruct_potential(spec, grid):
    """U(x) = -2 d/dx K(x, x) on a strictly increasing grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    u = np.array([-2.0 * k_diag_derivative(spec, x) for x in grid])
    return ReconstructionGrid(grid, u)


def soliton_centre(kappa, c):
    """Centre x0 of the one-level potential -2 kappa^2 sech^2(kappa (x - x0))."""
    return math.log(c * c / (2.0 * kappa)) / (2.0 * kappa)


def nystrom_k_diag(spec, x, length=40.0, n=2000, panels=50):
    """K(x, x) from a brute-force Nystrom solve of the Marchenko equation.

    The equation is discretised on [x, x + length] with composite
    Gauss-Legendre panels (``n`` nodes in total) and K(x, x) is recovered by
    Nystrom interpolation.  It ignores the separable structure entirely and
    serves as an independent check of :func:`solve_marchenko`.
    """
    if not len(spec):
        return 0.0
    per = n // panels
    t, w = np.polynomial.legendre.leggauss(per)
    edges = np.linspace(x, x + length, panels + 1)
    half = 0.5 * np.diff(edges)
    y = ((edges[:-1] + half)[:, None] + half[:, None] * t[None, :]).ravel()
    wy = (half[:, None] * w[None, :]).ravel()
    f = auxiliary_F(spec, y[:, None] + y[None, :])
    system = np.eye(y.size) + f * wy[None, :]
    k = np.linalg.solve(system, -auxiliary_F(spec, x + y))
    return float(-auxiliary_F(spec, 2.0 * x) - (wy * k) @ auxiliary_F(spec, y + x))
