"""Acceptance checks against closed-form oracles.

Each ``check_*`` function runs one criterion at its fixed tolerance and
returns a :class:`Check`.  :func:`run_all` is what ``barrier-inverse verify``
and the test suite call.  Random draws use a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import forward, inversion, marchenko, quadrature
from .potentials import (
    ColdEmission,
    LinearRamp,
    LinearWell,
    ParabolicBarrier,
    PhysicalConstants,
)
from .quadrature import SingularEnd
from .tabulated import TabulatedFunction

SEED = 20240611


@dataclass(frozen=True)
class Part:
    label: str
    value: float
    tolerance: float
    at_least: bool = False

    @property
    def passed(self):
        if self.at_least:
            return self.value >= self.tolerance
        return self.value <= self.tolerance

    def __str__(self):
        rel = ">=" if self.at_least else "<="
        return f"{self.label} {self.value:.3e} (need {rel} {self.tolerance:.0e})"


@dataclass(frozen=True)
class Check:
    number: int
    name: str
    parts: tuple

    @property
    def passed(self):
        return all(p.passed for p in self.parts)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        detail = "; ".join(str(p) for p in self.parts)
        return f"[{status}] criterion {self.number:2d} {self.name}: {detail}"


def _check(number, name, *parts):
    return Check(number, name, tuple(Part(label, float(v), tol, *rest)
                                     for label, v, tol, *rest in parts))


def _fowler_nordheim(E, u0=1.0, field=1.0, consts=PhysicalConstants()):
    a = 4.0 * math.sqrt(2.0 * consts.mass) / (3.0 * field * consts.hbar)
    return np.exp(-a * (u0 - np.asarray(E)) ** 1.5)


def _fn_grid():
    return np.linspace(0.05, 0.95, 100)


def check_arcsine_integrals():
    rng = np.random.default_rng(SEED)
    worst_i = worst_j = 0.0
    for _ in range(100):
        alpha, beta = np.sort(rng.uniform(-10, 10, 2))
        res = quadrature.integrate_sqrt_singular(lambda e: 1.0, alpha, beta,
                                                 SingularEnd.BOTH, 1e-12)
        worst_i = max(worst_i, abs(res.value - math.pi))
        # sqrt((beta - E)/(E - alpha)) = (beta - E) / sqrt((beta - E)(E - alpha))
        num_j = quadrature.integrate_sqrt_singular(lambda e: beta - e, alpha, beta,
                                                   SingularEnd.BOTH, 1e-12).value
        worst_j = max(worst_j, abs(quadrature.appendix_J(alpha, beta) - num_j))
    return _check(1, "arcsine integrals", ("max |I - pi|", worst_i, 1e-10),
                  ("max |J - (beta-alpha) pi/2|", worst_j, 1e-10))


def check_fowler_nordheim_forward():
    E = _fn_grid()
    curve = forward.sample_curve(ColdEmission(1.0, 1.0), "transmission", E)
    err = np.max(np.abs(curve.values - _fowler_nordheim(E)))
    return _check(2, "Fowler-Nordheim transmission", ("max |T - T_FN|", err, 1e-8))


def check_cold_emission_inversion():
    E = _fn_grid()
    curve = forward.sample_curve(ColdEmission(1.0, 1.0), "transmission", E)
    width = inversion.invert_gamow(curve, E)
    err = np.max(np.abs(width.width[:-1] / (1.0 - E) - 1.0))
    return _check(3, "cold-emission inversion", ("max rel err vs 1 - U", err, 1e-6))


def check_parabolic_round_trip():
    u0, omega = 1.0, 1.0
    consts = PhysicalConstants()
    E = np.linspace(0.05, 0.95, 400)
    barrier = ParabolicBarrier(u0, omega, consts.mass)
    curve = forward.sample_curve(barrier, "transmission", E, consts)
    forward_err = np.max(np.abs(curve.values
                                - np.exp(-2 * math.pi * (u0 - E) / (consts.hbar * omega))))
    width = inversion.invert_gamow(curve, E)
    exact = 2.0 * np.sqrt(2.0 * (u0 - E) / (consts.mass * omega**2))
    inverse_err = np.max(np.abs(width.width[:-1] / exact - 1.0))
    return _check(4, "parabolic barrier round trip",
                  ("max |T - exp(-2 pi (u0-E)/(hbar omega))|", forward_err, 1e-8),
                  ("max rel width err", inverse_err, 1e-6))


def _sup_difference(p, q, xs):
    def values(pot):
        lo, hi = pot.support()
        out = np.zeros_like(xs)
        inside = (xs >= lo) & (xs <= hi)
        out[inside] = pot(xs[inside])
        return out
    return float(np.max(np.abs(values(p) - values(q))))


def check_non_uniqueness():
    E = _fn_grid()
    curve = forward.sample_curve(ColdEmission(1.0, 1.0), "transmission", E)
    width = inversion.invert_gamow(curve, E)
    table = width.as_table()
    splits = {
        "zero": inversion.zero_split,
        "centered": inversion.centered_split(width),
        "mirrored": lambda u: -table(u),
    }
    members = {k: inversion.family_member(width, s) for k, s in splits.items()}
    curves = {k: forward.sample_curve(m, "transmission", E).values for k, m in members.items()}
    names = list(members)
    t_spread = max(np.max(np.abs(curves[a] - curves[b]))
                   for i, a in enumerate(names) for b in names[i + 1:])
    xs = np.linspace(-1.5, 1.5, 3001)
    u_gap = min(_sup_difference(members[a], members[b], xs)
                for i, a in enumerate(names) for b in names[i + 1:])
    return _check(5, "non-uniqueness", ("max pairwise |dT|", t_spread, 1e-8),
                  ("min pairwise sup |dU|", u_gap, 0.1, True))


def check_classical_well():
    E = np.linspace(0.01, 2.0, 200)
    flat = forward.ScatteringCurve("period", TabulatedFunction(E, np.full_like(E, 2 * math.pi)))
    x = inversion.invert_well_period(flat, E, even=True)
    harmonic_err = np.max(np.abs(E - 0.5 * x.values**2))
    linear = forward.sample_curve(LinearWell(1.0), "period", E)
    x_lin = inversion.invert_well_period(linear, E, even=True)
    linear_err = np.max(np.abs(E - np.abs(x_lin.values)))
    return _check(6, "classical well", ("harmonic max |U - x^2/2|", harmonic_err, 1e-7),
                  ("linear max |U - |x||", linear_err, 1e-6))


def check_canonical_barrier():
    field = 2.0
    consts = PhysicalConstants()
    ramp = LinearRamp(field, 1.0)
    E = np.linspace(0.01, 2.0, 200)
    curve = forward.sample_curve(ramp, "backward", E, consts)
    x = inversion.invert_barrier_backward(curve, E)
    err = np.max(np.abs(x.values - E / field))
    return _check(7, "canonical barrier", ("max |x - U/field|", err, 1e-6))


def check_modified_abel():
    rng = np.random.default_rng(SEED + 8)
    a = 1.0
    E = inversion.sqrt_spaced_grid(0.0, a, 300)
    U = np.linspace(0.0, a, 41)
    worst = 0.0
    for _ in range(20):
        degree = int(rng.integers(0, 5))
        coeffs = rng.uniform(-1, 1, degree + 1)
        phi = np.polynomial.Polynomial(coeffs)
        f = inversion.modified_abel_forward(phi, E, a)
        prob = inversion.AbelProblem(TabulatedFunction(E, f), a)
        got = inversion.modified_abel_solve(prob, U)
        worst = max(worst, float(np.max(np.abs(got.values - phi(U)))))
    return _check(8, "modified Abel suite", ("max |phi - phi_true| over 20 polynomials", worst, 1e-5))


def check_marchenko():
    x = np.linspace(-8, 8, 401)
    one = marchenko.reconstruct_potential(marchenko.DiscreteSpectrum([(1.0, math.sqrt(2.0))]), x)
    one_err = np.max(np.abs(one.u_values + 2.0 / np.cosh(x) ** 2))
    two = marchenko.DiscreteSpectrum([(1.0, 1.0), (2.0, 1.0)])
    h = 1e-3
    two_err = 0.0
    for x0 in (-1.0, 0.5, 2.0):
        k = [marchenko.nystrom_k_diag(two, x0 + j * h) for j in (-2, -1, 1, 2)]
        u_oracle = -2.0 * (k[0] - 8 * k[1] + 8 * k[2] - k[3]) / (12 * h)
        u = marchenko.reconstruct_potential(two, [x0]).u_values[0]
        two_err = max(two_err, abs(u - u_oracle))
    return _check(9, "Marchenko reconstruction", ("one-soliton max |U + 2 sech^2|", one_err, 1e-6),
                  ("two-level max |U - U_nystrom|", two_err, 1e-5))


def check_fubini():
    rng = np.random.default_rng(SEED + 10)
    worst = 0.0
    for _ in range(10):
        c = rng.uniform(-1, 1, 3)
        b = rng.uniform(-1, 1)
        alpha = rng.uniform(-1, 0)
        a = alpha + rng.uniform(0.5, 2.0)

        def phi(u, c=c, b=b):
            return np.exp(b * u) * (c[0] + c[1] * u + c[2] * u**2)

        nested, swapped = inversion.kernel_composition_orders(phi, alpha, a)
        worst = max(worst, abs(nested - swapped))
    return _check(10, "Fubini swap", ("max |nested - swapped|", worst, 1e-9))


CHECKS = (
    check_arcsine_integrals,
    check_fowler_nordheim_forward,
    check_cold_emission_inversion,
    check_parabolic_round_trip,
    check_non_uniqueness,
    check_classical_well,
    check_canonical_barrier,
    check_modified_abel,
    check_marchenko,
    check_fubini,
)


def run_all(echo=print):
    results = []
    for func in CHECKS:
        result = func()
        results.append(result)
        if echo is not None:
            echo(result.line())
    return results
