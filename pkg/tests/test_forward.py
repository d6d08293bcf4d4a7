import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barrier_inverse.errors import EnergyOutOfRange, InvalidGrid, ShapeMismatch
from barrier_inverse.forward import (
    CurveKind,
    ScatteringCurve,
    backward_time,
    classical_period,
    gamow_exponent,
    gamow_transmission,
    sample_curve,
    traversal_time,
)
from barrier_inverse.potentials import (
    ColdEmission,
    Shape,
    HarmonicWell,
    LinearRamp,
    LinearWell,
    ParabolicBarrier,
    PhysicalConstants,
    Tabulated,
)
from barrier_inverse.quadrature import integrate_smooth
from barrier_inverse.tabulated import TabulatedFunction


def fowler_nordheim(E, u0=1.0, field=1.0, hbar=1.0, mass=1.0):
    a = 4.0 * math.sqrt(2.0 * mass) / (3.0 * field * hbar)
    return np.exp(-a * (u0 - np.asarray(E)) ** 1.5)


def test_harmonic_period_isochronous():
    for E in (0.3, 1.0, 4.0):
        assert classical_period(HarmonicWell(1.0, 1.0), E) == pytest.approx(2 * math.pi, rel=1e-12)
    assert classical_period(HarmonicWell(2.0, 1.0), 0.77) == pytest.approx(math.pi, rel=1e-12)


def test_harmonic_period_against_direct_quadrature():
    # oracle: the period integral taken directly in the angle variable x = A sin(t)
    p, E = HarmonicWell(1.5, 1.0), 0.8
    A = math.sqrt(2 * E / 1.5**2)

    def integrand(t):
        x = A * np.sin(t)
        return A * np.cos(t) / np.sqrt(np.maximum(E - p(x), 1e-300))

    direct = math.sqrt(2.0) * integrate_smooth(integrand, -math.pi / 2 + 1e-9,
                                               math.pi / 2 - 1e-9, 1e-12).value
    assert classical_period(p, E) == pytest.approx(direct, rel=1e-8)


def test_harmonic_spread_over_a_decade():
    periods = [classical_period(HarmonicWell(1.0, 1.0), E) for E in np.geomspace(0.1, 1.0, 11)]
    assert np.ptp(periods) <= 1e-9


def test_linear_well_period():
    assert classical_period(LinearWell(1.0), 1.0) == pytest.approx(4 * math.sqrt(2), rel=1e-12)


def test_traversal_free_case():
    consts = PhysicalConstants(mass=2.0)
    assert traversal_time(LinearRamp(0.0, 1.0), 1.0, consts) == pytest.approx(1.0, rel=1e-12)


def test_traversal_cold_emission():
    consts = PhysicalConstants(mass=2.0)
    got = traversal_time(ColdEmission(1.0, 1.0), 2.0, consts)
    assert got == pytest.approx(2 * (math.sqrt(2) - 1), rel=1e-12)


@pytest.mark.parametrize("p", [ColdEmission(1.0, 1.0), ParabolicBarrier(1.0, 1.0), LinearRamp(1.5, 2.0)])
def test_traversal_high_energy_limit(p):
    consts = PhysicalConstants(mass=1.3)
    lo, hi = p.support()
    E = 1e6 * p.extremum()[1]
    limit = math.sqrt(consts.mass / 2) * (hi - lo) / math.sqrt(E)
    assert traversal_time(p, E, consts) == pytest.approx(limit, rel=1e-3)


def test_backward_time_linear_ramp():
    consts = PhysicalConstants(mass=2.0)
    assert backward_time(LinearRamp(1.0, 1.0), 0.25, consts) == pytest.approx(1.0, rel=1e-12)


def test_backward_time_vanishes_at_low_energy():
    ramp = LinearRamp(1.0, 1.0)
    times = [backward_time(ramp, E) for E in (1e-2, 1e-4, 1e-6)]
    assert times[0] > times[1] > times[2]
    assert times[2] < 1e-2


def test_backward_time_wall_is_zero():
    assert backward_time(ColdEmission(1.0, 1.0), 0.5) == 0.0


def test_backward_tabulated_ramp():
    ramp = LinearRamp(1.0, 1.0)
    tab = Tabulated.from_potential(ramp, np.linspace(0, 1, 201))
    for E in (0.1, 0.5, 0.9):
        assert backward_time(tab, E) == pytest.approx(backward_time(ramp, E), abs=1e-6)


@pytest.mark.parametrize("E", [0.05, 0.16644067796610168, 0.5, 0.9])
def test_backward_tabulated_smooth_face(E):
    # the quotient (x1 - x)/(E - U) cancels near x1; that must not stall the quadrature
    from scipy.special import ellipk

    def face(x):
        return np.sin(0.5 * math.pi * x) ** 2

    grid = np.linspace(0, 1, 801)
    tab = Tabulated(TabulatedFunction(grid, face(grid)), Shape.BARRIER)
    # oracle: U = sin^2(pi x/2) turns the integral into 2 K(E) / pi, times sqrt(m/2)
    exact = math.sqrt(0.5) * 2.0 * ellipk(E) / math.pi
    assert backward_time(tab, E) == pytest.approx(exact, abs=1e-6)


def test_gamow_cold_emission_value():
    assert gamow_transmission(ColdEmission(1.0, 1.0), 0.5) == pytest.approx(math.exp(-2 / 3),
                                                                               rel=1e-12)


def test_gamow_parabola_value():
    got = gamow_transmission(ParabolicBarrier(1.0, 1.0, 1.0), 0.75)
    assert abs(got - math.exp(-2 * math.pi * 0.25)) <= 1e-8


@pytest.mark.parametrize("p", [ColdEmission(1.0, 1.0), ParabolicBarrier(1.3, 0.7), LinearRamp(2.0, 1.0)])
def test_gamow_at_top_is_one(p):
    E = p.extremum()[1]
    assert gamow_transmission(p, E) == 1.0
    assert gamow_exponent(p, E) == 0.0


def test_fowler_nordheim_sample():
    E = np.linspace(0.05, 0.95, 100)
    curve = sample_curve(ColdEmission(1.0, 1.0), "transmission", E)
    assert curve.kind is CurveKind.GAMOW_TRANSMISSION
    assert curve.u0 == 1.0
    assert np.max(np.abs(curve.values - fowler_nordheim(E))) <= 1e-8


def test_harmonic_sample_constant():
    curve = sample_curve(HarmonicWell(2.0, 1.0), "period", np.linspace(0.1, 3, 7))
    assert np.max(np.abs(curve.values - math.pi)) <= 1e-12


def test_grid_errors():
    with pytest.raises(InvalidGrid):
        sample_curve(ColdEmission(), "transmission", [])
    with pytest.raises(InvalidGrid):
        sample_curve(ColdEmission(), "transmission", [0.5, 0.4])


def test_sample_error_names_energy():
    with pytest.raises(EnergyOutOfRange, match="E=1.5"):
        sample_curve(ColdEmission(), "transmission", [0.5, 1.5])


def test_shape_checks():
    with pytest.raises(ShapeMismatch):
        classical_period(ColdEmission(), 0.5)
    with pytest.raises(ShapeMismatch):
        gamow_transmission(HarmonicWell(), 0.5)


@pytest.mark.parametrize("p", [ColdEmission(1.0, 1.0), ParabolicBarrier(1.0, 2.0, 0.5)])
def test_transmission_monotone_and_bounded(p):
    E = np.linspace(0.01, 1.0, 60) * p.extremum()[1]
    T = sample_curve(p, "transmission", E).values
    assert np.all(T > 0) and np.all(T <= 1)
    assert np.all(np.diff(T) >= 0)
    assert T[-1] == 1.0


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.2, 5.0))
def test_hbar_scaling(E, c):
    p = ParabolicBarrier(1.0, 1.0, 1.0)
    base = math.log(gamow_transmission(p, E, PhysicalConstants(1.0, 1.0)))
    scaled = math.log(gamow_transmission(p, E, PhysicalConstants(c, 1.0)))
    assert abs(scaled - base / c) <= 1e-12 * max(1.0, abs(base))


def _matched(p, n=801):
    lo, hi = p.support()
    return Tabulated.from_potential(p, np.linspace(lo, hi, n))


@pytest.mark.parametrize("kind, p, E", [
    ("transmission", ParabolicBarrier(1.0, 1.0, 1.0), np.linspace(0.05, 0.95, 10)),
    ("traversal", ParabolicBarrier(1.0, 1.0, 1.0), np.linspace(1.5, 4.0, 6)),
    ("backward", LinearRamp(1.0, 1.0), np.linspace(0.05, 0.95, 10)),
])
def test_tabulated_matches_analytic_barrier(kind, p, E):
    got = sample_curve(_matched(p), kind, E).values
    want = sample_curve(p, kind, E).values
    assert np.max(np.abs(got - want)) <= 1e-6


def test_tabulated_matches_analytic_period():
    p = HarmonicWell(1.0, 1.0)
    tab = Tabulated.from_potential(p, np.linspace(-3, 3, 801))
    E = np.linspace(0.2, 3.0, 8)
    got = sample_curve(tab, "period", E).values
    assert np.max(np.abs(got - 2 * math.pi)) <= 1e-6


def test_curve_validation():
    data = TabulatedFunction([0.1, 0.2], [0.5, 0.7])
    with pytest.raises(ValueError):
        ScatteringCurve("transmission", data)         # no u0
    with pytest.raises(ValueError):
        ScatteringCurve("transmission", TabulatedFunction([0.1, 0.2], [0.5, 1.5]), u0=1.0)
    with pytest.raises(ValueError):
        ScatteringCurve("period", TabulatedFunction([0.1, 0.2], [-1.0, 1.0]))
    assert ScatteringCurve("period", data).kind is CurveKind.CLASSICAL_PERIOD
