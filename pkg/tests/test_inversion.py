import math

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from barrier_inverse import inversion
from barrier_inverse.errors import BranchOverlap, DomainError, NonMonotoneData
from barrier_inverse.forward import ScatteringCurve, sample_curve
from barrier_inverse.inversion import (
    AbelProblem,
    Orientation,
    canonical_potential,
    centered_split,
    family_member,
    invert_barrier_backward,
    invert_gamow,
    invert_gamow_by_abel,
    invert_well_period,
    kernel_composition_orders,
    modified_abel_forward,
    modified_abel_solve,
    sqrt_spaced_grid,
    zero_split,
)
from barrier_inverse.potentials import (
    ColdEmission,
    LinearRamp,
    LinearWell,
    ParabolicBarrier,
    PhysicalConstants,
    Shape,
    Tabulated,
    WidthFunction,
    turning_points,
    width_function,
)
from barrier_inverse.tabulated import TabulatedFunction

FN_GRID = np.linspace(0.05, 0.95, 100)


@pytest.fixture(scope="module")
def fn_curve():
    return sample_curve(ColdEmission(1.0, 1.0), "transmission", FN_GRID)


@pytest.fixture(scope="module")
def fn_width(fn_curve):
    return invert_gamow(fn_curve, FN_GRID)


def _table(f, E):
    return TabulatedFunction(E, f(E))


# ---- modified Abel equation ----

def test_modified_abel_unit_solution():
    E = sqrt_spaced_grid(0.0, 1.0, 200)
    prob = AbelProblem(_table(lambda e: 2 * np.sqrt(1 - e), E), 1.0)
    got = modified_abel_solve(prob, np.linspace(0, 0.95, 20))
    assert np.max(np.abs(got.values - 1.0)) <= 1e-8


def test_modified_abel_zero():
    E = np.linspace(0, 1, 50)
    prob = AbelProblem(TabulatedFunction(E, np.zeros_like(E)), 1.0)
    assert np.all(modified_abel_solve(prob, np.linspace(0, 0.9, 10)).values == 0.0)


def test_modified_abel_cold_emission_derivative():
    # phi = d/dU[(u0 - U)/field] = -1/field with field = 2; rhs f(E) = -2 sqrt(u0 - E)/field
    field, u0 = 2.0, 1.0
    E = sqrt_spaced_grid(0.0, u0, 200)
    prob = AbelProblem(_table(lambda e: -2 * np.sqrt(u0 - e) / field, E), u0)
    got = modified_abel_solve(prob, np.linspace(0.05, 0.95, 10))
    assert np.max(np.abs(got.values + 1.0 / field)) <= 1e-8


@settings(max_examples=8, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=5))
def test_modified_abel_recovers_polynomials(coeffs):
    phi = np.polynomial.Polynomial(coeffs)
    E = sqrt_spaced_grid(0.0, 1.0, 300)
    prob = AbelProblem(TabulatedFunction(E, modified_abel_forward(phi, E, 1.0)), 1.0)
    U = np.linspace(0.0, 1.0, 21)
    assert np.max(np.abs(modified_abel_solve(prob, U).values - phi(U))) <= 1e-5


def test_abel_problem_validation():
    E = np.linspace(0, 1, 5)
    with pytest.raises(DomainError):
        AbelProblem(TabulatedFunction(E, E), 0.5)
    with pytest.raises(DomainError):
        AbelProblem(TabulatedFunction(E - 1, E), 2.0, Orientation.STANDARD)


def test_u_grid_outside_data():
    E = np.linspace(0.2, 1, 20)
    prob = AbelProblem(TabulatedFunction(E, 2 * np.sqrt(1 - E)), 1.0)
    with pytest.raises(DomainError):
        modified_abel_solve(prob, [0.1, 0.5])


# ---- Gamow inversion ----

def test_cold_emission_width(fn_width):
    core = fn_width.u_grid < 1.0
    rel = fn_width.width[core] / (1.0 - fn_width.u_grid[core]) - 1.0
    assert np.max(np.abs(rel)) <= 1e-6
    assert fn_width.u0 == 1.0 and fn_width.width[-1] == 0.0


def test_flat_transmission_gives_zero_width():
    E = np.linspace(0.1, 0.9, 9)
    curve = ScatteringCurve("transmission", TabulatedFunction(E, np.ones_like(E)), u0=1.0)
    assert np.all(invert_gamow(curve, E).width == 0.0)


def test_parabolic_width():
    E = np.linspace(0.05, 0.95, 300)
    curve = sample_curve(ParabolicBarrier(1.0, 1.0, 1.0), "transmission", E)
    w = invert_gamow(curve, E)
    exact = 2 * np.sqrt(2 * (1 - E))
    assert np.max(np.abs(w.width[:-1] / exact - 1)) <= 1e-6


@pytest.mark.parametrize("p", [ColdEmission(2.0, 0.5), ParabolicBarrier(1.5, 2.0, 0.8)],
                         ids=["cold", "parabola"])
def test_width_matches_turning_points(p):
    consts = PhysicalConstants(0.7, 1.3)
    u0 = p.extremum()[1]
    E = np.linspace(0.05, 0.95, 300) * u0
    curve = sample_curve(p, "transmission", E, consts)
    got = invert_gamow(curve, E)
    want = width_function(p, E)
    assert np.max(np.abs(got.width[:-1] / want.width[:-1] - 1)) <= 1e-6


def test_inversion_routes_agree(fn_curve):
    U = np.linspace(0.05, 0.9, 12)
    a = invert_gamow(fn_curve, U)
    b = invert_gamow_by_abel(fn_curve, U)
    assert np.max(np.abs(a.width - b.width)) <= 1e-7


def test_non_monotone_transmission():
    E = np.linspace(0.1, 0.9, 9)
    T = np.exp(-(1 - E) ** 1.5)
    T[5] = T[2]
    curve = ScatteringCurve("transmission", TabulatedFunction(E, T), u0=1.0)
    with pytest.raises(NonMonotoneData, match="E="):
        invert_gamow(curve, E)


def test_gamow_u_grid_must_stay_in_data(fn_curve):
    with pytest.raises(DomainError):
        invert_gamow(fn_curve, [0.01, 0.5])


# ---- classical wells and canonical barriers ----

def test_even_well_from_constant_period():
    E = np.linspace(0.01, 2.0, 100)
    curve = ScatteringCurve("period", TabulatedFunction(E, np.full_like(E, 2 * math.pi)))
    x = invert_well_period(curve, E, even=True)
    assert np.max(np.abs(x.values - np.sqrt(2 * E))) <= 1e-7
    width = invert_well_period(curve, E)
    assert np.max(np.abs(width.values - 2 * np.sqrt(2 * E))) <= 1e-7


def test_zero_period_gives_zero_width():
    E = np.linspace(0.1, 1.0, 10)
    curve = ScatteringCurve("period", TabulatedFunction(E, np.zeros_like(E)))
    assert np.all(invert_well_period(curve, E).values == 0.0)


def test_linear_well_round_trip():
    E = np.linspace(0.01, 2.0, 100)
    curve = sample_curve(LinearWell(1.0), "period", E)
    x = invert_well_period(curve, E, even=True)
    assert np.max(np.abs(x.values - E)) <= 1e-6


def test_canonical_ramp():
    E = np.linspace(0.01, 1.0, 100)
    curve = sample_curve(LinearRamp(1.0, 1.0), "backward", E, PhysicalConstants(mass=2.0))
    x = invert_barrier_backward(curve, E)
    assert np.max(np.abs(x.values - E)) <= 1e-6


def test_zero_backward_time():
    E = np.linspace(0.1, 1.0, 10)
    curve = ScatteringCurve("backward", TabulatedFunction(E, np.zeros_like(E)))
    assert np.all(invert_barrier_backward(curve, E).values == 0.0)


def test_canonical_tabulated_barrier():
    # rising face x(U) of a smooth monotone barrier, recovered from its backward times;
    # U' > 0 up to the top keeps x(U) smooth there
    def face(x):
        return 0.5 * (x + x * x)

    grid = np.linspace(0, 1, 801)
    tab = Tabulated(TabulatedFunction(grid, face(grid)), Shape.BARRIER)
    E = np.linspace(0.02, 0.98, 60)
    curve = sample_curve(tab, "backward", E)
    x = invert_barrier_backward(curve, E)
    want = np.array([turning_points(tab, e)[0] for e in E])
    assert np.max(np.abs(x.values - want)) <= 1e-5
    pot = canonical_potential(x)
    assert pot(0.5) == pytest.approx(face(0.5), abs=1e-4)


# ---- families ----

def test_zero_split_recovers_cold_emission(fn_width):
    member = family_member(fn_width, zero_split)
    xs = np.linspace(0.0, 0.9, 50)
    assert np.max(np.abs(member(xs) - (1 - xs))) <= 1e-6


def test_centered_split_is_a_tent(fn_width):
    member = family_member(fn_width, centered_split(fn_width))
    xs = np.linspace(-0.45, 0.45, 31)
    assert np.max(np.abs(member(xs) - (1 - 2 * np.abs(xs)))) <= 1e-6


@settings(max_examples=10, deadline=None)
@given(st.floats(-2.0, 2.0), st.floats(-1.0, 0.0))
@example(0.0, -0.498046875)   # peak corner just off a quadrature panel edge
def test_family_shares_transmission(shift, tilt):
    E = np.linspace(0.05, 0.95, 40)
    curve = sample_curve(ColdEmission(1.0, 1.0), "transmission", E)
    width = invert_gamow(curve, E)
    table = width.as_table()
    # x1 = shift + tilt * width moves left as U decreases (tilt <= 0), keeping U(x) single valued
    member = family_member(width, lambda u: shift + tilt * table(u))
    again = sample_curve(member, "transmission", E).values
    assert np.max(np.abs(again - curve.values)) <= 1e-8


def test_zero_width_is_branch_overlap():
    width = WidthFunction(np.linspace(0, 1, 5), np.zeros(5))
    with pytest.raises(BranchOverlap):
        family_member(width, zero_split)


def test_folding_split_is_branch_overlap(fn_width):
    table = fn_width.as_table()
    with pytest.raises(BranchOverlap):
        family_member(fn_width, lambda u: 2.0 * table(u))


# ---- integration order ----

@settings(max_examples=5, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 0), st.floats(0.5, 2.0))
def test_kernel_composition_orders_agree(b, alpha, span):
    def phi(u):
        return np.exp(b * u) * (1 + u * u)

    nested, swapped = kernel_composition_orders(phi, alpha, alpha + span)
    assert abs(nested - swapped) <= 1e-9
