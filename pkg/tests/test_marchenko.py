import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barrier_inverse.marchenko import (
    DiscreteSpectrum,
    auxiliary_F,
    k_diag_derivative,
    nystrom_k_diag,
    reconstruct_potential,
    solve_marchenko,
    soliton_centre,
)
from barrier_inverse.quadrature import integrate_smooth

X = np.linspace(-8, 8, 401)
ONE = DiscreteSpectrum([(1.0, math.sqrt(2.0))])
TWO = DiscreteSpectrum([(1.0, 1.0), (2.0, 1.0)])


def sech2(x):
    return 1.0 / np.cosh(x) ** 2


def test_auxiliary_F_examples():
    assert auxiliary_F(DiscreteSpectrum(), 1.3) == 0.0
    assert auxiliary_F(ONE, 0.0) == pytest.approx(2.0, rel=1e-15)
    assert auxiliary_F(TWO, math.log(2.0)) == pytest.approx(0.75, rel=1e-15)


@pytest.mark.parametrize("kappa, c, x", [(1.0, 1.0, 0.3), (0.7, 2.5, -1.1), (3.0, 0.2, 2.0)])
def test_one_level_kernel_closed_form(kappa, c, x):
    q = c * c * math.exp(-2 * kappa * x)
    assert solve_marchenko(DiscreteSpectrum([(kappa, c)]), x) == pytest.approx(
        -q / (1 + q / (2 * kappa)), rel=1e-14)


def test_empty_spectrum():
    assert solve_marchenko(DiscreteSpectrum(), 0.5) == 0.0
    assert np.all(reconstruct_potential(DiscreteSpectrum(), X).u_values == 0.0)


def test_two_level_kernel_against_nystrom():
    assert abs(solve_marchenko(TWO, 1.0) - nystrom_k_diag(TWO, 1.0)) <= 1e-6


def test_one_soliton():
    u = reconstruct_potential(ONE, X).u_values
    assert np.max(np.abs(u + 2 * sech2(X))) <= 1e-6


def test_two_soliton_depth():
    # c_n^2 = 6 and 12 put both centres at the origin: U = -6 sech^2(x)
    spec = DiscreteSpectrum([(1.0, math.sqrt(6.0)), (2.0, math.sqrt(12.0))])
    u = reconstruct_potential(spec, X).u_values
    assert np.max(np.abs(u + 6 * sech2(X))) <= 1e-10


def test_two_level_potential_against_nystrom():
    h = 1e-3
    for x0 in (-1.0, 0.0, 1.5):
        k = [nystrom_k_diag(TWO, x0 + j * h) for j in (-2, -1, 1, 2)]
        oracle = -2.0 * (k[0] - 8 * k[1] + 8 * k[2] - k[3]) / (12 * h)
        got = reconstruct_potential(TWO, [x0]).u_values[0]
        assert abs(got - oracle) <= 1e-5


@pytest.mark.parametrize("x", [-2.0, 0.1, 1.7])
def test_analytic_derivative_matches_difference(x):
    h = 1e-4
    fd = (solve_marchenko(TWO, x + h) - solve_marchenko(TWO, x - h)) / (2 * h)
    assert k_diag_derivative(TWO, x) == pytest.approx(fd, abs=1e-7)


@pytest.mark.parametrize("kappa, c", [(1.0, math.sqrt(2.0)), (0.5, 3.0), (2.0, 0.1)])
def test_one_level_shape_and_centre(kappa, c):
    x0 = soliton_centre(kappa, c)
    u = reconstruct_potential(DiscreteSpectrum([(kappa, c)]), X).u_values
    assert np.max(np.abs(u + 2 * kappa**2 * sech2(kappa * (X - x0)))) <= 1e-6


def test_depth_scaling():
    narrow = DiscreteSpectrum([(2.0, 2.0)])         # c^2 = 2 kappa keeps x0 = 0
    x = np.linspace(-4, 4, 161)
    wide = reconstruct_potential(ONE, 2 * x).u_values
    deep = reconstruct_potential(narrow, x).u_values
    assert deep.min() == pytest.approx(4 * wide.min(), abs=1e-6)
    assert np.max(np.abs(deep - 4 * wide)) <= 1e-6


@settings(max_examples=20, deadline=None)
@given(st.floats(0.3, 2.5), st.floats(0.2, 3.0), st.floats(-2.0, 2.0))
def test_translation_covariance(kappa, c, delta):
    moved = DiscreteSpectrum([(kappa, c * math.exp(kappa * delta))])   # c^2 -> c^2 e^{2 kappa delta}
    x = np.linspace(-5, 5, 41)
    a = reconstruct_potential(moved, x).u_values
    b = reconstruct_potential(DiscreteSpectrum([(kappa, c)]), x - delta).u_values
    assert np.max(np.abs(a - b)) <= 1e-9


def test_right_tail_decay_rate():
    x = np.linspace(6, 12, 61)
    u = reconstruct_potential(TWO, x).u_values
    slope = np.polyfit(x, np.log(np.abs(u)), 1)[0]
    assert slope == pytest.approx(-2 * 1.0, rel=0.05)


def test_grid_refinement_stable():
    coarse = reconstruct_potential(TWO, np.linspace(-8, 8, 201)).u_values
    fine = reconstruct_potential(TWO, np.linspace(-8, 8, 401)).u_values
    assert np.max(np.abs(fine[::2] - coarse)) < 1e-7


def test_deterministic():
    a = reconstruct_potential(TWO, X).u_values
    b = reconstruct_potential(TWO, X).u_values
    assert np.array_equal(a, b)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.floats(0.3, 2.0), st.floats(0.3, 3.0)), min_size=1, max_size=3,
                unique_by=lambda kc: round(kc[0], 2)))
def test_trace_identity(levels):
    # reflectionless potentials satisfy integral U dx = -4 sum kappa_n
    spec = DiscreteSpectrum(levels)

    def u(x):
        x = np.asarray(x, dtype=float)
        flat = np.sort(x.ravel())
        return np.interp(x, flat, reconstruct_potential(spec, flat).u_values)

    total = integrate_smooth(u, -40.0, 40.0, tol=1e-9).value
    assert total == pytest.approx(-4 * spec.kappa.sum(), abs=1e-6)


def test_spectrum_validation_and_round_trip():
    with pytest.raises(ValueError):
        DiscreteSpectrum([(1.0, 1.0), (1.0, 2.0)])
    with pytest.raises(ValueError):
        DiscreteSpectrum([(-1.0, 1.0)])
    with pytest.raises(ValueError):
        DiscreteSpectrum([(1.0, 0.0)])
    spec = DiscreteSpectrum([(1.0, 0.5), (3.0, 2.0)])
    assert spec.kappa.tolist() == [3.0, 1.0]
    assert DiscreteSpectrum.from_dict(spec.to_dict()) == spec


def test_reconstruct_needs_increasing_grid():
    with pytest.raises(ValueError):
        reconstruct_potential(ONE, [0.0, -1.0])


def test_one_level_deep_tails_relative():
    x = np.array([-30.0, -15.0, 15.0, 30.0])
    u = reconstruct_potential(ONE, x).u_values
    assert u == pytest.approx(-2 * sech2(x), rel=1e-12)


def test_near_degenerate_levels_against_high_precision():
    mp = pytest.importorskip("mpmath")
    levels = [(0.9833238227906713, 1.6323936262729375), (0.99999, 2.131769198975286),
              (1.5566305630813522, 0.6962452845779301)]
    mp.mp.dps = 50

    def log_det(x):
        m = mp.matrix(3, 3)
        for i, (ki, ci) in enumerate(levels):
            for j, (kj, cj) in enumerate(levels):
                k = mp.mpf(ki) + kj
                m[i, j] = (i == j) + mp.mpf(ci) * cj * mp.exp(-k * x) / k
        return mp.log(mp.det(m))

    x = np.array([-30.0, -10.0, -1.0, 0.0, 2.0, 20.0])
    u = reconstruct_potential(DiscreteSpectrum(levels), x).u_values
    # U = -2 d^2/dx^2 log det(I + S M S)
    oracle = [float(-2 * mp.diff(log_det, mp.mpf(xi), 2)) for xi in x]
    assert u == pytest.approx(oracle, rel=1e-9)
