"""Real-axis quasi-momentum solver: anchors, asymptotics, bound branches."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieb2b.bethe import (BetheState, Parity, SolverError,
                          asymptotic_quasimomentum, bethe_residual, energy,
                          j_function, newton_polish, residual_k_derivative,
                          solve_k_real)


def test_free_limit_is_exact():
    for n in range(11):
        assert solve_k_real(n, 0.0).k == n + 0j


def test_strong_coupling_limits():
    for n in range(2, 9):
        assert abs(solve_k_real(n, 1e6).k - (n + 1)) < 1e-3
        assert abs(solve_k_real(n, -1e6).k - (n - 1)) < 1e-3


def test_quasi_momentum_increases_with_coupling():
    for n in (2, 3, 5, 8):
        ks = [solve_k_real(n, g).k.real for g in np.linspace(-50.0, 50.0, 21)]
        assert all(a < b for a, b in zip(ks, ks[1:]))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(min_value=0, max_value=12),
       g=st.floats(min_value=1e-3, max_value=1e3))
def test_j_function_counts_levels_at_positive_coupling(n, g):
    state = solve_k_real(n, g)
    assert abs(j_function(g, state.k) - (n + 1)) < 1e-8


@settings(max_examples=60, deadline=None)
@given(n=st.integers(min_value=0, max_value=12),
       g=st.floats(min_value=-1e3, max_value=1e3))
def test_residual_vanishes_on_solutions(n, g):
    state = solve_k_real(n, g)
    assert state.scaled_residual() < 1e-10


def test_ground_branch_binds_at_negative_coupling():
    for g in (-0.2, -1.0, -4.0, -10.0):
        k = solve_k_real(0, g).k
        assert k.real == 0.0
        assert k.imag < 0.0
    # deep binding energy approaches -g^2/2 through k ~ -i|g|
    k = solve_k_real(0, -10.0).k
    assert abs(k.imag + 10.0) / 10.0 < 0.1


def test_first_excited_binds_below_threshold():
    threshold = Parity.ODD.real_branch_point
    assert threshold == -2.0 / np.pi
    k_at = solve_k_real(1, threshold).k
    assert k_at == 0.0 + 0.0j
    k_above = solve_k_real(1, threshold + 0.05).k
    assert k_above.imag == 0.0 and 0.0 < k_above.real < 1.0
    k_below = solve_k_real(1, -3.0).k
    assert k_below.real == 0.0 and k_below.imag < 0.0


def test_bound_branch_connects_continuously():
    ks = [solve_k_real(0, g).k for g in np.linspace(-0.5, 0.5, 11)]
    steps = [abs(b - a) for a, b in zip(ks, ks[1:])]
    assert max(steps) < 0.35


def test_energy_requires_matching_parity():
    state = solve_k_real(2, 1.0)
    level = energy(0, state)
    assert level.kbar == 0
    assert level.energy.imag == 0.0
    with pytest.raises(ValueError):
        energy(1, state)


def test_energy_combines_both_momenta():
    state = solve_k_real(3, 2.0)
    level = energy(5, state)
    assert level.energy == pytest.approx(0.5 * (25 + state.k**2), abs=1e-12)


def test_asymptotic_labels():
    assert asymptotic_quasimomentum(4, +1) == 5
    assert asymptotic_quasimomentum(4, -1) == 3
    with pytest.raises(ValueError):
        asymptotic_quasimomentum(4, 0)


def test_newton_polish_restores_perturbed_root():
    state = solve_k_real(4, 1.3)
    k, residual = newton_polish(state.parity, state.g, state.k + 1e-4)
    assert abs(k - state.k) < 1e-12
    assert residual < 1e-12


def test_residual_derivative_matches_difference_quotient():
    parity = Parity.EVEN
    g, k = 0.7, 2.3 + 0.1j
    h = 1e-6
    fd = (bethe_residual(parity, g, k + h) - bethe_residual(parity, g, k - h)) / (2 * h)
    assert abs(residual_k_derivative(parity, g, k) - fd) < 1e-7


def test_state_validates_parity_consistency():
    with pytest.raises(ValueError):
        BetheState(2, 1.0, 2.5, Parity.ODD)


def test_rejects_unknown_branch():
    with pytest.raises((SolverError, ValueError)):
        solve_k_real(-1, 1.0)
