"""Analytic continuation off the real axis and sheet construction."""

import numpy as np
import pytest

from lieb2b.bethe import Parity, solve_k_real
from lieb2b.continuation import (ComplexPath, GridSpec, TraceStatus,
                                 circle_path, conjugation_symmetry_check,
                                 continue_along, continue_to, build_sheet,
                                 line_path, newton_correct, sheet_value)
from lieb2b.exceptional import find_ep


def ep_g(n):
    return find_ep(n, verify_unique=False).g_ep


class TestPaths:
    def test_waypoints_must_differ_consecutively(self):
        with pytest.raises(ValueError):
            ComplexPath([1.0, 1.0, 2.0])

    def test_single_waypoint_has_no_segments(self):
        path = ComplexPath([1.0])
        assert path.segments() == []
        assert path.length() == 0.0

    def test_reversed_retraces(self):
        path = ComplexPath([1.0, 1.0 - 1.0j, -2.0 - 1.0j])
        back = path.reversed()
        assert back.waypoints[0] == path.waypoints[-1]
        assert back.waypoints[-1] == path.waypoints[0]
        assert back.length() == pytest.approx(path.length())

    def test_circle_path_closes_clockwise(self):
        loop = circle_path(1.0 + 0.5j, 0.25, n_points=12)
        pts = np.asarray(loop.waypoints)
        assert pts[0] == pts[-1]
        assert np.allclose(np.abs(pts - (1.0 + 0.5j)), 0.25)
        # clockwise means the signed polygon area is negative
        area = 0.5 * np.sum(np.real(pts[:-1]) * np.imag(pts[1:])
                            - np.real(pts[1:]) * np.imag(pts[:-1]))
        assert area < 0


class TestContinuation:
    def test_newton_correct_polishes_on_sheet(self):
        g = 0.8 - 0.4j
        k0 = sheet_value(2, g)
        k, scaled, ok = newton_correct(Parity.EVEN, g, k0 + 1e-5, tol=1e-12)
        assert ok
        assert scaled < 1e-12
        assert abs(k - k0) < 1e-10

    def test_sheet_value_matches_real_solver_on_axis(self):
        for n in (0, 1, 2, 5):
            for g in (0.7, 2.0, -0.4):
                assert sheet_value(n, g) == solve_k_real(n, g).k

    def test_path_must_start_at_state_coupling(self):
        state = solve_k_real(2, 1.0)
        with pytest.raises(ValueError):
            continue_along(state, line_path(2.0, 1.0 - 1.0j))

    def test_endpoint_independent_of_homotopic_path(self):
        state = solve_k_real(0, 1.0)
        target = 1.0 - 2.0j
        direct = continue_to(state, target).final_k
        dogleg = continue_along(
            state, ComplexPath([1.0, 2.5 - 0.5j, target])).final_k
        assert abs(direct - dogleg) < 1e-8

    def test_step_halving_does_not_move_endpoint(self):
        state = solve_k_real(0, 1.0)
        coarse = continue_to(state, 1.0 - 2.0j).final_k
        fine = continue_to(state, 1.0 - 2.0j, max_step=0.005).final_k
        assert abs(coarse - fine) < 1e-9

    def test_descent_into_lower_half_plane_binds(self):
        trace = continue_to(solve_k_real(0, 1.0), 1.0 - 2.0j)
        assert trace.status is TraceStatus.COMPLETED
        assert trace.final_k.imag < 0

    def test_conjugation_symmetry_on_standard_sheet(self):
        for n, g in ((0, 1.0 - 1.5j), (2, -0.5 - 1.0j), (3, 1.0 - 2.0j)):
            assert conjugation_symmetry_check(n, g) in (+1, -1)

    def test_record_keeps_samples(self):
        trace = continue_to(solve_k_real(2, 1.0), 1.0 - 1.0j)
        assert len(trace.samples) > 2
        assert trace.samples[-1].scaled_residual < 1e-10


class TestMonodromy:
    def test_single_loop_swaps_colliding_pair(self):
        e = ep_g(2)
        start_g = e + 0.05
        k0 = sheet_value(0, start_g)
        k2 = sheet_value(2, start_g)
        state = continue_to(solve_k_real(0, e.real + 0.05), start_g)
        loop = circle_path(e, 0.05, n_points=96)
        once = continue_along(state.final_state(), loop).final_k
        assert abs(once - k2) < 1e-6
        assert abs(once - k0) > 0.1

    def test_double_loop_returns_to_start(self):
        e = ep_g(2)
        start_g = e + 0.05
        state = continue_to(solve_k_real(0, e.real + 0.05), start_g)
        k0 = state.final_k
        loop2 = circle_path(e, 0.05, n_points=96, turns=2)
        twice = continue_along(state.final_state(), loop2).final_k
        assert abs(twice - k0) < 1e-6

    def test_loop_away_from_branch_points_is_trivial(self):
        loop = circle_path(1.0, 0.4, n_points=48)
        state = solve_k_real(2, 1.4)
        around = continue_along(state, loop).final_k
        assert abs(around - state.k) < 1e-9


class TestSheets:
    def test_grid_must_straddle_real_axis(self):
        with pytest.raises(ValueError):
            GridSpec(im_min=0.5, im_max=2.0)

    def test_excited_sheet_has_single_cut(self):
        grid = GridSpec(re_min=-3.0, re_max=1.0, im_min=-4.0, im_max=0.5,
                        n_re=9, n_im=9)
        sheet = build_sheet(4, grid, ep_finder=lambda m: ep_g(m))
        assert [c.kind for c in sheet.cut_segments] == ["exceptional"]
        cut = sheet.cut_segments[0]
        assert cut.branch_point.imag < 0
        assert cut.im_hi == pytest.approx(cut.branch_point.imag)

    def test_ground_sheet_records_multiple_cuts(self):
        grid = GridSpec(re_min=-3.0, re_max=1.0, im_min=-4.0, im_max=0.5,
                        n_re=9, n_im=9)
        sheet = build_sheet(0, grid, ep_finder=lambda m: ep_g(m))
        kinds = [c.kind for c in sheet.cut_segments]
        assert kinds.count("exceptional") >= 2
        assert kinds.count("real-axis") == 1

    def test_axis_row_matches_real_solver(self):
        grid = GridSpec(re_min=-1.0, re_max=1.0, im_min=-0.5, im_max=0.5,
                        n_re=5, n_im=5)
        sheet = build_sheet(2, grid, ep_finder=None)
        for j, x in enumerate(sheet.re_axis):
            assert sheet.axis_k[j] == solve_k_real(2, float(x)).k

    def test_unreachable_cells_are_nan_not_wrong(self):
        # the ground sheet continued through a cut column must either
        # abort (NaN) or satisfy the defining equation; spot check
        grid = GridSpec(re_min=-1.5, re_max=0.5, im_min=-2.0, im_max=0.0,
                        n_re=9, n_im=9)
        sheet = build_sheet(0, grid, ep_finder=lambda m: ep_g(m))
        for i in range(grid.n_im):
            for j in range(grid.n_re):
                k = sheet.k[i, j]
                if np.isnan(k.real):
                    continue
                g = complex(sheet.re_axis[j], sheet.im_axis[i])
                if g.imag == 0.0 and abs(g) < 1e-12:
                    continue
                _, scaled, ok = newton_correct(Parity.EVEN, g, k, tol=1e-12)
                assert ok and scaled < 1e-8
