"""Eigenfunction pairings and the quadrature connection oracle.

The oracle integrates explicit wavefunctions with Gauss-Legendre
quadrature and differentiates overlaps by central differences; it
shares no code path with the closed-form connection it is used to
check, which is what makes the comparison in test_holonomy meaningful.
"""

import numpy as np
import pytest

from lieb2b.bethe import Parity
from lieb2b.continuation import sheet_value
from lieb2b.eigensystem import (Eigenfunction, Side, biorthonormality_defect,
                                normalization_pt, overlap_connection_oracle,
                                pair_overlap, sinc_pi)


class TestScalarPieces:
    def test_sinc_series_matches_direct(self):
        for k in (1e-5, 1e-6 + 1e-7j, 3e-5j):
            direct = np.sin(np.pi * k) / (np.pi * k)
            assert abs(sinc_pi(k) - direct) < 1e-12

    def test_sinc_at_integer_levels(self):
        assert sinc_pi(0) == 1.0
        for n in (1, 2, 3):
            assert abs(sinc_pi(n)) < 1e-15

    def test_normalization_positive_on_real_branches(self):
        for parity, k in ((Parity.EVEN, 0.7), (Parity.ODD, 1.3)):
            a = normalization_pt(parity, k)
            assert a.imag == pytest.approx(0.0, abs=1e-15)
            assert a.real > 0


class TestEigenfunctions:
    def test_kbar_must_share_parity(self):
        with pytest.raises(ValueError):
            Eigenfunction(2, 1.0, sheet_value(2, 1.0), kbar=1)

    def test_left_profile_is_conjugate_at_real_coupling(self):
        x = np.linspace(0.0, 2.0 * np.pi, 7)
        for n, g in ((2, 1.3), (0, -0.5), (3, 0.8), (1, -3.0)):
            right = Eigenfunction.at_real_coupling(n, g)
            left = Eigenfunction.at_real_coupling(n, g, side=Side.LEFT)
            np.testing.assert_allclose(left.profile(x),
                                       np.conj(right.profile(x)),
                                       rtol=0, atol=1e-12)

    def test_conjugated_profile_closed_form(self):
        x = np.linspace(0.0, 2.0 * np.pi, 9)
        for n, g in ((2, 1.1), (4, -0.6), (3, 2.0)):
            left = Eigenfunction.at_real_coupling(n, g, side=Side.LEFT)
            np.testing.assert_allclose(left.conjugated_profile(x),
                                       np.conj(left.profile(x)),
                                       rtol=0, atol=1e-12)

    def test_pairing_is_biorthonormal_at_real_coupling(self):
        for parity in (Parity.EVEN, Parity.ODD):
            for g in (1.5, -1.5):
                levels = range(parity.bound_level, 10, 2)
                assert biorthonormality_defect(levels, g) < 1e-8

    def test_pairing_is_biorthonormal_at_complex_coupling(self):
        g = 1.0 - 0.8j
        levels = [0, 2, 4, 6]
        ks = [sheet_value(n, g) for n in levels]
        assert biorthonormality_defect(levels, g, k_values=ks) < 1e-8

    def test_bound_branch_normalization(self):
        for n, g in ((0, -0.5), (1, -3.0)):
            right = Eigenfunction.at_real_coupling(n, g)
            left = Eigenfunction.at_real_coupling(n, g, side=Side.LEFT)
            assert abs(pair_overlap(left, right) - 1.0) < 1e-10

    def test_different_total_momentum_never_mixes(self):
        right = Eigenfunction.at_real_coupling(2, 1.0, kbar=2)
        left = Eigenfunction.at_real_coupling(2, 1.0, side=Side.LEFT, kbar=0)
        assert pair_overlap(left, right) == 0.0


class TestOracle:
    def test_center_of_mass_momentum_is_spectator(self):
        a = overlap_connection_oracle(6, 1.0, parity=Parity.EVEN, kbar=0)
        b = overlap_connection_oracle(6, 1.0, parity=Parity.EVEN, kbar=2)
        assert np.array_equal(a, b)

    def test_oracle_matrix_is_hermitian_at_real_coupling(self):
        for parity in (Parity.EVEN, Parity.ODD):
            a = overlap_connection_oracle(6, 0.8, parity=parity)
            assert np.max(np.abs(a - a.conj().T)) < 1e-7

    def test_oracle_matrix_is_antisymmetric(self):
        # together with hermiticity this makes i*A real antisymmetric,
        # the generator of real-orthogonal transport on the real axis
        for parity in (Parity.EVEN, Parity.ODD):
            a = overlap_connection_oracle(6, 0.8, parity=parity)
            assert np.max(np.abs(a + a.T)) < 1e-7

    def test_oracle_diagonal_vanishes(self):
        a = overlap_connection_oracle(6, 1.3, parity=Parity.EVEN)
        assert np.max(np.abs(np.diag(a))) < 1e-6

    def test_richardson_step_tightens_quotient(self):
        # halving dg must not move the extrapolated result at tolerance
        a = overlap_connection_oracle(4, 0.7, 1e-5, parity=Parity.ODD)
        b = overlap_connection_oracle(4, 0.7, 5e-6, parity=Parity.ODD)
        assert np.max(np.abs(a - b)) < 1e-9
