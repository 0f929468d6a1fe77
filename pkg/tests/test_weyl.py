"""Tests for Weyl disks, the truncated m estimate and exact m."""

import numpy as np
import pytest

from weylscope.exceptions import (
    ArgumentError, DegenerateDiskError, UnsupportedMeasureError
)
from weylscope.fundamental import SpectralParameter, solve_fundamental
from weylscope.measure import DensityPiece, SignedMeasure
from weylscope.weyl import (
    exact_m_compact, m_shifted, m_truncated, m_truncated_raw,
    radius_decay_rate, weyl_disk
)


def _k(z):
    return SpectralParameter(z).k


class TestFreeAndDelta:

    @pytest.mark.parametrize("z", [1j, 10j, 1e3j, 1e6j])
    def test_free_m(self, free, z):
        fs = solve_fundamental(free, z, 1.0)
        estimate = m_truncated(fs, 1.0)
        assert estimate.value == pytest.approx(-_k(z), rel=1e-12)
        assert estimate.error_radius == pytest.approx(2 * weyl_disk(fs, 1.0).radius)
        assert exact_m_compact(free, z) == pytest.approx(-_k(z), rel=1e-12)

    @pytest.mark.parametrize("alpha", [-3.0, 0.5, 2.0])
    @pytest.mark.parametrize("z", [1j, 1e4j])
    def test_delta_at_origin_exact(self, alpha, z):
        m = SignedMeasure(atoms=[(0.0, alpha)])
        assert exact_m_compact(m, z) == pytest.approx(-_k(z) - alpha, rel=1e-12)

    @pytest.mark.parametrize("alpha", [-3.0, 0.5, 2.0])
    def test_delta_at_origin_truncated(self, alpha):
        z = 1e4j
        m = SignedMeasure(atoms=[(0.0, alpha)])
        estimate = m_truncated(solve_fundamental(m, z, 1.0), 1.0)
        expected = -_k(z) - alpha
        assert abs(estimate.value - expected) <= estimate.error_radius + 1e-12 * abs(expected)

    def test_single_atom_closed_form(self, delta05):
        # u = exp(-kx) past the atom, matched across it and continued freely
        z = 4j
        k = _k(z)
        p, w = 0.5, 1.0
        decay = np.exp(-2 * k * p)
        ratio = -k - w
        expected = (-k * (1 - decay) + ratio * (1 + decay)) / ((1 + decay) - ratio * (1 - decay) / k)
        assert exact_m_compact(delta05, z) == pytest.approx(expected, rel=1e-12)


class TestDisks:

    def test_nesting(self):
        m = SignedMeasure(atoms=[(0.3, 2.0)])
        fs = solve_fundamental(m, 4j, 1.0, checkpoints=[0.5])
        outer, inner = weyl_disk(fs, 0.5), weyl_disk(fs, 1.0)
        assert inner.radius < outer.radius
        assert outer.encloses(inner)

    @pytest.mark.parametrize("z", [1j, 4j, 100j, 1e4j])
    def test_membership(self, suite, z):
        for m in suite.values():
            fs = solve_fundamental(m, z, 1.0)
            disk = weyl_disk(fs, 1.0)
            assert disk.contains(m_truncated(fs, 1.0).value)

    def test_exact_m_inside_disk(self, two_atoms):
        z = 4j
        fs = solve_fundamental(two_atoms, z, 1.0)
        assert weyl_disk(fs, 1.0).contains(exact_m_compact(two_atoms, z))

    def test_real_z_is_degenerate(self, delta05):
        fs = solve_fundamental(delta05, -1.0, 1.0)
        with pytest.raises(DegenerateDiskError):
            weyl_disk(fs, 1.0)

    def test_x0_must_be_positive(self, free):
        fs = solve_fundamental(free, 1j, 1.0)
        with pytest.raises(ArgumentError):
            weyl_disk(fs, 0.0)

    def test_log_radius_without_underflow(self, free):
        fs = solve_fundamental(free, 1e8j, 1.0)
        disk = weyl_disk(fs, 1.0)
        assert disk.radius == 0.0
        assert np.isfinite(disk.log_radius)
        assert disk.log_radius < -1e4

    @pytest.mark.parametrize("z, x0_range", [(4j, (2.0, 3.0)), (100j, (1.0, 1.5))])
    def test_radius_decay_rate(self, suite, z, x0_range):
        x0_list = np.linspace(*x0_range, 11)
        for m in suite.values():
            fs = solve_fundamental(m, z, x0_range[1], checkpoints=x0_list)
            slope = radius_decay_rate(fs, x0_list)
            expected = -2 * fs.k.real
            assert abs(slope - expected) <= 0.05 * abs(expected)


class TestEstimates:

    def test_consistent_with_exact(self):
        m = SignedMeasure(atoms=[(0.25, 1.0), (0.6, -2.0)])
        z = 100j
        estimate = m_truncated(solve_fundamental(m, z, 1.0), 1.0)
        exact = exact_m_compact(m, z)
        assert abs(estimate.value - exact) <= estimate.error_radius + 1e-12 * abs(exact)

    def test_raw_quotient_agrees(self, mixed):
        fs = solve_fundamental(mixed, 4j, 1.0)
        assert m_truncated_raw(fs, 1.0) == pytest.approx(m_truncated(fs, 1.0).value, rel=1e-10)

    @pytest.mark.parametrize("z", [1j, 4j, 100j])
    def test_herglotz(self, suite, z):
        for name, m in suite.items():
            if m.is_atomic:
                assert exact_m_compact(m, z).imag > 0, name
            else:
                assert m_truncated(solve_fundamental(m, z, 1.0), 1.0).value.imag > 0, name

    def test_lower_half_plane_rejected(self, free):
        with pytest.raises(ArgumentError):
            exact_m_compact(free, -1j)
        with pytest.raises(ArgumentError):
            m_truncated(solve_fundamental(free, -1j, 1.0), 1.0)

    def test_exact_needs_atomic_measure(self, constant_density):
        with pytest.raises(UnsupportedMeasureError):
            exact_m_compact(constant_density, 1j)


class TestShifted:

    def test_atom_behind_the_start(self, delta05):
        z = 100j
        assert m_shifted(delta05, 0.7, z, 1.0).value == pytest.approx(-_k(z), rel=1e-12)

    def test_atom_at_the_start(self, delta05):
        z = 100j
        estimate = m_shifted(delta05, 0.5, z, 1.0)
        assert estimate.value == pytest.approx(-_k(z) - 1.0, rel=1e-12)
        assert estimate.error_radius == 0.0

    def test_density_uses_truncation(self):
        z = 100j
        m = SignedMeasure(density=[DensityPiece(0.0, 1.0, [1.0])])
        shifted = m_shifted(m, 0.5, z, 1.0)
        reference = SignedMeasure(density=[DensityPiece(0.0, 0.5, [1.0])])
        expected = m_truncated(solve_fundamental(reference, z, 1.0), 1.0)
        assert shifted.value == pytest.approx(expected.value, rel=1e-10)
