"""Tests for the fundamental system solver and the transfer matrix oracle."""

import numpy as np
import pytest

from weylscope.exceptions import (
    ArgumentError, GridPointError, IterationLimitError, MeasureDomainError,
    UnsupportedMeasureError
)
from weylscope.fundamental import (
    SpectralParameter, lagrange_identity, solve_fundamental,
    transfer_matrix_oracle, wronskian
)
from weylscope.measure import DensityPiece, SignedMeasure, total_variation


def _random_atomic(rng):
    count = rng.integers(1, 7)
    positions = np.unique(np.round(rng.uniform(0.02, 0.98, count), 6))
    weights = rng.uniform(0.2, 2.0, positions.size) * rng.choice([-1, 1], positions.size)
    return SignedMeasure(atoms=list(zip(positions, weights)))


class TestSpectralParameter:

    @pytest.mark.parametrize("z", [1j, -1j, 1e6j, -1.0, -3 + 0.5j, 2 + 1e-3j])
    def test_principal_branch(self, z):
        k = SpectralParameter(z).k
        assert k.real >= 0
        assert k * k == pytest.approx(-z, rel=1e-14)

    def test_positive_real_rejected(self):
        with pytest.raises(ArgumentError):
            SpectralParameter(1.0)

    def test_from_ray(self):
        z = SpectralParameter.from_ray(100.0, np.pi / 2)
        assert z.z == pytest.approx(100j, abs=1e-12)


class TestFreeAndDelta:
    """Closed form solutions."""

    def test_free_real_k(self, free):
        fs = solve_fundamental(free, -1.0, 1.0)
        assert fs.grid[-1] == 1.0
        assert fs.c[-1] == pytest.approx(np.cosh(1.0), rel=1e-12)
        assert fs.s[-1] == pytest.approx(np.sinh(1.0), rel=1e-12)
        assert fs.c_prime[-1] == pytest.approx(np.sinh(1.0), rel=1e-12)
        assert fs.s_prime[-1] == pytest.approx(np.cosh(1.0), rel=1e-12)

    def test_delta_at_origin(self, delta0):
        fs = solve_fundamental(delta0, -1.0, 1.0)
        assert fs.c[-1].real == pytest.approx(3.893483, abs=1e-6)
        assert fs.c[-1] == pytest.approx(np.cosh(1.0) + 2 * np.sinh(1.0), rel=1e-12)
        assert fs.s[-1] == pytest.approx(np.sinh(1.0), rel=1e-12)

    def test_oracle_delta_at_origin(self):
        alpha, z, x = 1.5, 2j, 0.7
        k = SpectralParameter(z).k
        c, c_prime, s, s_prime = transfer_matrix_oracle(
            SignedMeasure(atoms=[(0.0, alpha)]), z, x)
        assert c == pytest.approx(np.cosh(k * x) + alpha / k * np.sinh(k * x), rel=1e-12)
        assert s == pytest.approx(np.sinh(k * x) / k, rel=1e-12)

    def test_jump_condition(self, mixed):
        fs = solve_fundamental(mixed, 4j, 1.0)
        index = fs.index_of(0.6)
        c_value, c_left = fs.pair("c", index)
        s_value, s_left = fs.pair("s", index)
        c_right, s_right = fs.right_derivative(index)
        assert c_right - c_left == pytest.approx(2.0 * c_value, rel=1e-12)
        assert s_right - s_left == pytest.approx(2.0 * s_value, rel=1e-12)

    def test_atoms_and_checkpoints_on_grid(self, mixed):
        fs = solve_fundamental(mixed, 1j, 1.0, checkpoints=[0.45])
        for x in (0.0, 0.1, 0.3, 0.45, 0.6, 0.9, 1.0):
            fs.index_of(x)
        assert np.all(np.diff(fs.grid) <= 0.05 + 1e-12)


class TestOracleEquivalence:
    """Solver against transfer matrices on random atomic measures."""

    @pytest.mark.parametrize("seed", range(20))
    def test_random_measures(self, seed):
        rng = np.random.default_rng(seed)
        m = _random_atomic(rng)
        for z in (1j, 100j):
            fs = solve_fundamental(m, z, 1.0)
            for x in list(m.positions) + [1.0]:
                index = fs.index_of(x)
                solved = (fs.c[index], fs.c_prime[index], fs.s[index], fs.s_prime[index])
                oracle = transfer_matrix_oracle(m, z, x)
                assert solved == pytest.approx(oracle, rel=1e-8, abs=1e-10)

    def test_density_rejected(self, constant_density):
        with pytest.raises(UnsupportedMeasureError):
            transfer_matrix_oracle(constant_density, 1j, 0.5)


class TestInvariants:

    @pytest.mark.parametrize("z", [1j, 2j, -1.0])
    def test_wronskian_is_one(self, suite, z):
        for m in suite.values():
            fs = solve_fundamental(m, z, 1.0)
            assert np.max(fs.wronskian_defect()) <= 1e-10

    def test_wronskian_of_pairs(self, delta05):
        z, x = 2j, 0.9
        c, c_prime, s, s_prime = transfer_matrix_oracle(delta05, z, x)
        assert wronskian((c, c_prime), (s, s_prime)) == pytest.approx(1.0, abs=1e-12)
        assert wronskian((c, c_prime), (c, c_prime)) == 0

    @pytest.mark.parametrize("z", [1j, 100j, 1e4j])
    def test_normalized_bound(self, suite, z):
        for m in suite.values():
            fs = solve_fundamental(m, z, 1.0)
            normalized = fs.normalized()
            budget = np.array([float(total_variation(m, x)) if x > 0 else 0.0
                               for x in fs.grid])
            bound = 1.01 * np.exp(budget / abs(fs.k))
            assert np.all(np.abs(normalized.c_tilde) <= bound)
            assert np.all(np.abs(normalized.s_tilde) <= bound)

    def test_no_overflow_at_large_z(self, mixed):
        fs = solve_fundamental(mixed, 1e6j, 1.0)
        assert np.all(np.isfinite(fs.values))
        assert np.all(np.isfinite(fs.moments))

    def test_lagrange_identity(self):
        m = SignedMeasure(density=[DensityPiece(0.0, 1.0, [1.0, 2.0])])
        check = lagrange_identity(m, 2j, -1 + 1j, 0.2, 0.8)
        assert check.defect <= 1e-6 * max(1.0, abs(check.rhs))


class TestStrongDensity:
    """Constant densities large against |z| still converge."""

    @pytest.mark.parametrize("q0", [1e3, 1e4])
    def test_constant_density(self, q0):
        m = SignedMeasure(density=[DensityPiece(0.0, 1.0, [q0])])
        z, x = 1j, 0.5
        kappa = np.sqrt(q0 - z)
        fs = solve_fundamental(m, z, x)
        assert fs.c[-1] == pytest.approx(np.cosh(kappa * x), rel=1e-8)
        assert fs.s[-1] == pytest.approx(np.sinh(kappa * x) / kappa, rel=1e-8)
        assert fs.c_prime[-1] == pytest.approx(kappa * np.sinh(kappa * x), rel=1e-8)

    def test_panels_shrink_with_density(self):
        m = SignedMeasure(density=[DensityPiece(0.0, 1.0, [1e4])])
        fs = solve_fundamental(m, 1j, 0.5)
        assert np.max(np.diff(fs.grid)) ** 2 * 1e4 <= 0.1 + 1e-9


class TestErrors:

    def test_non_positive_tolerance(self, free):
        with pytest.raises(ArgumentError):
            solve_fundamental(free, 1j, 1.0, tol=0.0)

    def test_x_max_outside_domain(self):
        m = SignedMeasure(domain_end=1.0)
        with pytest.raises(MeasureDomainError):
            solve_fundamental(m, 1j, 1.0)

    def test_iteration_limit(self, constant_density):
        with pytest.raises(IterationLimitError):
            solve_fundamental(constant_density, 1j, 1.0, max_iterations=1)

    def test_point_not_on_grid(self, free):
        fs = solve_fundamental(free, -1.0, 1.0)
        with pytest.raises(GridPointError):
            fs.index_of(0.123456)
