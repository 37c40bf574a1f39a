# tests/test_theta.py

import math

import numpy as np
import pytest

from core import config as config_module
from core.errors import InvalidSpec, NotInSiegelSpace, NotSymmetric, TruncationFailure
from data_ingestion.loaders import load_period
from theta.invariant import LOW_DISCREPANCY, MONTE_CARLO, abelian_invariant, theta_l2_normalization
from theta.period import RealPairPoint, validate_period
from theta.riemann import BatchThetaNorm, log_theta_norm, riemann_theta, theta_norm, theta_norm_at
from theta.symplectic import invert, translate

THETA_I_ZERO = 1.0864348112133080


def random_period(rng, g):
    X = rng.uniform(-0.5, 0.5, size=(g, g))
    M = rng.uniform(-0.5, 0.5, size=(g, g))
    Y = M @ M.T + 0.8 * np.eye(g)
    tau = (X + X.T) / 2 + 1j * (Y + Y.T) / 2
    return validate_period(tau)


def direct_norm(tau, z, eps=1e-14):
    """det(Im tau)^{1/4} exp(-pi y^T Y^{-1} y) |theta(tau, z)|，直接由级数得到。"""
    Y = tau.imag
    y = np.asarray(z).imag
    prefactor = np.linalg.det(Y) ** 0.25 * math.exp(-math.pi * float(y @ np.linalg.solve(Y, y)))
    return prefactor * abs(riemann_theta(tau, z, eps).value)


@pytest.fixture
def tau_i():
    return validate_period([[1j]])


class TestValidatePeriod:
    def test_fixture_loads(self, fixtures_dir):
        tau = load_period(fixtures_dir / "periods" / "genus2.json")
        assert tau.g == 2
        assert np.allclose(tau.imag, [[1.1, 0.3], [0.3, 0.9]])

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            validate_period([[1j, 0.5], [0.2, 1j]])

    def test_imaginary_part_not_positive(self):
        with pytest.raises(NotInSiegelSpace) as info:
            validate_period([[1j, 0], [0, -1j]])
        assert info.value.pivot_index == 1

    def test_genus_cap(self):
        with pytest.raises(InvalidSpec):
            validate_period(1j * np.eye(6))


class TestRiemannTheta:
    def test_tau_i_origin(self, tau_i):
        evaluation = riemann_theta(tau_i, [0])
        assert evaluation.value.real == pytest.approx(THETA_I_ZERO, abs=1e-10)
        assert abs(evaluation.value.imag) < 1e-14
        assert evaluation.tail_bound <= 1e-12

    def test_tau_i_half(self, tau_i):
        assert riemann_theta(tau_i, [0.5]).value.real == pytest.approx(0.913579, abs=1e-6)

    def test_odd_half_period(self, tau_i):
        assert abs(riemann_theta(tau_i, [(1 + 1j) / 2]).value) < 1e-12

    def test_tail_bound_is_honest(self, rng):
        for g in (1, 2, 3):
            tau = random_period(rng, g)
            z = rng.random(g) + tau.tau @ rng.random(g)
            coarse = riemann_theta(tau, z, 1e-6)
            fine = riemann_theta(tau, z, 5e-7)
            assert abs(fine.value - coarse.value) <= coarse.tail_bound
            assert fine.terms_used >= coarse.terms_used

    def test_eps_must_be_positive(self, tau_i):
        with pytest.raises(InvalidSpec):
            riemann_theta(tau_i, [0], eps=0)

    def test_truncation_budget(self, monkeypatch, tau_i):
        monkeypatch.setitem(config_module.DEFAULT_CONFIG, "THETA_TERM_BUDGET", 1)
        with pytest.raises(TruncationFailure) as info:
            riemann_theta(tau_i, [0])
        assert info.value.exit_code == 2


class TestThetaNorm:
    def test_origin(self, tau_i):
        assert theta_norm(tau_i, RealPairPoint([0.0], [0.0])) == pytest.approx(THETA_I_ZERO, abs=1e-10)

    def test_unreduced_coordinates(self, tau_i):
        first = theta_norm(tau_i, RealPairPoint([0.3], [0.7]))
        second = theta_norm(tau_i, RealPairPoint([1.3], [-0.3]))
        assert first == pytest.approx(second, abs=1e-10)

    def test_theta_divisor(self, tau_i, rng):
        assert theta_norm(tau_i, RealPairPoint([0.5], [0.5])) < 1e-10
        for _ in range(20):
            assert theta_norm(tau_i, RealPairPoint(rng.random(1), rng.random(1))) > 1e-6

    def test_matches_direct_series(self, rng):
        for g in (1, 2, 3):
            tau = random_period(rng, g)
            for _ in range(5):
                z = rng.random(g) + tau.tau @ rng.random(g)
                assert theta_norm_at(tau, z) == pytest.approx(direct_norm(tau, z), abs=1e-9)

    def test_quasi_periodicity(self, rng):
        """||theta||(tau, z + m + tau n) = ||theta||(tau, z)，200 次随机试验。"""
        for trial in range(200):
            g = 1 + trial % 3
            tau = random_period(rng, g)
            z = rng.uniform(-1, 1, g) + tau.tau @ rng.uniform(-1, 1, g)
            m = rng.integers(-2, 3, g)
            n = rng.integers(-1, 2, g)
            shifted = z + m + tau.tau @ n
            assert direct_norm(tau, shifted) == pytest.approx(direct_norm(tau, z), abs=1e-9), f"trial {trial}"
            assert theta_norm_at(tau, shifted) == pytest.approx(theta_norm_at(tau, z), abs=1e-9)

    def test_large_imaginary_part(self):
        tau = validate_period([[200j]])
        value = log_theta_norm(tau, RealPairPoint([0.5], [0.5]))
        # 两个主导项 n = 0, -1 相消；对数形式不会溢出或下溢为 nan
        assert value == -math.inf or value < -100

    def test_batch_matches_pointwise(self, rng):
        tau = random_period(rng, 2)
        A = rng.random((30, 2))
        B = rng.random((30, 2))
        batch = BatchThetaNorm(tau)(A, B)
        pointwise = [log_theta_norm(tau, RealPairPoint(a, b)) for a, b in zip(A, B)]
        assert np.allclose(batch, pointwise, atol=1e-10)


class TestSymplecticInvariance:
    def test_translate(self, rng):
        for _ in range(20):
            g = int(rng.integers(1, 3))
            tau = random_period(rng, g)
            z = rng.random(g) + tau.tau @ rng.random(g)
            S = rng.integers(-1, 2, (g, g))
            S = np.triu(S) + np.triu(S, 1).T
            moved_tau, moved_z = translate(tau, z, S)
            assert theta_norm_at(moved_tau, moved_z) == pytest.approx(theta_norm_at(tau, z), abs=1e-9)

    def test_translate_keeps_theta_value(self, tau_i):
        z = np.array([0.2 + 0.3j])
        moved_tau, moved_z = translate(tau_i, z, [[1]])
        assert riemann_theta(moved_tau, moved_z).value == pytest.approx(riemann_theta(tau_i, z).value, abs=1e-10)

    def test_invert(self, rng):
        for _ in range(20):
            g = int(rng.integers(1, 3))
            tau = random_period(rng, g)
            z = rng.random(g) + tau.tau @ rng.random(g)
            moved_tau, moved_z = invert(tau, z)
            assert theta_norm_at(moved_tau, moved_z) == pytest.approx(theta_norm_at(tau, z), abs=1e-9)

    def test_translate_rejects_non_integer(self, tau_i):
        with pytest.raises(InvalidSpec):
            translate(tau_i, [0], [[0.5]])


class TestAbelianInvariant:
    def test_minimum_samples(self, tau_i):
        with pytest.raises(InvalidSpec):
            abelian_invariant(tau_i, MONTE_CARLO, samples=999)

    def test_unknown_integrator(self, tau_i):
        with pytest.raises(InvalidSpec):
            abelian_invariant(tau_i, "trapezoid", samples=1000)

    def test_deterministic(self, tau_i):
        first = abelian_invariant(tau_i, MONTE_CARLO, samples=50000, seed=3)
        second = abelian_invariant(tau_i, MONTE_CARLO, samples=50000, seed=3)
        assert first == second

    def test_batch_size_does_not_matter_for_qmc(self, monkeypatch, tau_i):
        first = abelian_invariant(tau_i, LOW_DISCREPANCY, samples=2 ** 14, seed=5)
        monkeypatch.setitem(config_module.DEFAULT_CONFIG, "MC_BATCH_SIZE", 1000)
        second = abelian_invariant(tau_i, LOW_DISCREPANCY, samples=2 ** 14, seed=5)
        assert first.I == pytest.approx(second.I, abs=1e-12)

    def test_real_translation(self, tau_i):
        shifted = validate_period([[1 + 1j]])
        first = abelian_invariant(tau_i, MONTE_CARLO, samples=200000, seed=11)
        second = abelian_invariant(shifted, MONTE_CARLO, samples=200000, seed=12)
        assert abs(first.I - second.I) <= 3 * math.hypot(first.stderr, second.stderr)

    @pytest.mark.slow
    def test_independent_seeds(self, tau_i):
        first = abelian_invariant(tau_i, MONTE_CARLO, samples=10 ** 6, seed=1)
        second = abelian_invariant(tau_i, MONTE_CARLO, samples=10 ** 6, seed=2)
        assert abs(first.I - second.I) <= 3 * math.hypot(first.stderr, second.stderr)

    @pytest.mark.slow
    def test_tate_constant_is_stable(self):
        """I(iY) - (pi Y/6 - 1/2 log(2 pi Y)) 在 Y = 50 与 Y = 100 处一致。"""
        constants = []
        errors = []
        for Y, seed in ((50, 21), (100, 22)):
            estimate = abelian_invariant(validate_period([[Y * 1j]]), MONTE_CARLO, samples=10 ** 6, seed=seed)
            constants.append(estimate.I - (math.pi * Y / 6 - 0.5 * math.log(2 * math.pi * Y)))
            errors.append(estimate.stderr)
        assert abs(constants[0] - constants[1]) <= 3 * math.hypot(*errors)


class TestL2Normalization:
    def test_genus_one(self, tau_i):
        estimate = theta_l2_normalization(tau_i, LOW_DISCREPANCY, samples=2 ** 16)
        assert estimate.I == pytest.approx(2 ** -0.5, rel=5e-3)

    def test_genus_two(self, fixtures_dir):
        tau = load_period(fixtures_dir / "periods" / "genus2.json")
        estimate = theta_l2_normalization(tau, LOW_DISCREPANCY, samples=2 ** 16)
        assert estimate.I == pytest.approx(0.5, rel=1e-2)
