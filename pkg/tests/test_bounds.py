# tests/test_bounds.py

import math
from fractions import Fraction

import numpy as np
import pytest

from bounds.coefficients import (chain_constant, omega_coefficient, omega_lower_bound, omega_phi_constant,
                                 phi_coefficient, phi_lower_bound)
from bounds.curve import (LOG_TWO_PI, CurveArithmeticData, FinitePlace, InfinitePlace, PlaceInvariants, aggregate,
                          noether_residual, validate_curve)
from bounds.tautological import (TautologicalSpec, case_analysis, corollary_coefficient, cross_sum,
                                 m_vector_estimates, tautological_height_bound)
from core import config as config_module
from core.errors import GenusTooSmall, InvalidSpec, MissingPlaceData
from data_ingestion.loaders import load_curve
from graph.potential import graph_invariants
from helpers import graph_fixture


def curve_fixture(name: str) -> CurveArithmeticData:
    return load_curve(config_module.CURVE_FIXTURES_DIR / f"{name}.json")


class TestCoefficients:
    def test_genus_two(self):
        assert phi_coefficient(2) == Fraction(1, 116)
        assert omega_coefficient(2) == Fraction(1, 581)
        assert corollary_coefficient(2) == Fraction(1, 27888)

    def test_genus_three(self):
        assert phi_coefficient(3) == Fraction(2, 121)
        assert omega_coefficient(3) == Fraction(8, 1269 + 378 + 54 + 1)

    def test_relations(self):
        for g in range(2, 12):
            assert chain_constant(g) * phi_coefficient(g) == 1
            # C4 = 1 + C3 (2g+1)/(g-1)
            assert 1 / omega_coefficient(g) == 1 + chain_constant(g) * omega_phi_constant(g)
            assert corollary_coefficient(g) == omega_coefficient(g) / (24 * g)

    @pytest.mark.parametrize("func", [phi_coefficient, omega_coefficient, corollary_coefficient])
    def test_genus_too_small(self, func):
        with pytest.raises(GenusTooSmall):
            func(1)


class TestPhiLowerBound:
    def test_height_branch(self):
        report = phi_lower_bound(2, Fraction(10), Fraction(-1), Fraction(1, 2))
        assert report.bound_value == Fraction(9, 116)
        assert report.branch == "c1"

    def test_constant_branch(self):
        report = phi_lower_bound(2, 0, -1, 3)
        assert report.bound_value == Fraction(3, 116)
        assert report.branch == "c2"

    def test_arithmetic_scaling(self):
        report = phi_lower_bound(2, 10, 1, 0, arithmetic=True, d_K=3)
        assert report.bound_value == Fraction(13, 116)


class TestOmegaLowerBound:
    def test_chain_on_consistent_data(self):
        # Noether: 12 h = omega^2 + delta_X；phi 满足 phi 下界与 omega^2-phi 不等式
        omega_sq, delta_X, phi_X = Fraction(4), Fraction(10), Fraction(1)
        h = (omega_sq + delta_X) / 12
        report = omega_lower_bound(2, 1, h, Fraction(-1), Fraction(1, 2), delta_X, phi_X, omega_sq)
        assert report.bound_value == Fraction(13, 581)
        assert report.branch == "c1"
        slacks = dict(report.inequality_slacks)
        assert all(value >= 0 for value in slacks.values()), slacks
        assert slacks["max_omega_delta_branch>=dK_max_height_branch"] == 0

    def test_chain_quadratic_field(self):
        omega_sq, delta_X, phi_X = Fraction(3), Fraction(5), Fraction(1, 2)
        d_K = 2
        h = (omega_sq + delta_X) / (12 * d_K)
        report = omega_lower_bound(2, d_K, h, Fraction(-2), Fraction(1), delta_X, phi_X, omega_sq)
        assert all(value >= 0 for _, value in report.inequality_slacks)

    def test_without_curve_data(self):
        report = omega_lower_bound(3, 1, 1, 0, 0)
        assert report.bound_value == 12 * omega_coefficient(3)
        assert report.inequality_slacks == []

    def test_genus_too_small(self):
        with pytest.raises(GenusTooSmall):
            omega_lower_bound(1, 1, 1, 0, 0)


class TestMVectorEstimates:
    def test_examples(self):
        first = m_vector_estimates((1, 1))
        assert (first.sum_cross, first.upper) == (1, 1)
        second = m_vector_estimates((2, -3))
        assert (second.sum_cross, second.lower) == (-6, Fraction(-13, 2))
        third = m_vector_estimates((5,))
        assert (third.sum_cross, third.upper, third.lower) == (0, 0, Fraction(-25, 2))

    def test_random_vectors(self, rng):
        for _ in range(100000 // 100):
            batch = rng.integers(-20, 21, size=(100, int(rng.integers(1, 8))))
            for m in batch:
                m = [int(v) for v in m if v != 0] or [1]
                estimates = m_vector_estimates(m)
                assert estimates.both_hold, m
                assert estimates.sum_cross == sum(m[i] * m[j] for i in range(len(m)) for j in range(i + 1, len(m)))

    def test_empty(self):
        with pytest.raises(InvalidSpec):
            m_vector_estimates(())

    def test_cross_sum(self):
        assert cross_sum((1, 2, 3)) == 11


class TestTautologicalBound:
    def test_genus_two(self):
        report = tautological_height_bound(2, TautologicalSpec(1, (1,)), 1, 1, 0)
        assert report.components["m_dependent_bound"] == Fraction(1, 8)
        assert report.components["m_free_bound"] == Fraction(1, 48)

    def test_genus_three_m_free(self):
        report = tautological_height_bound(3, TautologicalSpec(2, (1, 1)), 1, 72, 10)
        assert report.components["m_free_bound"] == 1
        assert report.bound_value == 1

    def test_corollary_branches(self):
        report = tautological_height_bound(2, TautologicalSpec(1, (1,)), 1, Fraction(4), Fraction(1),
                                           h_fal=Fraction(7, 6), c1=-1, c2=Fraction(1, 2))
        assert report.components["corollary_height_branch"] == corollary_coefficient(2) * 13
        assert report.bound_value == corollary_coefficient(2) * 13
        assert report.branch == "c1"

    def test_r_out_of_range(self):
        with pytest.raises(InvalidSpec):
            tautological_height_bound(3, TautologicalSpec(3, (1, 1, 1)), 1, 1, 0)

    def test_zero_component(self):
        with pytest.raises(InvalidSpec):
            tautological_height_bound(3, TautologicalSpec(2, (1, 0)), 1, 1, 0)

    def test_length_mismatch(self):
        with pytest.raises(InvalidSpec):
            tautological_height_bound(3, TautologicalSpec(2, (1,)), 1, 1, 0)

    def test_case_analysis_is_monotone(self, rng):
        """phi 取遍 [0, (2g+1)/(g-1) omega^2] 时，证明中的每一步都不增。"""
        for _ in range(2000):
            g = int(rng.integers(2, 9))
            r = int(rng.integers(1, g))
            m = [int(v) or 1 for v in rng.integers(-6, 7, r)]
            omega_sq = Fraction(int(rng.integers(0, 100)), int(rng.integers(1, 10)))
            phi_X = omega_phi_constant(g) * omega_sq * Fraction(int(rng.integers(0, 101)), 100)
            case, steps = case_analysis(g, m, omega_sq, phi_X)
            values = [value for _, value in steps]
            assert all(a >= b for a, b in zip(values, values[1:])), (g, m, case, steps)
            report = tautological_height_bound(g, TautologicalSpec(r, tuple(m)), 1, omega_sq, phi_X)
            assert all(value >= 0 for _, value in report.inequality_slacks)

    def test_case_selection(self):
        assert case_analysis(4, (1, 1), 10, 1)[0] == "i"
        assert case_analysis(4, (1, -1), 10, 1)[0] == "ii"
        assert case_analysis(2, (3,), 10, 1)[0] == "g=2"


class TestCurveAggregation:
    def test_finite_place(self):
        data = validate_curve(2, 1, 1, 1, [FinitePlace(4, invariants=PlaceInvariants(1, 0, 0.3))])
        delta_X, phi_X = aggregate(data)
        assert delta_X == pytest.approx(math.log(4))
        assert phi_X == pytest.approx(0.3 * math.log(4))

    def test_infinite_place(self):
        data = validate_curve(2, 1, 1, 1, infinite_places=[InfinitePlace(20, 0.5)])
        delta_X, phi_X = aggregate(data)
        assert delta_X == pytest.approx(20 - 8 * LOG_TWO_PI)
        assert phi_X == 0.5

    def test_no_places(self):
        assert aggregate(validate_curve(2, 1, 0, 0)) == (0.0, 0.0)

    def test_graph_place(self):
        data = curve_fixture("theta_place")
        inv = graph_invariants(*graph_fixture("theta"))
        delta_X, phi_X = aggregate(data)
        assert delta_X == pytest.approx((inv.delta + inv.epsilon) * math.log(4), rel=1e-12)
        assert phi_X == pytest.approx(inv.phi * math.log(4), rel=1e-12)

    def test_missing_place_data(self):
        data = validate_curve(2, 1, 1, 1, [FinitePlace(3)])
        with pytest.raises(MissingPlaceData):
            aggregate(data)

    def test_missing_infinite_data(self):
        data = validate_curve(2, 1, 1, 1, infinite_places=[InfinitePlace(delta=1.0)])
        with pytest.raises(MissingPlaceData):
            aggregate(data)

    @pytest.mark.parametrize("kwargs", [
        {"g": 1, "d_K": 1, "omega_sq": 1, "h_fal": 1},
        {"g": 2, "d_K": 0, "omega_sq": 1, "h_fal": 1},
        {"g": 2, "d_K": 1, "omega_sq": -1, "h_fal": 1},
    ])
    def test_invalid_curve(self, kwargs):
        with pytest.raises(InvalidSpec):
            validate_curve(**kwargs)

    def test_place_norm(self):
        with pytest.raises(InvalidSpec):
            validate_curve(2, 1, 1, 1, [FinitePlace(1, invariants=PlaceInvariants(1, 0, 0))])


class TestNoetherResidual:
    @pytest.mark.parametrize("name", ["synthetic_genus2", "quadratic_field"])
    def test_consistent_fixtures(self, name):
        assert noether_residual(curve_fixture(name)) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("name", ["synthetic_genus2", "quadratic_field"])
    def test_perturbed_height(self, name):
        data = curve_fixture(name)
        moved = validate_curve(data.g, data.d_K, data.omega_sq, data.h_fal + 1, data.finite_places,
                               data.infinite_places, data.name)
        assert noether_residual(moved) == pytest.approx(12 * data.d_K, abs=1e-9)

    def test_constructed_data(self):
        data = validate_curve(3, 1, 5.5, 0, [FinitePlace(5, invariants=PlaceInvariants(2, 0.5, 0.1))],
                              [InfinitePlace(30, 1)])
        delta_X, _ = aggregate(data)
        exact = validate_curve(3, 1, 5.5, (5.5 + delta_X) / 12, data.finite_places, data.infinite_places)
        assert noether_residual(exact) == pytest.approx(0.0, abs=1e-12)

    def test_bounds_on_fixture(self):
        data = curve_fixture("synthetic_genus2")
        delta_X, phi_X = aggregate(data)
        report = omega_lower_bound(data.g, data.d_K, data.h_fal, -1, 0.5, delta_X, phi_X, data.omega_sq)
        slacks = dict(report.inequality_slacks)
        assert slacks["max_omega_delta_branch>=dK_max_height_branch"] == pytest.approx(0.0, abs=1e-9)
        assert slacks["omega_phi_inequality"] > 0
        assert np.isfinite(float(report.bound_value))
