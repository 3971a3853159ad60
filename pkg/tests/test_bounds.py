import math

import numpy as np
import pytest

from ramsey_lab import (
    ParameterError,
    canonical_expected_stats,
    chernoff_lower,
    chernoff_upper,
    expected_stats,
    poly_concentration_scale,
    poly_concentration_threshold,
)


class TestChernoff:
    def test_lower_at_zero_deviation(self):
        assert chernoff_lower(5.0, 0.0) == 1.0

    def test_upper_at_zero_deviation(self):
        assert chernoff_upper(5.0, 0.0) == 1.0

    def test_lower_example(self):
        # exp(-16/16) = 1/e
        assert chernoff_lower(8, 4) == pytest.approx(math.exp(-1), abs=1e-12)

    def test_upper_example(self):
        # exp(-9/(2*(3+1))) = exp(-9/8)
        assert chernoff_upper(3, 3) == pytest.approx(math.exp(-9 / 8), abs=1e-12)

    def test_upper_dominates_lower(self):
        for e in (0.5, 2.0, 10.0, 1e4):
            for lam in (0.1, 1.0, 7.0, 1e3):
                assert chernoff_upper(e, lam) >= chernoff_lower(e, lam)

    def test_strictly_decreasing_in_deviation(self):
        grid = np.linspace(0.0, 50.0, 100)
        lo = [chernoff_lower(10.0, lam) for lam in grid]
        hi = [chernoff_upper(10.0, lam) for lam in grid]
        assert all(a > b for a, b in zip(lo, lo[1:]))
        assert all(a > b for a, b in zip(hi, hi[1:]))

    def test_bounds_are_probabilities(self):
        for lam in (0.0, 1.0, 20.0):
            assert 0.0 < chernoff_lower(3.0, lam) <= 1.0
            assert 0.0 < chernoff_upper(3.0, lam) <= 1.0
        # extreme deviations may underflow to exactly zero, never below
        assert chernoff_lower(3.0, 1e6) >= 0.0

    def test_domain_errors(self):
        with pytest.raises(ParameterError):
            chernoff_lower(0.0, 1.0)
        with pytest.raises(ParameterError):
            chernoff_lower(1.0, -1.0)
        with pytest.raises(ParameterError):
            chernoff_upper(-2.0, 1.0)


class TestPolyConcentration:
    def test_scale_k1(self):
        assert poly_concentration_scale(1) == 8.0

    def test_scale_k3(self):
        assert poly_concentration_scale(3) == pytest.approx(512 * math.sqrt(6), abs=1e-9)

    def test_threshold_doubles_lambda_exactly(self):
        for k in (1, 2, 3, 5):
            a = poly_concentration_threshold(10.0, 10.0, 3.0, k, 1.7).threshold
            b = poly_concentration_threshold(10.0, 10.0, 3.0, k, 3.4).threshold
            assert b == 2**k * a

    def test_tail_exponent(self):
        bound = poly_concentration_threshold(1.0, 1.0, 1.0, 3, 10.0)
        assert bound.tail_exponent(math.e) == pytest.approx(-10.0 + 2.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ParameterError):
            poly_concentration_threshold(1.0, 1.0, 1.0, 3, 1.0)  # lam must exceed 1
        with pytest.raises(ParameterError):
            poly_concentration_threshold(1.0, 1.0, 1.0, 0, 2.0)
        with pytest.raises(ParameterError):
            poly_concentration_scale(0)


class TestExpectedStats:
    def test_canonical_k3_r2(self):
        for n in (10, 30, 100):
            stats = canonical_expected_stats(3, 2, n)
            assert stats.c == 288
            assert stats.family_extensions == pytest.approx(288 * n * math.log(n), rel=1e-12)
            assert stats.restricted_pairs == pytest.approx(2 * n * math.log(n), rel=1e-12)

    def test_canonical_vertex_forms(self):
        stats = canonical_expected_stats(3, 2, 50)
        cn, p = 288.0 * 50, stats.p
        assert stats.cycles_per_vertex == pytest.approx(cn**2 * p**3, rel=1e-12)
        assert stats.cycles_per_vertex_prime == pytest.approx(cn * p**2, rel=1e-12)

    def test_generalized_example(self):
        stats = expected_stats(3, 10, 0.5)
        assert stats.cycles_per_vertex == pytest.approx(100 * 0.125, rel=1e-12)
        assert stats.total_cycles == pytest.approx(1000 * 0.125, rel=1e-12)
        assert stats.extensions_per_path == pytest.approx(10 * 0.25, rel=1e-12)

    def test_p_zero(self):
        stats = expected_stats(3, 10, 0.0)
        assert stats.total_cycles == 0
        assert stats.cycles_per_vertex == 0
        assert stats.extensions_per_path == 0

    def test_family_scaling(self):
        stats = expected_stats(3, 12, 0.3)
        assert stats.family_extensions(7) == pytest.approx(7 * stats.extensions_per_path)

    def test_canonical_generalized_consistency(self):
        canon = canonical_expected_stats(3, 2, 40)
        gen = canon.generalized()
        assert gen.cycles_per_vertex == pytest.approx(canon.cycles_per_vertex, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ParameterError):
            expected_stats(2, 10, 0.5)
        with pytest.raises(ParameterError):
            expected_stats(3, 0, 0.5)
        with pytest.raises(ParameterError):
            expected_stats(3, 10, 1.5)
