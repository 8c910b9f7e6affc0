import math
from fractions import Fraction

import numpy as np
import pytest

from cdna import (
    CompositeCode,
    ObservedDistribution,
    binary4_alpha,
    binary4_beta,
    binary_threshold,
    construct_binary4,
    evaluate_code,
    optimize_binary4_grid,
    prob_observed,
    symmetric_reflect,
)
from cdna.model import CompositeSymbol
import properties


class TestBinaryThreshold:
    def test_symmetric_pair(self):
        assert binary_threshold(0.4, 0.6) == pytest.approx(0.5, abs=1e-15)

    def test_counterexample_pair(self):
        assert binary_threshold(0.4, 0.5) == pytest.approx(
            math.log(10 / 12) / math.log(4 / 6), abs=1e-12
        )
        assert binary_threshold(0.4, 0.5) == pytest.approx(0.449, abs=1e-3)

    def test_sign_flip_scan(self, rng):
        # likelihood order must flip exactly at the threshold on every grid
        for _ in range(25):
            x = float(rng.uniform(0.05, 0.9))
            y = float(rng.uniform(x + 0.01, 0.98))
            t_star = binary_threshold(x, y)
            sx = CompositeSymbol((x, 1 - x))
            sy = CompositeSymbol((y, 1 - y))
            for n in (1, 7, 30):
                for i in range(n + 1):
                    theta = ObservedDistribution((i, n - i), n)
                    diff = prob_observed(sx, theta) - prob_observed(sy, theta)
                    if i / n < t_star:
                        assert diff > 0
                    elif i / n > t_star:
                        assert diff < 0

    def test_validation(self):
        for x, y in ((0.0, 0.5), (0.5, 1.0), (0.6, 0.4), (0.5, 0.5)):
            with pytest.raises(ValueError):
                binary_threshold(x, y)


class TestBinary4ClosedForm:
    def test_three_reads(self):
        assert binary4_beta(3) == pytest.approx(2.0, abs=1e-12)
        assert binary4_alpha(3) == pytest.approx(1 / 3, abs=1e-12)
        code = construct_binary4(3)
        assert code.values == pytest.approx((0.0, 1 / 3, 2 / 3, 1.0), abs=1e-12)

    def test_four_reads(self):
        # worst inner symbol success is 4x(1-x)^3, maximized at x = 1/4
        assert binary4_beta(4) == pytest.approx(3.0, abs=1e-12)
        assert binary4_alpha(4) == pytest.approx(0.25, abs=1e-12)

    def test_five_reads(self):
        assert binary4_beta(5) == pytest.approx(math.sqrt(6), abs=1e-12)

    def test_converges_to_one_fifth(self):
        odd = [binary4_alpha(n) for n in range(3, 201, 2)]
        even = [binary4_alpha(n) for n in range(4, 201, 2)]
        assert all(a > b for a, b in zip(odd, odd[1:]))
        assert all(a > b for a, b in zip(even, even[1:]))
        assert all(a > 0.2 for a in odd + even)
        assert binary4_alpha(199) == pytest.approx(0.2, abs=0.01)
        assert binary4_alpha(200) == pytest.approx(0.2, abs=0.01)

    def test_two_reads_degenerate(self):
        # 4 codewords cannot all decode among 3 observable distributions
        with pytest.raises(ValueError, match="degenerate"):
            binary4_beta(2)
        with pytest.raises(ValueError):
            construct_binary4(2)

    def test_below_two_rejected(self):
        with pytest.raises(ValueError):
            binary4_beta(1)


class TestBinary4Grid:
    def test_matches_closed_form_small(self):
        for n in (3, 4, 5):
            x_star, f_star = optimize_binary4_grid(n, 1e-3)
            assert x_star == pytest.approx(binary4_alpha(n), abs=1.5e-3)
            code = CompositeCode.binary([0.0, x_star, 1 - x_star, 1.0])
            assert f_star == evaluate_code(code, n).f_min

    def test_even_case_arbitration(self):
        # the even-read closed form beta = C(n-1, n/2-1)^(2/(n-2)) is the one
        # the exhaustive oracle confirms
        for n in (4, 6, 8):
            x_star, _ = optimize_binary4_grid(n, 1e-3)
            assert x_star == pytest.approx(binary4_alpha(n), abs=1.5e-3)

    def test_flat_objective_at_two_reads(self):
        x_star, f_star = optimize_binary4_grid(2, 1e-3)
        assert f_star == 0.0
        assert x_star == pytest.approx(1e-3)  # every grid point ties at zero

    def test_objective_value_is_worst_symbol(self):
        x_star, f_star = optimize_binary4_grid(3, 1e-3)
        assert f_star == pytest.approx(4 / 9, abs=1e-2)  # 3x(1-x)^2 at x=1/3

    def test_step_validation(self):
        with pytest.raises(ValueError):
            optimize_binary4_grid(3, 0.0)
        with pytest.raises(ValueError):
            optimize_binary4_grid(3, 0.1)


class TestSymmetricReflect:
    def test_simple(self):
        code = CompositeCode.binary([0.0, 0.3, 1.0])
        assert symmetric_reflect(code).values == (0.0, 0.7, 1.0)

    def test_symmetric_code_fixed(self):
        code = CompositeCode.binary([Fraction(0), Fraction(1, 3), Fraction(2, 3), Fraction(1)])
        assert symmetric_reflect(code) == code

    def test_involution(self, rng):
        for _ in range(10):
            values = sorted(set(float(v) for v in rng.uniform(0.01, 0.99, size=4)))
            code = CompositeCode.binary(values)
            assert symmetric_reflect(symmetric_reflect(code)) == code

    def test_f_min_preserved_generic(self, rng):
        # no exact likelihood ties for generic float values, so the reflected
        # code has the mirrored success profile
        for _ in range(10):
            values = sorted(set(float(v) for v in rng.uniform(0.02, 0.98, size=4)))
            code = CompositeCode.binary(values)
            n = int(rng.integers(1, 11))
            a = evaluate_code(code, n)
            b = evaluate_code(symmetric_reflect(code), n)
            assert b.f_min == pytest.approx(a.f_min, abs=1e-12)

    def test_non_binary_rejected(self):
        from cdna import construct_base_plus_uniform

        with pytest.raises(ValueError):
            symmetric_reflect(construct_base_plus_uniform(3))


class TestSymmetryProperties:
    def test_reflection_equivariance_sample(self, rng):
        properties.check_reflection_equivariance(rng, trials=10)

    def test_symmetric_pairing_sample(self, rng):
        properties.check_symmetric_pairing(rng, trials=10)

    def test_symmetrization_improvement_sample(self, rng):
        properties.check_symmetrization_improvement(rng, trials=10)
