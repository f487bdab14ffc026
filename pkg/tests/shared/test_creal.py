"""
Tests for certified reals: constants, interval operations, ||x|| and refinement.
"""
import math
import random
from fractions import Fraction

import pytest

from shared.realcore import (
    CONSTANT_IDS,
    CReal,
    arith,
    current_precision_cap,
    decide,
    make_constant,
    nearest_int_distance,
    precision_cap,
    refine,
    settle_sign,
    working_prec,
)
from shared.utils.config import get_settings
from shared.utils.errors import ConfigurationError, PrecisionError

PREC = working_prec(50)


def _exact(value) -> CReal:
    return CReal.exact(value, PREC)


def _truncated(value: CReal, digits: int) -> int:
    """Leading digits shared by every point of the interval."""
    scale = 10**digits
    low, high = math.floor(value.lower * scale), math.floor(value.upper * scale)
    assert low == high
    return low


class TestMakeConstant:
    def test_c1_matches_printed_digits(self):
        assert _truncated(make_constant("c1", 50), 5) == 183157

    def test_c2_matches_printed_digits(self):
        assert _truncated(make_constant("c2", 50), 6) == 545979

    def test_alpha_newton_residual_contains_zero(self):
        alpha = make_constant("alpha", 50)
        residual = alpha * alpha - alpha - 1
        assert residual.contains(0)
        assert alpha.gt(1) is True

    def test_conjugate_products(self):
        assert (make_constant("alpha", 50) * make_constant("beta", 50)).contains(-1)
        assert (make_constant("gamma", 50) * make_constant("delta", 50)).contains(-1)

    @pytest.mark.parametrize("name", CONSTANT_IDS)
    def test_radius_within_requested_precision(self, name):
        value = make_constant(name, 50)
        assert value.radius <= Fraction(1, 10**48)

    def test_unknown_constant(self):
        with pytest.raises(ConfigurationError):
            make_constant("pi", 50)

    def test_precision_floor(self):
        with pytest.raises(ConfigurationError):
            make_constant("alpha", 10)


class TestArith:
    def test_exact_integers_add_exactly(self):
        total = arith("add", _exact(1), _exact(2))
        assert total.lower == total.upper == 3

    def test_multiplying_by_zero_annihilates(self):
        product = arith("mul", make_constant("sqrt2", 50), _exact(0))
        assert product.lower == product.upper == 0

    def test_log_of_alpha_inside_log_alpha(self):
        via_log = arith("log", make_constant("alpha", 200))
        assert make_constant("log_alpha", 40).contains(via_log)

    def test_division_by_interval_containing_zero(self):
        with pytest.raises(PrecisionError):
            arith("div", _exact(1), CReal.from_bounds(-1, 1, PREC))

    def test_log_of_non_positive_interval(self):
        with pytest.raises(PrecisionError):
            arith("log", CReal.from_bounds(0, 1, PREC))

    def test_unknown_operation(self):
        with pytest.raises(ConfigurationError):
            arith("exp", _exact(1))

    def test_random_rational_trees_are_contained(self):
        rng = random.Random(20240607)
        ops = ["add", "sub", "mul", "div", "neg", "abs"]

        def build(depth):
            if depth == 0 or rng.random() < 0.25:
                value = Fraction(rng.randint(-50, 50), rng.randint(1, 30))
                return value, CReal.exact(value, PREC)
            op = rng.choice(ops)
            left_exact, left = build(depth - 1)
            if op in ("neg", "abs"):
                return (-left_exact if op == "neg" else abs(left_exact)), arith(op, left)
            right_exact, right = build(depth - 1)
            if op == "div" and right_exact == 0:
                op = "add"
            exact = {
                "add": lambda: left_exact + right_exact,
                "sub": lambda: left_exact - right_exact,
                "mul": lambda: left_exact * right_exact,
                "div": lambda: left_exact / right_exact,
            }[op]()
            return exact, arith(op, left, right)

        for _ in range(1000):
            exact, value = build(4)
            assert value.contains(exact)


class TestComparisons:
    def test_three_valued_answers(self):
        one_ish = CReal.from_bounds(Fraction(9, 10), Fraction(11, 10), PREC)
        assert one_ish.lt(2) is True
        assert one_ish.lt(0) is False
        assert one_ish.lt(1) is None
        assert one_ish.sign() == 1
        assert CReal.from_bounds(-1, 1, PREC).sign() is None
        assert _exact(0).sign() == 0

    def test_decide_refines_until_known(self):
        sqrt2 = make_constant("sqrt2", 40)
        widened = CReal.from_bounds(Fraction(14, 10), Fraction(15, 10), PREC, sqrt2.expr)
        assert decide(widened, lambda x: x.gt(Fraction(14142135623730950488, 10**19))) is True

    def test_settle_sign_returns_refined_value(self):
        tiny = make_constant("sqrt2", 40) - Fraction(14142135623730950488016887242096980785, 10**37)
        sign, settled = settle_sign(tiny)
        assert sign == 1
        assert settled.sign() == 1


class TestNearestIntDistance:
    def test_exact_decimal(self):
        distance = nearest_int_distance(CReal.exact(Fraction(16, 5), PREC))
        assert distance.contains(Fraction(1, 5))
        assert distance.radius < Fraction(1, 10**40)

    def test_half_is_the_maximum(self):
        distance = nearest_int_distance(CReal.exact(Fraction(1, 2), PREC))
        assert distance.lower == distance.upper == Fraction(1, 2)

    def test_narrow_interval_near_half(self):
        center = Fraction(74999, 10000)
        x = CReal.from_bounds(center - Fraction(1, 10**10), center + Fraction(1, 10**10), PREC)
        distance = nearest_int_distance(x)
        assert distance.contains(Fraction(4999, 10000))
        assert distance.radius <= Fraction(2, 10**10)

    def test_wide_interval_is_rejected(self):
        with pytest.raises(PrecisionError):
            nearest_int_distance(CReal.from_bounds(0, 1, PREC))

    def test_range_and_integer_shift_invariance(self):
        rng = random.Random(7)
        x = make_constant("sqrt2", 100)
        base = nearest_int_distance(x)
        for _ in range(50):
            shift = rng.randint(-(10**36), 10**36)
            shifted = nearest_int_distance(x + shift)
            assert shifted.lower >= 0 and shifted.upper <= Fraction(1, 2)
            assert shifted.overlaps(base)


class TestRefine:
    def test_refined_radius_meets_target_and_overlaps_coarse(self):
        coarse = make_constant("log_gamma", 40) / make_constant("log_alpha", 40)
        target = Fraction(1, 10**200)
        fine = refine(coarse.expr, target)
        assert fine.radius <= target
        assert fine.overlaps(coarse)
        assert coarse.contains(fine)

    def test_method_refine_never_widens(self):
        coarse = make_constant("c1", 40)
        fine = coarse.refine(Fraction(1, 10**120))
        assert fine.radius <= Fraction(1, 10**120)
        assert coarse.contains(fine)

    def test_cap_is_a_hard_failure(self):
        value = make_constant("c1", 40)
        with pytest.raises(PrecisionError):
            refine(value.expr, Fraction(1, 10**500), cap=100)

    def test_interval_without_expression_cannot_refine(self):
        with pytest.raises(PrecisionError):
            CReal.from_bounds(1, 2, PREC).refine(Fraction(1, 10))

    def test_scoped_cap_applies_without_explicit_argument(self):
        value = make_constant("c1", 40)
        with precision_cap(100):
            assert current_precision_cap() == 100
            with pytest.raises(PrecisionError, match="100 digits"):
                refine(value.expr, Fraction(1, 10**500))
        assert current_precision_cap() == get_settings().precision_cap

    def test_nested_scopes_restore_the_outer_cap(self):
        with precision_cap(300):
            with precision_cap(100):
                assert current_precision_cap() == 100
            assert current_precision_cap() == 300
