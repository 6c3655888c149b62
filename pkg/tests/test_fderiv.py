import math

import pytest

from filterderiv import (CONVERGED, NO_LIMIT, BaseNotPuncturedError,
                         DomainError, LimitConfig, QUOTIENT_RULE_NOTE,
                         SetDescriptor, as_function, chain_from_elements,
                         check_linearity, check_product_rule,
                         check_quotient_rule, classical_derivative,
                         derivative, difference_quotient, f_continuity,
                         left_base, parse, punctured_base, right_base,
                         symbolic_derivative_value)
from corpus import PQ_CFG, SMOOTH_CFG

ABS = as_function(parse("abs(x)"))
IDENT = as_function(parse("x"))
SIGN = as_function(parse("sign(x)"))
CFG = LimitConfig()


class TestDifferenceQuotient:
    def test_abs_quotient_is_sign(self):
        q = difference_quotient(ABS, 0.0)
        assert q(0.25) == 1.0
        assert q(-0.25) == -1.0

    def test_constant_quotient_is_zero(self):
        q = difference_quotient(lambda x: 3.25, 7.0)
        assert q(0.5) == 0.0 and q(-2.0) == 0.0

    def test_square_quotient_frozen_values(self):
        # (f(1+h) - f(1))/h = 2 + h, exact in binary at these h
        q = difference_quotient(as_function(parse("x^2")), 1.0)
        assert q(0.5) == 2.5
        assert q(0.25) == 2.25
        assert q(-0.5) == 1.5
        assert q(-0.25) == 1.75

    def test_zero_increment_rejected(self):
        with pytest.raises(DomainError):
            difference_quotient(ABS, 0.0)(0.0)


class TestDerivative:
    def test_abs_right_is_exactly_one(self):
        res = derivative(ABS, 0.0, right_base(1.0, 0.5), CFG)
        assert res.status == CONVERGED
        assert res.value == 1.0

    def test_abs_left_is_exactly_minus_one(self):
        res = derivative(ABS, 0.0, left_base(1.0, 0.5), CFG)
        assert res.status == CONVERGED
        assert res.value == -1.0

    def test_abs_punctured_has_no_limit(self):
        res = derivative(ABS, 0.0, punctured_base(1.0, 0.5), CFG)
        assert res.status == NO_LIMIT
        assert all(r.oscillation == 2.0 for r in res.estimate.trace)

    def test_unpunctured_chain_rejected(self):
        chain = chain_from_elements(
            "with-zero", [SetDescriptor(intervals=((-1.0, 1.0),))])
        with pytest.raises(BaseNotPuncturedError):
            derivative(ABS, 0.0, chain, CFG)

    def test_result_carries_context(self):
        b = right_base(1.0, 0.5)
        res = derivative(ABS, 0.0, b, CFG)
        assert res.base_id == b.id
        assert res.x0 == 0.0
        assert res.cfg == CFG


class TestClassicalDerivative:
    def test_square_at_one(self):
        res = classical_derivative(as_function(parse("x^2")), 1.0, SMOOTH_CFG)
        assert res.status == CONVERGED
        assert abs(res.value - 2.0) <= 2e-6

    def test_constant_is_zero(self):
        res = classical_derivative(lambda x: 4.5, 2.0, CFG)
        assert res.status == CONVERGED
        assert res.value == 0.0

    def test_oscillating_kink_has_no_limit(self):
        f = as_function(parse("x*sin(1/x)"))
        fext = lambda x: 0.0 if x == 0.0 else f(x)
        res = classical_derivative(fext, 0.0, CFG)
        assert res.status == NO_LIMIT


class TestFContinuity:
    def test_abs_continuous_from_right(self):
        rep = f_continuity(ABS, 0.0, right_base(1.0, 0.5), CFG)
        assert rep.is_continuous
        assert rep.target == 0.0
        assert rep.limit.status == CONVERGED

    def test_sign_not_continuous_from_right(self):
        rep = f_continuity(SIGN, 0.0, right_base(1.0, 0.5), CFG)
        assert not rep.is_continuous
        assert rep.limit.status == CONVERGED and rep.limit.value == 1.0

    def test_sign_not_continuous_across_zero(self):
        rep = f_continuity(SIGN, 0.0, punctured_base(1.0, 0.5), CFG)
        assert not rep.is_continuous
        assert rep.limit.status == NO_LIMIT

    def test_undefined_point_raises(self):
        with pytest.raises(DomainError):
            f_continuity(as_function(parse("log(x)")), 0.0,
                         right_base(1.0, 0.5), CFG)


class TestCheckLinearity:
    def test_one_sided_combination(self):
        # 2*abs + 3*x on (0, delta): every quotient is 5 up to rounding in 3*h
        rep = check_linearity(ABS, IDENT, 2.0, 3.0, 0.0,
                              right_base(1.0, 0.5), CFG, 1e-5)
        assert rep.verdict == "holds"
        assert abs(rep.lhs.value - 5.0) <= 1e-12
        assert rep.rhs_value == 5.0
        assert rep.abs_error <= 1e-12

    def test_zero_coefficients(self):
        rep = check_linearity(ABS, IDENT, 0.0, 0.0, 0.0,
                              right_base(1.0, 0.5), CFG, 1e-5)
        assert rep.verdict == "holds"
        assert rep.lhs.value == 0.0 and rep.rhs_value == 0.0

    def test_cancelling_kinks_inconclusive(self):
        # abs - abs == 0 everywhere, but the ingredient derivatives have no
        # limit across 0, so the rule asserts nothing
        rep = check_linearity(ABS, ABS, 1.0, -1.0, 0.0,
                              punctured_base(1.0, 0.5), CFG, 1e-5)
        assert rep.verdict == "inconclusive"
        assert rep.lhs.status == CONVERGED and rep.lhs.value == 0.0
        assert "did not converge" in rep.failure_detail

    def test_smooth_pair(self):
        f = as_function(parse("sin(x)"))
        g = as_function(parse("x^2"))
        rep = check_linearity(f, g, 2.5, -1.5, 0.7, punctured_base(1.0, 0.5),
                              SMOOTH_CFG, 1e-5)
        assert rep.verdict == "holds"
        truth = 2.5 * math.cos(0.7) - 1.5 * 2 * 0.7
        assert abs(rep.rhs_value - truth) <= 1e-5


class TestCheckProductRule:
    def test_abs_squared_at_zero(self):
        rep = check_product_rule(ABS, ABS, 0.0, right_base(1.0, 0.5),
                                 PQ_CFG, 1e-5)
        assert rep.verdict == "holds"
        assert rep.rhs_value == 0.0
        assert abs(rep.lhs.value) <= 1e-5
        assert len(rep.continuity_reports) == 2

    def test_identity_times_constant(self):
        rep = check_product_rule(IDENT, lambda x: 1.0, 0.5,
                                 punctured_base(1.0, 0.5), PQ_CFG, 1e-5)
        assert rep.verdict == "holds"
        assert abs(rep.lhs.value - 1.0) <= 1e-5
        assert rep.rhs_value == 1.0

    def test_sign_factor_is_inconclusive_not_violated(self):
        rep = check_product_rule(IDENT, SIGN, 0.0, punctured_base(1.0, 0.5),
                                 PQ_CFG, 1e-5)
        assert rep.verdict == "inconclusive"
        assert "F-continuous" in rep.failure_detail

    def test_continuity_reported_for_both_factors(self):
        rep = check_product_rule(IDENT, SIGN, 0.0, right_base(1.0, 0.5),
                                 PQ_CFG, 1e-5)
        assert rep.verdict == "inconclusive"
        cont_f, cont_g = rep.continuity_reports
        assert cont_f.is_continuous
        assert not cont_g.is_continuous


class TestCheckQuotientRule:
    def test_identity_over_one_plus_abs(self):
        g = as_function(parse("1+abs(x)"))
        rep = check_quotient_rule(IDENT, g, 0.0, right_base(1.0, 0.5),
                                  PQ_CFG, 1e-5)
        assert rep.verdict == "holds"
        assert rep.rhs_value == 1.0
        assert abs(rep.lhs.value - 1.0) <= 1e-6
        assert QUOTIENT_RULE_NOTE in rep.notes

    def test_constant_denominator_reduces_to_numerator(self):
        f = as_function(parse("sin(x)"))
        rep = check_quotient_rule(f, lambda x: 1.0, 0.3,
                                  punctured_base(1.0, 0.5), PQ_CFG, 1e-5)
        assert rep.verdict == "holds"
        assert abs(rep.rhs_value - math.cos(0.3)) <= 1e-5

    def test_zero_denominator_rejected(self):
        with pytest.raises(ValueError):
            check_quotient_rule(IDENT, IDENT, 0.0, right_base(1.0, 0.5),
                                PQ_CFG, 1e-5)

    def test_sampled_zero_of_g_is_inconclusive(self):
        b = right_base(1.0, 0.5)
        hit = b.sample(0, PQ_CFG.samples_per_level, PQ_CFG.seed)[0]
        g = lambda x: x - hit          # g(0) = -hit != 0, g(hit) = 0
        rep = check_quotient_rule(IDENT, g, 0.0, b, PQ_CFG, 1e-5)
        assert rep.verdict == "inconclusive"
        assert "domain error" in rep.failure_detail


class TestOracleAgreement:
    # classical filter derivative vs the symbolic route, spot check
    @pytest.mark.parametrize("text,x0", [
        ("x^2", 1.0), ("sin(x)", 0.5), ("exp(x/2)", -1.0), ("1/(1+x^2)", 2.0),
    ])
    def test_classical_matches_symbolic(self, text, x0):
        e = parse(text)
        res = classical_derivative(as_function(e), x0, SMOOTH_CFG)
        truth = symbolic_derivative_value(e, "x", x0).value
        assert res.status == CONVERGED
        assert abs(res.value - truth) <= 1e-6 * abs(truth)
