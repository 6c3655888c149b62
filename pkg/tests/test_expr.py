import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filterderiv import (Binary, Call, Constant, DomainError, ParseError,
                         Unary, UnboundVariableError, Variable, as_function,
                         evaluate, free_vars, parse, render)


class TestParse:
    def test_abs_call(self):
        assert parse("abs(x)") == Call("abs", (Variable("x"),))

    def test_nested_structure(self):
        assert parse("x*sin(1/x)") == Binary(
            "mul", Variable("x"),
            Call("sin", (Binary("div", Constant(1.0), Variable("x")),)))

    def test_syntax_error_offset(self):
        with pytest.raises(ParseError) as exc:
            parse("x +* 2")
        assert exc.value.offset == 3

    def test_trailing_garbage_rejected(self):
        with pytest.raises(ParseError):
            parse("2+2 x")

    def test_unknown_function_rejected(self):
        with pytest.raises(ParseError):
            parse("foo(x)")

    def test_arity_checked(self):
        with pytest.raises(ParseError):
            parse("min(x)")
        with pytest.raises(ParseError):
            parse("abs(x, 1)")

    def test_pow_right_associative(self):
        assert evaluate(parse("2^3^2"), {}) == 512.0

    def test_unary_minus_binds_tighter_than_pow(self):
        # per the grammar, -x^2 is (-x)^2
        assert evaluate(parse("-x^2"), {"x": 3.0}) == 9.0
        assert evaluate(parse("-(x^2)"), {"x": 3.0}) == -9.0

    def test_left_associative_sub_div(self):
        assert evaluate(parse("8-3-2"), {}) == 3.0
        assert evaluate(parse("8/2/2"), {}) == 2.0

    def test_number_forms(self):
        assert parse("2.5e-3") == Constant(2.5e-3)
        assert parse("7") == Constant(7.0)

    def test_whitespace_insignificant(self):
        assert parse(" min ( x , 1 ) ") == parse("min(x,1)")


class TestEvaluate:
    def test_abs(self):
        assert evaluate(parse("abs(x)"), {"x": -3.0}) == 3.0

    def test_sign_zero_convention(self):
        assert evaluate(parse("sign(x)"), {"x": 0.0}) == 0.0
        assert evaluate(parse("sign(x)"), {"x": -2.0}) == -1.0

    @pytest.mark.parametrize("text,env", [
        ("log(x)", {"x": -1.0}),
        ("log(x)", {"x": 0.0}),
        ("sqrt(x)", {"x": -4.0}),
        ("1/x", {"x": 0.0}),
        ("x^0.5", {"x": -2.0}),
        ("exp(x)", {"x": 1e6}),       # overflow surfaces as a domain error
        ("x*x", {"x": 1e300}),
    ])
    def test_domain_errors(self, text, env):
        with pytest.raises(DomainError):
            evaluate(parse(text), env)

    def test_integer_power_of_negative_base(self):
        assert evaluate(parse("x^3"), {"x": -2.0}) == -8.0

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariableError):
            evaluate(parse("x+y"), {"x": 1.0})

    def test_min_max(self):
        assert evaluate(parse("min(x, 2)"), {"x": 5.0}) == 2.0
        assert evaluate(parse("max(x, 2)"), {"x": 5.0}) == 5.0

    def test_deterministic(self):
        e = parse("sin(x)*exp(x/3)-sqrt(1+x^2)")
        a = evaluate(e, {"x": 0.7310585})
        b = evaluate(e, {"x": 0.7310585})
        assert a == b


class TestFreeVars:
    @pytest.mark.parametrize("text,names", [
        ("2+2", set()),
        ("abs(x)", {"x"}),
        ("x*y", {"x", "y"}),
        ("min(a, b)+a", {"a", "b"}),
    ])
    def test_examples(self, text, names):
        assert free_vars(parse(text)) == names


class TestAsFunction:
    def test_single_variable(self):
        f = as_function(parse("x^2+1"))
        assert f(3.0) == 10.0

    def test_rejects_two_variables(self):
        with pytest.raises(ValueError):
            as_function(parse("x*y"))

    def test_constant_expression(self):
        f = as_function(parse("4-1"))
        assert f(123.0) == 3.0


_leaf = st.one_of(
    st.builds(Constant, st.floats(min_value=0.0, max_value=1e6,
                                  allow_nan=False, allow_infinity=False)),
    st.builds(Variable, st.sampled_from(["x", "y", "t_0"])),
)


def _compound(children):
    return st.one_of(
        st.builds(Unary, st.just("neg"), children),
        st.builds(Binary, st.sampled_from(["add", "sub", "mul", "div", "pow"]),
                  children, children),
        st.builds(lambda f, a: Call(f, (a,)),
                  st.sampled_from(["abs", "sign", "sin", "cos", "tan",
                                   "exp", "log", "sqrt"]), children),
        st.builds(lambda f, a, b: Call(f, (a, b)),
                  st.sampled_from(["min", "max"]), children, children),
    )


_expr_trees = st.recursive(_leaf, _compound, max_leaves=25)


class TestRender:
    @settings(max_examples=200, deadline=None)
    @given(_expr_trees)
    def test_round_trip(self, tree):
        assert parse(render(tree)) == tree

    @pytest.mark.parametrize("text", [
        "x*sin(1/x)", "a-(b-c)", "a/(b*c)", "(a+b)*c", "2^3^2", "(2^3)^2",
        "-x^2", "-(x+1)", "min(x,max(y,1))", "x-y-z", "abs(x)+1e-09",
    ])
    def test_reparse_is_identity_on_strings(self, text):
        tree = parse(text)
        assert parse(render(tree)) == tree
