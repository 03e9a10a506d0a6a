import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pwarp import expr as ex
from pwarp.expr import (
    DomainError, ExprSyntaxError, NonFiniteError, UnknownIdentifierError,
    differentiate, evaluate, parse, to_text,
)

from exprgen import random_expr

NAMES = ("x", "y")


def ev(text, **env):
    return evaluate(parse(text, NAMES, ("c",)), {"x": 0.0, "y": 0.0, "c": 2.0, **env})


# parsing and evaluation

@pytest.mark.parametrize("text,value", [
    ("1 + 2*3", 7.0),
    ("2^3^2", 512.0),
    ("-2^2", -4.0),
    ("(1 - 2) - 3", -4.0),
    ("8/4/2", 1.0),
    ("c*x + y", 2 * 1.5 - 1.0),
    ("sin(x)^2 + cos(x)^2", 1.0),
    ("cot(y)", 1 / math.tan(-1.0)),
    ("ln(exp(2))", 2.0),
    ("sqrt(abs(y))", 1.0),
    ("1e-3*1E3", 1.0),
])
def test_evaluation(text, value):
    assert ev(text, x=1.5, y=-1.0) == pytest.approx(value, rel=1e-14)


@pytest.mark.parametrize("text,pos", [("1 +", 3), ("(x", 2), ("x $ y", 2), ("sin x", 4), ("", 0), ("x y", 2)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text, NAMES)
    assert info.value.offset == pos


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse("x + z", NAMES)
    assert info.value.name == "z"
    with pytest.raises(UnknownIdentifierError):
        parse("foo(x)", NAMES)


def test_name_declared_twice_is_rejected():
    with pytest.raises(ex.ExprError):
        parse("x", ("x",), ("x",))


@pytest.mark.parametrize("text", ["ln(x - 1)", "sqrt(-1 - x^2)", "(-1)^0.5"])
def test_domain_errors(text):
    with pytest.raises(DomainError):
        ev(text)


@pytest.mark.parametrize("text", ["1/x", "cot(x)", "exp(1000)"])
def test_non_finite(text):
    with pytest.raises(NonFiniteError):
        ev(text)


def test_interning_makes_equal_trees_identical():
    a = parse("sin(x)*y + 1", NAMES)
    b = parse("sin(x)*y + 1", NAMES)
    assert a is b


def test_evaluator_cache_survives_garbage():
    # values must not leak between distinct short-lived trees
    e = ex.Evaluator({"x": 0.7, "y": -0.2})
    for k in range(200):
        t = ex.mul(ex.const(k + 0.5), ex.var("x"))
        assert e(t) == pytest.approx((k + 0.5) * 0.7)


# differentiation

@pytest.mark.parametrize("text,wrt,expected", [
    ("x^3", "x", "3*x^2"),
    ("sin(x*y)", "x", "y*cos(x*y)"),
    ("x^y", "y", "ln(x)*x^y"),
    ("1/(2 + x^2)", "x", "-2*x/(2 + x^2)^2"),
    ("sqrt(2 + y^2)", "x", "0"),
    ("cot(x)", "x", "-1/sin(x)^2"),
    ("abs(x)", "x", "x/abs(x)"),
])
def test_known_derivatives(text, wrt, expected):
    d = differentiate(parse(text, NAMES), wrt)
    ref = parse(expected, NAMES)
    for x, y in [(0.7, 0.3), (1.9, -1.2)]:
        env = {"x": x, "y": y}
        assert evaluate(d, env) == pytest.approx(evaluate(ref, env), rel=1e-12, abs=1e-14)


def test_finite_difference_shadow_1000_samples():
    """Every generated derivative agrees with a central difference."""
    rng = np.random.default_rng(7)
    h = 1e-6
    checked = 0
    while checked < 1000:
        e = parse(random_expr(rng, NAMES), NAMES)
        for wrt in NAMES:
            d = differentiate(e, wrt)
            for _ in range(5):
                env = {"x": rng.uniform(-1.5, 1.5), "y": rng.uniform(-1.5, 1.5)}
                lo, hi = dict(env), dict(env)
                lo[wrt] -= h
                hi[wrt] += h
                fd = (evaluate(e, hi) - evaluate(e, lo)) / (2 * h)
                exact = evaluate(d, env)
                assert abs(fd - exact) <= 1e-5 * max(1.0, abs(exact)), (to_text(e), wrt, env)
                checked += 1
    assert checked >= 1000


exprs = st.builds(lambda seed, depth: random_expr(np.random.default_rng(seed), NAMES, depth),
                  st.integers(0, 2**32 - 1), st.integers(1, 4))
points = st.tuples(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))


@given(exprs, points)
def test_print_parse_round_trip(text, pt):
    e = parse(text, NAMES)
    back = parse(to_text(e), NAMES)
    env = dict(zip(NAMES, pt))
    assert evaluate(back, env) == pytest.approx(evaluate(e, env), rel=1e-12, abs=1e-12)


@given(exprs, exprs, st.floats(-3, 3), points)
def test_differentiation_is_linear(a, b, lam, pt):
    ea, eb = parse(a, NAMES), parse(b, NAMES)
    combo = ex.add(ex.mul(ex.const(lam), ea), eb)
    env = dict(zip(NAMES, pt))
    lhs = evaluate(differentiate(combo, "x"), env)
    rhs = lam * evaluate(differentiate(ea, "x"), env) + evaluate(differentiate(eb, "x"), env)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


@given(exprs, exprs, points)
def test_product_rule(a, b, pt):
    ea, eb = parse(a, NAMES), parse(b, NAMES)
    env = dict(zip(NAMES, pt))
    lhs = evaluate(differentiate(ex.mul(ea, eb), "y"), env)
    rhs = (evaluate(differentiate(ea, "y"), env) * evaluate(eb, env)
           + evaluate(ea, env) * evaluate(differentiate(eb, "y"), env))
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


@given(exprs)
def test_mixed_partials_commute(text):
    e = parse(text, NAMES)
    dxy = differentiate(differentiate(e, "x"), "y")
    dyx = differentiate(differentiate(e, "y"), "x")
    env = {"x": 0.41, "y": -0.73}
    assert evaluate(dxy, env) == pytest.approx(evaluate(dyx, env), rel=1e-9, abs=1e-9)


def test_free_names_and_dependence():
    e = parse("c*x + 3", NAMES, ("c",))
    assert ex.free_names(e) == {"x"}  # coordinates only
    assert ex.depends_on(e, "x") and not ex.depends_on(e, "y")
    assert differentiate(e, "y") is ex.ZERO
