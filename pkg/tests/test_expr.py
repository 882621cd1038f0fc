import math

import numpy as np
import pytest

from causal2d.errors import EvalError, ParseError
from causal2d.expr import (
    Bin,
    Call,
    Neg,
    Num,
    Var,
    compile_expr,
    evaluate,
    free_vars,
    parse,
    to_source,
)


def test_parse_power_sum():
    ast = parse("u^3+u")
    assert ast == Bin("+", Bin("^", Var("u"), Num(3.0)), Var("u"))
    assert evaluate(ast, {"u": 2.0}) == 10.0


def test_parse_call_and_product():
    assert evaluate(parse("sin(v) - 2*u"), {"u": 0.0, "v": 0.0}) == 0.0


def test_incomplete_input_offset():
    with pytest.raises(ParseError) as err:
        parse("u+")
    assert err.value.offset == 2


def test_unknown_identifier():
    with pytest.raises(ParseError):
        parse("w + 1")
    with pytest.raises(ParseError):
        parse("foo(u)")


def test_abs_eval():
    assert evaluate(parse("abs(u)"), {"u": -3.0}) == 3.0


def test_division_by_zero():
    with pytest.raises(EvalError):
        evaluate(parse("1/u"), {"u": 0.0})


def test_exp_library_constant():
    assert evaluate(parse("exp(v)"), {"v": 1.0}) == pytest.approx(math.e, abs=5e-16)


def test_precedence():
    assert evaluate(parse("2+3*4"), {}) == 14.0
    assert evaluate(parse("2^3^2"), {}) == 512.0  # right-associative
    # ^ binds tighter than unary minus
    assert evaluate(parse("-2^2"), {}) == -4.0
    assert evaluate(parse("2^-2"), {}) == 0.25


def test_no_implicit_multiplication():
    with pytest.raises(ParseError):
        parse("2u")


def test_unbound_variable():
    with pytest.raises(EvalError):
        evaluate(parse("u+v"), {"u": 1.0})


def test_sqrt_negative():
    with pytest.raises(EvalError):
        evaluate(parse("sqrt(u)"), {"u": -1.0})


def test_vectorized_eval():
    fn = compile_expr("u^2 + sin(v)", ("u", "v"))
    U = np.linspace(-1, 1, 7)
    V = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(fn(U, V), U**2 + np.sin(V), rtol=0, atol=0)


def test_compile_rejects_stray_variables():
    with pytest.raises(EvalError):
        compile_expr("u + t", ("u", "v"))


def _random_ast(rng, depth):
    kind = rng.choice(
        ["num", "var", "neg", "bin", "call"] if depth > 0 else ["num", "var"]
    )
    if kind == "num":
        return Num(float(rng.integers(0, 50)) / 4.0)
    if kind == "var":
        return Var(str(rng.choice(["u", "v", "t", "x", "s"])))
    if kind == "neg":
        return Neg(_random_ast(rng, depth - 1))
    if kind == "call":
        fn = str(rng.choice(["sin", "cos", "exp", "abs", "sqrt", "tanh"]))
        return Call(fn, _random_ast(rng, depth - 1))
    op = str(rng.choice(["+", "-", "*", "/", "^"]))
    return Bin(op, _random_ast(rng, depth - 1), _random_ast(rng, depth - 1))


def test_print_parse_roundtrip_corpus():
    rng = np.random.default_rng(42)
    for _ in range(200):
        ast = _random_ast(rng, 4)
        assert parse(to_source(ast)) == ast


def test_deterministic_evaluation():
    src = "exp(u) * sin(v) - u^3 / (2 + v^2)"
    bindings = {"u": 0.3173, "v": -0.718}
    a = evaluate(parse(src), bindings)
    b = evaluate(parse(src), bindings)
    assert a == b


def test_free_vars():
    assert free_vars(parse("u^2 + sin(v) - s")) == {"u", "v", "s"}
