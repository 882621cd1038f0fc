"""Small arithmetic expression language for fields, maps and 1-D functions.

Grammar (EBNF):

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := unary ("^" factor)?
    unary  := "-" unary | atom
    atom   := number | ident | ident "(" expr ")" | "(" expr ")"

``^`` binds tighter than unary minus and is right-associative, so
``-u^2`` is ``-(u^2)`` and ``2^3^2`` is ``2^(3^2)``.  There is no
implicit multiplication ("2u" is a syntax error).  Evaluation is plain
IEEE double precision and accepts numpy arrays for the bindings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .errors import EvalError, ParseError

VARIABLES = frozenset({"u", "v", "t", "x", "s"})

_FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "abs": np.abs,
    "sqrt": np.sqrt,
    "tanh": np.tanh,
}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, Bin, Call]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == pos:
            # skip pure whitespace tail before declaring an error
            rest = source[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ParseError(f"unexpected character {source[bad]!r}", bad)
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    """Recursive-descent parser with Pratt-style binding powers."""

    # left binding powers; ^ handled in _factor for right associativity
    _LBP = {"+": 10, "-": 10, "*": 20, "/": 20}

    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def cur(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, text, offset = self.cur
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", offset)
        self.advance()

    def parse(self) -> Expr:
        e = self.expr(0)
        kind, text, offset = self.cur
        if kind != "end":
            raise ParseError(f"unexpected token {text!r}", offset)
        return e

    def expr(self, rbp: int) -> Expr:
        left = self.unary()
        while True:
            kind, text, _ = self.cur
            if kind != "op" or text not in self._LBP or self._LBP[text] <= rbp:
                return left
            self.advance()
            right = self.expr(self._LBP[text])
            left = Bin(text, left, right)

    def unary(self) -> Expr:
        kind, text, _ = self.cur
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.factor()

    def factor(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.cur
        if kind == "op" and text == "^":
            self.advance()
            # right-associative; exponent may itself carry a unary minus
            exponent = self.unary_or_factor()
            return Bin("^", base, exponent)
        return base

    def unary_or_factor(self) -> Expr:
        kind, text, _ = self.cur
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary_or_factor())
        return self.factor()

    def atom(self) -> Expr:
        kind, text, offset = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            nkind, ntext, _ = self.cur
            if nkind == "op" and ntext == "(":
                if text not in _FUNCTIONS:
                    raise ParseError(f"unknown function {text!r}", offset)
                self.advance()
                arg = self.expr(0)
                self.expect_op(")")
                return Call(text, arg)
            if text not in VARIABLES:
                raise ParseError(f"unknown identifier {text!r}", offset)
            return Var(text)
        if kind == "op" and text == "(":
            e = self.expr(0)
            self.expect_op(")")
            return e
        raise ParseError("expected a number, identifier or '('", offset)


def parse(source: str) -> Expr:
    """Parse ``source`` into an AST, raising :class:`ParseError` on failure."""
    return _Parser(source).parse()


def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, Neg):
        return free_vars(e.operand)
    if isinstance(e, Call):
        return free_vars(e.arg)
    return free_vars(e.left) | free_vars(e.right)


def evaluate(e: Expr, bindings: Mapping[str, object]):
    """Evaluate ``e`` with variables bound to scalars or numpy arrays.

    Raises :class:`EvalError` for unbound variables and for IEEE domain
    faults (division by zero, sqrt of a negative, overflow).
    """
    missing = free_vars(e) - set(bindings)
    if missing:
        raise EvalError(f"unbound variable(s): {', '.join(sorted(missing))}")
    try:
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            result = _eval(e, bindings)
    except FloatingPointError as exc:
        raise EvalError(f"domain fault while evaluating: {exc}") from exc
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise EvalError(f"domain fault while evaluating: {exc}") from exc
    if np.isscalar(result) or isinstance(result, (int, float)):
        return float(result)
    return result


def _eval(e: Expr, env: Mapping[str, object]):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Neg):
        return -_eval(e.operand, env)
    if isinstance(e, Call):
        arg = _eval(e.arg, env)
        if e.fn == "sqrt":
            arr = np.asarray(arg, dtype=float)
            if np.any(arr < 0.0):
                raise EvalError("sqrt of a negative value")
        return _FUNCTIONS[e.fn](arg)
    left = _eval(e.left, env)
    right = _eval(e.right, env)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    if e.op == "*":
        return left * right
    if e.op == "/":
        divisor = np.asarray(right, dtype=float)
        if np.any(divisor == 0.0):
            raise EvalError("division by zero")
        return left / right
    # power: guard fractional powers of negatives (would go complex/NaN)
    base = np.asarray(left, dtype=float)
    expo = np.asarray(right, dtype=float)
    if np.any((base < 0.0) & (expo != np.round(expo))):
        raise EvalError("fractional power of a negative value")
    if np.any((base == 0.0) & (expo < 0.0)):
        raise EvalError("zero raised to a negative power")
    return base ** expo


_PRECEDENCE = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}


def to_source(e: Expr) -> str:
    """Render an AST back to source.

    ``parse(to_source(e)) == e`` for any tree the parser can produce
    (negative literals come out of the parser as ``Neg(Num(..))``, so a
    hand-built ``Num(-3.0)`` reparses to that normal form instead).
    """
    return _print(e, 0)


def _print(e: Expr, parent_bp: int) -> str:
    if isinstance(e, Num):
        v = e.value
        text = repr(int(v)) if float(v).is_integer() and abs(v) < 1e16 else repr(v)
        return text
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({_print(e.arg, 0)})"
    if isinstance(e, Neg):
        # unary minus binds between * and ^
        inner = _print(e.operand, 25)
        text = f"-{inner}"
        return f"({text})" if parent_bp > 25 else text
    bp = _PRECEDENCE[e.op]
    if e.op == "^":
        left = _print(e.left, bp)  # left operand must bind tighter
        right = _print(e.right, bp - 1)  # right-associative
    else:
        left = _print(e.left, bp - 1)
        right = _print(e.right, bp)
    text = f"{left}{e.op}{right}"
    return f"({text})" if parent_bp >= bp else text


def compile_expr(source: str, variables: tuple[str, ...]):
    """Parse ``source`` and return a vectorized callable of ``variables``.

    The callable accepts numpy arrays (or scalars) positionally, one per
    name in ``variables``, and raises :class:`EvalError` if the expression
    references any other variable.
    """
    ast = parse(source)
    extra = free_vars(ast) - set(variables)
    if extra:
        raise EvalError(
            f"expression uses {', '.join(sorted(extra))}; "
            f"allowed here: {', '.join(variables)}"
        )

    def fn(*args):
        return evaluate(ast, dict(zip(variables, args)))

    return fn
