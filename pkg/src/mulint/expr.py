"""A small complex-expression language.

Grammar (EBNF)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := number | name | name '(' expr ')' | '(' expr ')'
    number := decimal literal, optionally suffixed 'i' (e.g. 2.5i)

Builtin functions: ``exp``, ``log``, ``sin``, ``cos``.  Named constants
``pi``, ``e`` and ``i`` parse to constant nodes.  ``log`` always means the
principal branch (Arg in (-pi, pi]); curve-dependent branch choices live in
the branch-tracking module, never here.  Exponents of ``^`` must reduce to a
constant at parse time; integer exponents are evaluated exactly, other
constants via exp(w * Log z).
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    EvaluationError,
    NonDifferentiableError,
    ParseError,
    UnknownIdentifierError,
)

BUILTIN_FUNCTIONS = ("exp", "log", "sin", "cos")
NAMED_CONSTANTS = {"pi": complex(math.pi), "e": complex(math.e), "i": 1j}


def principal_arg(w: complex) -> float:
    """Principal argument in (-pi, pi]; a signed-zero imaginary part never
    flips Arg(-x) to -pi."""
    im = w.imag
    if im == 0.0:
        im = 0.0  # normalizes -0.0
    return math.atan2(im, w.real)


def principal_log(w: complex) -> complex:
    """Principal branch Log w = ln|w| + i*Arg w."""
    if w == 0:
        raise EvaluationError("log of zero")
    return complex(math.log(abs(w)), principal_arg(w))


# --------------------------------------------------------------------------
# AST


class Expr:
    """Base class for expression nodes.  Nodes are immutable and compare
    structurally."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Const  # enforced at construction time


@dataclass(frozen=True)
class Call(Expr):
    func: str  # one of BUILTIN_FUNCTIONS
    arg: Expr


# --------------------------------------------------------------------------
# Tokenizer / parser

_NUMBER_RE = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?(i?)")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    pos: int
    value: complex = 0j


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        ch = source[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch.isdigit() or ch == ".":
            m = _NUMBER_RE.match(source, pos)
            if not m:
                raise ParseError("malformed number", pos)
            mag = float(m.group(1) + (m.group(2) or ""))
            value = complex(0.0, mag) if m.group(3) else complex(mag, 0.0)
            tokens.append(_Token("num", m.group(0), pos, value))
            pos = m.end()
            continue
        if ch.isalpha() or ch == "_":
            m = _NAME_RE.match(source, pos)
            tokens.append(_Token("name", m.group(0), pos))
            pos = m.end()
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("op", ch, pos))
            pos += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], variables: frozenset[str]):
        self.tokens = tokens
        self.idx = 0
        self.variables = variables

    def peek(self) -> _Token:
        return self.tokens[self.idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, text: str) -> None:
        tok = self.peek()
        if tok.kind != "op" or tok.text != text:
            raise ParseError(f"expected {text!r}", tok.pos)
        self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            exp_pos = self.peek().pos
            exponent = self.factor()
            folded = _fold_constant(exponent)
            if folded is None:
                raise ParseError("exponent must be a constant", exp_pos)
            return Pow(base, Const(folded))
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Const(tok.value)
        if tok.kind == "name":
            self.advance()
            follows_paren = (
                self.peek().kind == "op" and self.peek().text == "("
            )
            if follows_paren:
                if tok.text not in BUILTIN_FUNCTIONS:
                    if tok.text in self.variables or tok.text in NAMED_CONSTANTS:
                        raise ParseError(f"{tok.text!r} is not a function", tok.pos)
                    raise UnknownIdentifierError(
                        f"unknown function {tok.text!r}", tok.pos
                    )
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(tok.text, arg)
            if tok.text in NAMED_CONSTANTS:
                return Const(NAMED_CONSTANTS[tok.text])
            if tok.text in self.variables:
                return Var(tok.text)
            if tok.text in BUILTIN_FUNCTIONS:
                raise ParseError(f"{tok.text} needs an argument list", tok.pos)
            raise UnknownIdentifierError(f"unknown identifier {tok.text!r}", tok.pos)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError("expected expression", tok.pos)


def parse_expression(source: str, variables: set[str] | frozenset[str]) -> Expr:
    """Parse ``source`` into an AST; names must come from ``variables`` or the
    builtins.

    Raises ParseError (with character offset) on malformed input and
    UnknownIdentifierError on undeclared names.
    """
    if not source or not source.strip():
        raise ParseError("empty expression", 0)
    return _Parser(_tokenize(source), frozenset(variables)).parse()


def parse_complex_literal(source: str) -> complex:
    """Evaluate a constant expression such as ``1+2i``, ``-0.5i`` or ``pi/4``."""
    return evaluate(parse_expression(source, frozenset()), {})


# --------------------------------------------------------------------------
# Evaluation


def _check_finite(value: complex) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise EvaluationError("non-finite result")
    return value


def _is_small_integer(c: complex) -> bool:
    return c.imag == 0.0 and abs(c.real) <= 2**31 and float(c.real).is_integer()


def _pow_scalar(base: complex, exponent: complex) -> complex:
    if _is_small_integer(exponent):
        n = int(exponent.real)
        if base == 0 and n < 0:
            raise EvaluationError("zero raised to a negative power")
        return base**n
    return cmath.exp(exponent * principal_log(base))


def evaluate(ast: Expr, bindings: dict[str, complex]) -> complex:
    """Evaluate ``ast`` with complex values bound to its variables.

    Deterministic and side-effect free; raises EvaluationError on log(0),
    division by zero, unbound variables or non-finite results.
    """
    if isinstance(ast, Const):
        return _check_finite(ast.value)
    if isinstance(ast, Var):
        try:
            return complex(bindings[ast.name])
        except KeyError:
            raise EvaluationError(f"unbound variable {ast.name!r}") from None
    if isinstance(ast, Add):
        return _check_finite(evaluate(ast.left, bindings) + evaluate(ast.right, bindings))
    if isinstance(ast, Sub):
        return _check_finite(evaluate(ast.left, bindings) - evaluate(ast.right, bindings))
    if isinstance(ast, Mul):
        return _check_finite(evaluate(ast.left, bindings) * evaluate(ast.right, bindings))
    if isinstance(ast, Div):
        denom = evaluate(ast.right, bindings)
        if denom == 0:
            raise EvaluationError("division by zero")
        return _check_finite(evaluate(ast.left, bindings) / denom)
    if isinstance(ast, Neg):
        return -evaluate(ast.operand, bindings)
    if isinstance(ast, Pow):
        try:
            return _check_finite(
                _pow_scalar(evaluate(ast.base, bindings), ast.exponent.value)
            )
        except OverflowError:
            raise EvaluationError("overflow in power") from None
    if isinstance(ast, Call):
        arg = evaluate(ast.arg, bindings)
        try:
            if ast.func == "exp":
                return _check_finite(cmath.exp(arg))
            if ast.func == "log":
                return principal_log(arg)
            if ast.func == "sin":
                return _check_finite(cmath.sin(arg))
            if ast.func == "cos":
                return _check_finite(cmath.cos(arg))
        except (OverflowError, ValueError) as exc:
            raise EvaluationError(f"{ast.func}: {exc}") from None
    raise EvaluationError(f"cannot evaluate node {type(ast).__name__}")


def _array_log(w: np.ndarray) -> np.ndarray:
    # keep Arg on (-pi, pi]: collapse -0.0 imaginary parts before np.log
    w = np.where(w.imag == 0.0, w.real + 0.0j, w)
    return np.log(w)


def _evaluate_array(ast: Expr, bindings: dict[str, np.ndarray]) -> np.ndarray:
    if isinstance(ast, Const):
        return np.broadcast_to(
            np.complex128(ast.value), _array_shape(bindings)
        ).copy()
    if isinstance(ast, Var):
        try:
            return np.asarray(bindings[ast.name], dtype=np.complex128)
        except KeyError:
            raise EvaluationError(f"unbound variable {ast.name!r}") from None
    if isinstance(ast, Add):
        return _evaluate_array(ast.left, bindings) + _evaluate_array(ast.right, bindings)
    if isinstance(ast, Sub):
        return _evaluate_array(ast.left, bindings) - _evaluate_array(ast.right, bindings)
    if isinstance(ast, Mul):
        return _evaluate_array(ast.left, bindings) * _evaluate_array(ast.right, bindings)
    if isinstance(ast, Div):
        return _evaluate_array(ast.left, bindings) / _evaluate_array(ast.right, bindings)
    if isinstance(ast, Neg):
        return -_evaluate_array(ast.operand, bindings)
    if isinstance(ast, Pow):
        base = _evaluate_array(ast.base, bindings)
        c = ast.exponent.value
        if _is_small_integer(c):
            return base ** int(c.real)
        return np.exp(c * _array_log(base))
    if isinstance(ast, Call):
        arg = _evaluate_array(ast.arg, bindings)
        if ast.func == "exp":
            return np.exp(arg)
        if ast.func == "log":
            return _array_log(arg)
        if ast.func == "sin":
            return np.sin(arg)
        if ast.func == "cos":
            return np.cos(arg)
    raise EvaluationError(f"cannot evaluate node {type(ast).__name__}")


def _array_shape(bindings: dict[str, np.ndarray]) -> tuple[int, ...]:
    for arr in bindings.values():
        return np.shape(arr)
    return ()


def evaluate_array(ast: Expr, bindings: dict[str, np.ndarray]) -> np.ndarray:
    """Vectorized evaluate over numpy arrays of binding values.

    Same semantics as :func:`evaluate` per element; any non-finite element
    (from log(0), division by zero, overflow) raises EvaluationError.
    """
    with np.errstate(all="ignore"):
        out = _evaluate_array(ast, bindings)
    if not np.isfinite(out).all():
        raise EvaluationError("non-finite result in array evaluation")
    return out


# --------------------------------------------------------------------------
# Symbolic differentiation


def _fold_constant(ast: Expr) -> complex | None:
    """Value of a constant subtree, or None if it contains variables or does
    not evaluate cleanly."""
    try:
        return evaluate(ast, {})
    except EvaluationError:
        return None


_ZERO = Const(0j)
_ONE = Const(complex(1.0))


def _is_const(node: Expr, value: complex) -> bool:
    return isinstance(node, Const) and node.value == value


def simplify(ast: Expr) -> Expr:
    """Constant folding plus identity elimination (x*1 -> x, x+0 -> x, ...).

    Deliberately not a CAS: no reassociation, no cancellation."""
    if isinstance(ast, (Const, Var)):
        return ast
    if isinstance(ast, Neg):
        inner = simplify(ast.operand)
        if isinstance(inner, Const):
            return Const(-inner.value)
        return Neg(inner)
    if isinstance(ast, Call):
        arg = simplify(ast.arg)
        node: Expr = Call(ast.func, arg)
        if isinstance(arg, Const):
            folded = _fold_constant(node)
            if folded is not None:
                return Const(folded)
        return node
    if isinstance(ast, Pow):
        base = simplify(ast.base)
        c = ast.exponent.value
        if c == 0:
            return _ONE
        if c == 1:
            return base
        node = Pow(base, ast.exponent)
        if isinstance(base, Const):
            folded = _fold_constant(node)
            if folded is not None:
                return Const(folded)
        return node

    left = simplify(ast.left)  # type: ignore[attr-defined]
    right = simplify(ast.right)  # type: ignore[attr-defined]
    kind = type(ast)
    if isinstance(left, Const) and isinstance(right, Const):
        folded = _fold_constant(kind(left, right))  # type: ignore[call-arg]
        if folded is not None:
            return Const(folded)
    if kind is Add:
        if _is_const(left, 0):
            return right
        if _is_const(right, 0):
            return left
    elif kind is Sub:
        if _is_const(right, 0):
            return left
        if _is_const(left, 0):
            return Neg(right)
    elif kind is Mul:
        if _is_const(left, 0) or _is_const(right, 0):
            return _ZERO
        if _is_const(left, 1):
            return right
        if _is_const(right, 1):
            return left
    elif kind is Div:
        if _is_const(right, 1):
            return left
    return kind(left, right)  # type: ignore[call-arg]


def _derivative(ast: Expr, var: str) -> Expr:
    if isinstance(ast, Const):
        return _ZERO
    if isinstance(ast, Var):
        return _ONE if ast.name == var else _ZERO
    if isinstance(ast, Add):
        return Add(_derivative(ast.left, var), _derivative(ast.right, var))
    if isinstance(ast, Sub):
        return Sub(_derivative(ast.left, var), _derivative(ast.right, var))
    if isinstance(ast, Mul):
        return Add(
            Mul(_derivative(ast.left, var), ast.right),
            Mul(ast.left, _derivative(ast.right, var)),
        )
    if isinstance(ast, Div):
        return Div(
            Sub(
                Mul(_derivative(ast.left, var), ast.right),
                Mul(ast.left, _derivative(ast.right, var)),
            ),
            Pow(ast.right, Const(complex(2.0))),
        )
    if isinstance(ast, Neg):
        return Neg(_derivative(ast.operand, var))
    if isinstance(ast, Pow):
        c = ast.exponent.value
        # d(u^c) = c * u^(c-1) * u'; exact for integer c, and consistent with
        # the principal-branch definition exp(c Log u) otherwise.
        return Mul(
            Mul(ast.exponent, Pow(ast.base, Const(c - 1))),
            _derivative(ast.base, var),
        )
    if isinstance(ast, Call):
        inner = _derivative(ast.arg, var)
        if ast.func == "exp":
            return Mul(Call("exp", ast.arg), inner)
        if ast.func == "log":
            return Div(inner, ast.arg)
        if ast.func == "sin":
            return Mul(Call("cos", ast.arg), inner)
        if ast.func == "cos":
            return Neg(Mul(Call("sin", ast.arg), inner))
    raise NonDifferentiableError(f"cannot differentiate node {type(ast).__name__}")


def differentiate(ast: Expr, var: str) -> Expr:
    """Symbolic derivative of ``ast`` with respect to ``var``."""
    return simplify(_derivative(ast, var))


# --------------------------------------------------------------------------
# Substitution and printing


def substitute(ast: Expr, name: str, replacement: Expr) -> Expr:
    """Replace every occurrence of variable ``name`` by ``replacement``."""
    if isinstance(ast, Var):
        return replacement if ast.name == name else ast
    if isinstance(ast, Const):
        return ast
    if isinstance(ast, Neg):
        return Neg(substitute(ast.operand, name, replacement))
    if isinstance(ast, Pow):
        return Pow(substitute(ast.base, name, replacement), ast.exponent)
    if isinstance(ast, Call):
        return Call(ast.func, substitute(ast.arg, name, replacement))
    kind = type(ast)
    return kind(  # type: ignore[call-arg]
        substitute(ast.left, name, replacement),  # type: ignore[attr-defined]
        substitute(ast.right, name, replacement),  # type: ignore[attr-defined]
    )


def bind_constants(ast: Expr, constants: dict[str, complex]) -> Expr:
    """Substitute constant values for the named variables."""
    for name, value in constants.items():
        ast = substitute(ast, name, Const(complex(value)))
    return ast


_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _format_real(x: float) -> str:
    return repr(float(x))


def _const_source(value: complex) -> tuple[str, int]:
    re_, im = value.real, value.imag
    if im == 0.0:
        if re_ >= 0:
            return _format_real(re_), _PREC_ATOM
        return f"-{_format_real(-re_)}", _PREC_NEG
    if re_ == 0.0:
        if im >= 0:
            return f"{_format_real(im)}i", _PREC_ATOM
        return f"-{_format_real(-im)}i", _PREC_NEG
    sign = "+" if im > 0 else "-"
    return (
        f"({_format_real(re_)}{sign}{_format_real(abs(im))}i)"
        if re_ >= 0
        else f"(-{_format_real(-re_)}{sign}{_format_real(abs(im))}i)",
        _PREC_ATOM,
    )


def _render(ast: Expr, min_prec: int) -> str:
    if isinstance(ast, Const):
        text, prec = _const_source(ast.value)
        return f"({text})" if prec < min_prec else text
    if isinstance(ast, Var):
        return ast.name
    if isinstance(ast, Call):
        return f"{ast.func}({_render(ast.arg, 0)})"
    if isinstance(ast, Neg):
        text = "-" + _render(ast.operand, _PREC_NEG)
        return f"({text})" if _PREC_NEG < min_prec else text
    if isinstance(ast, Pow):
        text = _render(ast.base, _PREC_ATOM) + "^" + _render(ast.exponent, _PREC_NEG)
        return f"({text})" if _PREC_POW < min_prec else text
    if isinstance(ast, (Add, Sub)):
        op = "+" if isinstance(ast, Add) else "-"
        text = _render(ast.left, _PREC_ADD) + op + _render(ast.right, _PREC_ADD + 1)
        return f"({text})" if _PREC_ADD < min_prec else text
    if isinstance(ast, (Mul, Div)):
        op = "*" if isinstance(ast, Mul) else "/"
        text = _render(ast.left, _PREC_MUL) + op + _render(ast.right, _PREC_MUL + 1)
        return f"({text})" if _PREC_MUL < min_prec else text
    raise TypeError(f"not an expression node: {ast!r}")


def to_source(ast: Expr) -> str:
    """Render an AST back to parseable source.

    For ASTs producible by the grammar (constants are unsigned real or
    unsigned imaginary literals) the round trip parse(to_source(ast))
    reproduces the tree structurally.
    """
    return _render(ast, 0)
