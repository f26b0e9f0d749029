"""
Closed-form analytic expressions in one variable: AST, parser, serializer,
normalizer and symbolic derivative.

Grammar::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | atom ("^" UINT)?
    atom   := RATIONAL | DECIMAL | "pi" | "x" | FUNC "(" expr ")" | "(" expr ")"
    FUNC   := "exp" | "sin" | "cos" | "sinh" | "cosh"

``^`` is non-associative, ``1/2`` without spaces is a single rational literal
and decimal literals are read as exact rationals.
"""

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from anideal.exceptions import DivisionByZeroConstant, ExpressionSyntaxError
from anideal.utils.logger import logger_setup

log = logger_setup(__name__)

Operand = Union["Expr", int, Fraction]


class Expr:
    """Base class of every expression node; nodes are immutable."""

    def __add__(self, other: Operand) -> "Expr":
        return Add(self, lift(other))

    def __radd__(self, other: Operand) -> "Expr":
        return Add(lift(other), self)

    def __sub__(self, other: Operand) -> "Expr":
        return Sub(self, lift(other))

    def __rsub__(self, other: Operand) -> "Expr":
        return Sub(lift(other), self)

    def __mul__(self, other: Operand) -> "Expr":
        return Mul(self, lift(other))

    def __rmul__(self, other: Operand) -> "Expr":
        return Mul(lift(other), self)

    def __truediv__(self, other: Operand) -> "Expr":
        return Div(self, lift(other))

    def __rtruediv__(self, other: Operand) -> "Expr":
        return Div(lift(other), self)

    def __pow__(self, exponent: int) -> "Expr":
        return IntPow(self, exponent)

    def __neg__(self) -> "Expr":
        return Neg(self)

    def __str__(self) -> str:
        return serialize(self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class PiConst(Expr):
    pass


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


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
class IntPow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self) -> None:
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, int):
            raise TypeError("exponent must be an integer")
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sinh(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cosh(Expr):
    arg: Expr


Unary = Neg | Exp | Sin | Cos | Sinh | Cosh
Binary = Add | Sub | Mul | Div

FUNCTIONS: dict[str, type[Expr]] = {
    "exp": Exp,
    "sin": Sin,
    "cos": Cos,
    "sinh": Sinh,
    "cosh": Cosh,
}
_FUNCTION_NAMES = {cls: name for name, cls in FUNCTIONS.items()}

X = Var()
PI = PiConst()
ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def lift(value: Operand) -> Expr:
    """Wrap a rational number as a constant node."""
    if isinstance(value, Expr):
        return value
    return Const(Fraction(value))


# --- parsing ----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+|/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)
_UINT = re.compile(r"\s*(\d+)")
_SPACE = re.compile(r"\s*")

_ATOM_START = frozenset({"number", "x", "pi", "(", "-", *FUNCTIONS})


@dataclass(frozen=True)
class _Token:
    kind: str  # number, name, op or eof
    text: str
    start: int
    end: int


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self._peeked: _Token | None = None

    def _offset(self, char_index: int) -> int:
        return len(self.text[:char_index].encode("utf-8"))

    def _error(self, token: _Token, expected: frozenset[str] | set[str]) -> None:
        raise ExpressionSyntaxError(self._offset(token.start), expected, token.text)

    def peek(self) -> _Token:
        if self._peeked is None:
            self._peeked = self._scan()
        return self._peeked

    def _scan(self) -> _Token:
        space = _SPACE.match(self.text, self.pos)
        start = space.end() if space else self.pos
        if start >= len(self.text):
            return _Token("eof", "", start, start)
        m = _TOKEN.match(self.text, self.pos)
        if m is None or m.end() == self.pos:
            raise ExpressionSyntaxError(
                self._offset(start), _ATOM_START | {"+", "*", "/", "^", ")"},
                self.text[start],
            )
        kind = m.lastgroup or "op"
        return _Token(kind, m.group(kind), m.start(kind), m.end())

    def advance(self) -> _Token:
        token = self.peek()
        self.pos = token.end
        self._peeked = None
        return token

    def expect_op(self, op: str) -> None:
        token = self.peek()
        if token.kind != "op" or token.text != op:
            self._error(token, {op})
        self.advance()

    def expect_uint(self) -> int:
        # Scanned directly so that "x^2/3" reads as (x^2)/3.
        self._peeked = None
        m = _UINT.match(self.text, self.pos)
        if m is None:
            token = self._scan()
            self._error(token, {"UINT"})
            raise AssertionError  # unreachable
        self.pos = m.end()
        return int(m.group(1))

    def parse(self) -> Expr:
        node = self.expr()
        token = self.peek()
        if token.kind != "eof":
            self._error(token, {"+", "-", "*", "/", "EOF"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while (token := self.peek()).kind == "op" and token.text in "+-":
            self.advance()
            right = self.term()
            node = Add(node, right) if token.text == "+" else Sub(node, right)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while (token := self.peek()).kind == "op" and token.text in "*/":
            self.advance()
            right = self.factor()
            node = Mul(node, right) if token.text == "*" else Div(node, right)
        return node

    def factor(self) -> Expr:
        token = self.peek()
        if token.kind == "op" and token.text == "-":
            self.advance()
            operand = self.factor()
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Neg(operand)
        base = self.atom()
        token = self.peek()
        if token.kind == "op" and token.text == "^":
            self.advance()
            return IntPow(base, self.expect_uint())
        return base

    def atom(self) -> Expr:
        token = self.peek()
        if token.kind == "number":
            if re.search(r"/0+$", token.text):
                self._error(token, {"nonzero denominator"})
            self.advance()
            return Const(_number(token.text))
        if token.kind == "name":
            if token.text == "x":
                self.advance()
                return X
            if token.text == "pi":
                self.advance()
                return PI
            if token.text in FUNCTIONS:
                self.advance()
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return FUNCTIONS[token.text](inner)  # type: ignore[call-arg]
        if token.kind == "op" and token.text == "(":
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        self._error(token, _ATOM_START)
        raise AssertionError  # unreachable


def _number(text: str) -> Fraction:
    if "." in text:
        whole, digits = text.split(".")
        return Fraction(int(whole + digits), 10 ** len(digits))
    return Fraction(text)


def parse(text: str) -> Expr:
    """
    Parse expression text into an AST.

    :param text: expression source
    :return: the expression tree
    :raises ExpressionSyntaxError: with the byte offset of the offending token
    """
    return _Parser(text).parse()


# --- serialization ------------------------------------------------------------

_ADDITIVE = 1
_MULTIPLICATIVE = 2
_PREFIX = 3
_POWER = 4
_ATOM = 5


def _precedence(node: Expr) -> int:
    match node:
        case Add() | Sub():
            return _ADDITIVE
        case Mul() | Div():
            return _MULTIPLICATIVE
        case Neg():
            return _PREFIX
        case Const(value=value) if value < 0:
            return _PREFIX
        case IntPow():
            return _POWER
        case _:
            return _ATOM


def _wrap(node: Expr, minimum: int) -> str:
    text = serialize(node)
    return f"({text})" if _precedence(node) < minimum else text


def _const_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def serialize(node: Expr) -> str:
    """
    Canonical text with minimal parentheses.

    A divisor whose text starts with a digit is set off by spaces so that it
    cannot fuse with its neighbour into a rational literal.
    """
    match node:
        case Const(value=value):
            return _const_text(value)
        case PiConst():
            return "pi"
        case Var():
            return "x"
        case Neg(arg=arg):
            return "-" + _wrap(arg, _PREFIX)
        case Add(left=left, right=right):
            return f"{_wrap(left, _ADDITIVE)} + {_wrap(right, _MULTIPLICATIVE)}"
        case Sub(left=left, right=right):
            return f"{_wrap(left, _ADDITIVE)} - {_wrap(right, _MULTIPLICATIVE)}"
        case Mul(left=left, right=right):
            return f"{_wrap(left, _MULTIPLICATIVE)}*{_wrap(right, _PREFIX)}"
        case Div(left=left, right=right):
            divisor = _wrap(right, _PREFIX)
            sep = " / " if divisor[0].isdigit() else "/"
            return f"{_wrap(left, _MULTIPLICATIVE)}{sep}{divisor}"
        case IntPow(base=base, exponent=exponent):
            if isinstance(base, Const) and base.value.denominator != 1:
                return f"({serialize(base)})^{exponent}"
            return f"{_wrap(base, _ATOM)}^{exponent}"
        case Exp(arg=arg) | Sin(arg=arg) | Cos(arg=arg) | Sinh(arg=arg) | Cosh(arg=arg):
            return f"{_FUNCTION_NAMES[type(node)]}({serialize(arg)})"
    raise TypeError(f"unknown expression node {node!r}")


# --- normalization ------------------------------------------------------------


def _is(node: Expr, value: int) -> bool:
    return isinstance(node, Const) and node.value == value


def normalize(node: Expr) -> Expr:
    """
    Fold constant subtrees exactly and apply the unit/annihilator identities.

    0/e is left alone: e may vanish, and only the analyticity check may decide.

    :raises DivisionByZeroConstant: when a constant denominator folds to 0
    """
    match node:
        case Const() | PiConst() | Var():
            return node
        case Neg(arg=arg):
            arg = normalize(arg)
            if isinstance(arg, Const):
                return Const(-arg.value)
            return Neg(arg)
        case Add(left=left, right=right):
            left, right = normalize(left), normalize(right)
            if isinstance(left, Const) and isinstance(right, Const):
                return Const(left.value + right.value)
            if _is(left, 0):
                return right
            if _is(right, 0):
                return left
            return Add(left, right)
        case Sub(left=left, right=right):
            left, right = normalize(left), normalize(right)
            if isinstance(left, Const) and isinstance(right, Const):
                return Const(left.value - right.value)
            if _is(right, 0):
                return left
            if _is(left, 0):
                return Neg(right)
            return Sub(left, right)
        case Mul(left=left, right=right):
            left, right = normalize(left), normalize(right)
            if isinstance(left, Const) and isinstance(right, Const):
                return Const(left.value * right.value)
            if _is(left, 0) or _is(right, 0):
                return ZERO
            if _is(left, 1):
                return right
            if _is(right, 1):
                return left
            return Mul(left, right)
        case Div(left=left, right=right):
            left, right = normalize(left), normalize(right)
            if _is(right, 0):
                raise DivisionByZeroConstant(f"division by zero in {serialize(node)}")
            if isinstance(left, Const) and isinstance(right, Const):
                return Const(left.value / right.value)
            if _is(right, 1):
                return left
            return Div(left, right)
        case IntPow(base=base, exponent=exponent):
            base = normalize(base)
            if exponent == 0:
                return ONE
            if exponent == 1:
                return base
            if isinstance(base, Const):
                return Const(base.value**exponent)
            return IntPow(base, exponent)
        case Exp(arg=arg) | Sin(arg=arg) | Cos(arg=arg) | Sinh(arg=arg) | Cosh(arg=arg):
            arg = normalize(arg)
            if _is(arg, 0):
                return ONE if isinstance(node, Exp | Cos | Cosh) else ZERO
            return type(node)(arg)  # type: ignore[call-arg]
    raise TypeError(f"unknown expression node {node!r}")


# --- differentiation ----------------------------------------------------------


def differentiate(node: Expr) -> Expr:
    """Symbolic d/dx; the result is not normalized."""
    match node:
        case Const() | PiConst():
            return ZERO
        case Var():
            return ONE
        case Neg(arg=arg):
            return Neg(differentiate(arg))
        case Add(left=left, right=right):
            return Add(differentiate(left), differentiate(right))
        case Sub(left=left, right=right):
            return Sub(differentiate(left), differentiate(right))
        case Mul(left=left, right=right):
            return Add(
                Mul(differentiate(left), right), Mul(left, differentiate(right))
            )
        case Div(left=left, right=right):
            numerator = Sub(
                Mul(differentiate(left), right), Mul(left, differentiate(right))
            )
            return Div(numerator, IntPow(right, 2))
        case IntPow(base=base, exponent=exponent):
            if exponent == 0:
                return ZERO
            return Mul(
                Mul(Const(Fraction(exponent)), IntPow(base, exponent - 1)),
                differentiate(base),
            )
        case Exp(arg=arg):
            return Mul(differentiate(arg), Exp(arg))
        case Sin(arg=arg):
            return Mul(differentiate(arg), Cos(arg))
        case Cos(arg=arg):
            return Mul(differentiate(arg), Neg(Sin(arg)))
        case Sinh(arg=arg):
            return Mul(differentiate(arg), Cosh(arg))
        case Cosh(arg=arg):
            return Mul(differentiate(arg), Sinh(arg))
    raise TypeError(f"unknown expression node {node!r}")


def nth_derivative(node: Expr, order: int) -> Expr:
    """Normalized derivative of the given order."""
    result = normalize(node)
    for _ in range(order):
        result = normalize(differentiate(result))
    return result


# --- structure ----------------------------------------------------------------


def children(node: Expr) -> tuple[Expr, ...]:
    match node:
        case Add(left=left, right=right) | Sub(left=left, right=right):
            return (left, right)
        case Mul(left=left, right=right) | Div(left=left, right=right):
            return (left, right)
        case IntPow(base=base):
            return (base,)
        case Neg(arg=arg) | Exp(arg=arg) | Sin(arg=arg) | Cos(arg=arg):
            return (arg,)
        case Sinh(arg=arg) | Cosh(arg=arg):
            return (arg,)
    return ()


def free_of_var(node: Expr) -> bool:
    """True when the expression does not mention x."""
    if isinstance(node, Var):
        return False
    return all(free_of_var(child) for child in children(node))


def is_polynomial(node: Expr) -> bool:
    """True for rational polynomials: no pi, no transcendental node, constant divisors."""
    match node:
        case Const() | Var():
            return True
        case PiConst() | Exp() | Sin() | Cos() | Sinh() | Cosh():
            return False
        case Div(left=left, right=right):
            return is_polynomial(left) and free_of_var(right) and is_polynomial(right)
    return all(is_polynomial(child) for child in children(node))


def denominators(node: Expr) -> list[Expr]:
    """Every divisor subexpression, innermost first."""
    found: list[Expr] = []
    for child in children(node):
        found.extend(denominators(child))
    if isinstance(node, Div):
        found.append(node.right)
    return found


def factors(node: Expr) -> Counter[Expr]:
    """
    Multiset of the non-constant multiplicative factors of an expression.

    Products, powers and negations are flattened and a quotient contributes its
    numerator only; every zero of a listed factor is a zero of the expression.
    """
    match node:
        case Mul(left=left, right=right):
            return factors(left) + factors(right)
        case Neg(arg=arg):
            return factors(arg)
        case IntPow(base=base, exponent=exponent):
            return Counter({k: v * exponent for k, v in factors(base).items()})
        case Div(left=left):
            return factors(left)
    if free_of_var(node):
        return Counter()
    return Counter({node: 1})


def substitute(node: Expr, q: Fraction | int) -> Expr:
    """
    Replace x by the constant q and normalize.

    Rational parts fold to a Const; transcendental parts stay symbolic.

    :raises DivisionByZeroConstant: when a denominator becomes exactly 0
    """
    value = Const(Fraction(q))

    def replace(part: Expr) -> Expr:
        match part:
            case Var():
                return value
            case Neg(arg=arg):
                return Neg(replace(arg))
            case Add() | Sub() | Mul() | Div():
                return type(part)(replace(part.left), replace(part.right))  # type: ignore[attr-defined, call-arg]
            case IntPow(base=base, exponent=exponent):
                return IntPow(replace(base), exponent)
            case Exp(arg=arg) | Sin(arg=arg) | Cos(arg=arg) | Sinh(arg=arg) | Cosh(arg=arg):
                return type(part)(replace(arg))  # type: ignore[call-arg]
        return part

    return normalize(replace(node))
