"""
Smooth scalar expressions over x1..xn with forward-mode differentiation.

Grammar (highest precedence first): integer power ``^`` (or ``**``), unary
minus, ``*`` and ``/``, ``+`` and ``-``; binary operators associate left.
Admitted functions are sin, cos and exp; nonsmooth primitives such as abs,
min or max are rejected so every component stays continuously differentiable.
"""

import logging
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Tuple, Union

import numpy as np

from ..utils.errors import (
    DimensionMismatchError,
    DomainError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
    VariableIndexOutOfRangeError,
)

logger = logging.getLogger(__name__)

# Denominators and zero bases closer to zero than this raise DomainError
DIVISION_TOLERANCE = 1e-12

FUNCTIONS = {
    "sin": (math.sin, math.cos),
    "cos": (math.cos, lambda t: -math.sin(t)),
    "exp": (math.exp, math.exp),
}
CONSTANTS = {"pi": math.pi}
NONSMOOTH = {"abs", "min", "max", "sqrt", "log", "sign", "floor", "ceil"}

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()])"
    r")"
)


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Const, Var, Neg, BinOp, Pow, Call]


# --- Forward mode -----------------------------------------------------------


class Dual:
    """Value together with its gradient with respect to all variables."""

    __slots__ = ("value", "grad")

    def __init__(self, value: float, grad: np.ndarray):
        self.value = value
        self.grad = grad

    def __add__(self, other: "Dual") -> "Dual":
        return Dual(self.value + other.value, self.grad + other.grad)

    def __sub__(self, other: "Dual") -> "Dual":
        return Dual(self.value - other.value, self.grad - other.grad)

    def __mul__(self, other: "Dual") -> "Dual":
        return Dual(self.value * other.value, self.value * other.grad + other.value * self.grad)

    def __truediv__(self, other: "Dual") -> "Dual":
        if abs(other.value) <= DIVISION_TOLERANCE:
            raise DomainError(f"Division by {other.value!r}, too close to zero")
        quotient = self.value / other.value
        return Dual(quotient, (self.grad - quotient * other.grad) / other.value)

    def __neg__(self) -> "Dual":
        return Dual(-self.value, -self.grad)

    def __pow__(self, exponent: int) -> "Dual":
        if exponent == 0:
            return Dual(1.0, np.zeros_like(self.grad))
        if exponent < 0 and abs(self.value) <= DIVISION_TOLERANCE:
            raise DomainError(f"Negative power {exponent} of {self.value!r}")
        return Dual(self.value**exponent, exponent * self.value ** (exponent - 1) * self.grad)

    def apply(self, func: str) -> "Dual":
        value_fn, derivative_fn = FUNCTIONS[func]
        return Dual(value_fn(self.value), derivative_fn(self.value) * self.grad)


def _forward(node: Node, seeds: List[Dual], zero: np.ndarray) -> Dual:
    if isinstance(node, Const):
        return Dual(node.value, zero)
    if isinstance(node, Var):
        return seeds[node.index]
    if isinstance(node, Neg):
        return -_forward(node.operand, seeds, zero)
    if isinstance(node, Pow):
        return _forward(node.base, seeds, zero) ** node.exponent
    if isinstance(node, Call):
        return _forward(node.arg, seeds, zero).apply(node.func)
    left = _forward(node.left, seeds, zero)
    right = _forward(node.right, seeds, zero)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    return left / right


def _value(node: Node, x: np.ndarray) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return float(x[node.index])
    if isinstance(node, Neg):
        return -_value(node.operand, x)
    if isinstance(node, Pow):
        base = _value(node.base, x)
        if node.exponent < 0 and abs(base) <= DIVISION_TOLERANCE:
            raise DomainError(f"Negative power {node.exponent} of {base!r}")
        return base**node.exponent
    if isinstance(node, Call):
        return FUNCTIONS[node.func][0](_value(node.arg, x))
    left = _value(node.left, x)
    right = _value(node.right, x)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if abs(right) <= DIVISION_TOLERANCE:
        raise DomainError(f"Division by {right!r}, too close to zero")
    return left / right


# --- Affine detection ---------------------------------------------------------


def _affine(node: Node, n_vars: int) -> Optional[Tuple[np.ndarray, float]]:
    """(row, offset) with node(x) = row @ x + offset, or None if not affine."""
    if isinstance(node, Const):
        return np.zeros(n_vars), node.value
    if isinstance(node, Var):
        row = np.zeros(n_vars)
        row[node.index] = 1.0
        return row, 0.0
    if isinstance(node, Neg):
        inner = _affine(node.operand, n_vars)
        return None if inner is None else (-inner[0], -inner[1])
    if isinstance(node, Call):
        inner = _affine(node.arg, n_vars)
        if inner is None or np.any(inner[0]):
            return None
        return np.zeros(n_vars), FUNCTIONS[node.func][0](inner[1])
    if isinstance(node, Pow):
        inner = _affine(node.base, n_vars)
        if inner is None:
            return None
        if node.exponent == 0:
            return np.zeros(n_vars), 1.0
        if node.exponent == 1:
            return inner
        if np.any(inner[0]) or (node.exponent < 0 and abs(inner[1]) <= DIVISION_TOLERANCE):
            return None
        return np.zeros(n_vars), inner[1] ** node.exponent

    left = _affine(node.left, n_vars)
    right = _affine(node.right, n_vars)
    if left is None or right is None:
        return None
    if node.op == "+":
        return left[0] + right[0], left[1] + right[1]
    if node.op == "-":
        return left[0] - right[0], left[1] - right[1]
    if node.op == "*":
        if not np.any(left[0]):
            return left[1] * right[0], left[1] * right[1]
        if not np.any(right[0]):
            return right[1] * left[0], right[1] * left[1]
        return None
    if np.any(right[0]) or abs(right[1]) <= DIVISION_TOLERANCE:
        return None
    return left[0] / right[1], left[1] / right[1]


# --- Printing -----------------------------------------------------------------


def to_text(node: Node) -> str:
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return f"x{node.index + 1}"
    if isinstance(node, Neg):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, Pow):
        return f"({to_text(node.base)}^{node.exponent})"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    return f"({to_text(node.left)} {node.op} {to_text(node.right)})"


# --- Parsing ------------------------------------------------------------------


class _Parser:
    """Recursive-descent parser over a token list of (kind, text, byte offset)."""

    def __init__(self, text: str, n_vars: int):
        self.text = text
        self.n_vars = n_vars
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        index = 0
        while index < len(text):
            if text[index:].strip() == "":
                break
            match = _TOKEN.match(text, index)
            if not match or match.end() == index:
                start = len(text) - len(text[index:].lstrip())
                offset = len(text[:start].encode("utf-8"))
                raise ExpressionSyntaxError(f"Unexpected character {text[start]!r}", offset)
            kind = match.lastgroup
            start = match.start(kind)
            tokens.append((kind, match.group(kind), len(text[:start].encode("utf-8"))))
            index = match.end()
        tokens.append(("end", "", len(text.encode("utf-8"))))
        return tokens

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> Tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str) -> None:
        kind, value, offset = self.take()
        if value != text or kind != "op":
            raise ExpressionSyntaxError(f"Expected {text!r}, found {value or 'end of input'!r}", offset)

    def parse(self) -> Node:
        node = self.expression()
        kind, value, offset = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"Unexpected token {value!r}", offset)
        return node

    def expression(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and value == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value in ("^", "**"):
            self.take()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        sign = 1
        kind, value, offset = self.peek()
        if kind == "op" and value in ("-", "+"):
            self.take()
            sign = -1 if value == "-" else 1
        kind, value, offset = self.take()
        if kind != "number" or not value.isdigit():
            raise ExpressionSyntaxError("Exponents must be integer literals", offset)
        return sign * int(value)

    def atom(self) -> Node:
        kind, value, offset = self.take()
        if kind == "number":
            number = float(value)
            if not math.isfinite(number):
                raise ExpressionSyntaxError(f"Literal {value!r} is not finite", offset)
            return Const(number)
        if kind == "op" and value == "(":
            node = self.expression()
            self.expect(")")
            return node
        if kind == "ident":
            return self.identifier(value, offset)
        raise ExpressionSyntaxError(f"Unexpected token {value or 'end of input'!r}", offset)

    def identifier(self, name: str, offset: int) -> Node:
        if name in FUNCTIONS:
            self.expect("(")
            arg = self.expression()
            self.expect(")")
            return Call(name, arg)
        if name in CONSTANTS:
            return Const(CONSTANTS[name])
        match = re.fullmatch(r"x(\d+)", name)
        if match:
            index = int(match.group(1))
            if not 1 <= index <= self.n_vars:
                raise VariableIndexOutOfRangeError(
                    f"Variable {name} at offset {offset} is outside x1..x{self.n_vars}"
                )
            return Var(index - 1)
        if name in NONSMOOTH:
            raise UnknownIdentifierError(
                f"'{name}' at offset {offset} is not a smooth primitive; only sin, cos, exp are admitted"
            )
        raise UnknownIdentifierError(f"Unknown identifier '{name}' at offset {offset}")


@dataclass(frozen=True)
class Expression:
    """
    Parsed smooth expression.

    Attributes:
        ast: Root node
        n_vars: Number of variables x1..xn in scope
    """

    ast: Node
    n_vars: int

    @cached_property
    def affine_form(self) -> Optional[Tuple[np.ndarray, float]]:
        """(row, offset) when the expression is affine in x, else None."""
        try:
            return _affine(self.ast, self.n_vars)
        except (OverflowError, ValueError):
            # constant subterm out of range; evaluation reports it
            return None

    @property
    def is_affine(self) -> bool:
        return self.affine_form is not None

    def __str__(self) -> str:
        return to_text(self.ast)

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape != (self.n_vars,):
            raise DimensionMismatchError(f"Expected {self.n_vars} variables, got {x.shape[0]}")
        return x

    def _out_of_range(self, x: np.ndarray, reason: object) -> DomainError:
        return DomainError(f"{self} is not finite at x = {x.tolist()}: {reason}")

    def evaluate(self, x) -> float:
        """
        Value at ``x``.

        Raises:
            DomainError: Division near zero, overflow or a non-finite result
        """
        x = self._check(x)
        affine = self.affine_form
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                if affine is not None:
                    value = float(affine[0] @ x + affine[1])
                else:
                    value = float(_value(self.ast, x))
        except (OverflowError, ValueError) as e:
            raise self._out_of_range(x, e) from e
        if not math.isfinite(value):
            raise self._out_of_range(x, value)
        return value

    def eval_with_gradient(self, x) -> Tuple[float, np.ndarray]:
        """
        Value and gradient at ``x``.

        Raises:
            DomainError: Division near zero, overflow or a non-finite result
        """
        x = self._check(x)
        affine = self.affine_form
        if affine is not None:
            return self.evaluate(x), affine[0].copy()
        identity = np.eye(self.n_vars)
        seeds = [Dual(float(x[i]), identity[i]) for i in range(self.n_vars)]
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                result = _forward(self.ast, seeds, np.zeros(self.n_vars))
                value, grad = float(result.value), np.array(result.grad, dtype=float)
        except (OverflowError, ValueError) as e:
            raise self._out_of_range(x, e) from e
        if not (math.isfinite(value) and np.all(np.isfinite(grad))):
            raise self._out_of_range(x, "overflow in value or gradient")
        return value, grad


def parse(text: str, n_vars: int) -> Expression:
    """
    Parse an expression over x1..x{n_vars}.

    Raises:
        ExpressionSyntaxError: Malformed text (carries the byte offset)
        UnknownIdentifierError: Unknown names, including nonsmooth primitives
        VariableIndexOutOfRangeError: x_k with k outside 1..n_vars
    """
    if not isinstance(text, str) or not text.strip():
        raise ExpressionSyntaxError("Empty expression", 0)
    node = _Parser(text, n_vars).parse()
    logger.debug(f"Parsed {text!r} -> {to_text(node)}")
    return Expression(ast=node, n_vars=n_vars)


def eval_with_gradient(expr: Expression, x) -> Tuple[float, np.ndarray]:
    """Value and exact gradient of ``expr`` at ``x``."""
    return expr.eval_with_gradient(x)
