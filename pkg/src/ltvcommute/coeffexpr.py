"""Coefficient expressions in the discrete-time variable ``k``.

A tiny recursive-descent parser for formulas such as ``exp(k)`` or
``9 + 3*sin(0.1*pi*k)``, an evaluator with a fixed real-power convention,
and the two concrete coefficient sequence kinds (closed form and table).

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' factor)? | '-' factor
    atom   := NUMBER | 'k' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := 'sin' | 'cos' | 'exp'
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "ExprNode", "Num", "Var", "Pi", "Neg", "BinOp", "Call",
    "CoefficientError", "ExpressionSyntaxError", "UnknownIdentifier",
    "DomainError", "NonFiniteResult",
    "parse", "evaluate", "pretty", "tabulate",
    "ClosedForm", "Tabulated", "CoefficientSequence", "as_sequence",
]

FUNCTIONS = ("sin", "cos", "exp")


class CoefficientError(ValueError):
    """Base class for expression and coefficient failures."""


class ExpressionSyntaxError(CoefficientError):
    def __init__(self, position, expected, text=""):
        self.position = position
        self.expected = tuple(expected)
        where = "end of input" if position >= len(text) else f"position {position}"
        super().__init__(f"syntax error at {where}: expected one of {', '.join(self.expected)}")


class UnknownIdentifier(CoefficientError):
    def __init__(self, name, position):
        self.name = name
        self.position = position
        super().__init__(f"unknown identifier {name!r} at position {position}")


class DomainError(CoefficientError):
    def __init__(self, message, k=None):
        self.k = k
        super().__init__(message if k is None else f"{message} (k={k})")


class NonFiniteResult(CoefficientError):
    def __init__(self, message="non-finite result", k=None):
        self.k = k
        super().__init__(message if k is None else f"{message} (k={k})")


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Pi:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "ExprNode"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "ExprNode"


ExprNode = Union[Num, Var, Pi, Neg, BinOp, Call]


# -- Parser ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(start, ["number", "identifier", "operator"], text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def fail(self, expected):
        raise ExpressionSyntaxError(self.tok[2], expected, self.text)

    def expect(self, value):
        if self.tok[1] != value or self.tok[0] not in ("op",):
            self.fail([repr(value)])
        self.i += 1

    def parse(self):
        node = self.expr()
        if self.tok[0] != "end":
            self.fail(["operator", "end of input"])
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.tok[1]
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.tok[1]
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.tok == ("op", "-", self.tok[2]):
            self.i += 1
            return Neg(self.factor())
        base = self.atom()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.i += 1
            return BinOp("^", base, self.factor())
        return base

    def atom(self):
        kind, value, pos = self.tok
        if kind == "num":
            self.i += 1
            return Num(float(value))
        if kind == "name":
            self.i += 1
            if value == "k":
                return Var()
            if value == "pi":
                return Pi()
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            raise UnknownIdentifier(value, pos)
        if kind == "op" and value == "(":
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        self.fail(["number", "'k'", "'pi'", "function", "'('", "'-'"])


def parse(text: str) -> ExprNode:
    """Parse ``text`` into an expression tree."""
    if not text or not text.strip():
        raise ExpressionSyntaxError(0, ["expression"], text or "")
    return _Parser(text).parse()


# -- Evaluation ---------------------------------------------------------------

def _power(base, exponent):
    if exponent >= 0 and exponent == math.floor(exponent):
        try:
            return base ** int(exponent)
        except OverflowError:
            raise NonFiniteResult("power overflow") from None
    if base > 0:
        try:
            return math.exp(exponent * math.log(base))
        except OverflowError:
            raise NonFiniteResult("power overflow") from None
    raise DomainError(f"cannot raise {base!r} to non-integer power {exponent!r}")


def _eval(node, k):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(k)
    if isinstance(node, Pi):
        return math.pi
    if isinstance(node, Neg):
        return -_eval(node.operand, k)
    if isinstance(node, Call):
        arg = _eval(node.arg, k)
        if node.func == "exp":
            try:
                return math.exp(arg)
            except OverflowError:
                raise NonFiniteResult("exp overflow") from None
        return math.sin(arg) if node.func == "sin" else math.cos(arg)
    if isinstance(node, BinOp):
        a = _eval(node.left, k)
        b = _eval(node.right, k)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if b == 0:
                raise DomainError("division by zero")
            return a / b
        return _power(a, b)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node: ExprNode, k: int) -> float:
    """Evaluate ``node`` at the integer time ``k`` in double precision."""
    try:
        value = _eval(node, k)
    except DomainError as exc:
        raise DomainError(str(exc), k) from None
    except NonFiniteResult as exc:
        raise NonFiniteResult(str(exc), k) from None
    except (OverflowError, ValueError):
        # inf/nan intermediates reaching math.* functions
        raise NonFiniteResult(k=k) from None
    if not math.isfinite(value):
        raise NonFiniteResult(k=k)
    return value


# -- Pretty printing ----------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_num(value):
    if math.isfinite(value) and value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def pretty(node: ExprNode) -> str:
    """Canonical text form; ``parse(pretty(e)) == e`` for nonnegative literals."""
    if isinstance(node, Num):
        if node.value < 0 or math.copysign(1.0, node.value) < 0:
            return "-" + _fmt_num(-node.value)
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return "k"
    if isinstance(node, Pi):
        return "pi"
    if isinstance(node, Call):
        return f"{node.func}({pretty(node.arg)})"
    if isinstance(node, Neg):
        inner = node.operand
        text = pretty(inner)
        if isinstance(inner, BinOp) and inner.op != "^":
            text = f"({text})"
        return "-" + text
    op = node.op
    left, right = pretty(node.left), pretty(node.right)
    if op == "^":
        # base must be an atom; exponent is any factor
        if isinstance(node.left, (BinOp, Neg)) or (isinstance(node.left, Num) and node.left.value < 0):
            left = f"({left})"
        if isinstance(node.right, BinOp) and node.right.op != "^":
            right = f"({right})"
        return f"{left} ^ {right}"
    if isinstance(node.left, BinOp) and node.left.op != "^" and _PREC[node.left.op] < _PREC[op]:
        left = f"({left})"
    if isinstance(node.right, BinOp) and node.right.op != "^" and _PREC[node.right.op] <= _PREC[op]:
        right = f"({right})"
    return f"{left} {op} {right}"


# -- Coefficient sequences ------------------------------------------------------

@dataclass(frozen=True)
class ClosedForm:
    """A coefficient given by a formula in ``k``."""

    expr: ExprNode

    @classmethod
    def from_text(cls, text):
        return cls(parse(text))

    def __call__(self, k):
        return evaluate(self.expr, k)

    def tabulate(self, K):
        return np.array([evaluate(self.expr, j) for j in range(K + 1)], dtype=float)

    def __str__(self):
        return pretty(self.expr)


@dataclass(frozen=True)
class Tabulated:
    """A coefficient known only on ``k = 0 .. len(values) - 1``."""

    values: tuple

    def __init__(self, values):
        vals = tuple(float(v) for v in values)
        for j, v in enumerate(vals):
            if not math.isfinite(v):
                raise NonFiniteResult(k=j)
        object.__setattr__(self, "values", vals)

    @property
    def horizon(self):
        return len(self.values) - 1

    def __call__(self, k):
        if not 0 <= k < len(self.values):
            raise DomainError(f"tabulated coefficient undefined outside [0, {self.horizon}]", k)
        return self.values[k]

    def tabulate(self, K):
        if K + 1 > len(self.values):
            raise DomainError(f"tabulated coefficient undefined outside [0, {self.horizon}]", K)
        return np.array(self.values[: K + 1], dtype=float)

    def __str__(self):
        return f"<table of {len(self.values)} samples>"


CoefficientSequence = Union[ClosedForm, Tabulated]


def as_sequence(value) -> CoefficientSequence:
    """Coerce a string, number, sequence of numbers or sequence object."""
    if isinstance(value, (ClosedForm, Tabulated)):
        return value
    if isinstance(value, str):
        return ClosedForm.from_text(value)
    if isinstance(value, (int, float)):
        return ClosedForm(Num(float(value)) if value >= 0 else Neg(Num(-float(value))))
    if isinstance(value, (Num, Var, Pi, Neg, BinOp, Call)):
        return ClosedForm(value)
    return Tabulated(value)


def tabulate(c, K: int) -> np.ndarray:
    """Values ``c(0), ..., c(K)`` as a float array."""
    if K < 0:
        raise ValueError("horizon must be nonnegative")
    return as_sequence(c).tabulate(K)
