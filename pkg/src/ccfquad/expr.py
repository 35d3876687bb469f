"""Integrand expressions in x: parser, printer, evaluator and derivatives.

Grammar (usual precedence, ^ binds tighter than unary minus)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] INT)*      right-associative, integer exponents
    atom   := NUMBER | 'x' | '(' expr ')' | FUNC '(' expr ')'
    FUNC   := sin | cos | exp | ln | sqrt
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cheb import Integrand
from .errors import DomainError, ParseError

FUNCS = ("sin", "cos", "exp", "ln", "sqrt")
MAX_DERIVATIVE = 4


class Node:
    __slots__ = ()

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True)
class Num(Node):
    value: float


@dataclass(frozen=True)
class Var(Node):
    pass


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class Func(Node):
    name: str
    arg: Node


# --- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def take(self, value=None):
        kind, val, pos = self.tok
        if value is not None and val != value:
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {value!r}, found {found}", pos)
        self.i += 1
        return kind, val, pos

    def parse(self):
        if self.tok[0] == "end":
            raise ParseError("empty expression", 0)
        node = self.expr()
        kind, val, pos = self.tok
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            _, op, _ = self.take()
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            _, op, _ = self.take()
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok == ("op", "-", self.tok[2]):
            self.take()
            return Neg(self.unary())
        return self.power()

    def exponent(self):
        sign = 1
        if self.tok[1] == "-" and self.tok[0] == "op":
            self.take()
            sign = -1
        kind, val, pos = self.tok
        if kind != "num":
            raise ParseError("exponent must be an integer literal", pos)
        if not re.fullmatch(r"\d+", val):
            raise ParseError(f"non-integer exponent {val!r}", pos)
        self.take()
        n = sign * int(val)
        if self.tok[1] == "^":
            self.take()
            n = n ** self.exponent()
            if int(n) != n:
                raise ParseError("exponent does not evaluate to an integer", pos)
        return int(n)

    def power(self):
        base = self.atom()
        if self.tok[1] == "^" and self.tok[0] == "op":
            self.take()
            return Pow(base, self.exponent())
        return base

    def atom(self):
        kind, val, pos = self.tok
        if kind == "num":
            self.take()
            return Num(float(val))
        if kind == "name":
            self.take()
            if val == "x":
                return Var()
            if val in FUNCS:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Func(val, arg)
            raise ParseError(f"unknown identifier {val!r}", pos)
        if val == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {found}", pos)


def parse_expression(text: str) -> Node:
    if not isinstance(text, str):
        raise ParseError("expression must be a string", 0)
    return _Parser(text).parse()


# --- printing ----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    if isinstance(node, Num) and node.value < 0:
        return 0
    return 5


def _fmt_num(v):
    if v == int(v) and abs(v) < 1e15:
        s = str(int(v))
    else:
        s = repr(float(v))
    return s


def to_string(node: Node) -> str:
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Func):
        return f"{node.name}({to_string(node.arg)})"
    if isinstance(node, Neg):
        inner = to_string(node.arg)
        return f"-({inner})" if _prec(node.arg) < 3 else f"-{inner}"
    if isinstance(node, Pow):
        inner = to_string(node.base)
        if _prec(node.base) < 5:
            inner = f"({inner})"
        return f"{inner}^{node.exponent}"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left = to_string(node.left)
        if _prec(node.left) < p:
            left = f"({left})"
        right = to_string(node.right)
        # left-associative: equal precedence on the right needs parentheses
        if _prec(node.right) <= p:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(node)


# --- evaluation ----------------------------------------------------------------

_NP = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "ln": np.log, "sqrt": np.sqrt}


def evaluate(node: Node, x):
    x = np.asarray(x, dtype=float)
    return _eval(node, x) + 0.0 * x


def _eval(node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.arg, x)
    if isinstance(node, Func):
        return _NP[node.name](_eval(node.arg, x))
    if isinstance(node, Pow):
        b = np.asarray(_eval(node.base, x), dtype=float)
        return b ** node.exponent if node.exponent >= 0 else 1.0 / b ** (-node.exponent)
    a, b = _eval(node.left, x), _eval(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a / b


# --- differentiation -------------------------------------------------------------


def _add(a, b):
    if a == Num(0.0):
        return b
    if b == Num(0.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return BinOp("+", a, b)


def _sub(a, b):
    if b == Num(0.0):
        return a
    if a == Num(0.0):
        return _neg(b)
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return BinOp("-", a, b)


def _mul(a, b):
    if a == Num(0.0) or b == Num(0.0):
        return Num(0.0)
    if a == Num(1.0):
        return b
    if b == Num(1.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return BinOp("*", a, b)


def _div(a, b):
    if a == Num(0.0):
        return Num(0.0)
    if b == Num(1.0):
        return a
    return BinOp("/", a, b)


def _neg(a):
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _pow(base, n):
    if n == 0:
        return Num(1.0)
    if n == 1:
        return base
    return Pow(base, n)


def derivative(node: Node) -> Node:
    """d/dx of the expression, lightly simplified."""
    if isinstance(node, Num):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0)
    if isinstance(node, Neg):
        return _neg(derivative(node.arg))
    if isinstance(node, BinOp):
        a, b = node.left, node.right
        da, db = derivative(a), derivative(b)
        if node.op == "+":
            return _add(da, db)
        if node.op == "-":
            return _sub(da, db)
        if node.op == "*":
            return _add(_mul(da, b), _mul(a, db))
        # quotient rule
        return _div(_sub(_mul(da, b), _mul(a, db)), _pow(b, 2))
    if isinstance(node, Pow):
        n = node.exponent
        return _mul(_mul(Num(float(n)), _pow(node.base, n - 1)), derivative(node.base))
    if isinstance(node, Func):
        u, du = node.arg, derivative(node.arg)
        outer = {
            "sin": lambda: Func("cos", u),
            "cos": lambda: _neg(Func("sin", u)),
            "exp": lambda: node,
            "ln": lambda: _div(Num(1.0), u),
            "sqrt": lambda: _div(Num(0.5), node),
        }[node.name]()
        return _mul(outer, du)
    raise TypeError(node)


@lru_cache(maxsize=128)
def derivatives(node: Node, order: int = MAX_DERIVATIVE) -> tuple:
    """(f, f', ..., f^(order))."""
    out = [node]
    for _ in range(order):
        out.append(derivative(out[-1]))
    return tuple(out)


def validate(node: Node, n_probe: int = 201) -> None:
    """Raise DomainError unless the expression is finite on a probe grid of [0, 1]."""
    x = np.linspace(0.0, 1.0, n_probe)
    with np.errstate(all="ignore"):
        v = evaluate(node, x)
    if not np.all(np.isfinite(v)):
        bad = float(x[~np.isfinite(v)][0])
        raise DomainError(f"expression {to_string(node)!r} is not finite at x = {bad:g}", stage="parse")


def to_integrand(node: Node, max_order: int = MAX_DERIVATIVE) -> Integrand:
    """Integrand whose endpoint derivatives come from symbolic differentiation."""
    validate(node)
    ders = derivatives(node, max_order)

    def value(x):
        return evaluate(node, x)

    def deriv(ell, x):
        if ell > max_order:
            raise DomainError(f"derivatives available up to order {max_order}", stage="parse")
        return float(evaluate(ders[ell], x))

    return Integrand(value, deriv)


BUILTINS = {
    "ex41": "cos(x)",
    "ex42": "1/(1 + 16*x^2)",
    "ex43": "1/(1 + (1 + x)^2)",
    "one": "1",
}


def integrand_from_text(text: str, max_order: int = MAX_DERIVATIVE) -> Integrand:
    """Builtin name or expression text -> Integrand."""
    return to_integrand(parse_expression(BUILTINS.get(text.strip(), text)), max_order)
