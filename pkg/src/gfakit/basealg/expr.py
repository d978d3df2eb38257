"""Expression trees for smooth functions of one real variable.

An expression may mention the evaluation variable ``x``, the sequence
index ``n`` and, for scale families, the level ``m``.  Trees are immutable
and hashable, so structurally equal trees compare equal.

The textual syntax is the usual infix one::

    n*exp(-(n*x)^2)/sqrt(pi)

with ``+ - * / ^`` (``**`` is accepted as ``^``), unary minus, parentheses,
the functions ``exp log sin cos sqrt`` (``ln`` is an alias of ``log``) and
the constants ``pi`` and ``e``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Any, Callable, Mapping

import numpy as np

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}
DEFAULT_SYMBOLS = ("x", "n", "m")


class ExprError(Exception):
    """Base class for expression errors."""


class ExprSyntaxError(ExprError):
    """Raised by :func:`parse_expr`; ``pos``/``length`` locate the offending text."""

    def __init__(self, message: str, pos: int = 0, length: int = 1):
        super().__init__(message)
        self.message = message
        self.pos = pos
        self.length = max(1, length)


class EvaluationError(ExprError):
    pass


class DomainError(EvaluationError):
    """A division or logarithm guard failed at an evaluation point."""


class Expr:
    """Base node.  Arithmetic operators build new trees."""

    __slots__ = ()

    def __add__(self, other):
        return BinOp("+", self, as_expr(other))

    def __radd__(self, other):
        return BinOp("+", as_expr(other), self)

    def __sub__(self, other):
        return BinOp("-", self, as_expr(other))

    def __rsub__(self, other):
        return BinOp("-", as_expr(other), self)

    def __mul__(self, other):
        return BinOp("*", self, as_expr(other))

    def __rmul__(self, other):
        return BinOp("*", as_expr(other), self)

    def __truediv__(self, other):
        return BinOp("/", self, as_expr(other))

    def __rtruediv__(self, other):
        return BinOp("/", as_expr(other), self)

    def __pow__(self, other):
        return BinOp("^", self, as_expr(other))

    def __rpow__(self, other):
        return BinOp("^", as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        return to_source(self)


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: float
    name: str | None = None

    def __repr__(self):
        return f"Const({self.name or self.value!r})"


@dataclass(frozen=True, repr=False)
class Sym(Expr):
    name: str

    def __repr__(self):
        return f"Sym({self.name})"


@dataclass(frozen=True, repr=False)
class Neg(Expr):
    arg: Expr

    def __repr__(self):
        return f"Neg({self.arg!r})"


@dataclass(frozen=True, repr=False)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def __repr__(self):
        return f"BinOp({self.op!r}, {self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Call(Expr):
    fn: str
    arg: Expr

    def __repr__(self):
        return f"Call({self.fn}, {self.arg!r})"


X = Sym("x")
N = Sym("n")
M = Sym("m")
PI = Const(math.pi, "pi")
E = Const(math.e, "e")


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float, np.integer, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            raise ExprError(f"non-finite constant {value!r}")
        return Const(v)
    raise TypeError(f"cannot convert {type(value).__name__} to an expression")


def exp(a) -> Expr:
    return Call("exp", as_expr(a))


def log(a) -> Expr:
    return Call("log", as_expr(a))


def sin(a) -> Expr:
    return Call("sin", as_expr(a))


def cos(a) -> Expr:
    return Call("cos", as_expr(a))


def sqrt(a) -> Expr:
    return Call("sqrt", as_expr(a))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        value = m.group(kind)
        if value == "**":
            value = "^"
        tokens.append((kind, value, start, m.end() - start))
        pos = m.end()
    tokens.append(("end", "", len(text), 1))
    return tokens


class _ExprParser:
    def __init__(self, text: str, symbols):
        self.text = text
        self.symbols = tuple(symbols)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            found = tok[1] or "end of expression"
            raise ExprSyntaxError(f"expected {value!r}, found {found!r}", tok[2], tok[3])
        return tok

    def parse(self) -> Expr:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2], tok[3])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[1] == "-":
            self.take()
            literal = self.peek()[0] == "num"  # "-2" folds, "-(2)" stays a negation
            arg = self.unary()
            if literal and isinstance(arg, Const) and arg.name is None and arg.value > 0:
                return Const(-arg.value)
            return Neg(arg)
        if tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, value, pos, length = self.take()
        if kind == "num":
            return Const(float(value))
        if kind == "name":
            if self.peek()[1] == "(":
                fn = "log" if value == "ln" else value
                if fn not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {value!r}", pos, length)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(fn, arg)
            if value in CONSTANTS:
                return Const(CONSTANTS[value], value)
            if value in self.symbols:
                return Sym(value)
            raise ExprSyntaxError(f"unknown name {value!r}", pos, length)
        if value == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = value or "end of expression"
        raise ExprSyntaxError(f"unexpected {found!r}", pos, length)


def parse_expr(text: str, symbols=DEFAULT_SYMBOLS) -> Expr:
    """Parse infix text into an :class:`Expr`.

    Raises
    ------
    ExprSyntaxError
        With the character offset of the offending token.
    """
    return _ExprParser(text, symbols).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _fmt_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return 5


def to_source(e: Expr) -> str:
    """Print ``e`` so that ``parse_expr(to_source(e)) == e``."""
    if isinstance(e, Const):
        if e.name is not None:
            return e.name
        s = _fmt_number(e.value)
        return f"({s})" if e.value < 0 or s.startswith("-") else s
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({to_source(e.arg)})"
    if isinstance(e, Neg):
        inner = to_source(e.arg)
        bare_number = isinstance(e.arg, Const) and e.arg.name is None
        return "-" + (inner if _prec(e.arg) >= 3 and not bare_number else f"({inner})")
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left = to_source(e.left)
        right = to_source(e.right)
        if e.op == "^":
            if _prec(e.left) < 5:
                left = f"({left})"
            if _prec(e.right) < 5:
                right = f"({right})"
            return f"{left}^{right}"
        if _prec(e.left) < p:
            left = f"({left})"
        if _prec(e.right) <= p:
            right = f"({right})"
        return f"{left} {e.op} {right}" if p == 1 else f"{left}*{right}" if e.op == "*" else f"{left}/{right}"
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# structure

def free_symbols(e: Expr) -> frozenset:
    if isinstance(e, Sym):
        return frozenset([e.name])
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, (Neg, Call)):
        return free_symbols(e.arg)
    return free_symbols(e.left) | free_symbols(e.right)


def substitute(e: Expr, values: Mapping[str, Any]) -> Expr:
    """Replace symbols by constants (or other expressions)."""
    if isinstance(e, Sym):
        if e.name in values:
            return as_expr(values[e.name])
        return e
    if isinstance(e, Const):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, values))
    if isinstance(e, Call):
        return Call(e.fn, substitute(e.arg, values))
    return BinOp(e.op, substitute(e.left, values), substitute(e.right, values))


def size(e: Expr) -> int:
    if isinstance(e, (Const, Sym)):
        return 1
    if isinstance(e, (Neg, Call)):
        return 1 + size(e.arg)
    return 1 + size(e.left) + size(e.right)


def _is_zero(e):
    return isinstance(e, Const) and e.value == 0.0


def _is_one(e):
    return isinstance(e, Const) and e.value == 1.0


def _add(a, b):
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return BinOp("+", a, b)


def _sub(a, b):
    if _is_zero(b):
        return a
    if _is_zero(a):
        return Neg(b)
    return BinOp("-", a, b)


def _mul(a, b):
    if _is_zero(a) or _is_zero(b):
        return Const(0.0)
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    return BinOp("*", a, b)


def diff(e: Expr, var: str = "x") -> Expr:
    """Symbolic derivative with respect to ``var`` (no simplification beyond 0/1 folding)."""
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Sym):
        return Const(1.0 if e.name == var else 0.0)
    if isinstance(e, Neg):
        d = diff(e.arg, var)
        return Const(0.0) if _is_zero(d) else Neg(d)
    if isinstance(e, Call):
        a = e.arg
        da = diff(a, var)
        if _is_zero(da):
            return Const(0.0)
        if e.fn == "exp":
            return _mul(e, da)
        if e.fn == "log":
            return BinOp("/", da, a)
        if e.fn == "sin":
            return _mul(Call("cos", a), da)
        if e.fn == "cos":
            return Neg(_mul(Call("sin", a), da))
        if e.fn == "sqrt":
            return BinOp("/", da, _mul(Const(2.0), e))
        raise ExprError(f"unknown function {e.fn}")
    a, b = e.left, e.right
    da, db = diff(a, var), diff(b, var)
    if e.op == "+":
        return _add(da, db)
    if e.op == "-":
        return _sub(da, db)
    if e.op == "*":
        return _add(_mul(da, b), _mul(a, db))
    if e.op == "/":
        if _is_zero(db):
            return BinOp("/", da, b) if not _is_zero(da) else Const(0.0)
        return BinOp("/", _sub(_mul(da, b), _mul(a, db)), BinOp("^", b, Const(2.0)))
    if e.op == "^":
        if var not in free_symbols(b):
            if _is_zero(da):
                return Const(0.0)
            if isinstance(b, Const):
                lowered = Const(b.value - 1.0)
            else:
                lowered = BinOp("-", b, Const(1.0))
            return _mul(_mul(b, BinOp("^", a, lowered)), da)
        # a^b = exp(b log a)
        inner = _add(_mul(db, Call("log", a)), _mul(b, BinOp("/", da, a)))
        return _mul(e, inner)
    raise ExprError(f"unknown operator {e.op}")


# ---------------------------------------------------------------------------
# evaluation

def integer_exponent(e: Expr):
    """Return the exponent as ``int`` when it is an integral constant, else None."""
    if isinstance(e, Const) and e.value == int(e.value) and abs(e.value) <= 64:
        return int(e.value)
    return None


def walk(e: Expr, env: Mapping[str, Any], ops) -> Any:
    """Evaluate ``e`` with the arithmetic supplied by ``ops``.

    ``ops`` provides ``const(v)``, ``div(a, b)``, ``ipow(a, k)``,
    ``pow(a, b)`` and one method per function name; the values it returns
    must support ``+ - *`` and unary minus.
    """
    if isinstance(e, Const):
        return ops.const(e.value)
    if isinstance(e, Sym):
        try:
            return ops.const(env[e.name]) if e.name != "x" else env[e.name]
        except KeyError:
            raise EvaluationError(f"symbol {e.name!r} is not bound") from None
    if isinstance(e, Neg):
        return -walk(e.arg, env, ops)
    if isinstance(e, Call):
        return getattr(ops, e.fn)(walk(e.arg, env, ops))
    left = walk(e.left, env, ops)
    if e.op == "^":
        k = integer_exponent(e.right)
        if k is not None:
            return ops.ipow(left, k)
        return ops.pow(left, walk(e.right, env, ops))
    right = walk(e.right, env, ops)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    if e.op == "*":
        return left * right
    if e.op == "/":
        return ops.div(left, right)
    raise ExprError(f"unknown operator {e.op}")


class NumpyOps:
    """Float64 arithmetic with domain guards, vectorised over arrays."""

    def const(self, v):
        return np.float64(v)

    def div(self, a, b):
        if np.any(np.asarray(b) == 0):
            raise DomainError("division by zero")
        return a / b

    def ipow(self, a, k):
        if k < 0 and np.any(np.asarray(a) == 0):
            raise DomainError("zero raised to a negative power")
        return a ** float(k) if k >= 0 else 1.0 / a ** float(-k)

    def pow(self, a, b):
        if np.any(np.asarray(a) < 0):
            raise DomainError("negative base with non-integer exponent")
        return np.power(a, b)

    def exp(self, a):
        with np.errstate(over="ignore"):
            return np.exp(a)

    def log(self, a):
        if np.any(np.asarray(a) <= 0):
            raise DomainError("logarithm of a non-positive value")
        return np.log(a)

    def sin(self, a):
        return np.sin(a)

    def cos(self, a):
        return np.cos(a)

    def sqrt(self, a):
        if np.any(np.asarray(a) < 0):
            raise DomainError("square root of a negative value")
        return np.sqrt(a)


class MpOps:
    """mpmath arithmetic at the ambient working precision."""

    def __init__(self):
        import mpmath

        self.mp = mpmath.mp

    def const(self, v):
        return self.mp.mpf(v) if not isinstance(v, complex) else self.mp.mpc(v)

    def div(self, a, b):
        if b == 0:
            raise DomainError("division by zero")
        return a / b

    def ipow(self, a, k):
        if k < 0 and a == 0:
            raise DomainError("zero raised to a negative power")
        return a ** k

    def pow(self, a, b):
        if self.mp.im(a) == 0 and a < 0:
            raise DomainError("negative base with non-integer exponent")
        return self.mp.power(a, b)

    def exp(self, a):
        return self.mp.exp(a)

    def log(self, a):
        if a == 0 or (self.mp.im(a) == 0 and a < 0):
            raise DomainError("logarithm of a non-positive value")
        return self.mp.log(a)

    def sin(self, a):
        return self.mp.sin(a)

    def cos(self, a):
        return self.mp.cos(a)

    def sqrt(self, a):
        if self.mp.im(a) == 0 and a < 0:
            raise DomainError("square root of a negative value")
        return self.mp.sqrt(a)


_NUMPY_OPS = NumpyOps()


def evaluate(e: Expr, **env) -> Any:
    """Evaluate with float64 numpy arithmetic; ``x`` may be an array."""
    if "x" in env:
        env["x"] = np.asarray(env["x"], dtype=float)
    return walk(e, env, _NUMPY_OPS)


def evaluate_mp(e: Expr, **env):
    """Evaluate with mpmath at the current ``mpmath.mp.dps``."""
    import mpmath

    ops = MpOps()
    if "x" in env:
        env["x"] = mpmath.mpf(env["x"])
    return walk(e, env, ops)


def lambdify(e: Expr, **bound) -> Callable:
    """Return ``x -> value`` with the other symbols fixed."""
    def f(x):
        return evaluate(e, x=x, **bound)

    return f
