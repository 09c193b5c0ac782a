"""Polynomial expression trees over variables x1..xn.

The expression language is deliberately polynomial (no quotients, no
transcendentals) so that it is closed under exact symbolic
differentiation: every derivative is again an expression tree, and
second derivatives commute.

Grammar accepted by :func:`parse_expression`::

    expr   := term  (('+' | '-') term)*        # left associative
    term   := unary ('*' unary)*               # left associative
    unary  := '-' unary | power
    power  := atom ('^' UINT)*                 # exponent: integer literal
    atom   := NUMBER | 'x' UINT | '(' expr ')'

Precedence, tightest first: ^  then unary -  then *  then binary + -.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence, Union


class ExpressionError(ValueError):
    """Problem with the text or structure of an expression."""


class ParseError(ExpressionError):
    """Syntax or range error, carrying the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class EvaluationError(ArithmeticError):
    """Evaluation left the finite doubles (overflow)."""


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based, matching the surface syntax x1..xn


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int  # nonnegative


Expr = Union[Const, Var, Neg, Add, Sub, Mul, Pow]

_NUMBER_RE = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_UINT_RE = re.compile(r"\d+$")


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()":
            tokens.append((ch, ch, i))
            i += 1
        elif ch.isdigit() or ch == ".":
            m = _NUMBER_RE.match(text, i)
            if m is None:
                raise ParseError("malformed number", _byte_offset(text, i))
            tokens.append(("num", m.group(), i))
            i = m.end()
        elif ch == "x":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("expected variable index after 'x'", _byte_offset(text, i))
            tokens.append(("var", text[i + 1 : j], i))
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", _byte_offset(text, i))
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = _tokenize(text)
        self.pos = 0

    def _peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def _next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _fail(self, message: str, index: int) -> ParseError:
        return ParseError(message, _byte_offset(self.text, index))

    def parse(self) -> Expr:
        e = self._expr()
        kind, text, idx = self._peek()
        if kind != "end":
            raise self._fail(f"unexpected token {text!r}", idx)
        return e

    def _expr(self) -> Expr:
        e = self._term()
        while self._peek()[0] in "+-":
            op = self._next()[0]
            rhs = self._term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def _term(self) -> Expr:
        e = self._unary()
        while self._peek()[0] == "*":
            self._next()
            e = Mul(e, self._unary())
        return e

    def _unary(self) -> Expr:
        if self._peek()[0] == "-":
            self._next()
            return Neg(self._unary())
        return self._power()

    def _power(self) -> Expr:
        e = self._atom()
        while self._peek()[0] == "^":
            self._next()
            kind, text, idx = self._next()
            if kind != "num" or not _UINT_RE.match(text):
                raise self._fail("exponent must be a nonnegative integer", idx)
            e = Pow(e, int(text))
        return e

    def _atom(self) -> Expr:
        kind, text, idx = self._next()
        if kind == "num":
            value = float(text)
            if not math.isfinite(value):
                raise self._fail("number literal out of range", idx)
            return Const(value)
        if kind == "var":
            index = int(text)
            if index < 1 or index > self.n:
                raise self._fail(f"variable x{text} out of range for dimension {self.n}", idx)
            return Var(index)
        if kind == "(":
            e = self._expr()
            kind2, _, idx2 = self._next()
            if kind2 != ")":
                raise self._fail("expected ')'", idx2)
            return e
        if kind == "end":
            raise self._fail("unexpected end of input", idx)
        raise self._fail(f"unexpected token {text!r}", idx)


def parse_expression(text: str, n: int) -> Expr:
    """Parse ``text`` as an expression in variables x1..xn."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if not text or text.isspace():
        raise ParseError("empty expression", 0)
    return _Parser(text, n).parse()


def evaluate(e: Expr, x: Sequence[float]) -> float:
    """Evaluate at a point; raises EvaluationError if the result overflows."""
    value = _eval(e, x)
    if not math.isfinite(value):
        raise EvaluationError("expression overflowed to a non-finite value")
    return value


def _eval(e: Expr, x: Sequence[float]) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        if e.index > len(x):
            raise ValueError(f"point has dimension {len(x)} but expression uses x{e.index}")
        return float(x[e.index - 1])
    if isinstance(e, Neg):
        return -_eval(e.arg, x)
    if isinstance(e, Add):
        return _eval(e.left, x) + _eval(e.right, x)
    if isinstance(e, Sub):
        return _eval(e.left, x) - _eval(e.right, x)
    if isinstance(e, Mul):
        return _eval(e.left, x) * _eval(e.right, x)
    if isinstance(e, Pow):
        try:
            return _eval(e.base, x) ** e.exponent
        except OverflowError as exc:
            raise EvaluationError("power overflowed") from exc
    raise TypeError(f"not an expression node: {e!r}")


def differentiate(e: Expr, var: int) -> Expr:
    """Exact symbolic derivative with respect to x_var, constant-folded."""
    if var < 1:
        raise ValueError("variable index must be >= 1")
    return fold(_diff(e, var))


def _diff(e: Expr, var: int) -> Expr:
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0 if e.index == var else 0.0)
    if isinstance(e, Neg):
        return Neg(_diff(e.arg, var))
    if isinstance(e, Add):
        return Add(_diff(e.left, var), _diff(e.right, var))
    if isinstance(e, Sub):
        return Sub(_diff(e.left, var), _diff(e.right, var))
    if isinstance(e, Mul):
        return Add(Mul(_diff(e.left, var), e.right), Mul(e.left, _diff(e.right, var)))
    if isinstance(e, Pow):
        if e.exponent == 0:
            return Const(0.0)
        return Mul(Mul(Const(float(e.exponent)), Pow(e.base, e.exponent - 1)), _diff(e.base, var))
    raise TypeError(f"not an expression node: {e!r}")


def fold(e: Expr) -> Expr:
    """Constant folding: collapse constant subtrees and drop 0/1 units.

    This is the only simplification performed; anything stronger would
    change evaluation order and is not needed for exactness.
    """
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Neg):
        a = fold(e.arg)
        if isinstance(a, Const):
            return Const(-a.value)
        if isinstance(a, Neg):
            return a.arg
        return Neg(a)
    if isinstance(e, Add):
        l, r = fold(e.left), fold(e.right)
        if isinstance(l, Const) and isinstance(r, Const):
            return Const(l.value + r.value)
        if isinstance(l, Const) and l.value == 0.0:
            return r
        if isinstance(r, Const) and r.value == 0.0:
            return l
        return Add(l, r)
    if isinstance(e, Sub):
        l, r = fold(e.left), fold(e.right)
        if isinstance(l, Const) and isinstance(r, Const):
            return Const(l.value - r.value)
        if isinstance(r, Const) and r.value == 0.0:
            return l
        if isinstance(l, Const) and l.value == 0.0:
            return fold(Neg(r))
        return Sub(l, r)
    if isinstance(e, Mul):
        l, r = fold(e.left), fold(e.right)
        if isinstance(l, Const) and isinstance(r, Const):
            return Const(l.value * r.value)
        if isinstance(l, Const):
            if l.value == 0.0:
                return Const(0.0)
            if l.value == 1.0:
                return r
        if isinstance(r, Const):
            if r.value == 0.0:
                return Const(0.0)
            if r.value == 1.0:
                return l
        return Mul(l, r)
    if isinstance(e, Pow):
        b = fold(e.base)
        if e.exponent == 0:
            return Const(1.0)
        if e.exponent == 1:
            return b
        if isinstance(b, Const):
            try:
                return Const(float(b.value**e.exponent))
            except OverflowError:
                return Pow(b, e.exponent)
        return Pow(b, e.exponent)
    raise TypeError(f"not an expression node: {e!r}")


# Printing precedence; a child is parenthesized when its level is below
# what its position requires.  Negative constants print with a leading
# '-', so they rank like a unary minus.
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _prec(e: Expr) -> int:
    if isinstance(e, Const):
        return _PREC_NEG if e.value < 0 else _PREC_ATOM
    if isinstance(e, Var):
        return _PREC_ATOM
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Mul):
        return _PREC_MUL
    return _PREC_ADD


def _wrap(e: Expr, min_prec: int) -> str:
    s = to_string(e)
    return f"({s})" if _prec(e) < min_prec else s


def to_string(e: Expr) -> str:
    """Print an expression; parsing the result evaluates identically."""
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _PREC_NEG)
    if isinstance(e, Add):
        return f"{_wrap(e.left, _PREC_ADD)} + {_wrap(e.right, _PREC_MUL)}"
    if isinstance(e, Sub):
        return f"{_wrap(e.left, _PREC_ADD)} - {_wrap(e.right, _PREC_MUL)}"
    if isinstance(e, Mul):
        return f"{_wrap(e.left, _PREC_MUL)}*{_wrap(e.right, _PREC_NEG)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_ATOM)}^{e.exponent}"
    raise TypeError(f"not an expression node: {e!r}")
