"""Expression front-end: parse, evaluate and print real functions of one
real variable.

Grammar (whitespace insignificant)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := unary ("^" factor)?          -- "^" is right-associative
    unary  := "-" unary | atom
    atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)? ")" | "(" expr ")"

Note that the base of "^" is a *unary* production, so ``-x^2`` parses as
``(-x)^2``; write ``0-x^2`` or ``-(x^2)`` for the other reading.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Mapping, Union

from .errors import DomainError, ParseError, UnboundVariableError

__all__ = [
    "Constant", "Variable", "Unary", "Binary", "Call", "Expr",
    "parse", "evaluate", "free_vars", "render", "as_function",
    "UNARY_FUNCTIONS", "BINARY_FUNCTIONS",
]

UNARY_FUNCTIONS = ("abs", "sign", "sin", "cos", "tan", "exp", "log", "sqrt")
BINARY_FUNCTIONS = ("min", "max")


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # only "neg"
    child: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # "add" | "sub" | "mul" | "div" | "pow"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple["Expr", ...]


Expr = Union[Constant, Variable, Unary, Binary, Call]

_NUMBER_RE = re.compile(r"\d+(?:\.\d*)?(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PUNCT = "+-*/^(),"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, char-offset) triples, ending with an eof token."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            m = _NUMBER_RE.match(text, i)
            tokens.append(("number", m.group(), i))
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(("ident", m.group(), i))
            i = m.end()
            continue
        raise ParseError(_byte_offset(text, i), "a token", ch)
    tokens.append(("eof", "", n))
    return tokens


def _byte_offset(text: str, char_index: int) -> int:
    return len(text[:char_index].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: str) -> None:
        kind, text, off = self.peek()
        found = text if kind != "eof" else "end of input"
        raise ParseError(_byte_offset(self.text, off), expected, found)

    def expect(self, kind: str, expected: str) -> tuple[str, str, int]:
        if self.peek()[0] != kind:
            self.fail(expected)
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "eof":
            self.fail("an operator or end of input")
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            right = self.term()
            left = Binary("add" if op == "+" else "sub", left, right)
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            right = self.factor()
            left = Binary("mul" if op == "*" else "div", left, right)
        return left

    def factor(self) -> Expr:
        base = self.unary()
        if self.peek()[0] == "^":
            self.advance()
            return Binary("pow", base, self.factor())
        return base

    def unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.advance()
            return Unary("neg", self.unary())
        return self.atom()

    def atom(self) -> Expr:
        kind, text, off = self.peek()
        if kind == "number":
            self.advance()
            return Constant(float(text))
        if kind == "ident":
            self.advance()
            if self.peek()[0] != "(":
                return Variable(text)
            if text not in UNARY_FUNCTIONS and text not in BINARY_FUNCTIONS:
                raise ParseError(_byte_offset(self.text, off),
                                 "a recognized function name", text)
            self.advance()
            args = [self.expr()]
            if self.peek()[0] == ",":
                self.advance()
                args.append(self.expr())
            self.expect(")", "')'")
            want = 2 if text in BINARY_FUNCTIONS else 1
            if len(args) != want:
                raise ParseError(_byte_offset(self.text, off),
                                 f"{want} argument(s) to {text}", f"{len(args)} given")
            return Call(text, tuple(args))
        if kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")", "')'")
            return e
        self.fail("a number, name, '-', or '('")
        raise AssertionError("unreachable")


def parse(text: str) -> Expr:
    """Parse ``text`` into an AST; raises ParseError with a byte offset."""
    return _Parser(text).parse()


def free_vars(e: Expr) -> frozenset[str]:
    """The set of variable names occurring in ``e``."""
    if isinstance(e, Variable):
        return frozenset((e.name,))
    if isinstance(e, Constant):
        return frozenset()
    if isinstance(e, Unary):
        return free_vars(e.child)
    if isinstance(e, Binary):
        return free_vars(e.left) | free_vars(e.right)
    return frozenset().union(*(free_vars(a) for a in e.args)) if e.args else frozenset()


def _finite(v: float, node: Expr) -> float:
    if not math.isfinite(v):
        raise DomainError("result is not a finite real", subject=render(node))
    return v


def evaluate(e: Expr, bindings: Mapping[str, float]) -> float:
    """IEEE-double evaluation. Out-of-domain conditions (division by zero,
    log/sqrt of negatives, non-real powers, overflow) raise DomainError;
    the result is always a finite float."""
    if isinstance(e, Constant):
        return e.value
    if isinstance(e, Variable):
        if e.name not in bindings:
            raise UnboundVariableError(e.name)
        return float(bindings[e.name])
    if isinstance(e, Unary):
        return -evaluate(e.child, bindings)
    if isinstance(e, Binary):
        lv = evaluate(e.left, bindings)
        rv = evaluate(e.right, bindings)
        if e.op == "add":
            return _finite(lv + rv, e)
        if e.op == "sub":
            return _finite(lv - rv, e)
        if e.op == "mul":
            return _finite(lv * rv, e)
        if e.op == "div":
            if rv == 0.0:
                raise DomainError("division by zero", subject=render(e), argument=rv)
            return _finite(lv / rv, e)
        # pow
        if lv < 0.0 and rv != math.floor(rv):
            raise DomainError("negative base with non-integer exponent",
                              subject=render(e), argument=lv)
        try:
            return _finite(math.pow(lv, rv), e)
        except (ValueError, OverflowError):
            raise DomainError("power is not a finite real",
                              subject=render(e), argument=lv) from None
    return _call(e, bindings)


def _call(e: Call, bindings: Mapping[str, float]) -> float:
    vals = [evaluate(a, bindings) for a in e.args]
    x = vals[0]
    try:
        if e.fn == "abs":
            return math.fabs(x)
        if e.fn == "sign":
            return 0.0 if x == 0.0 else (1.0 if x > 0.0 else -1.0)
        if e.fn == "sin":
            return _finite(math.sin(x), e)
        if e.fn == "cos":
            return _finite(math.cos(x), e)
        if e.fn == "tan":
            return _finite(math.tan(x), e)
        if e.fn == "exp":
            return _finite(math.exp(x), e)
        if e.fn == "log":
            return _finite(math.log(x), e)
        if e.fn == "sqrt":
            return _finite(math.sqrt(x), e)
        if e.fn == "min":
            return min(x, vals[1])
        if e.fn == "max":
            return max(x, vals[1])
    except (ValueError, OverflowError):
        raise DomainError(f"{e.fn} applied outside its domain",
                          subject=render(e), argument=x) from None
    raise AssertionError(f"unknown function {e.fn}")


def render(e: Expr) -> str:
    """Canonical printer. For every tree produced by parse(),
    parse(render(e)) == e structurally."""
    if isinstance(e, Constant):
        if not math.isfinite(e.value):
            raise ValueError("cannot render a non-finite constant")
        return repr(e.value)
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Unary):
        child = render(e.child)
        if isinstance(e.child, Binary):
            child = f"({child})"
        return f"-{child}"
    if isinstance(e, Call):
        return f"{e.fn}({','.join(render(a) for a in e.args)})"
    l, r = render(e.left), render(e.right)
    if e.op in ("add", "sub"):
        if isinstance(e.right, Binary) and e.right.op in ("add", "sub"):
            r = f"({r})"
        return f"{l}{'+' if e.op == 'add' else '-'}{r}"
    if e.op in ("mul", "div"):
        if isinstance(e.left, Binary) and e.left.op in ("add", "sub"):
            l = f"({l})"
        if isinstance(e.right, Binary) and e.right.op in ("add", "sub", "mul", "div"):
            r = f"({r})"
        return f"{l}{'*' if e.op == 'mul' else '/'}{r}"
    # pow: base must be a unary production, exponent a factor
    if isinstance(e.left, Binary):
        l = f"({l})"
    if isinstance(e.right, Binary) and e.right.op != "pow":
        r = f"({r})"
    return f"{l}^{r}"


def as_function(e: Expr, var: str | None = None) -> Callable[[float], float]:
    """Wrap an expression with at most one free variable as ``f: float -> float``."""
    names = free_vars(e)
    if var is None:
        if len(names) > 1:
            raise ValueError(f"expression has several free variables: {sorted(names)}")
        var = next(iter(names)) if names else "x"
    elif names - {var}:
        raise ValueError(f"expression has free variables besides {var!r}: "
                         f"{sorted(names - {var})}")

    def f(t: float) -> float:
        return evaluate(e, {var: t})

    return f
