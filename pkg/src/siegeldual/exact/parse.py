"""Parser for the canonical value grammar.

Accepted: integers, ``a/b``, generator names (``theta``, ``x``, ``T`` ...
whatever the field defines), ``+ - * / ^`` and parentheses.  ``^`` takes an
integer exponent, possibly negative.  Evaluation happens directly in the
target field, so ``(theta^2 - 1)/(theta - 1)`` parses to ``theta + 1``.
"""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

from ..errors import ParseError

if TYPE_CHECKING:
    from .fields import Field

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("int", num))
        elif name is not None:
            out.append(("name", name))
        elif op in "+-*/^()":
            out.append(("op", op))
        else:
            raise ParseError(f"unexpected character {op!r} in {text!r}")
        pos = m.end()
    return out


class _Parser:
    def __init__(self, field: Field, text: str):
        self.f = field
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.gens = field.generators()

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "")

    def take(self, op=None):
        tok = self.peek()
        if op is not None and tok != ("op", op):
            raise ParseError(f"expected {op!r} in {self.text!r}")
        self.i += 1
        return tok

    def expr(self):
        f = self.f
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = f.add(acc, rhs) if op == "+" else f.sub(acc, rhs)
        return acc

    def term(self):
        f = self.f
        acc = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                acc = f.mul(acc, rhs)
            else:
                acc = f.div(acc, rhs)
        return acc

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return self.f.neg(self.unary())
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "int":
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            return self._pow(base, sign * int(val))
        return base

    def _pow(self, a, n: int):
        f = self.f
        if n < 0:
            a, n = f.inv(a), -n
        result = f.one
        while n:
            if n & 1:
                result = f.mul(result, a)
            a = f.mul(a, a)
            n >>= 1
        return result

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return self.f.from_int(int(val))
        if kind == "name":
            if val not in self.gens:
                raise ParseError(f"unknown symbol {val!r} for {self.f!r}")
            return self.gens[val]
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_raw(field: Field, text: str):
    """Parse ``text`` into a raw payload of ``field``."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError(f"empty value {text!r}")
    p = _Parser(field, text)
    value = p.expr()
    if p.peek()[0] != "end":
        raise ParseError(f"trailing input in {text!r}")
    return value
