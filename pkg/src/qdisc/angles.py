"""Angle expressions such as ``2 * pi`` or ``-(pi / 4)`` and uniform angle grids.

Grammar::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | primary
    primary := NUMBER | "pi" | "(" expr ")"
"""
from __future__ import annotations

import math
import re

import numpy as np

from .errors import AngleSyntaxError, ValidationError

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|(pi)\b|([-+*/()]))")


def _tokenize(src: str):
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if m is None:
            start = len(src) - len(src[pos:].lstrip())
            raise AngleSyntaxError(f"unexpected character {src[start]!r}", start)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", float(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("num", math.pi, start))
        else:
            tokens.append((m.group(3), None, start))
        pos = m.end()
    tokens.append(("end", None, len(src)))
    return tokens


class _Parser:
    def __init__(self, src):
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] in "*/":
            op, _, pos = self.take()
            rhs = self.unary()
            if op == "*":
                value *= rhs
            elif rhs == 0:
                raise AngleSyntaxError("division by zero", pos)
            else:
                value /= rhs
        return value

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        return self.primary()

    def primary(self):
        kind, value, pos = self.take()
        if kind == "num":
            return value
        if kind == "(":
            inner = self.expr()
            if self.peek()[0] != ")":
                raise AngleSyntaxError("expected ')'", self.peek()[2])
            self.take()
            return inner
        what = "end of input" if kind == "end" else repr(kind)
        raise AngleSyntaxError(f"unexpected {what}", pos)


def parse_angle_expression(src) -> float:
    """Evaluate an angle expression to radians. Plain numbers pass through."""
    if isinstance(src, bool):
        raise ValidationError(f"not an angle: {src!r}")
    if isinstance(src, (int, float)):
        value = float(src)
    else:
        if not isinstance(src, str) or not src.strip():
            raise ValidationError("angle expression must be a non-empty string")
        parser = _Parser(src)
        value = parser.expr()
        kind, _, pos = parser.peek()
        if kind != "end":
            raise AngleSyntaxError("unexpected trailing input", pos)
    if not math.isfinite(value):
        raise ValidationError(f"angle {src!r} is not finite")
    return value


def angle_grid(start: float, stop: float, num_steps: int) -> list:
    """``num_steps`` evenly spaced angles including both endpoints."""
    if num_steps == 1:
        if start != stop:
            raise ValidationError("num_steps = 1 requires start == stop")
        return [float(start)]
    if num_steps < 2:
        raise ValidationError(f"num_steps must be at least 1, got {num_steps}")
    return [float(x) for x in np.linspace(start, stop, num_steps)]
