"""Recursive-descent parser for the arithmetic expression grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' exponent)?
    exponent := '-'? INT | '(' '-'? INT ')'
    atom   := INT | IDENT | '(' expr ')'

Names are looked up through a caller-supplied ``resolve`` function, so the
same parser reads tower elements and polynomials in x, y, z.
"""

from __future__ import annotations

import re

from ..errors import SessionSyntaxError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def tokenize(text: str, line: int = 1, col0: int = 1):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise SessionSyntaxError(f"unexpected character '{ch}'", line, col0 + start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, resolve, one, line, col0):
        self.tokens = tokenize(text, line, col0)
        self.pos = 0
        self.resolve = resolve
        self.one = one
        self.line = line
        self.col0 = col0

    def error(self, msg, tok=None):
        tok = tok or self.tokens[self.pos]
        return SessionSyntaxError(msg, self.line, self.col0 + tok[2])

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, op):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == op:
            self.pos += 1
            return True
        return False

    def expect(self, op):
        if not self.accept(op):
            raise self.error(f"expected '{op}'")

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token '{self.peek()[1]}'")
        return value

    def expr(self):
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            if self.accept("*"):
                value = value * self.unary()
            elif self.accept("/"):
                tok = self.peek()
                rhs = self.unary()
                try:
                    value = value / rhs
                except ZeroDivisionError:
                    raise self.error("division by zero", tok) from None
            else:
                return value

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def exponent(self):
        paren = self.accept("(")
        sign = -1 if self.accept("-") else 1
        tok = self.take()
        if tok[0] != "int":
            raise self.error("exponent must be an integer literal", tok)
        if paren:
            self.expect(")")
        return sign * tok[1]

    def power(self):
        base = self.atom()
        if self.accept("^"):
            tok = self.peek()
            e = self.exponent()
            try:
                return base ** e
            except ZeroDivisionError:
                raise self.error("negative power of zero", tok) from None
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return self.one * val
        if kind == "name":
            try:
                return self.resolve(val)
            except Exception as exc:
                # keep the error type but attach a position
                exc.args = (f"{exc.args[0] if exc.args else exc} (line {self.line}, col {self.col0 + tok[2]})",)
                exc.line, exc.col = self.line, self.col0 + tok[2]
                raise
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise self.error("expected a number, a name or '('", tok)


def parse_expression(text: str, resolve, one, line: int = 1, col0: int = 1):
    """Parse ``text`` into a value built from ``one`` and ``resolve(name)``."""
    return _Parser(text, resolve, one, line, col0).parse()
