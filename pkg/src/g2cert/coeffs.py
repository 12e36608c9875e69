"""Parser for the radical coefficient grammar used by the registry files.

    value := term (('+'|'-') term)*
    term  := INT '/' INT | INT | 'sqrt(' INT ')' ['/' INT] | INT '*sqrt(' INT ')' ['/' INT]

Whitespace is not allowed; a leading sign is.
"""

from __future__ import annotations

import math


class CoefficientParseError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise CoefficientParseError(self.text, self.pos, msg)

    def peek(self, s: str) -> bool:
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        if not self.peek(s):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def sqrt_part(self) -> float:
        self.expect("sqrt(")
        n = self.integer()
        self.expect(")")
        return math.sqrt(n)

    def denominator(self) -> int:
        if self.peek("/"):
            self.pos += 1
            den = self.integer()
            if den == 0:
                self.error("division by zero")
            return den
        return 1

    def term(self) -> float:
        if self.peek("sqrt("):
            val = self.sqrt_part()
            return val / self.denominator()
        n = self.integer()
        if self.peek("*sqrt("):
            self.pos += 1
            val = n * self.sqrt_part()
            return val / self.denominator()
        if self.peek("/"):
            return n / self.denominator()
        return float(n)

    def value(self) -> float:
        if not self.text:
            self.error("empty coefficient")
        sign = 1.0
        if self.peek("-") or self.peek("+"):
            sign = -1.0 if self.text[self.pos] == "-" else 1.0
            self.pos += 1
        total = sign * self.term()
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch not in "+-":
                self.error(f"unexpected character {ch!r}")
            self.pos += 1
            t = self.term()
            total += t if ch == "+" else -t
        return total


def parse_coefficient(text: str) -> float:
    if not isinstance(text, str):
        raise TypeError(f"coefficient must be a string, got {type(text).__name__}")
    return _Parser(text).value()
