"""Recursive-descent parser for the polynomial text grammar.

    poly   ::= ['-' | '+'] term (('+' | '-') term)*
    term   ::= coeff ('*' factor)* | factor ('*' factor)*
    factor ::= gen ('^' int)?
    coeff  ::= int | int '/' int
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple

from .gca import Element, FreeGCA, normalize

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected: str):
        self.text = text
        self.pos = pos
        self.expected = expected
        found = repr(text[pos]) if pos < len(text) else "end of input"
        super().__init__(f"at position {pos}: expected {expected}, found {found}")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(1) is not None:
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        else:
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ambient: FreeGCA):
        self.text = text
        self.ambient = ambient
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, op: str) -> bool:
        kind, val, _ = self.peek()
        if kind == "op" and val == op:
            self.i += 1
            return True
        return False

    def fail(self, expected: str):
        raise ParseError(self.text, self.peek()[2], expected)

    def integer(self) -> int:
        kind, val, _ = self.peek()
        if kind != "int":
            self.fail("integer")
        self.i += 1
        return int(val)

    def factor(self) -> Tuple[str, int]:
        kind, name, pos = self.peek()
        if kind != "name":
            self.fail("generator name")
        if name not in self.ambient.index:
            raise ParseError(self.text, pos, f"a known generator (not {name!r})")
        self.i += 1
        power = 1
        if self.accept("^"):
            power = self.integer()
        return name, power

    def term(self, sign: int) -> Element:
        coeff = Fraction(sign)
        factors: List[Tuple[str, int]] = []
        if self.peek()[0] == "int":
            num = self.integer()
            den = 1
            if self.accept("/"):
                den = self.integer()
                if den == 0:
                    raise ParseError(self.text, self.toks[self.i - 1][2], "nonzero denominator")
            coeff *= Fraction(num, den)
        else:
            factors.append(self.factor())
        while self.accept("*"):
            factors.append(self.factor())
        return normalize(self.ambient, factors, coeff)

    def poly(self) -> Element:
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        result = self.term(sign)
        while True:
            if self.accept("+"):
                result = result + self.term(1)
            elif self.accept("-"):
                result = result + self.term(-1)
            else:
                break
        if self.peek()[0] != "end":
            self.fail("'+', '-', '*' or end of input")
        return result


def parse_poly(text: str, ambient: FreeGCA, degree: Optional[int] = None) -> Element:
    """Parse ``text`` into an Element of ``ambient``.

    With ``degree`` given, the result must be zero or homogeneous of that degree.
    """
    if not text or not text.strip():
        raise ParseError(text or "", 0, "a polynomial")
    e = _Parser(text, ambient).poly()
    if degree is not None and e:
        if not e.is_homogeneous():
            raise ValueError(f"{text!r} is not homogeneous")
        if e.degree != degree:
            raise ValueError(f"{text!r} has degree {e.degree}, expected {degree}")
    return e
