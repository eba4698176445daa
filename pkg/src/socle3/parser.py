"""Parsing and canonical printing of polynomial expressions.

Grammar (whitespace insignificant):

    poly   := [sign] term ( sign term )*
    term   := factor ( '*' factor )*
    factor := INT [ '/' INT ] | VAR [ '^' INT ]
    VAR    := ('x' | 'y') INT        (1-based index, no space)

'^' binds tighter than '*'.  Implicit multiplication ("2y1") is rejected;
exponent 0 and repeated variables inside a term are accepted and normalized.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import RING, Poly


class ParseError(ValueError):
    """Syntax or validation error, carrying the 0-based input offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]\d*)|([*^+\-/]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}",
                             pos + (len(text[pos:]) - len(stripped)))
        num, name, op = m.groups()
        start = m.end() - len(num or name or op)
        if num is not None:
            tokens.append(("int", num, start))
        elif name is not None:
            tokens.append(("name", name, start))
        else:
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_poly(text: str, space: str, nvars: int) -> Poly:
    """Parse ``text`` into a polynomial in the given variable space."""
    if nvars < 1:
        raise ValueError("need at least one variable")
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        t = tokens[i]
        i += 1
        return t

    def expect_int(what: str) -> tuple:
        kind, val, pos = peek()
        if kind != "int":
            raise ParseError(f"expected {what}", pos)
        take()
        return int(val), pos

    def parse_var(name: str, pos: int):
        m = re.fullmatch(r"([xy])(\d+)", name)
        if m is None:
            raise ParseError(f"malformed variable {name!r}", pos)
        family, idx = m.group(1), int(m.group(2))
        if family != space:
            raise ParseError(
                f"variable {name!r} does not belong to the "
                f"{'ring (x)' if space == RING else 'dual (y)'} space", pos)
        if not 1 <= idx <= nvars:
            raise ParseError(
                f"variable index {idx} out of range 1..{nvars}", pos)
        return idx - 1

    def parse_term():
        coeff = Fraction(1)
        exps = [0] * nvars
        while True:
            kind, val, pos = peek()
            if kind == "int":
                take()
                value = Fraction(int(val))
                k2, v2, p2 = peek()
                if k2 == "op" and v2 == "/":
                    take()
                    den, dpos = expect_int("denominator")
                    if den == 0:
                        raise ParseError("division by zero in coefficient", dpos)
                    value /= den
                coeff *= value
            elif kind == "name":
                take()
                var = parse_var(val, pos)
                exp = 1
                k2, v2, _ = peek()
                if k2 == "op" and v2 == "^":
                    take()
                    exp, _ = expect_int("exponent")
                exps[var] += exp
            else:
                raise ParseError("expected a coefficient or variable", pos)
            kind, val, pos = peek()
            if kind == "op" and val == "*":
                take()
                continue
            return coeff, tuple(exps)

    terms: dict = {}
    first = True
    while True:
        kind, val, pos = peek()
        if kind == "end":
            if first:
                raise ParseError("empty expression", pos)
            break
        sign = 1
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        elif not first:
            raise ParseError("expected '+' or '-' between terms", pos)
        coeff, mono = parse_term()
        coeff *= sign
        terms[mono] = terms.get(mono, Fraction(0)) + coeff
        first = False
    return Poly(space, nvars, terms)


def _print_key(mono):
    # degree descending, then variable-1-major within a degree
    return (-sum(mono), tuple(-e for e in mono))


def print_poly(p: Poly) -> str:
    """Canonical text form; parse_poly(print_poly(p)) == p."""
    if p.is_zero():
        return "0"
    items = sorted(p.terms.items(), key=lambda t: _print_key(t[0]))
    pieces = []
    for mono, coeff in items:
        body_parts = []
        abs_coeff = abs(coeff)
        if abs_coeff != 1 or not any(mono):
            body_parts.append(str(abs_coeff))
        for i, e in enumerate(mono):
            if e == 0:
                continue
            v = f"{p.space}{i + 1}"
            body_parts.append(v if e == 1 else f"{v}^{e}")
        body = "*".join(body_parts)
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)
