"""Text grammars for rational functions, ℓ-weights and module specs.

    linrat   := product
    product  := power (("*" | "/" | <juxtaposition>) power)*
    power    := atom ("^" ["-"] int)?
    atom     := "u" | "1" | "(" "u" ("+"|"-") rational ")" | "(" product ")"

    lweight  := term (("*" | "/") term)*      term := ("Psi"|"Y"|"A") "(" int "," rational ")" ("^" ["-"] int)?

    spec     := name "(" args ")" ("*" name "(" args ")")*
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from ..core.exceptions import ParseError
from .ratfun import LinRat

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass
class _Token:
    kind: str  # "num", "name", "sym"
    text: str


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    position = 0
    stripped = text.rstrip()
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if not match:
            raise ParseError(f"Unexpected input at {position} in {text!r}")
        number, name, symbol = match.groups()
        if number is not None:
            tokens.append(_Token("num", number))
        elif name is not None:
            tokens.append(_Token("name", name))
        else:
            tokens.append(_Token("sym", symbol))
        position = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.position = 0

    def peek(self, offset: int = 0) -> Optional[_Token]:
        index = self.position + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def take(self) -> _Token:
        token = self.peek()
        if token is None:
            raise ParseError(f"Unexpected end of input in {self.text!r}")
        self.position += 1
        return token

    def expect(self, symbol: str) -> None:
        token = self.take()
        if token.text != symbol:
            raise ParseError(f"Expected {symbol!r} but found {token.text!r} in {self.text!r}")

    def at(self, symbol: str) -> bool:
        token = self.peek()
        return token is not None and token.kind == "sym" and token.text == symbol

    def done(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"Trailing input {self.peek().text!r} in {self.text!r}")

    def integer(self) -> int:
        sign = -1 if self.at("-") else 1
        if self.at("-") or self.at("+"):
            self.take()
        token = self.take()
        if token.kind != "num":
            raise ParseError(f"Expected an integer, found {token.text!r} in {self.text!r}")
        return sign * int(token.text)

    def rational(self) -> Fraction:
        value = Fraction(self.integer())
        nxt, after = self.peek(), self.peek(1)
        if nxt is not None and nxt.text == "/" and after is not None and after.kind == "num":
            self.take()
            denominator = int(self.take().text)
            if denominator == 0:
                raise ParseError(f"Zero denominator in {self.text!r}")
            value /= denominator
        return value

    # rational functions

    def product(self) -> LinRat:
        result = self.power()
        while True:
            token = self.peek()
            if token is None or token.text in (")", ",", ";"):
                return result
            if token.text == "*":
                self.take()
                result = result * self.power()
            elif token.text == "/":
                self.take()
                result = result / self.power()
            elif token.text == "(" or token.text == "u":
                result = result * self.power()
            else:
                raise ParseError(f"Unexpected {token.text!r} in {self.text!r}")

    def power(self) -> LinRat:
        base = self.atom()
        if self.at("^"):
            self.take()
            base = base ** self.integer()
        return base

    def atom(self) -> LinRat:
        token = self.take()
        if token.kind == "name" and token.text == "u":
            return LinRat.linear(0)
        if token.kind == "num":
            if token.text != "1":
                raise ParseError(
                    f"Only monic rational functions are accepted; found constant "
                    f"{token.text!r} in {self.text!r}"
                )
            return LinRat.one()
        if token.text == "(":
            first, second = self.peek(), self.peek(1)
            if (
                first is not None
                and first.text == "u"
                and second is not None
                and second.text in ("+", "-")
            ):
                self.take()
                sign = self.take().text
                root = self.rational()
                self.expect(")")
                return LinRat.linear(root if sign == "-" else -root)
            inner = self.product()
            self.expect(")")
            return inner
        raise ParseError(f"Unexpected {token.text!r} in {self.text!r}")


def parse_linrat(text: str) -> LinRat:
    """Parse a monic rational function such as ``(u-3)(u-9)/(u*(u-2))``.

    Raises:
        ParseError: On malformed or non-monic input.
    """
    if not text or not text.strip():
        raise ParseError("Empty rational function")
    parser = _Parser(text)
    result = parser.product()
    parser.done()
    return result


def parse_lweight_terms(text: str) -> List[Tuple[str, int, Fraction, int]]:
    """Parse ``Psi(1,3)*Psi(2,-1)^-1*A(1,0)^2`` into (kind, node, a, power) terms.

    Raises:
        ParseError: On malformed input or unknown symbols.
    """
    if not text or not text.strip():
        raise ParseError("Empty ℓ-weight")
    parser = _Parser(text)
    terms: List[Tuple[str, int, Fraction, int]] = []
    sign = 1
    first = True
    while True:
        token = parser.peek()
        if token is None:
            break
        if not first:
            if token.text == "*":
                sign = 1
            elif token.text == "/":
                sign = -1
            else:
                raise ParseError(f"Expected '*' or '/' but found {token.text!r}")
            parser.take()
            token = parser.take()
        else:
            token = parser.take()
        first = False
        if token.kind == "num" and token.text == "1":
            continue
        if token.kind != "name" or token.text not in ("Psi", "Y", "A"):
            raise ParseError(f"Unknown ℓ-weight symbol {token.text!r} in {text!r}")
        parser.expect("(")
        node = parser.integer()
        parser.expect(",")
        a = parser.rational()
        parser.expect(")")
        power = 1
        if parser.at("^"):
            parser.take()
            power = parser.integer()
        terms.append((token.text, node, a, sign * power))
    return terms


@dataclass(frozen=True)
class FamilySpec:
    """A module family name with its raw argument strings."""

    name: str
    args: Tuple[str, ...]

    def rationals(self, count: int) -> Tuple[Fraction, ...]:
        if len(self.args) != count:
            raise ParseError(f"{self.name} takes {count} argument(s), got {len(self.args)}")
        values = []
        for arg in self.args:
            parser = _Parser(arg)
            values.append(parser.rational())
            parser.done()
        return tuple(values)


def _split_top_level(text: str, separators: str) -> List[str]:
    parts, depth, current = [], 0, []
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"Unbalanced parentheses in {text!r}")
        if char in separators and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(char)
    if depth != 0:
        raise ParseError(f"Unbalanced parentheses in {text!r}")
    parts.append("".join(current))
    return parts


def parse_family_specs(text: str) -> List[FamilySpec]:
    """Parse ``Lba(9,0)*Lba(3,2)`` or ``Simple((u-1)/u)`` into family specs.

    Arguments of ``Simple``/``Verma`` are kept whole; ``Weyl(r;s)`` splits on ``;``.
    """
    specs = []
    for chunk in _split_top_level(text.strip(), "*"):
        chunk = chunk.strip()
        match = re.fullmatch(r"([A-Za-z]+)\s*\((.*)\)", chunk, flags=re.S)
        if not match:
            raise ParseError(f"Malformed module spec {chunk!r}")
        name, inner = match.group(1), match.group(2)
        if name in ("Simple", "Verma"):
            args: Tuple[str, ...] = (inner.strip(),)
        elif name == "Weyl":
            args = tuple(part.strip() for part in _split_top_level(inner, ";"))
        else:
            args = tuple(part.strip() for part in _split_top_level(inner, ","))
        specs.append(FamilySpec(name, args))
    return specs
