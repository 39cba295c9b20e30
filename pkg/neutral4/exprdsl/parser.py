"""Recursive-descent parser for scalar expressions.

Grammar (see docs/grammar.ebnf)::

    expr  = term { ("+" | "-") term } ;
    term  = unary { ("*" | "/") unary } ;
    unary = "-" unary | power ;
    power = atom [ "^" [ "-" ] integer ] ;
    atom  = number | "pi" | ident | func "(" expr ")" | "(" expr ")" ;

Exponentiation binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.
There is no implicit multiplication. A unary minus applied directly to a
numeric constant folds into a negative constant.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Sequence

from neutral4.errors import ExprSyntaxError, UnknownSymbolError
from neutral4.exprdsl.expr import FUNCTIONS, Binary, Const, Coord, Expr, Param, Pow, Unary

logger = logging.getLogger(__name__)

NUMBER_RE = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
OPERATOR_CHARS = "+-*/^()"
RESERVED = frozenset(FUNCTIONS) | {"pi"}


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "ident", "op" or "end"
    text: str
    offset: int


@dataclass(frozen=True)
class SymbolTable:
    """Legal names inside an expression: chart coordinates (in index order) and parameters."""

    coordinates: Sequence[str] = ()
    parameters: FrozenSet[str] = field(default_factory=frozenset)

    @classmethod
    def build(cls, coordinates: Sequence[str], parameters: Iterable[str] = ()) -> "SymbolTable":
        return cls(tuple(coordinates), frozenset(parameters))


def byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str, base_offset: int = 0) -> List[Token]:
    """Split expression text into tokens; offsets are bytes from `base_offset`."""
    tokens: List[Token] = []
    idx = 0
    while idx < len(text):
        c = text[idx]
        if not c.isascii():
            raise ExprSyntaxError(
                f"non-ASCII character {c!r}", base_offset + byte_offset(text, idx)
            )
        if c.isspace():
            idx += 1
            continue
        offset = base_offset + idx
        if c.isdigit() or (c == "." and idx + 1 < len(text) and text[idx + 1].isdigit()):
            match = NUMBER_RE.match(text, idx)
            assert match is not None
            tokens.append(Token("number", match.group(0), offset))
            idx = match.end()
            continue
        if c.isalpha() or c == "_":
            match = IDENT_RE.match(text, idx)
            assert match is not None
            tokens.append(Token("ident", match.group(0), offset))
            idx = match.end()
            continue
        if c in OPERATOR_CHARS:
            tokens.append(Token("op", c, offset))
            idx += 1
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", offset)
    tokens.append(Token("end", "", base_offset + len(text)))
    return tokens


class ExpressionParser:
    """Parser over one token stream; use `parse_expression` rather than this class directly."""

    def __init__(self, text: str, table: SymbolTable, base_offset: int = 0):
        self.text = text
        self.table = table
        self.tokens = tokenize(text, base_offset)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def accept(self, text: str) -> bool:
        token = self.peek()
        if token.kind == "op" and token.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token.kind != "op" or token.text != text:
            raise ExprSyntaxError(f"expected '{text}', found {self._describe(token)}", token.offset)
        return self.advance()

    @staticmethod
    def _describe(token: Token) -> str:
        return "end of input" if token.kind == "end" else f"'{token.text}'"

    def parse(self) -> Expr:
        expr = self.expr()
        token = self.peek()
        if token.kind != "end":
            raise ExprSyntaxError(f"unexpected {self._describe(token)}", token.offset)
        return expr

    def expr(self) -> Expr:
        node = self.term()
        while True:
            if self.accept("+"):
                node = Binary("add", node, self.term())
            elif self.accept("-"):
                node = Binary("sub", node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            if self.accept("*"):
                node = Binary("mul", node, self.unary())
            elif self.accept("/"):
                node = Binary("div", node, self.unary())
            else:
                return node

    def unary(self) -> Expr:
        if self.accept("-"):
            operand = self.unary()
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Unary("neg", operand)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if not self.accept("^"):
            return base
        sign = -1 if self.accept("-") else 1
        token = self.peek()
        if token.kind != "number" or not token.text.isdigit():
            raise ExprSyntaxError("exponent must be an integer literal", token.offset)
        self.advance()
        return Pow(base, sign * int(token.text))

    def atom(self) -> Expr:
        token = self.advance()
        if token.kind == "number":
            return Const(float(token.text))
        if token.kind == "ident":
            return self._identifier(token)
        if token.kind == "op" and token.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ExprSyntaxError(f"unexpected {self._describe(token)}", token.offset)

    def _identifier(self, token: Token) -> Expr:
        name = token.text
        if name in FUNCTIONS:
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Unary(name, arg)
        if self.peek().kind == "op" and self.peek().text == "(":
            raise UnknownSymbolError(name)
        if name == "pi":
            return Const(math.pi)
        if name in self.table.coordinates:
            return Coord(self.table.coordinates.index(name), name)
        if name in self.table.parameters:
            return Param(name)
        raise UnknownSymbolError(name)


def parse_expression(
    text: str, table: SymbolTable, base_offset: int = 0, source: Optional[str] = None
) -> Expr:
    """
    Parse one scalar expression.

    Args:
        text: Expression text
        table: Coordinates and parameters the expression may reference
        base_offset: Byte offset of `text` inside an enclosing document
        source: Optional label used in debug logging

    Returns:
        Expression tree whose free symbols all belong to `table`

    Raises:
        ExprSyntaxError: malformed input, with the byte offset of the problem
        UnknownSymbolError: an identifier missing from `table`
    """
    expr = ExpressionParser(text, table, base_offset).parse()
    if source:
        logger.debug(f"Parsed {source}: {text!r}")
    return expr
