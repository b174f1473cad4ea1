"""Expression grammar for scalar coefficients.

Integers, rationals written ``a/b``, identifiers declared in the ring,
``+ - * / ^`` with ``^`` taking a nonnegative integer exponent, unary minus,
parentheses, and jet references ``f[x,y]``.
"""

from collections import deque
from typing import Deque, List, NamedTuple

import sympy

from .errors import ModelSyntaxError
from .scalars import ScalarRing, canonical, is_zero

# Operator groups in increasing binding power. Unary minus sits between the
# multiplicative group and ``^`` (see UNARY_PREC).
OPERATORS = [
    [("+", "left"), ("-", "left")],
    [("*", "left"), ("/", "left")],
    [("^", "right")],
]

OPERATOR_NAMES = [info[0] for group in OPERATORS for info in group]
OPERATOR_PREC = {info[0]: idx for idx, group in enumerate(OPERATORS) for info in group}
OPERATOR_ASSOC = {info[0]: info[1] for group in OPERATORS for info in group}
UNARY_PREC = OPERATOR_PREC["^"]

PUNCTUATION = "()[],"


class Token(NamedTuple):
    kind: str  # "number", "name", "op", "end"
    text: str
    offset: int


def tokenize(source: str, line: int = 1, column: int = 1) -> List[Token]:
    result: List[Token] = []
    idx = 0
    while idx < len(source):
        c = source[idx]
        if c.isspace():
            idx += 1
            continue
        if c.isdigit():
            start = idx
            while idx < len(source) and source[idx].isdigit():
                idx += 1
            result.append(Token("number", source[start:idx], start))
            continue
        if c.isalpha() or c == "_":
            start = idx
            while idx < len(source) and (source[idx].isalnum() or source[idx] == "_"):
                idx += 1
            result.append(Token("name", source[start:idx], start))
            continue
        if c in OPERATOR_NAMES or c in PUNCTUATION:
            result.append(Token("op", c, idx))
            idx += 1
            continue
        raise ModelSyntaxError(f"unexpected character {c!r}", line, column + idx)
    result.append(Token("end", "", len(source)))
    return result


class _Parser:
    """Precedence climbing over a token stream, resolving names against a ring."""

    def __init__(self, source: str, ring: ScalarRing, line: int, column: int):
        self.ring = ring
        self.line = line
        self.column = column
        self.tokens: Deque[Token] = deque(tokenize(source, line, column))

    def error(self, message: str, token: Token, expected=None) -> ModelSyntaxError:
        return ModelSyntaxError(message, self.line, self.column + token.offset, expected)

    def expect(self, text: str) -> Token:
        token = self.tokens.popleft()
        if token.text != text or token.kind != "op":
            raise self.error(f"unexpected {self.describe(token)}", token, [text])
        return token

    @staticmethod
    def describe(token: Token) -> str:
        return "end of input" if token.kind == "end" else f"token {token.text!r}"

    def parse(self) -> sympy.Expr:
        result = self.parse_(0)
        token = self.tokens[0]
        if token.kind != "end":
            raise self.error(f"unexpected {self.describe(token)}", token, OPERATOR_NAMES)
        return result

    def parse_(self, min_prec: int) -> sympy.Expr:
        lhs = self.atom()
        while self.tokens[0].kind == "op" and self.tokens[0].text in OPERATOR_NAMES:
            token = self.tokens[0]
            op_prec = OPERATOR_PREC[token.text]
            if op_prec < min_prec:
                return lhs
            self.tokens.popleft()
            next_prec = op_prec + 1 if OPERATOR_ASSOC[token.text] == "left" else op_prec
            rhs_token = self.tokens[0]
            rhs = self.parse_(next_prec)
            lhs = self.apply(token, lhs, rhs, rhs_token)
        return lhs

    def apply(self, op: Token, lhs, rhs, rhs_token: Token) -> sympy.Expr:
        if op.text == "+":
            return lhs + rhs
        if op.text == "-":
            return lhs - rhs
        if op.text == "*":
            return lhs * rhs
        if op.text == "/":
            if is_zero(rhs):
                raise self.error("division by zero", rhs_token)
            return lhs / rhs
        exponent = canonical(rhs)
        if not (exponent.is_Integer and exponent >= 0):
            raise self.error("exponent must be a nonnegative integer", rhs_token)
        return lhs ** int(exponent)

    def atom(self) -> sympy.Expr:
        token = self.tokens.popleft()
        if token.kind == "op" and token.text == "-":
            return -self.parse_(UNARY_PREC)
        if token.kind == "op" and token.text == "(":
            result = self.parse_(0)
            self.expect(")")
            return result
        if token.kind == "number":
            return sympy.Integer(int(token.text))
        if token.kind == "name":
            return self.identifier(token)
        raise self.error(
            f"unexpected {self.describe(token)}", token,
            ["(", "-", "number", "identifier"],
        )

    def identifier(self, token: Token) -> sympy.Expr:
        name = token.text
        ring = self.ring
        if name in ring.coordinates or name in ring.parameters:
            return sympy.Symbol(name)
        if name not in ring.functions:
            raise self.error(f"unknown identifier {name!r}", token, ring.identifiers())
        if not (self.tokens[0].kind == "op" and self.tokens[0].text == "["):
            return ring.function(name)
        self.tokens.popleft()
        variables = []
        while True:
            var = self.tokens.popleft()
            if var.kind != "name" or var.text not in ring.coordinates:
                raise self.error(
                    f"jet index must be a coordinate, got {self.describe(var)}",
                    var, ring.coordinates,
                )
            variables.append(var.text)
            sep = self.tokens.popleft()
            if sep.kind == "op" and sep.text == "]":
                break
            if not (sep.kind == "op" and sep.text == ","):
                raise self.error(f"unexpected {self.describe(sep)}", sep, [",", "]"])
        return ring.jet(name, variables)


def parse_expression(source: str, ring: ScalarRing, line: int = 1, column: int = 1) -> sympy.Expr:
    """Parse ``source`` into a canonical scalar of ``ring``.

    Args:
        source: Expression text
        ring: Ring whose declared identifiers are accepted
        line: Line number reported in diagnostics
        column: Column of the first character of ``source`` in that line

    Returns:
        Canonical sympy expression

    Raises:
        ModelSyntaxError: on any lexical, syntactic or name-resolution problem
    """
    return canonical(_Parser(source, ring, line, column).parse())
