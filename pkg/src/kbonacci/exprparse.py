"""Recursive-descent parser for single-variable arithmetic expressions.

Grammar (x is the single variable; uint is a bare decimal integer):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' uint)?
    atom   := number | 'x' | '(' expr ')' | '-' atom

Numbers are decimal literals (digits with an optional fractional part);
fractions such as 3/2 go through the division rule, which is equivalent
because '/' is left-associative, and constant folding in as_affine recovers
the exact rational. All literals are exact rationals, so evaluation at a
Fraction argument is exact; evaluation at a float argument is float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DivisionByZeroError, ExpressionSyntaxError

__all__ = [
    "Const",
    "Var",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Neg",
    "ExprNode",
    "parse",
    "evaluate",
    "as_affine",
    "unparse",
]


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Add:
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Sub:
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Mul:
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Div:
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Pow:
    base: "ExprNode"
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")


@dataclass(frozen=True)
class Neg:
    operand: "ExprNode"


ExprNode = Union[Const, Var, Add, Sub, Mul, Div, Pow, Neg]


@dataclass(frozen=True)
class _Token:
    kind: str  # 'number', 'x', 'op', 'end'
    text: str
    offset: int
    value: Fraction | None = None


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == ".":
                i += 1
                if i >= n or not text[i].isdigit():
                    raise ExpressionSyntaxError(
                        "expected digits after decimal point", i, ("digit",)
                    )
                while i < n and text[i].isdigit():
                    i += 1
            lit = text[start:i]
            tokens.append(_Token("number", lit, start, Fraction(lit)))
            continue
        if ch == "x":
            tokens.append(_Token("x", ch, i))
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        raise ExpressionSyntaxError(
            f"unexpected character {ch!r}", i, ("number", "x", "operator", "parenthesis")
        )
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: tuple[str, ...]):
        tok = self.peek()
        got = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExpressionSyntaxError(f"unexpected {got}", tok.offset, expected)

    def parse(self) -> ExprNode:
        node = self.expr()
        if self.peek().kind != "end":
            self.fail(("'+'", "'-'", "'*'", "'/'", "end of input"))
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> ExprNode:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> ExprNode:
        node = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            tok = self.peek()
            # Exponents are bare unsigned integer literals.
            if tok.kind != "number" or tok.value is None or tok.value.denominator != 1:
                self.fail(("unsigned integer",))
            self.advance()
            node = Pow(node, tok.value.numerator)
        return node

    def atom(self) -> ExprNode:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Const(tok.value)
        if tok.kind == "x":
            self.advance()
            return Var()
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            closing = self.peek()
            if closing.kind != "op" or closing.text != ")":
                self.fail(("')'",))
            self.advance()
            return node
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.atom())
        self.fail(("number", "'x'", "'('", "'-'"))


def parse(text: str) -> ExprNode:
    """Parse expression text into an AST; ExpressionSyntaxError on failure."""
    return _Parser(text).parse()


def evaluate(node: ExprNode, x):
    """Evaluate the AST at x.

    Exact when x is a Fraction (all literals are rationals); float math when
    x is a float. Division by zero raises DivisionByZeroError naming the
    offending subtree.
    """
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Add):
        return evaluate(node.left, x) + evaluate(node.right, x)
    if isinstance(node, Sub):
        return evaluate(node.left, x) - evaluate(node.right, x)
    if isinstance(node, Mul):
        return evaluate(node.left, x) * evaluate(node.right, x)
    if isinstance(node, Div):
        denom = evaluate(node.right, x)
        if denom == 0:
            raise DivisionByZeroError(unparse(node))
        return evaluate(node.left, x) / denom
    if isinstance(node, Pow):
        return evaluate(node.base, x) ** node.exponent
    if isinstance(node, Neg):
        return -evaluate(node.operand, x)
    raise TypeError(f"not an expression node: {node!r}")


def as_affine(node: ExprNode) -> tuple[Fraction, Fraction] | None:
    """Return (a, b) with the expression syntactically equal to a*x + b.

    Constant subtrees are folded exactly. Returns None when the tree is not
    affine after folding (for example any x*x, x^2 with nonzero slope, or a
    division by a non-constant).
    """
    if isinstance(node, Const):
        return Fraction(0), node.value
    if isinstance(node, Var):
        return Fraction(1), Fraction(0)
    if isinstance(node, (Add, Sub)):
        left = as_affine(node.left)
        right = as_affine(node.right)
        if left is None or right is None:
            return None
        if isinstance(node, Add):
            return left[0] + right[0], left[1] + right[1]
        return left[0] - right[0], left[1] - right[1]
    if isinstance(node, Mul):
        left = as_affine(node.left)
        right = as_affine(node.right)
        if left is None or right is None:
            return None
        if left[0] == 0:
            return left[1] * right[0], left[1] * right[1]
        if right[0] == 0:
            return left[0] * right[1], left[1] * right[1]
        return None
    if isinstance(node, Div):
        left = as_affine(node.left)
        right = as_affine(node.right)
        if left is None or right is None:
            return None
        if right[0] != 0 or right[1] == 0:
            return None
        return left[0] / right[1], left[1] / right[1]
    if isinstance(node, Pow):
        base = as_affine(node.base)
        if base is None:
            return None
        if node.exponent == 0:
            return Fraction(0), Fraction(1)
        if node.exponent == 1:
            return base
        if base[0] == 0:
            return Fraction(0), base[1] ** node.exponent
        return None
    if isinstance(node, Neg):
        inner = as_affine(node.operand)
        if inner is None:
            return None
        return -inner[0], -inner[1]
    raise TypeError(f"not an expression node: {node!r}")


def _precedence(node: ExprNode) -> int:
    if isinstance(node, (Add, Sub)):
        return 1
    if isinstance(node, (Mul, Div)):
        return 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _wrap(child: ExprNode, parent_prec: int, right_side: bool = False) -> str:
    text = unparse(child)
    child_prec = _precedence(child)
    if child_prec < parent_prec or (right_side and child_prec == parent_prec):
        return f"({text})"
    return text


def _render_rational(v: Fraction) -> str:
    # Denominators of the form 2^a 5^b render as exact decimal literals, so
    # the text reparses to the same Const node. Anything else has no literal
    # form and falls back to p/q, which reparses to an equal-valued Div.
    if v.denominator == 1:
        return str(v.numerator)
    d = v.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1:
        places = max(twos, fives)
        scaled = v.numerator * 10**places // v.denominator
        sign = "-" if scaled < 0 else ""
        digits = str(abs(scaled)).rjust(places + 1, "0")
        return f"{sign}{digits[:-places]}.{digits[-places:]}"
    return f"{v.numerator}/{v.denominator}"


def _is_literal_text(text: str) -> bool:
    return all(c.isdigit() or c == "." for c in text)


def unparse(node: ExprNode) -> str:
    """Render the AST back to grammar-valid text with minimal parentheses."""
    if isinstance(node, Const):
        return _render_rational(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Add):
        return f"{_wrap(node.left, 1)} + {_wrap(node.right, 1, True)}"
    if isinstance(node, Sub):
        return f"{_wrap(node.left, 1)} - {_wrap(node.right, 1, True)}"
    if isinstance(node, Mul):
        return f"{_wrap(node.left, 2)}*{_wrap(node.right, 2, True)}"
    if isinstance(node, Div):
        return f"{_wrap(node.left, 2)}/{_wrap(node.right, 2, True)}"
    if isinstance(node, Pow):
        base = unparse(node.base)
        bare = isinstance(node.base, Var) or (
            isinstance(node.base, Const) and _is_literal_text(base)
        )
        if not bare:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Neg):
        inner = unparse(node.operand)
        if not isinstance(node.operand, (Const, Var, Neg)):
            inner = f"({inner})"
        return f"-{inner}"
    raise TypeError(f"not an expression node: {node!r}")
