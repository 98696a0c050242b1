"""Expressions over the generators of quantum SU(2) and the quantum disc.

Grammar (juxtaposition multiplies, like ``*``)::

    sum     := product (("+" | "-") product)*
    product := unary (["*"] unary)*
    unary   := "-" unary | power
    power   := postfix ["^" ["-"] INT]
    postfix := primary ["*"]          # only when "*" touches the primary
    primary := NUMBER | ATOM | "ind" "(" INT ")" | "(" sum ")"

A ``*`` written directly after a generator or a closing parenthesis, with
no space in between, is the adjoint; ``z*z`` is ``z* z`` while ``z * z`` is
``z z``.  The canonical printer always spaces binary ``*``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import disc, su2
from .errors import ParameterError, ParseError

# atoms with an adjoint postfix; numbers, q and i are scalars
STARRABLE = frozenset({"a", "c", "z", "y", "yinv", "s", "u", "uinv", "one"})
SCALARS = frozenset({"q", "i"})
ATOMS = STARRABLE | SCALARS | {"ind"}
# negative powers are only meaningful for the invertible generators
INVERTIBLE = {"y": "yinv", "u": "uinv", "yinv": "y", "uinv": "u"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?j?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^()])
""", re.VERBOSE)

_START = {"NUMBER", "ATOM", "(", "-"}


@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Atom:
    name: str
    index: int | None = None


@dataclass(frozen=True)
class Star:
    arg: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int
    tight: bool  # no whitespace before this token


def _tokenize(text):
    out, pos, gap = [], 0, True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", _offset(text, pos), _START | {"+", "*", "^", ")"})
        kind = m.lastgroup
        if kind == "ws":
            gap = True
        else:
            out.append(_Tok(kind if kind != "op" else m.group(), m.group(), pos, not gap))
            gap = False
        pos = m.end()
    out.append(_Tok("EOF", "", len(text), not gap))
    return out


def _offset(text, pos):
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, message, expected):
        raise ParseError(message, _offset(self.text, self.tok.pos), expected)

    def take(self, kind, expected=None):
        if self.tok.kind != kind:
            self.fail(f"unexpected {self.tok.text or 'end of input'!r}", expected or {kind})
        t = self.tok
        self.i += 1
        return t

    def parse(self):
        node = self.sum()
        if self.tok.kind != "EOF":
            self.fail(f"unexpected {self.tok.text!r}", {"+", "-", "*", "^", "EOF"} | _START)
        return node

    def sum(self):
        node = self.product()
        while self.tok.kind in ("+", "-"):
            op = self.take(self.tok.kind).kind
            node = BinOp(op, node, self.product())
        return node

    def _starts_factor(self):
        return self.tok.kind in ("num", "name", "(")

    def product(self):
        node = self.unary()
        while True:
            if self.tok.kind == "*":
                self.i += 1
                node = BinOp("*", node, self.unary())
            elif self._starts_factor():
                node = BinOp("*", node, self.unary())
            else:
                return node

    def unary(self):
        if self.tok.kind == "-":
            self.i += 1
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.postfix()
        if self.tok.kind != "^":
            return base
        self.i += 1
        sign = 1
        if self.tok.kind == "-":
            self.i += 1
            sign = -1
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            self.fail("exponent must be an integer", {"INT", "-"})
        self.i += 1
        n = sign * int(t.text)
        if n < 0 and not (isinstance(base, Atom) and base.name in INVERTIBLE):
            raise ParseError("negative powers are defined for y and u only", _offset(self.text, t.pos), {"INT"})
        return Pow(base, n)

    def postfix(self):
        start = self.tok
        node = self.primary()
        starrable = isinstance(node, Atom) and node.name in STARRABLE or start.kind == "("
        if starrable and self.tok.kind == "*" and self.tok.tight:
            self.i += 1
            node = Star(node)
        return node

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(complex(t.text) if t.text.endswith("j") else complex(float(t.text)))
        if t.kind == "name":
            if t.text not in ATOMS:
                raise ParseError(f"unknown atom {t.text!r}", _offset(self.text, t.pos), ATOMS)
            self.i += 1
            if t.text == "ind":
                self.take("(")
                k = self.take("num", {"INT"})
                if not k.text.isdigit():
                    raise ParseError("ind takes a non-negative integer", _offset(self.text, k.pos), {"INT"})
                self.take(")")
                return Atom("ind", int(k.text))
            return Atom(t.text)
        if t.kind == "(":
            self.i += 1
            node = self.sum()
            self.take(")", {")", "+", "-", "*", "^"} | _START)
            return node
        self.fail(f"unexpected {t.text or 'end of input'!r}", _START)


def parse(text):
    """Parse ``text`` into an expression tree; raises ParseError with a byte offset."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(text).parse()


# -- printing -----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2}


def _num(v):
    def real(x):
        s = repr(float(x))
        return s[:-2] if s.endswith(".0") else s

    if v.imag == 0:
        return real(v.real)
    if v.real == 0:
        return real(v.imag) + "j"
    return f"({real(v.real)} + {real(v.imag)}j)"


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def to_text(node):
    """Canonical text: binary ``*`` spaced, minimal parentheses."""
    if isinstance(node, Num):
        return _num(node.value)
    if isinstance(node, Atom):
        return f"ind({node.index})" if node.name == "ind" else node.name
    if isinstance(node, Star):
        inner = to_text(node.arg)
        return inner + "*" if isinstance(node.arg, Atom) else f"({inner})*"
    if isinstance(node, Neg):
        inner = to_text(node.arg)
        return "-" + (inner if _prec(node.arg) >= 3 else f"({inner})")
    if isinstance(node, Pow):
        inner = to_text(node.base)
        if _prec(node.base) < 5 or isinstance(node.base, Num):
            inner = f"({inner})"
        return f"{inner}^{node.exp}"
    p = _PREC[node.op]
    left = to_text(node.left)
    if _prec(node.left) < p:
        left = f"({left})"
    right = to_text(node.right)
    # left-associative: an equal-precedence right operand needs parentheses
    if _prec(node.right) <= p or (node.op != "-" and isinstance(node.right, Neg)):
        right = f"({right})"
    return f"{left} {node.op} {right}"


# -- evaluation ---------------------------------------------------------------

def _atom(name, q, K, index=None):
    a, c = su2.generators(q, K)
    g = disc.make_generator
    if name == "a":
        return a
    if name == "c":
        return c
    if name == "u":
        return su2.circle(1, q, K)
    if name == "uinv":
        return su2.circle(-1, q, K)
    if name == "one":
        return su2.one(q, K)
    if name == "yinv":
        return su2.from_disc(g("y_pow", q, K, beta=-1))
    if name == "ind":
        return su2.from_disc(g("indicator", q, K, k=index))
    if name in ("z", "y", "s"):
        return su2.from_disc(g(name, q, K))
    raise ParameterError(f"unknown atom {name!r}")


def evaluate(node, q, K):
    """Evaluate to an SU2Element (scalars become multiples of one)."""
    out = _eval(node, q, K)
    if isinstance(out, complex):
        return su2.one(q, K) * out
    return out


def _eval(node, q, K):
    if isinstance(node, Num):
        return complex(node.value)
    if isinstance(node, Atom):
        if node.name == "q":
            return complex(q)
        if node.name == "i":
            return 1j
        return _atom(node.name, q, K, node.index)
    if isinstance(node, Star):
        x = _eval(node.arg, q, K)
        return x.conjugate() if isinstance(x, complex) else x.star()
    if isinstance(node, Neg):
        return -_eval(node.arg, q, K)
    if isinstance(node, Pow):
        n = node.exp
        if n < 0:
            return _eval(Pow(Atom(INVERTIBLE[node.base.name]), -n), q, K)
        x = _eval(node.base, q, K)
        return x ** n if isinstance(x, complex) else x ** n
    left, right = _eval(node.left, q, K), _eval(node.right, q, K)
    if node.op == "+":
        return _add(left, right, q, K)
    if node.op == "-":
        return _add(left, -right, q, K)
    if isinstance(left, complex) and isinstance(right, complex):
        return left * right
    if isinstance(left, complex):
        return right * left
    return left * right


def _add(x, y, q, K):
    if isinstance(x, complex) and isinstance(y, complex):
        return x + y
    if isinstance(x, complex):
        x = su2.one(q, K) * x
    if isinstance(y, complex):
        y = su2.one(q, K) * y
    return x + y


def compile_expr(text):
    """Parse once; return ``K -> SU2Element`` at fixed q supplied later."""
    node = parse(text)
    return lambda q, K: evaluate(node, q, K)
