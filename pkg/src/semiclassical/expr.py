"""A small expression grammar for scalars and (Laurent) polynomials.

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | NAME | "(" expr ")"

Expressions are parsed once into a tree and evaluated against an environment
that decides what each name means (a parameter, a symbol, ``eps``, or a
generator).  Juxtaposition is not multiplication: write ``2*x``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .errors import ValidationError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


def _tokens(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace
            break
        num, name, other = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        elif other.strip():
            if other not in "+-*/^()":
                raise ValidationError(f"unexpected character {other!r} in {text!r}")
            out.append(("op", other))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k] if self.k < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.k += 1
        return tok

    def expect(self, op):
        if self.take() != ("op", op):
            raise ValidationError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.toks:
            raise ValidationError("empty expression")
        tree = self.expr()
        if self.k != len(self.toks):
            raise ValidationError(f"unexpected {self.peek()[1]!r} in {self.text!r}")
        return tree

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, value = self.take()
            if kind != "num":
                raise ValidationError(f"exponent must be an integer in {self.text!r}")
            return Pow(base, sign * value)
        return base

    def atom(self):
        kind, value = self.take()
        if kind == "num":
            return Num(value)
        if kind == "name":
            return Name(value)
        if (kind, value) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        raise ValidationError(f"unexpected {value!r} in {self.text!r}")


def parse(text: str):
    if not isinstance(text, str):
        raise ValidationError(f"expected an expression string, got {text!r}")
    return _Parser(text).parse()


def names_in(tree) -> set[str]:
    if isinstance(tree, Name):
        return {tree.name}
    if isinstance(tree, BinOp):
        return names_in(tree.left) | names_in(tree.right)
    if isinstance(tree, Neg):
        return names_in(tree.arg)
    if isinstance(tree, Pow):
        return names_in(tree.base)
    return set()


def evaluate(tree, leaf: Callable[[str], object], number: Callable[[Fraction], object],
             invert: Callable[[object], object]):
    """Fold the tree with Python arithmetic on whatever ``leaf``/``number`` return."""
    if isinstance(tree, Num):
        return number(Fraction(tree.value))
    if isinstance(tree, Name):
        return leaf(tree.name)
    if isinstance(tree, Neg):
        return -evaluate(tree.arg, leaf, number, invert)
    if isinstance(tree, Pow):
        base = evaluate(tree.base, leaf, number, invert)
        if tree.exponent < 0:
            base = invert(base)
        result = number(Fraction(1))
        for _ in range(abs(tree.exponent)):
            result = result * base
        return result
    a = evaluate(tree.left, leaf, number, invert)
    b = evaluate(tree.right, leaf, number, invert)
    if tree.op == "+":
        return a + b
    if tree.op == "-":
        return a - b
    if tree.op == "*":
        return a * b
    return a * invert(b)


class Terms:
    """Commutative Laurent combinations ``{exponent vector: coefficient}``
    over any coefficient ring; the evaluation target for polynomial strings."""

    __slots__ = ("n", "terms", "zero")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], object], zero):
        self.n = n
        self.zero = zero
        self.terms = {m: c for m, c in terms.items() if c != zero}

    def _lift(self, other):
        if isinstance(other, Terms):
            return other
        return Terms(self.n, {(0,) * self.n: other}, self.zero)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Terms(self.n, out, self.zero)

    __radd__ = __add__

    def __neg__(self):
        return Terms(self.n, {m: -c for m, c in self.terms.items()}, self.zero)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out[m] + c1 * c2 if m in out else c1 * c2
        return Terms(self.n, out, self.zero)

    __rmul__ = __mul__

    def scalar(self):
        """The coefficient of a constant combination."""
        if any(any(m) for m in self.terms):
            raise ValidationError("expected a scalar, got an expression in the generators")
        return self.terms.get((0,) * self.n, self.zero)


def evaluate_terms(text: str, generators: Mapping[str, int], n: int, scalar_leaf: Callable[[str], object],
                   coerce: Callable[[object], object], inv: Callable[[object], object]) -> Terms:
    """Evaluate a polynomial string; names not in ``generators`` go to ``scalar_leaf``."""
    tree = parse(text)
    zero = coerce(0)

    def leaf(name):
        if name in generators:
            return Terms(n, {tuple(int(k == generators[name]) for k in range(n)): coerce(1)}, zero)
        return Terms(n, {(0,) * n: coerce(scalar_leaf(name))}, zero)

    def number(x):
        return Terms(n, {(0,) * n: coerce(x)}, zero)

    def invert(t: Terms):
        if len(t.terms) != 1:
            raise ValidationError(f"cannot divide by a sum in {text!r}")
        ((m, c),) = t.terms.items()
        return Terms(n, {tuple(-e for e in m): inv(c)}, zero)

    return evaluate(tree, leaf, number, invert)
