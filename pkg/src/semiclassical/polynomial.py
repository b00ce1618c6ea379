"""Commutative (Laurent) polynomials with exact coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy.polys.fields import FracElement

from .core.field import demote, to_field
from .core.groups import _term_text

Monomial = tuple[int, ...]


def _coeff(c):
    return demote(c) if isinstance(c, FracElement) else to_field(c)


def format_monomial(m: Monomial, names: Sequence[str]) -> str | None:
    """``x1*x2^-2*x3`` style; ``None`` for the unit monomial."""
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or None


def print_key(m: Monomial):
    # descending total degree, then lexicographic with the first variable most significant
    return (-sum(m), tuple(-e for e in m))


def format_terms(terms: Mapping[Monomial, object], names: Sequence[str]) -> str:
    if not terms:
        return "0"
    parts = []
    for k, m in enumerate(sorted(terms, key=print_key)):
        parts.append(_term_text(terms[m], format_monomial(m, names), first=k == 0))
    return "".join(parts)


class Polynomial:
    """A finite map from exponent vectors to nonzero field coefficients."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | None = None):
        self.n = n
        clean = {}
        for m, c in (terms or {}).items():
            if len(m) != n:
                raise ValueError(f"exponent vector {m} does not have length {n}")
            if c != 0:
                clean[tuple(m)] = _coeff(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        return cls(n, {tuple(int(k == i) for k in range(n)): 1})

    @classmethod
    def monomial(cls, m: Sequence[int], c=1) -> "Polynomial":
        return cls(len(m), {tuple(m): c})

    def _lift(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise ValueError("polynomials in different numbers of variables")
            return other
        if isinstance(other, (int, Fraction, FracElement)) and not isinstance(other, bool):
            return Polynomial.constant(self.n, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in o.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Polynomial(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return Polynomial(self.n, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be raised to negative powers")
            ((m, c),) = self.terms.items()
            return Polynomial(self.n, {tuple(-k * e for e in m): 1 / c ** -k})
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        return Polynomial(self.n, {m: v * c for m, v in self.terms.items()})

    def shift(self, m: Sequence[int], c=1) -> "Polynomial":
        """Multiply by the monomial ``c * x^m``."""
        return Polynomial(self.n, {tuple(a + b for a, b in zip(k, m)): v * c for k, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, Polynomial) else other
        return isinstance(o, Polynomial) and o.n == self.n and o.terms == self.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def derivative(self, i: int) -> "Polynomial":
        terms = {}
        for m, c in self.terms.items():
            if m[i]:
                d = list(m)
                d[i] -= 1
                terms[tuple(d)] = c * m[i]
        return Polynomial(self.n, terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_laurent(self) -> bool:
        return any(e < 0 for m in self.terms for e in m)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def coefficient(self, m: Sequence[int]):
        return self.terms.get(tuple(m), 0)

    def support(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def evaluate(self, point: Sequence) -> object:
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e > 0:
                    v = v * x ** e
                elif e < 0:
                    v = v / x ** (-e)
            total = total + v
        return total

    def substitute(self, values: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by ``values[i]`` (nonnegative exponents only)."""
        result = Polynomial.zero(self.n)
        for m, c in self.terms.items():
            term = Polynomial.constant(self.n, c)
            for i, e in enumerate(m):
                if e:
                    base = values.get(i, Polynomial.variable(self.n, i))
                    term = term * base ** e
            result = result + term
        return result

    def fields(self):
        return [c.field for c in self.terms.values() if isinstance(c, FracElement)]

    def format(self, names: Sequence[str]) -> str:
        return format_terms(self.terms, names)

    def __repr__(self):
        return f"Polynomial({self.format([f'x{i + 1}' for i in range(self.n)])})"


def variables(n: int) -> list[Polynomial]:
    return [Polynomial.variable(n, i) for i in range(n)]


def poly_sum(items: Iterable[Polynomial], n: int) -> Polynomial:
    total = Polynomial.zero(n)
    for p in items:
        total = total + p
    return total
