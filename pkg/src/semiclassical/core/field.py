"""Exact coefficient fields.

Coefficients are either :class:`fractions.Fraction` (plain rationals) or
elements of a rational function field ``Q(alpha, ...)`` in transcendental
symbols.  The latter are sympy ``FracElement`` objects: they are kept in
lowest terms with a denominator of positive leading coefficient, so equality
is structural.  Both kinds mix freely with ``int`` and with each other, as
long as all symbolic elements in one computation come from the same field
(use :func:`symbol_field` to get it).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from sympy import QQ
from sympy.polys.fields import FracElement, FracField

FieldElement = Union[Fraction, FracElement]


@lru_cache(maxsize=None)
def symbol_field(names: tuple[str, ...]) -> FracField:
    """The field ``Q(names)``; cached so equal symbol tuples share one field."""
    if not names:
        raise ValueError("symbol_field needs at least one symbol; use Fraction for Q")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate symbol names: {names}")
    return FracField(",".join(names), QQ)


def symbols(names: Sequence[str]) -> tuple[FracElement, ...]:
    return symbol_field(tuple(names)).gens


def to_field(x, field: FracField | None = None) -> FieldElement:
    """Coerce ints, Fractions and field elements to a coefficient."""
    if isinstance(x, FracElement):
        return x if field is None else field(x) if x.field != field else x
    if isinstance(x, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return x if field is None else field(_mpq(x))
    if isinstance(x, str):
        return to_field(Fraction(x), field)
    raise TypeError(f"cannot use {type(x).__name__} as a field element")


def _mpq(x: Fraction):
    return QQ(x.numerator, x.denominator)


def _fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def inverse(x: FieldElement) -> FieldElement:
    if x == 0:
        raise ZeroDivisionError("inverse of zero")
    if isinstance(x, FracElement):
        return 1 / x
    return 1 / Fraction(x)


def is_rational(x) -> bool:
    if isinstance(x, FracElement):
        return x.numer.is_ground and x.denom.is_ground
    return isinstance(x, (int, Fraction))


def as_fraction(x) -> Fraction:
    """The rational value of a constant coefficient."""
    if isinstance(x, FracElement):
        if not is_rational(x):
            raise ValueError(f"{format_field(x)} is not a rational constant")
        return _fraction(x.numer.LC) / _fraction(x.denom.LC) if x.numer else Fraction(0)
    return Fraction(x)


def demote(x):
    """Rational-valued symbolic elements become Fractions (much faster)."""
    if isinstance(x, FracElement) and x.numer.is_ground and x.denom.is_ground:
        return _fraction(x.numer.LC) / _fraction(x.denom.LC) if x.numer else Fraction(0)
    return x


def symbol_names(x) -> tuple[str, ...]:
    if isinstance(x, FracElement):
        return tuple(str(s) for s in x.field.symbols)
    return ()


def rational_rows(row: Sequence) -> list[list[Fraction]]:
    """Split a linear form with symbolic coefficients into rational forms.

    For ``m`` rational, ``sum(row[j] * m[j]) == 0`` holds iff every returned
    row annihilates ``m``: after clearing denominators each coefficient is a
    polynomial in transcendental symbols, and the equation must hold
    coefficientwise in those symbols.
    """
    fields = {c.field for c in row if isinstance(c, FracElement)}
    if not fields:
        return [[Fraction(c) for c in row]]
    if len(fields) > 1:
        raise ValueError("coefficients from different symbol fields")
    (K,) = fields
    elems = [to_field(c, K) for c in row]
    common = K.ring.one
    for e in elems:
        common = common.lcm(e.denom)
    polys = [e.numer * common.exquo(e.denom) for e in elems]
    monomials = sorted({m for p in polys for m in p.keys()})
    return [[_fraction(p.get(m, QQ.zero)) for p in polys] for m in monomials]


def _format_poly(p, syms) -> tuple[str, int]:
    """Format a sympy PolyElement; returns text and number of terms."""
    terms = sorted(p.terms(), key=lambda t: (sum(t[0]), [-e for e in t[0]]))
    parts = []
    for k, (monom, c) in enumerate(terms):
        c = _fraction(c)
        factors = []
        for s, e in zip(syms, monom):
            if e == 1:
                factors.append(s)
            elif e:
                factors.append(f"{s}^{e}")
        mono = "*".join(factors)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if k == 0:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts) or "0", len(terms)


def format_field(x) -> str:
    """Render a coefficient in the expression grammar used by config files."""
    if not isinstance(x, FracElement):
        return str(Fraction(x))
    syms = [str(s) for s in x.field.symbols]
    if not x.numer:
        return "0"
    negate = len(x.numer.terms()) > 1 and all(c < 0 for c in x.numer.coeffs())
    num, nterms = _format_poly(-x.numer if negate else x.numer, syms)
    if negate:
        num = f"-({num})"
    elif nterms > 1 and x.denom != 1:
        num = f"({num})"
    if x.denom == 1:
        return num
    den, dterms = _format_poly(x.denom, syms)
    if dterms > 1 or "*" in den or "^" in den:
        den = f"({den})"
    return f"{num}/{den}"


def needs_parens(x) -> bool:
    """True when the printed coefficient has a top-level sum and must be
    parenthesized as a factor of a product."""
    return text_needs_parens(format_field(x))


def text_needs_parens(text: str) -> bool:
    depth = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and k > 0 and text[k - 1] != "^":
            return True
    return False


def signed_term(text: str, mono: str | None, first: bool) -> str:
    """Render ``text * mono`` as a summand of a printed sum, sign included."""
    negative = text.startswith("-") and not text_needs_parens(text)
    body = text[1:] if negative else text
    if mono is not None:
        if body == "1":
            body = mono
        else:
            if text_needs_parens(body):
                body = f"({body})"
            body = f"{body}*{mono}"
    elif text_needs_parens(body) and not first:
        body = f"({body})"
    if first:
        return ("-" if negative else "") + body
    return (" - " if negative else " + ") + body


def common_field(values: Iterable) -> FracField | None:
    fields = {v.field for v in values if isinstance(v, FracElement)}
    if len(fields) > 1:
        raise ValueError("coefficients from different symbol fields")
    return next(iter(fields), None)
