"""Parameter groups, group-algebra scalars and dual numbers.

A :class:`ParamGroup` is ``Z^r ⊕ Z/l_1 ⊕ ... ⊕ Z/l_s`` with named
generators.  Free generators stand for generic deformation parameters
(``q``, ``p``, ...): they satisfy no multiplicative relations, so
"not a root of unity" holds by construction.

A :class:`GroupScalar` is an element of the group algebra ``K[G]`` over a
coefficient field ``K`` (rationals or :func:`symbol_field`).  A
:class:`DualScalar` is an element of ``K[eps]/(eps^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy.polys.fields import FracElement

from ..errors import ValidationError, ZeroDivisorInverse
from .field import format_field, inverse, signed_term, to_field


@dataclass(frozen=True)
class ParamGroup:
    free: tuple[str, ...] = ()
    torsion: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(self.free))
        object.__setattr__(self, "torsion", tuple((str(n), int(l)) for n, l in self.torsion))
        names = self.names
        if len(set(names)) != len(names):
            raise ValidationError(f"parameter names must be unique: {names}")
        for name, order in self.torsion:
            if order < 2:
                raise ValidationError(f"torsion order of {name} must be >= 2, got {order}")

    @property
    def names(self) -> tuple[str, ...]:
        return self.free + tuple(n for n, _ in self.torsion)

    @property
    def free_rank(self) -> int:
        return len(self.free)

    @property
    def torsion_orders(self) -> tuple[int, ...]:
        return tuple(l for _, l in self.torsion)

    @property
    def is_torsion_free(self) -> bool:
        return not self.torsion

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.free_rank, (0,) * len(self.torsion))

    def gen(self, name: str) -> "GroupElement":
        if name in self.free:
            k = self.free.index(name)
            return GroupElement(self, tuple(int(i == k) for i in range(self.free_rank)),
                                (0,) * len(self.torsion))
        tors = [n for n, _ in self.torsion]
        if name in tors:
            k = tors.index(name)
            return GroupElement(self, (0,) * self.free_rank,
                                tuple(int(i == k) for i in range(len(tors))))
        raise ValidationError(f"unknown parameter {name!r}")

    def element(self, exponents: Sequence[int], torsion: Sequence[int] = ()) -> "GroupElement":
        return GroupElement(self, tuple(exponents), tuple(torsion) or (0,) * len(self.torsion))


@dataclass(frozen=True)
class GroupElement:
    group: ParamGroup
    exponents: tuple[int, ...]
    torsion_exponents: tuple[int, ...] = ()

    def __post_init__(self):
        g = self.group
        if len(self.exponents) != g.free_rank:
            raise ValidationError("free exponent vector has the wrong length")
        tors = tuple(self.torsion_exponents) or (0,) * len(g.torsion)
        if len(tors) != len(g.torsion):
            raise ValidationError("torsion exponent vector has the wrong length")
        tors = tuple(int(e) % l for e, l in zip(tors, g.torsion_orders))
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        object.__setattr__(self, "torsion_exponents", tors)

    @property
    def key(self) -> tuple[int, ...]:
        return self.exponents + self.torsion_exponents

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        return GroupElement(self.group,
                            tuple(a + b for a, b in zip(self.exponents, other.exponents)),
                            tuple(a + b for a, b in zip(self.torsion_exponents, other.torsion_exponents)))

    def __pow__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * a for a in self.exponents),
                            tuple(k * a for a in self.torsion_exponents))

    def inverse(self) -> "GroupElement":
        return self ** -1

    def is_identity(self) -> bool:
        return not any(self.key)

    def __str__(self) -> str:
        parts = []
        for name, e in zip(self.group.names, self.key):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"


def _clean(terms: dict) -> dict:
    return {k: v for k, v in terms.items() if v != 0}


class GroupScalar:
    """An element ``sum r_g * g`` of the group algebra ``K[G]``."""

    __slots__ = ("group", "terms", "_hash")

    def __init__(self, group: ParamGroup, terms: Mapping[tuple[int, ...], object] | None = None):
        self.group = group
        self.terms = _clean(dict(terms or {}))
        self._hash = None

    @classmethod
    def constant(cls, group: ParamGroup, c) -> "GroupScalar":
        return cls(group, {group.identity().key: to_field(c) if not isinstance(c, FracElement) else c})

    @classmethod
    def from_element(cls, g: GroupElement, coeff=1) -> "GroupScalar":
        return cls(g.group, {g.key: to_field(coeff) if not isinstance(coeff, FracElement) else coeff})

    def _coerce(self, other) -> "GroupScalar | None":
        if isinstance(other, GroupScalar):
            if other.group != self.group:
                raise ValueError("scalars over different parameter groups")
            return other
        if isinstance(other, GroupElement):
            return GroupScalar.from_element(other)
        if isinstance(other, (int, Fraction, FracElement)) and not isinstance(other, bool):
            return GroupScalar.constant(self.group, other)
        return None

    def _reduce_key(self, key):
        r = self.group.free_rank
        tors = tuple(e % l for e, l in zip(key[r:], self.group.torsion_orders))
        return tuple(key[:r]) + tors

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for k, v in o.terms.items():
            terms[k] = terms.get(k, 0) + v
        return GroupScalar(self.group, terms)

    __radd__ = __add__

    def __neg__(self):
        return GroupScalar(self.group, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                k = self._reduce_key(tuple(a + b for a, b in zip(k1, k2)))
                terms[k] = terms.get(k, 0) + v1 * v2
        return GroupScalar(self.group, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = GroupScalar.constant(self.group, 1)
        for _ in range(k):
            result = result * self
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "GroupScalar":
        if len(self.terms) != 1:
            raise ZeroDivisorInverse(f"{self} is not a unit of the group algebra")
        ((k, v),) = self.terms.items()
        return GroupScalar(self.group, {self._reduce_key(tuple(-e for e in k)): inverse(v)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, GroupScalar):
            return self.group == other.group and self.terms == other.terms
        o = self._coerce(other) if isinstance(other, (int, Fraction, FracElement, GroupElement)) else None
        return o is not None and self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            if len(self.terms) == 1 and self.group.identity().key in self.terms:
                self._hash = hash(self.terms[self.group.identity().key])
            elif not self.terms:
                self._hash = hash(0)
            else:
                self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def fields(self):
        return [v.field for v in self.terms.values() if isinstance(v, FracElement)]

    def _sorted(self):
        # constants first, then by descending exponent vector
        return sorted(self.terms.items(), key=lambda kv: (any(kv[0]), tuple(-e for e in kv[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = self._sorted()
        if len(items) > 1 and format_field(items[0][1]).startswith("-"):
            return f"-({-self})"
        parts = []
        for idx, (k, v) in enumerate(self._sorted()):
            g = str(GroupElement(self.group, k[: self.group.free_rank], k[self.group.free_rank:]))
            parts.append(_term_text(v, None if g == "1" else g, first=idx == 0))
        return "".join(parts)

    __repr__ = __str__


def _term_text(coeff, mono: str | None, first: bool) -> str:
    return signed_term(format_field(coeff), mono, first)


class DualScalar:
    """``value + deriv*eps`` with ``eps^2 = 0``."""

    __slots__ = ("value", "deriv")

    def __init__(self, value=0, deriv=0):
        self.value = value if isinstance(value, FracElement) else to_field(value)
        self.deriv = deriv if isinstance(deriv, FracElement) else to_field(deriv)

    @staticmethod
    def _coerce(other):
        if isinstance(other, DualScalar):
            return other
        if isinstance(other, (int, Fraction, FracElement)) and not isinstance(other, bool):
            return DualScalar(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualScalar(self.value + o.value, self.deriv + o.deriv)

    __radd__ = __add__

    def __neg__(self):
        return DualScalar(-self.value, -self.deriv)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualScalar(self.value - o.value, self.deriv - o.deriv)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualScalar(self.value * o.value, self.value * o.deriv + self.deriv * o.value)

    __rmul__ = __mul__

    def inverse(self) -> "DualScalar":
        if self.value == 0:
            raise ZeroDivisorInverse(f"{self} has zero value part and is not invertible")
        a = inverse(self.value)
        return DualScalar(a, -self.deriv * a * a)

    def is_unit(self) -> bool:
        return self.value != 0

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = DualScalar(1, 0)
        for _ in range(k):
            result = result * self
        return result

    def __bool__(self):
        return self.value != 0 or self.deriv != 0

    def __eq__(self, other):
        o = self._coerce(other)
        return o is not None and self.value == o.value and self.deriv == o.deriv

    def __hash__(self):
        if self.deriv == 0:
            return hash(self.value)
        return hash((self.value, self.deriv))

    def __str__(self) -> str:
        if self.deriv == 0:
            return format_field(self.value)
        if self.value == 0:
            return _term_text(self.deriv, "eps", first=True)
        return format_field(self.value) + _term_text(self.deriv, "eps", first=False)

    __repr__ = __str__


EPS = DualScalar(0, 1)


def dual_of(s: GroupScalar, derivs: Mapping[str, object]) -> DualScalar:
    """Specialize ``g -> 1 + <exponent(g), d>*eps`` for a torsion-free group."""
    group = s.group
    if not group.is_torsion_free:
        raise ValidationError("dual specialization needs a torsion-free parameter group")
    d = [derivs.get(name, 0) for name in group.free]
    value, deriv = 0, 0
    for k, r in s.terms.items():
        value = value + r
        deriv = deriv + r * sum((e * x for e, x in zip(k, d)), 0)
    return DualScalar(value, deriv)


def group_scalar_sum(group: ParamGroup, items: Iterable[tuple[GroupElement, object]]) -> GroupScalar:
    s = GroupScalar(group)
    for g, c in items:
        s = s + GroupScalar.from_element(g, c)
    return s
