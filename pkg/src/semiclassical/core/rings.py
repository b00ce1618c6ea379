"""Uniform access to the three coefficient modes of a presentation."""
from __future__ import annotations

from fractions import Fraction

from sympy.polys.fields import FracElement, FracField

from ..errors import ZeroDivisorInverse
from .field import format_field, inverse, signed_term, to_field
from .groups import DualScalar, GroupScalar, ParamGroup


class ScalarRing:
    mode: str = ""
    field: FracField | None = None

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        raise NotImplementedError

    def is_unit(self, x) -> bool:
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def power(self, x, k: int):
        if k < 0:
            x, k = self.inv(x), -k
        result = self.one
        for _ in range(k):
            result = result * x
        return result

    def text(self, x) -> str:
        return str(x)

    def term(self, x, mono: str | None, first: bool) -> str:
        return signed_term(self.text(x), mono, first)


class FieldRing(ScalarRing):
    mode = "plain-field"

    def __init__(self, field: FracField | None = None):
        self.field = field

    def coerce(self, x):
        if isinstance(x, FracElement):
            return x
        return to_field(x, self.field)

    def is_unit(self, x) -> bool:
        return x != 0

    def inv(self, x):
        if x == 0:
            raise ZeroDivisorInverse("inverse of zero")
        return inverse(x)

    def text(self, x) -> str:
        return format_field(x)

    def __eq__(self, other):
        return isinstance(other, FieldRing) and other.field == self.field

    def __hash__(self):
        return hash(("field", self.field))


class GroupRing(ScalarRing):
    mode = "group-scalar"

    def __init__(self, group: ParamGroup, field: FracField | None = None):
        self.group = group
        self.field = field

    def coerce(self, x):
        if isinstance(x, GroupScalar):
            return x
        if isinstance(x, (int, Fraction, FracElement)):
            return GroupScalar.constant(self.group, x)
        return GroupScalar.from_element(x)

    def is_unit(self, x) -> bool:
        return x.is_unit()

    def inv(self, x):
        return x.inverse()

    def __eq__(self, other):
        return isinstance(other, GroupRing) and other.group == self.group and other.field == self.field

    def __hash__(self):
        return hash(("group", self.group, self.field))


class DualRing(ScalarRing):
    mode = "dual"

    def __init__(self, field: FracField | None = None):
        self.field = field

    def coerce(self, x):
        if isinstance(x, DualScalar):
            return x
        return DualScalar(x, 0)

    def is_unit(self, x) -> bool:
        return x.is_unit()

    def inv(self, x):
        return x.inverse()

    def __eq__(self, other):
        return isinstance(other, DualRing) and other.field == self.field

    def __hash__(self):
        return hash(("dual", self.field))
