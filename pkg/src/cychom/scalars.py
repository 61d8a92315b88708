"""Ground fields: the rationals and rational functions in one variable ``t``.

Rationals are plain :class:`fractions.Fraction` (or ``int``) values.  Elements
of Q(t) are :class:`RationalFunction` instances, kept in canonical form:
numerator and denominator coprime, denominator monic.  Polynomial arithmetic
is delegated to sympy's sparse polynomial rings.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any

from sympy import QQ as _SYMPY_QQ
from sympy.polys.rings import ring

_POLY_RING, _T = ring("t", _SYMPY_QQ)


def _poly(x) -> Any:
    if isinstance(x, Fraction):
        return _POLY_RING(_SYMPY_QQ(x.numerator, x.denominator))
    return _POLY_RING(x)


class RationalFunction:
    """An element of Q(t) in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _poly(num) if not hasattr(num, "ring") else num
        den = _poly(den) if not hasattr(den, "ring") else den
        if not den:
            raise ZeroDivisionError("zero denominator in Q(t)")
        if not num:
            self.num, self.den = _POLY_RING(0), _POLY_RING(1)
            return
        g = num.gcd(den)
        num, den = num.quo(g), den.quo(g)
        lc = den.LC
        self.num = num.quo_ground(lc)
        self.den = den.quo_ground(lc)

    # construction helpers
    @classmethod
    def t(cls) -> "RationalFunction":
        return cls(_T)

    @classmethod
    def coerce(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return cls(x)

    # arithmetic
    def __add__(self, other):
        o = RationalFunction.coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        o = RationalFunction.coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RationalFunction.coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by zero in Q(t)")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(1) / (self ** -k)
        return RationalFunction(self.num ** k, self.den ** k)

    def derivative(self) -> "RationalFunction":
        """d/dt by the quotient rule."""
        n, d = self.num, self.den
        return RationalFunction(n.diff(_T) * d - n * d.diff(_T), d * d)

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() <= 0

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.is_constant():
            c = self.num.LC if self.num else 0
            return hash(Fraction(int(c.numerator), int(c.denominator)) if c else 0)
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den == 1:
            return f"RationalFunction({self.num})"
        return f"RationalFunction(({self.num})/({self.den}))"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


class GroundField:
    """Descriptor for one of the two supported ground fields."""

    def __init__(self, name: str):
        if name not in ("Q", "Q(t)"):
            raise ValueError(f"unsupported ground field {name!r}")
        self.name = name

    @property
    def transcendental(self) -> bool:
        return self.name == "Q(t)"

    def __call__(self, x):
        """Coerce ``x`` into this field."""
        if self.transcendental:
            return RationalFunction.coerce(x)
        if isinstance(x, RationalFunction):
            if not x.is_constant():
                raise ValueError(f"{x} is not a rational number")
            c = x.num.LC if x.num else 0
            return Fraction(int(c.numerator), int(c.denominator)) if c else Fraction(0)
        return Fraction(x)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def derivative(self, x):
        """Derivative of a scalar along t; zero on Q."""
        if self.transcendental:
            return RationalFunction.coerce(x).derivative()
        return Fraction(0)

    def __eq__(self, other):
        return isinstance(other, GroundField) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"GroundField({self.name!r})"


QQ = GroundField("Q")
QQT = GroundField("Q(t)")


def field_from_name(name: str) -> GroundField:
    name = name.strip().replace(" ", "")
    if name == "Q":
        return QQ
    if name == "Q(t)":
        return QQT
    raise ValueError(f"unknown ground field {name!r}")
