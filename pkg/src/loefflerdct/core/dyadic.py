"""Dyadic rationals ``m * 2**e``.

Every entry of the trivial-multiplier set {0, +-1/2, +-1, +-2} is dyadic, and
sums/products of dyadics stay dyadic, so the forward transforms built from
those parameters never leave this ring.  Quotients generally do (the inverse
parameters are arbitrary rationals), which is why matrices store
:class:`fractions.Fraction` and this type is mostly used to certify that a
rational is dyadic and to expose its canonical (mantissa, exponent) form.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class NotDyadic(ValueError):
    pass


def _canonical(mantissa: int, exponent: int) -> tuple[int, int]:
    if mantissa == 0:
        return 0, 0
    tz = (mantissa & -mantissa).bit_length() - 1
    return mantissa >> tz, exponent + tz


class Dyadic:
    """Exact value ``mantissa * 2**exponent`` kept in canonical form.

    Canonical form has an odd mantissa, or ``(0, 0)`` for zero, so equal
    values always have equal fields.
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        m, e = _canonical(int(mantissa), int(exponent))
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def from_value(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, float):
            value = Fraction(value)
        if not isinstance(value, Rational):
            value = Fraction(value)
        num, den = value.numerator, value.denominator
        if den & (den - 1):
            raise NotDyadic(f"{value} has a non power-of-two denominator")
        return cls(num, -(den.bit_length() - 1))

    @staticmethod
    def is_dyadic(value) -> bool:
        try:
            Dyadic.from_value(value)
        except (NotDyadic, ValueError, TypeError):
            return False
        return True

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def is_power_of_two(self) -> bool:
        """True for +-2**j; zero is not a power of two."""
        return abs(self.mantissa) == 1

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        e = min(self.exponent, other.exponent)
        return Dyadic(
            (self.mantissa << (self.exponent - e)) + (other.mantissa << (other.exponent - e)), e
        )

    __radd__ = __add__

    def __neg__(self):
        return Dyadic(-self.mantissa, self.exponent)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Dyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __abs__(self):
        return Dyadic(abs(self.mantissa), self.exponent)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.mantissa == other.mantissa and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        return self.to_fraction() < Fraction(other.to_fraction() if isinstance(other, Dyadic) else other)

    def __hash__(self):
        return hash(self.to_fraction())

    def __float__(self):
        return float(self.to_fraction())

    def __bool__(self):
        return self.mantissa != 0

    def __repr__(self):
        return f"Dyadic({self.mantissa}, {self.exponent})"

    def __str__(self):
        return str(self.to_fraction())


def _coerce(value):
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int):
        return Dyadic(value, 0)
    if isinstance(value, Fraction):
        try:
            return Dyadic.from_value(value)
        except NotDyadic:
            return NotImplemented
    return NotImplemented
