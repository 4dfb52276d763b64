"""Exact arithmetic in Q(sqrt 5), enough to build the 600-cell without floats."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Union

Number = Union[int, Fraction, "QuadraticNumber"]


@total_ordering
class QuadraticNumber:
    """The number ``a + b*sqrt(5)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0) -> None:
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def from_quarters(cls, p: int, q: int) -> QuadraticNumber:
        """``(p + q*sqrt(5)) / 4``; the golden ratio is ``from_quarters(2, 2)``."""
        return cls(Fraction(p, 4), Fraction(q, 4))

    @staticmethod
    def _lift(x: Number) -> QuadraticNumber:
        if isinstance(x, QuadraticNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadraticNumber(x, 0)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Number) -> QuadraticNumber:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> QuadraticNumber:
        return QuadraticNumber(-self.a, -self.b)

    def __sub__(self, other: Number) -> QuadraticNumber:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: Number) -> QuadraticNumber:
        return (-self) + other

    def __mul__(self, other: Number) -> QuadraticNumber:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 5 * self.b * self.b

    def __truediv__(self, other: Number) -> QuadraticNumber:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        nrm = o.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 5)")
        num = self * o.conjugate()
        return QuadraticNumber(num.a / nrm, num.b / nrm)

    def __rtruediv__(self, other: Number) -> QuadraticNumber:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(5)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with 5 b^2
        diff = self.a * self.a - 5 * self.b * self.b
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadraticNumber(other)
        if not isinstance(other, QuadraticNumber):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __lt__(self, other: Number) -> bool:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 5**0.5

    def __repr__(self) -> str:
        return f"QuadraticNumber({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*sqrt5"


PHI = QuadraticNumber.from_quarters(2, 2)
