"""Exact arithmetic for thresholds of the form ``a + b * eta**(1/q)``.

Every size bound the stability machinery compares against is linear in a
single root of ``eta``. Keeping ``a``, ``b`` and ``eta`` as fractions and
deciding comparisons by raising to the ``q``-th power avoids the boundary
misclassifications that floating point would cause.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    """Convert ints, fractions, decimal strings ("0.05", "1/3") to a Fraction.

    Floats are accepted but converted through their shortest repr, so
    ``0.1`` becomes ``1/10`` rather than the binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _root_sign(t: Fraction, eta: Fraction, q: int) -> int:
    """Sign of ``eta**(1/q) - t`` for ``eta > 0``."""
    if t <= 0:
        return 1
    p = t**q
    return (eta > p) - (eta < p)


class Surd:
    """The real number ``base + coeff * eta**(1/root)`` with exact comparisons.

    Arithmetic is closed under adding rationals, scaling by rationals, and
    adding another Surd over the same ``(eta, root)``.
    """

    __slots__ = ("base", "coeff", "eta", "root")

    def __init__(self, base=0, coeff=1, eta=1, root=1):
        self.base = as_fraction(base)
        self.coeff = as_fraction(coeff)
        self.eta = as_fraction(eta)
        self.root = int(root)
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.root < 1:
            raise ValueError("root must be a positive integer")

    @classmethod
    def power(cls, eta, root: int) -> "Surd":
        """``eta**(1/root)`` itself."""
        return cls(0, 1, eta, root)

    def _same(self, other: "Surd") -> None:
        if (self.eta, self.root) != (other.eta, other.root):
            raise ValueError("cannot combine surds over different roots")

    def __add__(self, other):
        if isinstance(other, Surd):
            self._same(other)
            return Surd(self.base + other.base, self.coeff + other.coeff, self.eta, self.root)
        return Surd(self.base + as_fraction(other), self.coeff, self.eta, self.root)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.base, -self.coeff, self.eta, self.root)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Surd):
            return NotImplemented
        f = as_fraction(other)
        return Surd(self.base * f, self.coeff * f, self.eta, self.root)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / as_fraction(other))

    def sign_minus(self, x) -> int:
        """Sign of ``self - x`` for a rational ``x``."""
        if isinstance(x, Surd):
            return (self - x).sign_minus(0)
        x = as_fraction(x)
        if self.coeff == 0:
            d = self.base - x
            return (d > 0) - (d < 0)
        t = (x - self.base) / self.coeff
        s = _root_sign(t, self.eta, self.root)
        return s if self.coeff > 0 else -s

    def __lt__(self, x):
        return self.sign_minus(x) < 0

    def __le__(self, x):
        return self.sign_minus(x) <= 0

    def __gt__(self, x):
        return self.sign_minus(x) > 0

    def __ge__(self, x):
        return self.sign_minus(x) >= 0

    def __eq__(self, x):
        if isinstance(x, (Surd, int, Fraction, float)):
            return self.sign_minus(x) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.base, self.coeff, self.eta, self.root))

    def __float__(self):
        return float(self.base) + float(self.coeff) * float(self.eta) ** (1.0 / self.root)

    def __floor__(self) -> int:
        guess = math.floor(float(self))
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    def __ceil__(self) -> int:
        guess = math.ceil(float(self))
        while self > guess:
            guess += 1
        while self <= guess - 1:
            guess -= 1
        return guess

    def __repr__(self):
        return f"Surd({self.base} + {self.coeff}*{self.eta}^(1/{self.root}))"

    def to_json(self) -> dict:
        return {
            "base": str(self.base),
            "coeff": str(self.coeff),
            "eta": str(self.eta),
            "root": self.root,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Surd":
        return cls(data["base"], data["coeff"], data["eta"], data["root"])


Real = Union[int, Fraction, Surd]


def real_from_json(value) -> Real:
    if isinstance(value, dict):
        return Surd.from_json(value)
    return as_fraction(value)


def real_to_json(value: Real):
    if isinstance(value, Surd):
        return value.to_json()
    f = as_fraction(value)
    return f.numerator if f.denominator == 1 else str(f)


def ceil_real(x: Real) -> int:
    return math.ceil(x)


def floor_real(x: Real) -> int:
    return math.floor(x)
