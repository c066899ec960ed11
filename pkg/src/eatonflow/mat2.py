"""Exact 2x2 integer matrices and the standard unimodular generators."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InputError


@dataclass(frozen=True)
class IMat:
    """Row-major integer matrix ((a, b), (c, d))."""

    a: int
    b: int
    c: int
    d: int

    def __matmul__(self, other: "IMat") -> "IMat":
        return IMat(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "IMat":
        det = self.det()
        if det == 1:
            return IMat(self.d, -self.b, -self.c, self.a)
        if det == -1:
            return IMat(-self.d, self.b, self.c, -self.a)
        raise InputError("only unimodular matrices invert exactly over Z")

    def __pow__(self, n: int) -> "IMat":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = IDENTITY
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def __neg__(self) -> "IMat":
        return IMat(-self.a, -self.b, -self.c, -self.d)

    def apply(self, x, y):
        """Column-vector action: (x, y) -> (a x + b y, c x + d y)."""
        return self.a * x + self.b * y, self.c * x + self.d * y

    def rows(self) -> tuple:
        return (self.a, self.b), (self.c, self.d)


IDENTITY = IMat(1, 0, 0, 1)

# Parabolic shears: SHEAR_X adds y to x (upper triangular), SHEAR_Y adds x
# to y (lower triangular).  QUARTER_TURN is the order-4 rotation sending
# (x, y) to (y, -x).
SHEAR_X = IMat(1, 1, 0, 1)
SHEAR_Y = IMat(1, 0, 1, 1)
QUARTER_TURN = IMat(0, 1, -1, 0)


class Gen(str, Enum):
    """The two shear generators, named by the coordinate they modify."""

    X = "x"
    Y = "y"

    @property
    def matrix(self) -> IMat:
        return SHEAR_X if self is Gen.X else SHEAR_Y

    @property
    def other(self) -> "Gen":
        return Gen.Y if self is Gen.X else Gen.X


def shear_power(gen: Gen, n: int) -> IMat:
    """gen^n in closed form; n may be negative."""
    if gen is Gen.X:
        return IMat(1, n, 0, 1)
    return IMat(1, 0, n, 1)


def proj_equal(m1: IMat, m2: IMat) -> bool:
    """Equality in PGL(2, Z): m1 == +-m2."""
    return m1 == m2 or m1 == -m2


def is_proj_identity(m: IMat) -> bool:
    return proj_equal(m, IDENTITY)
