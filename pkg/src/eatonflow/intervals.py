"""Certified scalar arithmetic on three interchangeable number families.

Exact rationals (fractions.Fraction) are used whenever every input is
rational.  Otherwise computations run on interval scalars: FloatInterval
(53-bit endpoints, outward-rounded with nextafter) for speed, then mpmath
intervals at 256..4096 bits.  Comparisons are certified: when the interval
data cannot decide a query the helpers raise Undecided, and run_certified
reruns the whole computation at the next precision level from exact inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

from mpmath.ctx_iv import MPIntervalContext

from .errors import InputError, PrecisionExhaustedError, Undecided

_INF = math.inf


class Decision(Enum):
    """Outcome of a certified check."""

    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class RationalBracket:
    """Closed interval with exact rational endpoints, lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise InputError(f"bracket endpoints out of order: {self.lo} > {self.hi}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    @staticmethod
    def point(x) -> "RationalBracket":
        f = Fraction(x)
        return RationalBracket(f, f)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or a plain integer/decimal string into a Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


# ---------------------------------------------------------------------------
# Float intervals


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


class FloatInterval:
    """[lo, hi] with float endpoints; every operation rounds outward."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float):
        if not (lo <= hi):  # also rejects NaN
            raise Undecided(f"invalid float interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    def __repr__(self):
        return f"FloatInterval({self.lo!r}, {self.hi!r})"

    @staticmethod
    def from_fraction(x) -> "FloatInterval":
        f = float(x)
        if not math.isfinite(f):
            raise Undecided("rational out of float range")
        if Fraction(f) == x:
            return FloatInterval(f, f)
        return FloatInterval(_down(f), _up(f))

    @staticmethod
    def _coerce(x) -> "FloatInterval":
        if isinstance(x, FloatInterval):
            return x
        if isinstance(x, int):
            f = float(x)
            if int(f) == x:
                return FloatInterval(f, f)
            return FloatInterval(_down(f), _up(f))
        if isinstance(x, Fraction):
            return FloatInterval.from_fraction(x)
        raise TypeError(f"cannot mix FloatInterval with {type(x).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return FloatInterval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return FloatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return FloatInterval(_down(min(cands)), _up(max(cands)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise Undecided("division by an interval containing zero")
        cands = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return FloatInterval(_down(min(cands)), _up(max(cands)))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __abs__(self):
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return FloatInterval(0.0, max(-self.lo, self.hi))

    def to_bracket(self) -> RationalBracket:
        return RationalBracket(Fraction(self.lo), Fraction(self.hi))


# ---------------------------------------------------------------------------
# mpmath intervals

_CTXS: dict[int, MPIntervalContext] = {}


def _ctx(prec: int) -> MPIntervalContext:
    ctx = _CTXS.get(prec)
    if ctx is None:
        ctx = MPIntervalContext()
        ctx.prec = prec  # never mutated afterwards; safe to share
        _CTXS[prec] = ctx
    return ctx


class MPInterval:
    """mpmath interval scalar pinned to one context/precision."""

    __slots__ = ("val", "prec")

    def __init__(self, val, prec: int):
        self.val = val
        self.prec = prec

    def __repr__(self):
        return f"MPInterval({self.val}, prec={self.prec})"

    @staticmethod
    def from_fraction(x, prec: int) -> "MPInterval":
        ctx = _ctx(prec)
        x = Fraction(x)
        # exact integer ratio; interval division rounds outward
        v = ctx.mpf(x.numerator) / ctx.mpf(x.denominator)
        return MPInterval(v, prec)

    @staticmethod
    def from_bracket(lo: Fraction, hi: Fraction, prec: int) -> "MPInterval":
        ctx = _ctx(prec)
        a = ctx.mpf(lo.numerator) / ctx.mpf(lo.denominator)
        b = ctx.mpf(hi.numerator) / ctx.mpf(hi.denominator)
        return MPInterval(ctx.mpf([a.a, b.b]), prec)

    def _coerce(self, x):
        if isinstance(x, MPInterval):
            if x.prec != self.prec:
                raise TypeError("mixed MPInterval precisions")
            return x.val
        if isinstance(x, int):
            return _ctx(self.prec).mpf(x)
        if isinstance(x, Fraction):
            return MPInterval.from_fraction(x, self.prec).val
        raise TypeError(f"cannot mix MPInterval with {type(x).__name__}")

    def __add__(self, other):
        return MPInterval(self.val + self._coerce(other), self.prec)

    __radd__ = __add__

    def __neg__(self):
        return MPInterval(-self.val, self.prec)

    def __sub__(self, other):
        return MPInterval(self.val - self._coerce(other), self.prec)

    def __rsub__(self, other):
        return MPInterval(self._coerce(other) - self.val, self.prec)

    def __mul__(self, other):
        return MPInterval(self.val * self._coerce(other), self.prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.a <= 0 <= o.b:
            raise Undecided("division by an interval containing zero")
        return MPInterval(self.val / o, self.prec)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if self.val.a <= 0 <= self.val.b:
            raise Undecided("division by an interval containing zero")
        return MPInterval(o / self.val, self.prec)

    def __abs__(self):
        ctx = _ctx(self.prec)
        a, b = self.val.a, self.val.b
        if a >= 0:
            return self
        if b <= 0:
            return -self
        return MPInterval(ctx.mpf([0, max(-a, b)]), self.prec)

    def sqrt(self):
        return MPInterval(_ctx(self.prec).sqrt(self.val), self.prec)

    def log(self):
        return MPInterval(_ctx(self.prec).log(self.val), self.prec)

    def exp(self):
        return MPInterval(_ctx(self.prec).exp(self.val), self.prec)

    def cos(self):
        return MPInterval(_ctx(self.prec).cos(self.val), self.prec)

    def sin(self):
        return MPInterval(_ctx(self.prec).sin(self.val), self.prec)

    def to_bracket(self) -> RationalBracket:
        lo, hi = self.val._mpi_
        return RationalBracket(_raw_mpf_fraction(lo), _raw_mpf_fraction(hi))


def _raw_mpf_fraction(t) -> Fraction:
    # raw mpf tuple (sign, mantissa, exponent, bitcount); finite only
    s, man, exp, _ = t
    if man == 0 and exp != 0:
        raise ValueError("nonfinite interval endpoint")
    v = Fraction(int(man) << exp) if exp >= 0 else Fraction(int(man), 1 << -exp)
    return -v if s else v


Scalar = Union[Fraction, FloatInterval, MPInterval]


# ---------------------------------------------------------------------------
# Certified predicates (tri-state core; raising wrappers for control flow)


def _bounds(x) -> tuple:
    """Exact rational lower/upper bounds of a scalar."""
    if isinstance(x, Fraction):
        return x, x
    if isinstance(x, int):
        f = Fraction(x)
        return f, f
    if isinstance(x, FloatInterval):
        return Fraction(x.lo), Fraction(x.hi)
    if isinstance(x, MPInterval):
        lo, hi = x.val._mpi_
        return _raw_mpf_fraction(lo), _raw_mpf_fraction(hi)
    raise TypeError(f"not a scalar: {type(x).__name__}")


def _fast_ends(x):
    """(lo, hi) endpoints in a cheaply comparable form, or None."""
    t = type(x)
    if t is FloatInterval:
        return x.lo, x.hi
    if t is float or t is int:
        return x, x
    return None


def tri_lt(a, b) -> Optional[bool]:
    """True if a < b certainly, False if a >= b certainly, else None."""
    fa, fb = _fast_ends(a), _fast_ends(b)
    if fa is not None and fb is not None:
        if fa[1] < fb[0]:
            return True
        if fa[0] >= fb[1]:
            return False
        return None
    if isinstance(a, MPInterval) and isinstance(b, MPInterval):
        r = a.val < b.val
        if r:
            return True
        if a.val >= b.val:
            return False
        return None
    alo, ahi = _bounds(a)
    blo, bhi = _bounds(b)
    if ahi < blo:
        return True
    if alo >= bhi:
        return False
    return None


def tri_le(a, b) -> Optional[bool]:
    fa, fb = _fast_ends(a), _fast_ends(b)
    if fa is not None and fb is not None:
        if fa[1] <= fb[0]:
            return True
        if fa[0] > fb[1]:
            return False
        return None
    if isinstance(a, MPInterval) and isinstance(b, MPInterval):
        r = a.val <= b.val
        if r:
            return True
        if a.val > b.val:
            return False
        return None
    alo, ahi = _bounds(a)
    blo, bhi = _bounds(b)
    if ahi <= blo:
        return True
    if alo > bhi:
        return False
    return None


def lt(a, b) -> bool:
    r = tri_lt(a, b)
    if r is None:
        raise Undecided(f"cannot order {a!r} < {b!r}")
    return r


def le(a, b) -> bool:
    r = tri_le(a, b)
    if r is None:
        raise Undecided(f"cannot order {a!r} <= {b!r}")
    return r


def gt(a, b) -> bool:
    return lt(b, a)


def ge(a, b) -> bool:
    return le(b, a)


def sign(a) -> int:
    """-1, 0, +1; zero only when the scalar is exactly zero."""
    f = _fast_ends(a)
    lo, hi = f if f is not None else _bounds(a)
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    if lo == hi == 0:
        return 0
    raise Undecided(f"sign of {a!r} not certified")


def is_zero(a) -> bool:
    return sign(a) == 0


def decision_le(a, b) -> Decision:
    r = tri_le(a, b)
    if r is None:
        return Decision.UNDECIDED
    return Decision.YES if r else Decision.NO


def decision_ge(a, b) -> Decision:
    return decision_le(b, a)


def floor_int(a) -> int:
    """Certified integer floor."""
    f = _fast_ends(a)
    lo, hi = f if f is not None else _bounds(a)
    flo, fhi = math.floor(lo), math.floor(hi)
    if flo != fhi:
        raise Undecided(f"floor of {a!r} straddles an integer")
    return flo


def nearest_int(a) -> int:
    """Certified round-half-up nearest integer: floor(a + 1/2)."""
    return floor_int(a + Fraction(1, 2))


def wrap_half(x):
    """Reduce x into [-1/2, 1/2); returns (wrapped, integer shift)."""
    k = floor_int(x + Fraction(1, 2))
    return x - k, k


def minimum(*xs):
    """Certified minimum of scalars (all pairwise comparable)."""
    best = xs[0]
    for x in xs[1:]:
        if lt(x, best):
            best = x
    return best


def to_bracket(x) -> RationalBracket:
    lo, hi = _bounds(x)
    return RationalBracket(lo, hi)


# ---------------------------------------------------------------------------
# Exact interval arithmetic on rational brackets


def as_bracket(x) -> RationalBracket:
    if isinstance(x, RationalBracket):
        return x
    return RationalBracket.point(x)


def br_add(a, b) -> RationalBracket:
    a, b = as_bracket(a), as_bracket(b)
    return RationalBracket(a.lo + b.lo, a.hi + b.hi)


def br_neg(a) -> RationalBracket:
    a = as_bracket(a)
    return RationalBracket(-a.hi, -a.lo)


def br_sub(a, b) -> RationalBracket:
    return br_add(a, br_neg(b))


def br_mul(a, b) -> RationalBracket:
    a, b = as_bracket(a), as_bracket(b)
    cands = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return RationalBracket(min(cands), max(cands))


def br_div(a, b) -> RationalBracket:
    a, b = as_bracket(a), as_bracket(b)
    if b.lo <= 0 <= b.hi:
        raise Undecided("division by a bracket containing zero")
    cands = (a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi)
    return RationalBracket(min(cands), max(cands))


def br_abs(a) -> RationalBracket:
    a = as_bracket(a)
    if a.lo >= 0:
        return a
    if a.hi <= 0:
        return br_neg(a)
    return RationalBracket(Fraction(0), max(-a.lo, a.hi))


# ---------------------------------------------------------------------------
# Numerics factories and the precision ladder


class ExactNumerics:
    """Builds Fractions; only valid when every input is a point rational."""

    prec = None
    is_exact = True

    def real(self, x) -> Fraction:
        if isinstance(x, RationalBracket):
            if x.lo != x.hi:
                raise InputError("exact arithmetic cannot absorb a wide bracket")
            return x.lo
        return Fraction(x)


class FloatNumerics:
    prec = 53
    is_exact = False

    def real(self, x) -> FloatInterval:
        if isinstance(x, RationalBracket):
            lo = FloatInterval.from_fraction(x.lo)
            hi = FloatInterval.from_fraction(x.hi)
            return FloatInterval(lo.lo, hi.hi)
        if isinstance(x, FloatInterval):
            return x
        return FloatInterval.from_fraction(Fraction(x))


class MPNumerics:
    is_exact = False

    def __init__(self, prec: int):
        self.prec = prec

    def real(self, x) -> MPInterval:
        if isinstance(x, RationalBracket):
            return MPInterval.from_bracket(x.lo, x.hi, self.prec)
        if isinstance(x, MPInterval) and x.prec == self.prec:
            return x
        return MPInterval.from_fraction(Fraction(x), self.prec)


EXACT = ExactNumerics()

PRECISION_LADDER = (53, 256, 512, 1024, 2048, 4096)


def ladder_levels(start_prec: int = 53, max_prec: int = 4096) -> list:
    """Numerics instances for each ladder level within [start_prec, max_prec]."""
    levels = []
    for p in PRECISION_LADDER:
        if p < start_prec or p > max_prec:
            continue
        levels.append(FloatNumerics() if p == 53 else MPNumerics(p))
    if not levels:
        levels.append(MPNumerics(start_prec))
    return levels


def run_certified(compute: Callable, *, exact: bool = False,
                  start_prec: int = 53, max_prec: int = 4096):
    """Run compute(numerics), escalating precision on Undecided.

    With exact=True the computation runs once on Fractions and Undecided is
    not expected (exact comparisons always decide).
    """
    if exact:
        return compute(EXACT)
    last = None
    for num in ladder_levels(start_prec, max_prec):
        try:
            return compute(num)
        except Undecided as u:
            last = u
    raise PrecisionExhaustedError(
        f"no decision up to {max_prec} bits: {last}") from last
