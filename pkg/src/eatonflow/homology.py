"""Shear actions on the four-times-punctured torus and covering homology.

Points live in the square fundamental domain [-1/2, 1/2)^2 minus the four
half-lattice punctures.  Applying a shear generator to a point may wrap a
coordinate; the wrap count determines whether the induced map on the
anti-invariant covering homology is the shear itself or its inverse.  The
bookkeeping composes along words by the chain rule, and closed-form power
rules make huge exponents cheap.  Everything here is exact Fraction
arithmetic; no floats or intervals appear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cf import block_exponents, solve_block_pair, validate_slit_params
from .errors import InputError, SingularPointError
from .mat2 import Gen, IMat, IDENTITY, is_proj_identity, proj_equal, shear_power

HALF = Fraction(1, 2)

# The four half-lattice points removed from the torus.  They form the
# 2-torsion subgroup, so every unimodular linear map permutes them; a
# non-puncture can never land on one under a shear word.
PUNCTURES = (
    (Fraction(0), Fraction(0)),
    (-HALF, -HALF),
    (-HALF, Fraction(0)),
    (Fraction(0), -HALF),
)


@dataclass(frozen=True)
class Point:
    """A non-puncture point of the fundamental domain [-1/2, 1/2)^2."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        if not (-HALF <= self.x < HALF and -HALF <= self.y < HALF):
            raise InputError(f"({self.x}, {self.y}) outside [-1/2, 1/2)^2")
        if (self.x, self.y) in PUNCTURES:
            raise SingularPointError(f"({self.x}, {self.y}) is a puncture")

    def __neg__(self) -> "Point":
        return reduce_point(-self.x, -self.y)

    def __iter__(self):
        return iter((self.x, self.y))

    def in_smooth_part(self) -> bool:
        """Both coordinates differ from -1/2 (the negation-symmetry locus)."""
        return self.x != -HALF and self.y != -HALF


def _wrap(v: Fraction) -> tuple:
    """Reduce into [-1/2, 1/2); returns (wrapped, integer shift)."""
    k = (v + HALF).__floor__()
    return v - k, k


def reduce_point(x, y) -> Point:
    """Wrap raw rational coordinates into the fundamental domain."""
    wx, _ = _wrap(Fraction(x))
    wy, _ = _wrap(Fraction(y))
    return Point(wx, wy)


def apply_matrix(m: IMat, z: Point) -> Point:
    """Linear action followed by reduction."""
    x, y = m.apply(z.x, z.y)
    return reduce_point(x, y)


def in_central_strip(z: Point) -> bool:
    """Whether -1/2 <= x + y < 1/2, i.e. one shear step needs no wrap."""
    return -HALF <= z.x + z.y < HALF


def star_step(gen: Gen, z: Point) -> tuple:
    """One shear step: image point and induced homology exponent (+-1).

    The exponent is +1 exactly when z lies in the central strip; the induced
    covering-homology map is then gen, otherwise gen^(-1).
    """
    return apply_matrix(gen.matrix, z), (1 if in_central_strip(z) else -1)


def star_power(gen: Gen, n: int, z: Point) -> tuple:
    """Closed form for n shear steps (n >= 0).

    For Gen.Y the linear image is (x, y + n x); writing y + n x = k + w with
    w in [-1/2, 1/2) the induced map is gen^(n - 2|k|).  Symmetrically for
    Gen.X with x + n y.  Matches composing star_step n times.
    """
    if n < 0:
        raise InputError(f"power must be >= 0, got {n}")
    if gen is Gen.Y:
        w, k = _wrap(z.y + n * z.x)
        return Point(z.x, w), n - 2 * abs(k)
    w, k = _wrap(z.x + n * z.y)
    return Point(w, z.y), n - 2 * abs(k)


Word = Sequence[tuple]  # ((Gen, exponent), ...) leftmost letter applied last


@dataclass(frozen=True)
class TraceEntry:
    """One applied letter: the resulting point and its induced exponent."""

    gen: Gen
    exponent: int
    star_exponent: int
    point: Point


@dataclass(frozen=True)
class StarResult:
    point: Point
    action: IMat
    trace: tuple = field(default=())


def validate_word(word: Word) -> tuple:
    word = tuple(word)
    if not word:
        raise InputError("empty word")
    for gen, n in word:
        if not isinstance(gen, Gen):
            raise InputError(f"bad generator {gen!r}")
        if not isinstance(n, int) or n < 0:
            raise InputError(f"letter exponents must be integers >= 0, got {n!r}")
    return word


def star_word(word: Word, z: Point) -> StarResult:
    """Evaluate a shear word at z, rightmost letter first.

    Returns the final point, the induced homology action (product of the
    per-letter shear powers composed by the chain rule), and the per-letter
    trace in application order.
    """
    word = validate_word(word)
    action = IDENTITY
    trace = []
    cur = z
    for gen, n in reversed(word):
        cur, t = star_power(gen, n, cur)
        action = shear_power(gen, t) @ action
        trace.append(TraceEntry(gen, n, t, cur))
    return StarResult(cur, action, tuple(trace))


# ---------------------------------------------------------------------------
# Fixing words for half-lattice slit points


def build_fixing_word(a: int, d: int, n: int) -> tuple:
    """The ten-letter word with exponents (d-1, 1, 1, d, n, a-1, 1, 1, a, n),
    alternating Gen.X / Gen.Y from the left; rightmost letter applies first."""
    exps = block_exponents(a, d, n)
    gens = (Gen.X, Gen.Y) * 5
    return tuple(zip(gens, exps))


@dataclass(frozen=True)
class VerificationReport:
    """Audit record produced by verify_fixing_word."""

    r: int
    s: int
    q: int
    m: int
    n: int
    a: int
    d: int
    point: Point
    word: tuple
    trace: tuple
    action: IMat
    fixed_point: bool
    action_trivial: bool

    @property
    def passed(self) -> bool:
        return self.fixed_point and self.action_trivial


def slit_point(r: int, s: int, q: int) -> Point:
    validate_slit_params(r, s, q)
    return Point(Fraction(r, 2 * q), Fraction(s, 2 * q))


def verify_fixing_word(r: int, s: int, q: int, m: int = 1) -> VerificationReport:
    """Build the fixing word for the slit point (r/2q, s/2q) and certify that
    it fixes the point and acts projectively trivially on covering homology.

    For s < 0 the word is built from the mirrored point (-r, -s) and checked
    at (r, s) itself; the negation symmetry of the homology action makes the
    mirrored word the correct witness.  n = 8 q m.
    """
    if m < 1:
        raise InputError(f"m must be >= 1, got {m}")
    z = slit_point(r, s, q)
    if s > 0:
        a, d = solve_block_pair(r, s, q)
    else:
        a, d = solve_block_pair(-r, -s, q)
    n = 8 * q * m
    word = build_fixing_word(a, d, n)
    res = star_word(word, z)
    return VerificationReport(
        r=r, s=s, q=q, m=m, n=n, a=a, d=d,
        point=z, word=word, trace=res.trace, action=res.action,
        fixed_point=(res.point == z),
        action_trivial=is_proj_identity(res.action),
    )


def negation_symmetry_check(word: Word, z: Point) -> bool:
    """Whether the word induces the same projective homology action at z and
    at -z.

    Preconditions (checked): z avoids the locus {x = -1/2} u {y = -1/2}, and
    so does the final image of z under the word; the symmetry statement
    requires both.  Returns the literal comparison of the two actions.
    """
    word = validate_word(word)
    if not z.in_smooth_part():
        raise InputError(f"{z} lies on the negation-symmetry locus")
    res_pos = star_word(word, z)
    if not res_pos.point.in_smooth_part():
        raise InputError(
            f"image {res_pos.point} lies on the negation-symmetry locus")
    res_neg = star_word(word, -z)
    return proj_equal(res_pos.action, res_neg.action)
