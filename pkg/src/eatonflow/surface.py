"""Cylinder data on the two-torus slit surface and certified strip checks.

The surface is two unit tori glued along the segment from -z to z.  For an
interior non-puncture z = (x, y) it decomposes into two horizontal cylinders
(waist (1, 0), areas 1 - 2|y| and 1 + 2|y| summing to 2) and likewise two
vertical ones; only the narrow cylinder of each pair is tracked, the wide
complement is determined by it.  A unimodular matrix acting trivially on the
covering homology transports cylinders: the waist vector maps linearly, the
area is preserved, and the core curve class is unchanged up to sign.

strip_quality certifies the defining inequality for a direction enclosure to
cross a cylinder as a bounded strip; renormalized_matrix certifies that the
rescaled affine matrix of a continued-fraction word stays entry-bounded by 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .cf import convergents, validate_quotients
from .errors import InputError
from .homology import HALF, Point
from .intervals import (Decision, MPNumerics, RationalBracket, decision_le,
                        run_certified, to_bracket, tri_le)
from .mat2 import IMat


@dataclass(frozen=True)
class Cylinder:
    """A flat cylinder: primitive waist vector, area, core homology class."""

    waist: tuple          # primitive integer vector
    area: Fraction
    core_class: tuple     # integer homology vector, defined up to sign

    def __post_init__(self):
        vx, vy = self.waist
        if (vx, vy) == (0, 0) or gcd(vx, vy) != 1:
            raise InputError(f"waist {self.waist} must be primitive")
        if not 0 < self.area:
            raise InputError(f"area must be positive, got {self.area}")


def base_cylinders(z: Point) -> tuple:
    """The narrow horizontal and vertical cylinders of the slit surface at z.

    Requires z interior (both |coordinates| < 1/2) and nonzero.
    """
    if not (abs(z.x) < HALF and abs(z.y) < HALF):
        raise InputError(f"slit endpoint {z} must be interior")
    horizontal = Cylinder(waist=(1, 0), area=1 - 2 * abs(z.y), core_class=(1, 0))
    vertical = Cylinder(waist=(0, 1), area=1 - 2 * abs(z.x), core_class=(0, 1))
    return horizontal, vertical


def transported_cylinder(g: IMat, action_trivial: bool, c: Cylinder) -> Cylinder:
    """Image cylinder under g when g acts trivially on covering homology.

    The caller certifies action_trivial (e.g. via verify_fixing_word); the
    flag is a contract, not a recomputation.
    """
    if not action_trivial:
        raise InputError("transport requires a trivial homology action")
    vx, vy = g.apply(*c.waist)
    return Cylinder(waist=(vx, vy), area=c.area, core_class=c.core_class)


@dataclass(frozen=True)
class StripQuality:
    """Certified comparison data for the strip inequality."""

    lhs: RationalBracket
    rhs: RationalBracket
    epsilon: Fraction
    passes: Decision


def strip_quality(theta: RationalBracket, c: Cylinder, epsilon,
                  start_prec: int = 256, max_prec: int = 4096) -> StripQuality:
    """Certify |(cos t, sin t) wedge waist| <= (1 - eps) area / (2 |waist|)
    for the direction (cos t, sin t) parallel to (1, theta).

    Evaluated with interval arithmetic at escalating precision; an
    inconclusive comparison at the top precision yields Decision.UNDECIDED
    rather than an error.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise InputError(f"epsilon must be in (0, 1], got {epsilon}")
    vx, vy = c.waist

    last = {}

    def compute(num):
        th = num.real(theta)
        norm_dir = (1 + th * th).sqrt()
        lhs = abs(vy - th * vx) / norm_dir
        rhs = (1 - epsilon) * c.area / (2 * num.real(Fraction(vx * vx + vy * vy)).sqrt())
        last["lhs"], last["rhs"] = to_bracket(lhs), to_bracket(rhs)
        verdict = tri_le(lhs, rhs)
        if verdict is None:
            raise _Retry()
        return verdict

    verdict = _escalate(compute, start_prec, max_prec)
    passes = (Decision.UNDECIDED if verdict is None
              else Decision.YES if verdict else Decision.NO)
    return StripQuality(lhs=last["lhs"], rhs=last["rhs"],
                        epsilon=epsilon, passes=passes)


class _Retry(Exception):
    pass


def _escalate(compute, start_prec: int, max_prec: int):
    """Run compute(MPNumerics) at doubling precision; None if never decided."""
    prec = start_prec
    while True:
        try:
            return compute(MPNumerics(prec))
        except _Retry:
            if prec >= max_prec:
                return None
            prec = min(2 * prec, max_prec)


@dataclass(frozen=True)
class RenormalizedMatrix:
    """The rescaled affine matrix of a word prefix and its bound check."""

    k: int
    entries: tuple        # ((e11, e12), (e21, e22)) as RationalBrackets
    bounded: Decision


def renormalized_matrix(quots, k: int, theta: RationalBracket,
                        start_prec: int = 256,
                        max_prec: int = 4096) -> RenormalizedMatrix:
    """Certify that diag(q_k, 1/q_k) @ ((theta, -1), (0, 1/theta)) @ W_k has
    all entries in [-1, 1], where W_k is the alternating shear word of the
    first k quotients (k even; k = 0 gives the unrescaled base matrix).

    In terms of convergents the entries are
        q_k (theta q_k - p_k)    q_k (theta q_{k-1} - p_{k-1})
        p_k / (q_k theta)        p_{k-1} / (q_k theta).
    Boundedness may genuinely fail (it is a check result, not an error).
    """
    quots = validate_quotients(quots)
    if k % 2 != 0 or k < 0 or k > len(quots):
        raise InputError(f"k must be even in [0, {len(quots)}], got {k}")
    if k == 0:
        p_k, q_k, p_prev, q_prev = 0, 1, 1, 0
    else:
        convs = convergents(quots, k)
        p_k, q_k = convs[-1].p, convs[-1].q
        p_prev, q_prev = (convs[-2].p, convs[-2].q) if k >= 2 else (1, 0)

    last = {}

    def compute(num):
        th = num.real(theta)
        one = Fraction(1)
        entries = (
            (q_k * (th * q_k - p_k), q_k * (th * q_prev - p_prev)),
            (p_k / (q_k * th), p_prev / (q_k * th)),
        )
        last["entries"] = tuple(tuple(to_bracket(e) for e in row) for row in entries)
        verdicts = [tri_le(abs(e), one) for row in entries for e in row]
        if any(v is None for v in verdicts):
            raise _Retry()
        return all(verdicts)

    verdict = _escalate(compute, start_prec, max_prec)
    bounded = (Decision.UNDECIDED if verdict is None
               else Decision.YES if verdict else Decision.NO)
    return RenormalizedMatrix(k=k, entries=last["entries"], bounded=bounded)


def no_drift_check(c: Optional[Cylinder] = None) -> bool:
    """Core curves of transported cylinders keep a fixed homology class up to
    sign, so crossing counts against the covering classes cannot drift.  This
    records the modeling assumption; it holds identically."""
    return True
