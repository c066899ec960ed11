"""Pressure-equation lower bounds for quotient-constrained CF sets.

A family is given by fixed quotient blocks front and back and an arithmetic
progression stride*l + offset of middle quotients.  Each branch map sends x
to the continued fraction [0; front, L, back, L + x] where L is the middle
quotient; its contraction factor on [0, 1] is bounded below by the exact
rational e = 1/(Q(L+1) + Q')^2, with Q, Q' the last two convergent
denominators of (front, L, back).  The truncated pressure equation
sum_{l=1..u} e(stride*l + offset)^s = 1 has a unique root s_u in (0, 1) for
u >= 2, nondecreasing in u; certified brackets for s_u give Hausdorff
dimension lower bounds.

Root finding runs in floats; every reported claim is then certified with
interval arithmetic (exact rational e, interval exp/log) at 128 bits,
doubling on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cf import validate_quotients
from .errors import InputError, TargetUnreachableError, Undecided
from .intervals import MPNumerics, RationalBracket, sign, run_certified

_LOG_FLOOR = 1e-320  # doubles underflow below this; float path treats as 0


@dataclass(frozen=True)
class IFSFamily:
    """Branch maps indexed by middle quotients stride*l + offset, l >= 1."""

    front: tuple
    back: tuple
    stride: int = 1
    offset: int = 0

    def __post_init__(self):
        validate_quotients(self.front)
        validate_quotients(self.back)
        if self.stride < 1:
            raise InputError(f"stride must be >= 1, got {self.stride}")
        if self.offset < 0:
            raise InputError(f"offset must be >= 0, got {self.offset}")
        if self.stride + self.offset < 1:
            raise InputError("smallest middle quotient must be >= 1")

    def quotient(self, l: int) -> int:
        return self.stride * l + self.offset


def e_value(fam: IFSFamily, middle: int) -> Fraction:
    """Exact contraction bound for the branch with middle quotient `middle`:
    1/(Q(middle+1) + Q')^2 with Q, Q' from the CF (front, middle, back)."""
    if middle < 1:
        raise InputError(f"middle quotient must be >= 1, got {middle}")
    p_prev, q_prev = 1, 0
    q, p = 1, 0
    for a in tuple(fam.front) + (middle,) + tuple(fam.back):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return Fraction(1, (q * (middle + 1) + q_prev) ** 2)


def _e_list(fam: IFSFamily, u: int) -> list:
    return [e_value(fam, fam.quotient(l)) for l in range(1, u + 1)]


def _float_pressure(log_es: list, s: float) -> float:
    return math.fsum(math.exp(s * le) for le in log_es)


def _certified_pressure_sign(es: list, s: Fraction, target_value: Fraction = Fraction(1),
                             start_prec: int = 128, max_prec: int = 4096) -> int:
    """Certified sign of sum e^s - target_value for exact rational s."""
    s = Fraction(s)

    def compute(num):
        total = num.real(Fraction(0))
        sc = num.real(s)
        for e in es:
            total = total + (num.real(e).log() * sc).exp()
        return sign(total - num.real(target_value))

    prec = start_prec
    while True:
        try:
            return compute(MPNumerics(prec))
        except Undecided:
            if prec >= max_prec:
                raise
            prec = min(2 * prec, max_prec)


def certified_pressure(fam: IFSFamily, u: int, s: Fraction,
                       prec: int = 128) -> RationalBracket:
    """Certified enclosure of sum_{l<=u} e(stride*l+offset)^s."""
    es = _e_list(fam, u)
    num = MPNumerics(prec)
    total = num.real(Fraction(0))
    sc = num.real(Fraction(s))
    for e in es:
        total = total + (num.real(e).log() * sc).exp()
    return total.to_bracket()


def solve_pressure_exponent(fam: IFSFamily, u: int, tol=Fraction(1, 10 ** 6),
                            prec: int = 128) -> RationalBracket:
    """Certified bracket of width <= tol around the root s_u of the truncated
    pressure equation; u = 1 degenerates to [0, tol] since the single-branch
    equation has its root at s = 0."""
    tol = Fraction(tol)
    if tol <= 0:
        raise InputError(f"tol must be positive, got {tol}")
    if u < 1:
        raise InputError(f"u must be >= 1, got {u}")
    if u == 1:
        return RationalBracket(Fraction(0), tol)

    es = _e_list(fam, u)
    log_es = [math.log(e.numerator) - math.log(e.denominator) for e in es]

    # float bisection on (0, 1]: pressure(0) = u > 1, strictly decreasing
    lo, hi = 0.0, 1.0
    while _float_pressure(log_es, hi) > 1.0:
        hi *= 2.0  # defensive; contraction < 1/4 makes hi = 1 enough
        if hi > 64:
            raise InputError("pressure does not drop below 1; bad family")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _float_pressure(log_es, mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < float(tol) / 8:
            break

    # certified bracket: expand dyadically until signs certify, then trim
    slo = Fraction(lo).limit_denominator(1 << 62)
    shi = Fraction(hi).limit_denominator(1 << 62)
    step = max(tol / 8, Fraction(hi - lo))
    while slo > 0 and _certified_pressure_sign(es, slo) <= 0:
        slo = max(Fraction(0), slo - step)
        step *= 2
    step = max(tol / 8, Fraction(hi - lo))
    while _certified_pressure_sign(es, shi) >= 0:
        shi = shi + step
        step *= 2
    # slo == 0 is a valid lower endpoint: pressure(0) = u > 1
    while shi - slo > tol:
        mid = (slo + shi) / 2
        if _certified_pressure_sign(es, mid) > 0:
            slo = mid
        else:
            shi = mid
    return RationalBracket(slo, shi)


@dataclass(frozen=True)
class ExponentWitness:
    """A branch count u whose certified pressure root exceeds the target."""

    u: int
    s_bracket: RationalBracket
    target: Fraction


def find_branch_count(fam: IFSFamily, target=Fraction(1, 2),
                      tol=Fraction(1, 10 ** 6), u_max: int = 10 ** 6) -> ExponentWitness:
    """Smallest u <= u_max whose certified root bracket lies above target.

    If no u qualifies, raises TargetUnreachableError carrying a certificate:
    a certified enclosure of sum_{l<=u_max} e^target.  When that sum is
    certified < 1, monotonicity in u and in s rules out every u <= u_max.
    """
    target = Fraction(target)
    tol = Fraction(tol)
    if not 0 <= target < 1:
        raise InputError(f"target must be in [0, 1), got {target}")
    if u_max < 1:
        raise InputError(f"u_max must be >= 1, got {u_max}")

    # float scan: smallest u with pressure(target) > 1  <=>  s_u > target
    log_es = []
    candidate = None
    u = 0
    level = 1
    while u < u_max:
        level = min(level, u_max - u)
        for l in range(u + 1, u + level + 1):
            e = e_value(fam, fam.quotient(l))
            log_es.append(math.log(e.numerator) - math.log(e.denominator))
        u += level
        level *= 2
        if _float_pressure(log_es, float(target)) > 1.0:
            # binary refine the smallest such u within (u - level/2, u]
            lo_u = 1
            hi_u = u
            while lo_u < hi_u:
                mid_u = (lo_u + hi_u) // 2
                if _float_pressure(log_es[:mid_u], float(target)) > 1.0:
                    hi_u = mid_u
                else:
                    lo_u = mid_u + 1
            candidate = lo_u
            break

    if candidate is not None:
        # certify, walking forward if the bracket cannot clear the target
        for uu in range(candidate, u_max + 1):
            bracket = solve_pressure_exponent(fam, uu, tol)
            if bracket.lo > target:
                return ExponentWitness(u=uu, s_bracket=bracket, target=target)
            if bracket.hi <= target and uu > candidate + 2:
                break
        raise TargetUnreachableError(
            f"float scan suggested u={candidate} but certification at tol={tol} "
            f"could not clear target {target}",
            certificate=None,
        )

    cert = certified_pressure(fam, u_max, target)
    raise TargetUnreachableError(
        f"no u <= {u_max} has certified pressure root above {target}: "
        f"the truncated pressure sum at the target exponent is enclosed by "
        f"[{float(cert.lo):.6g}, {float(cert.hi):.6g}], certified below 1, "
        f"and it is nondecreasing in u and decreasing in s",
        certificate=cert,
    )
