"""Continued fraction engine.

Quotient lists (a1, a2, ...) denote the zero-integer-part continued fraction
[0; a1, a2, ...] with every quotient >= 1.  Convergents p_k/q_k follow the
standard recurrence p_k = a_k p_{k-1} + p_{k-2}, q_k = a_k q_{k-1} + q_{k-2}
with seeds p_0 = 0, q_0 = 1, p_{-1} = 1, q_{-1} = 0.

The same data has a matrix avatar: the alternating shear word
SHEAR_X^{a1} @ SHEAR_Y^{a2} @ ... @ SHEAR_Y^{ak} (k even) has first column
(q_k, p_k) and second column (q_{k-1}, p_{k-1}).  Both routes are implemented
independently; tests compare them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InfeasibleError, InputError
from .intervals import RationalBracket
from .mat2 import Gen, IMat, IDENTITY, shear_power


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def validate_quotients(quots: Sequence[int]) -> tuple:
    quots = tuple(quots)
    if not quots:
        raise InputError("empty quotient list")
    for a in quots:
        if not isinstance(a, int) or a < 1:
            raise InputError(f"quotients must be integers >= 1, got {a!r}")
    return quots


def convergents(quots: Sequence[int], k: Optional[int] = None) -> list:
    """Convergents (p_i, q_i) for 1 <= i <= k (k defaults to len(quots))."""
    quots = validate_quotients(quots)
    if k is None:
        k = len(quots)
    if not 1 <= k <= len(quots):
        raise InputError(f"k={k} out of range for {len(quots)} quotients")
    out = []
    p_prev, q_prev = 1, 0
    p, q = 0, 1
    for i in range(k):
        a = quots[i]
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Convergent(i + 1, p, q))
    return out


def cf_value(quots: Sequence[int]) -> Fraction:
    """Exact value of the finite continued fraction."""
    c = convergents(quots)[-1]
    return c.value


def word_matrix(quots: Sequence[int], k: int) -> IMat:
    """Alternating shear word for the first k quotients (k even).

    Built by literal matrix multiplication, not via the convergent
    recurrence, so it can serve as an independent route in tests.
    """
    quots = validate_quotients(quots)
    if k % 2 != 0 or k < 0:
        raise InputError(f"word length k must be even and >= 0, got {k}")
    if k > len(quots):
        raise InputError(f"k={k} exceeds {len(quots)} quotients")
    out = IDENTITY
    gen = Gen.X
    for a in quots[:k]:
        out = out @ shear_power(gen, a)
        gen = gen.other
    return out


def direction_enclosure(quots: Sequence[int], precision: int = 128) -> RationalBracket:
    """Certified enclosure of every real whose quotient list extends quots.

    The enclosure is the closed fundamental interval of the prefix: its
    endpoints are the values of [0; quots] and [0; quots with last quotient
    incremented], so it contains the exact finite value and every infinite
    continuation.  Successive even/odd truncations bracket it from below and
    above.  The width is at most 2^-precision whenever the prefix is long
    enough to support the request; otherwise the tightest prefix enclosure
    is returned.
    """
    quots = validate_quotients(quots)
    limit = Fraction(1, 2 ** precision)
    p_prev, q_prev = 1, 0
    p, q = 0, 1
    for i, a in enumerate(quots):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        # endpoints: p/q and (p + p_prev)/(q + q_prev)
        end = Fraction(p, q)
        alt = Fraction(p + p_prev, q + q_prev)
        lo, hi = (end, alt) if end <= alt else (alt, end)
        if hi - lo <= limit:
            return RationalBracket(lo, hi)
    return RationalBracket(lo, hi)


# ---------------------------------------------------------------------------
# Block patterns for explicitly ergodic directions


def _smallest_in_range(residue: int, modulus: int, lo: int, hi: int) -> Optional[int]:
    """Smallest value in (lo, hi] congruent to residue mod modulus."""
    first = lo + 1 + (residue - (lo + 1)) % modulus
    return first if first <= hi else None


def validate_slit_params(r: int, s: int, q: int) -> None:
    """Preconditions for the half-lattice slit point (r/2q, s/2q)."""
    from math import gcd

    if q < 2:
        raise InputError(f"q must be >= 2, got {q}")
    if s == 0:
        raise InputError("s must be nonzero")
    if abs(r) >= q or abs(s) >= q:
        raise InputError(f"|r|, |s| must be < q, got r={r}, s={s}, q={q}")
    if gcd(s, q) != 1:
        raise InputError(f"s,q not coprime: s={s}, q={q}")
    if r % 2 == 0 and s % 2 == 0:
        raise InputError("at least one of r, s must be odd")


def solve_block_pair(r: int, s: int, q: int) -> tuple:
    """Smallest (a, d) in (4q, 6q] with r + a s = -q and d s - r = -q mod 2q.

    When gcd(s, 2q) = 2 there are two admissible residues in the range; the
    smaller value is taken, which makes the output deterministic.
    """
    from math import gcd

    validate_slit_params(r, s, q)
    m = 2 * q
    g = gcd(s, m)

    def solve(target: int) -> int:
        if target % g != 0:
            raise InfeasibleError(
                f"congruence {s}*t = {target} (mod {m}) has no solution")
        mm = m // g
        t0 = (pow(s // g, -1, mm) * (target // g)) % mm
        # candidates are t0 mod mm; smallest in (4q, 6q]
        best = _smallest_in_range(t0 % mm, mm, 4 * q, 6 * q)
        if best is None:
            raise InfeasibleError(
                f"no solution in (4q, 6q] for {s}*t = {target} (mod {m})")
        return best

    a = solve((-q - r) % m)
    d = solve((r - q) % m)
    return a, d


def block_exponents(a: int, d: int, n: int) -> tuple:
    """One ten-quotient block (d-1, 1, 1, d, n, a-1, 1, 1, a, n)."""
    return (d - 1, 1, 1, d, n, a - 1, 1, 1, a, n)


def ergodic_quotients(r: int, s: int, q: int, n_seq: Sequence[int],
                      blocks: int) -> tuple:
    """Quotient list of the explicitly ergodic direction for (r/2q, s/2q).

    Block i (1-based) contributes (d-1, 1, 1, d, n_i, a-1, 1, 1, a, n_i)
    where (a, d) = solve_block_pair(r, s, q) and n_i = n_seq[i-1] must be a
    strictly positive multiple of 8q.
    """
    if blocks < 1:
        raise InputError(f"blocks must be >= 1, got {blocks}")
    n_seq = tuple(n_seq)
    if len(n_seq) < blocks:
        raise InputError(f"n_seq has {len(n_seq)} entries for {blocks} blocks")
    a, d = solve_block_pair(r, s, q)
    out = []
    for i in range(blocks):
        n = n_seq[i]
        if not isinstance(n, int) or n < 8 * q or n % (8 * q) != 0:
            raise InputError(
                f"n_seq[{i}]={n!r} must be a positive multiple of 8q={8 * q}")
        out.extend(block_exponents(a, d, n))
    return tuple(out)


def block_lower_bounds_hold(r: int, s: int, q: int, quots: Sequence[int]) -> bool:
    """Check the per-block quotient growth inequalities for eps = 1/q.

    At each block (1-based quotient positions 10k and 10k+1) the pattern must
    satisfy a_{10k} >= 4(1+eps)/(1-|r|/q) and a_{10k+1} >= 2(1+eps)/(1-|s|/q).
    """
    eps = Fraction(1, q)
    lhs1 = 4 * (1 + eps) / (1 - Fraction(abs(r), q))
    lhs2 = 2 * (1 + eps) / (1 - Fraction(abs(s), q))
    k = 10
    while k <= len(quots):
        if quots[k - 1] < lhs1:
            return False
        if k + 1 <= len(quots) and quots[k] < lhs2:
            return False
        k += 10
    return True
