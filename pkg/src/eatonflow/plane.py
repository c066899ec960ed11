"""Vertical ray dynamics in a plane of flat-lens obstacles on a lattice.

A covolume-one lattice carries a horizontal open segment (an obstacle) of
length 2R centred at each lattice point.  A ray moves vertically at unit
speed; when it meets an obstacle at point p with centre c it restarts from
the point-symmetric image 2c - p with the opposite vertical orientation.
A hit exactly on the centre continues on the same line reversed; a hit
exactly on a segment tip is a singularity and halts the run.  Outside the
lenses this system has the same orbits as the true retro-reflecting lens
configuration, so the circular kind is simulated by the identical rule.

Admissibility comes in two flavours: circular (disks of radius R at lattice
points stay disjoint, i.e. the shortest nonzero vector has length >= 2R)
and flat (no nonzero horizontal lattice vector is shorter than 2R, found by
bounded enumeration).  Both return certified tri-state answers.

The exceptional-lattice constructor scales a sheared rotation of the square
lattice so that the transported slit of a (s, q) slit torus becomes exactly
horizontal of length 2R.  Writing w for the slope enclosure of the chosen
direction, every basis entry is a rational function of w (the square roots
cancel), so the basis carries exact rational brackets and its determinant
is certified equal to 1; only the reported normalization time t* (the log
of the expansion factor) needs transcendental evaluation.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from .cf import validate_slit_params
from .coverflow import format_exact
from .errors import (ConstructionError, InputError, PrecisionExhaustedError,
                     Undecided)
from .intervals import (Decision, RationalBracket, as_bracket, br_add, br_mul,
                        br_sub, format_rational, le, lt, nearest_int,
                        run_certified, sign, to_bracket, tri_le, tri_lt)

ExactReal = Union[Fraction, RationalBracket]

TWO_NEG_64 = Fraction(1, 2**64)


def _entry(x) -> ExactReal:
    if isinstance(x, RationalBracket):
        return x.lo if x.lo == x.hi else x
    return Fraction(x)


@dataclass(frozen=True)
class Lattice2D:
    """Covolume-one planar lattice; basis columns generate it.

    basis is ((b11, b12), (b21, b22)) row-major with exact rational or
    bracket entries; the determinant bracket must be certified within
    2^-64 of 1.
    """

    basis: tuple

    def __post_init__(self):
        det = self.det_bracket()
        if not (1 - TWO_NEG_64 <= det.lo and det.hi <= 1 + TWO_NEG_64):
            raise ConstructionError(
                f"covolume not certified 1: det in [{det.lo}, {det.hi}]")

    @property
    def entries(self) -> tuple:
        (b11, b12), (b21, b22) = self.basis
        return b11, b12, b21, b22

    def det_bracket(self) -> RationalBracket:
        b11, b12, b21, b22 = self.entries
        return br_sub(br_mul(as_bracket(b11), as_bracket(b22)),
                      br_mul(as_bracket(b12), as_bracket(b21)))


def make_lattice(rows) -> Lattice2D:
    (b11, b12), (b21, b22) = rows
    return Lattice2D(basis=((_entry(b11), _entry(b12)),
                            (_entry(b21), _entry(b22))))


def square_lattice() -> Lattice2D:
    one, zero = Fraction(1), Fraction(0)
    return Lattice2D(basis=((one, zero), (zero, one)))


def rotation_lattice(angle, prec: int = 128) -> Lattice2D:
    """The square lattice rotated anticlockwise by a rational angle in
    radians; entries are certified brackets of cos/sin."""
    from .intervals import MPInterval

    a = MPInterval.from_fraction(Fraction(angle), prec)
    c, s = a.cos().to_bracket(), a.sin().to_bracket()
    neg_s = RationalBracket(-s.hi, -s.lo)
    return Lattice2D(basis=((_entry(c), _entry(neg_s)),
                            (_entry(s), _entry(c))))


def _all_exact(values) -> bool:
    return all(isinstance(v, Fraction) for v in values)


def _n2(v):
    return v[0] * v[0] + v[1] * v[1]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _gauss_reduce(u, v):
    """Lagrange reduction with certified comparisons.

    Swaps happen only when the ordering is certified; a skipped swap of
    near-equal norms cannot break the size-reduction exit, and the caller
    compensates with an enumeration window anyway.
    """
    for _ in range(256):
        if tri_lt(_n2(v), _n2(u)) is True:
            u, v = v, u
        try:
            mu = nearest_int(_dot(u, v) / _n2(u))
        except Undecided:
            # rounding straddles a jump: the projection coefficient sits at
            # a half-integer (pair already size-reduced there) or precision
            # is short; either way the enumeration stage compensates
            return u, v
        if mu == 0:
            return u, v
        v = (v[0] - mu * u[0], v[1] - mu * u[1])
    raise Undecided("lattice reduction did not terminate")


def _shortest_decision(u, v, four_r2: Fraction) -> Decision:
    """Certified comparison of the lattice minimum against sqrt(four_r2).

    Vectors i*u + j*v with |i| > K or |j| > K have norm at least
    K * min Gram-Schmidt height, so a K with K^2 * height^2 >= four_r2
    reduces the problem to a finite box, where every candidate is checked
    individually.  Works for any basis; a near-reduced one keeps K small.
    """
    nu, nv = _n2(u), _n2(v)
    d = _dot(u, v)
    u_star2 = nu - d * d / nv
    v_star2 = nv - d * d / nu
    K = None
    for k in (1, 2, 4, 8, 16, 64):
        if (tri_le(four_r2, u_star2 * (k * k)) is True
                and tri_le(four_r2, v_star2 * (k * k)) is True):
            K = k
            break
    if K is None:
        raise Undecided("Gram-Schmidt heights too small to bound the search")
    undecided = False
    for i in range(-K, K + 1):
        for j in range(-K, K + 1):
            if i == 0 and j == 0:
                continue
            n = _n2((i * u[0] + j * v[0], i * u[1] + j * v[1]))
            r = tri_lt(n, four_r2)
            if r is True:
                return Decision.NO
            if r is None:
                undecided = True
    if undecided:
        raise Undecided("a lattice vector norm straddles 2R")
    return Decision.YES


def admissible_circular(lat: Lattice2D, R, *, start_prec: int = 53,
                        max_prec: int = 4096) -> Decision:
    """Certified test: disks of radius R at lattice points are disjoint."""
    R = Fraction(R)
    if R <= 0:
        raise InputError("radius must be positive")
    four_r2 = 4 * R * R
    exact = _all_exact(lat.entries)

    def compute(num):
        b11, b12, b21, b22 = (num.real(e) for e in lat.entries)
        u, v = _gauss_reduce((b11, b21), (b12, b22))
        return _shortest_decision(u, v, four_r2)

    try:
        return run_certified(compute, exact=exact, start_prec=start_prec,
                             max_prec=max_prec)
    except PrecisionExhaustedError:
        return Decision.UNDECIDED


def _int_range(scalars, pad: int = 1) -> range:
    lo = min(to_bracket(s).lo for s in scalars)
    hi = max(to_bracket(s).hi for s in scalars)
    return range(math.floor(lo) - pad, math.ceil(hi) + pad + 1)


def admissible_flat(lat: Lattice2D, R, *, start_prec: int = 53,
                    max_prec: int = 4096) -> Decision:
    """Certified test: no nonzero horizontal lattice vector shorter than 2R.

    Horizontal segments of length 2R at lattice points can only overlap via
    a horizontal difference vector, so those are the only ones checked.
    """
    R = Fraction(R)
    if R <= 0:
        raise InputError("radius must be positive")
    two_r = 2 * R
    exact = _all_exact(lat.entries)

    def compute(num):
        b11, b12, b21, b22 = (num.real(e) for e in lat.entries)
        det = b11 * b22 - b12 * b21
        # preimages of (+-2R, 0) bound every candidate with |v_x| < 2R, v_y = 0
        xs = (num.real(-two_r), num.real(two_r))
        i_range = _int_range([(b22 / det) * x for x in xs])
        j_range = _int_range([(-b21 / det) * x for x in xs])
        if len(i_range) * len(j_range) > 100_000:
            raise Undecided("candidate box too large")
        for i in i_range:
            for j in j_range:
                if i == 0 and j == 0:
                    continue
                vy = b21 * i + b22 * j
                if sign(vy) != 0:
                    continue
                vx = b11 * i + b12 * j
                r = tri_lt(abs(vx), two_r)
                if r is True:
                    return Decision.NO
                if r is None:
                    raise Undecided("horizontal vector length vs 2R")
        return Decision.YES

    try:
        return run_certified(compute, exact=exact, start_prec=start_prec,
                             max_prec=max_prec)
    except PrecisionExhaustedError:
        return Decision.UNDECIDED


@dataclass(frozen=True)
class LensConfig:
    """Lattice + radius + obstacle kind, validated for admissibility."""

    lattice: Lattice2D
    radius: Fraction
    kind: str = "flat"

    def __post_init__(self):
        object.__setattr__(self, "radius", Fraction(self.radius))
        if not (0 < self.radius < Fraction(1, 2)):
            raise InputError("radius must lie in (0, 1/2)")
        if self.kind not in ("flat", "circular"):
            raise InputError(f"kind must be flat or circular, got {self.kind}")
        check = admissible_circular if self.kind == "circular" else admissible_flat
        verdict = check(self.lattice, self.radius)
        if verdict is not Decision.YES:
            raise ConstructionError(
                f"{self.kind} admissibility not certified: {verdict.value}")


_ORIENT = {"up": 1, "down": -1}


@dataclass(frozen=True)
class PlaneState:
    """Planar position with a vertical orientation."""

    x: ExactReal
    y: ExactReal
    orientation: str = "up"

    def __post_init__(self):
        if self.orientation not in _ORIENT:
            raise InputError("orientation must be 'up' or 'down'")


def plane_state(x, y, orientation: str = "up") -> PlaneState:
    return PlaneState(x=_entry(x), y=_entry(y), orientation=orientation)


@dataclass(frozen=True)
class PlaneEvent:
    time: ExactReal
    kind: str                     # obstacle | singularity | end
    x: ExactReal                  # position after the event
    y: ExactReal
    orientation: str              # orientation after the event
    center: Optional[tuple] = None   # obstacle centre for hits


@dataclass(frozen=True)
class BandResult:
    """Minimal strip width over a direction grid (float diagnostic)."""

    width: RationalBracket
    direction: float              # strip direction angle in [0, pi)
    resolution: int


@dataclass(frozen=True)
class PlaneStats:
    reflections: int
    events: dict
    displacement: tuple           # (dx, dy) floats, end minus start
    band: Optional[BandResult]


@dataclass(frozen=True)
class PlaneResult:
    state: Optional[PlaneState]   # None when halted at a segment tip
    events: tuple
    halted: Optional[str]
    vertices: tuple               # float polyline vertices incl. jumps
    stats: Optional[PlaneStats] = None


def _store(v) -> ExactReal:
    return v if isinstance(v, Fraction) else to_bracket(v)


def _mid_float(v) -> float:
    if isinstance(v, Fraction):
        return float(v)
    return float(to_bracket(v).mid)


def _inverse_rows(num, lat: Lattice2D):
    b11, b12, b21, b22 = (num.real(e) for e in lat.entries)
    det = b11 * b22 - b12 * b21
    inv = ((b22 / det, -b12 / det), (-b21 / det, b11 / det))
    return inv, (b11, b12, b21, b22)


def _next_hit(lat_entries, inv_rows, px, py, o: int, R: Fraction, rem, row):
    """Earliest obstacle hit on the vertical ray within distance rem.

    Returns (dist, cx, cy, tip, (i, j)) or None.  Expanding distance
    windows; every candidate is certified individually, so the enlarged
    integer boxes only cost time, never correctness.  When the ray starts
    on a known obstacle row, distances are computed from integer index
    differences so that same-row candidates give an exact zero instead of
    an interval straddling it.
    """
    b11, b12, b21, b22 = lat_entries
    (i11, i12), (i21, i22) = inv_rows
    x_lo, x_hi = px - R, px + R
    covered = Fraction(0)
    window = Fraction(4)
    zero = Fraction(0)
    while True:
        if le(rem, covered):
            return None
        end = covered + window
        y_a = py + o * covered
        y_b = py + o * end
        corners_i = []
        corners_j = []
        for X in (x_lo, x_hi):
            for Y in (y_a, y_b):
                corners_i.append(i11 * X + i12 * Y)
                corners_j.append(i21 * X + i22 * Y)
        i_range = _int_range(corners_i)
        j_range = _int_range(corners_j)
        if len(i_range) * len(j_range) > 200_000:
            raise InputError("obstacle search window too large")
        best = None
        for i in i_range:
            for j in j_range:
                if row is not None:
                    dy = b21 * (i - row[0]) + b22 * (j - row[1])
                else:
                    cy = b21 * i + b22 * j
                    dy = cy - py
                dist = dy * o
                if not (lt(zero, dist) and le(dist, end) and le(dist, rem)):
                    continue
                cy = b21 * i + b22 * j
                cx = b11 * i + b12 * j
                au = abs(cx - px)
                r = tri_lt(au, R)
                if r is True:
                    tip = False
                elif r is False:
                    if le(au, R):        # certified au == R
                        tip = True
                    else:
                        continue
                else:
                    raise Undecided("hit abscissa vs radius")
                cand = (dist, cx, cy, tip, (i, j))
                if best is None:
                    best = cand
                elif tri_lt(cand[0], best[0]) is True:
                    best = cand
                elif tri_lt(best[0], cand[0]) is True:
                    pass
                elif tip and best[3]:
                    pass                 # shared tip point, same event
                else:
                    raise Undecided("tied obstacle hits")
        if best is not None:
            return best
        covered = end
        if window < 4096:
            window = window * 2


def simulate_plane(cfg: LensConfig, start: PlaneState, duration, *,
                   collect_events: bool = True, band_resolution: int = 3600,
                   start_prec: int = 53, max_prec: int = 4096) -> PlaneResult:
    """Run the vertical flow for the given duration (unit speed).

    Returns events (obstacle reflections; a terminal singularity on a tip
    hit), the final state, the polyline vertices, and displacement/band
    statistics.
    """
    duration = Fraction(duration)
    if duration < 0:
        raise InputError("duration must be a nonnegative rational")
    R = cfg.radius
    exact = _all_exact(cfg.lattice.entries) and _all_exact((start.x, start.y))

    def compute(num):
        inv_rows, lat_entries = _inverse_rows(num, cfg.lattice)
        px = num.real(start.x)
        py = num.real(start.y)
        o = _ORIENT[start.orientation]
        T = num.real(duration)
        t_cur = num.real(Fraction(0))
        events = []
        counts: dict = {}
        reflections = 0
        verts = [(_mid_float(px), _mid_float(py))]
        halted = None
        state = None

        def note(ev):
            counts[ev.kind] = counts.get(ev.kind, 0) + 1
            if collect_events:
                events.append(ev)

        budget = 10_000_000
        row = None
        while True:
            budget -= 1
            if budget < 0:
                raise InputError("event budget exceeded")
            rem = T - t_cur
            hit = None
            if lt(Fraction(0), rem):
                hit = _next_hit(lat_entries, inv_rows, px, py, o, R, rem, row)
            if hit is None:
                fy = py + o * rem
                verts.append((_mid_float(px), _mid_float(fy)))
                orient = "up" if o > 0 else "down"
                note(PlaneEvent(time=duration, kind="end", x=_store(px),
                                y=_store(fy), orientation=orient))
                state = PlaneState(x=_store(px), y=_store(fy),
                                   orientation=orient)
                break
            dist, cx, cy, tip, row = hit
            t_cur = t_cur + dist
            verts.append((_mid_float(px), _mid_float(cy)))
            if tip:
                orient = "up" if o > 0 else "down"
                note(PlaneEvent(time=_store(t_cur), kind="singularity",
                                x=_store(px), y=_store(cy), orientation=orient,
                                center=(_store(cx), _store(cy))))
                halted = "singularity"
                break
            px = 2 * cx - px
            o = -o
            reflections += 1
            verts.append((_mid_float(px), _mid_float(cy)))
            orient = "up" if o > 0 else "down"
            note(PlaneEvent(time=_store(t_cur), kind="obstacle",
                            x=_store(px), y=_store(cy), orientation=orient,
                            center=(_store(cx), _store(cy))))
            py = cy

        band = None
        if band_resolution:
            band = band_width(verts, band_resolution)
        dx = verts[-1][0] - verts[0][0]
        dy = verts[-1][1] - verts[0][1]
        stats = PlaneStats(reflections=reflections, events=counts,
                           displacement=(dx, dy), band=band)
        return PlaneResult(state=state, events=tuple(events), halted=halted,
                           vertices=tuple(verts), stats=stats)

    return run_certified(compute, exact=exact, start_prec=start_prec,
                         max_prec=max_prec)


def _hull(points: np.ndarray) -> np.ndarray:
    """Monotone-chain convex hull of an (n, 2) float array."""
    pts = np.unique(points, axis=0)
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                ox, oy = out[-2]
                ax, ay = out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0:
                    out.pop()
                else:
                    break
            out.append((p[0], p[1]))
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def band_width(trajectory, resolution: int = 3600) -> BandResult:
    """Minimal width over a direction grid of a strip containing the path.

    trajectory is a PlaneResult or an iterable of (x, y) points.  This is a
    float diagnostic for trapping; the bracket returned is the computed
    point value.
    """
    if isinstance(trajectory, PlaneResult):
        pts = trajectory.vertices
    else:
        pts = [(float(x), float(y)) for x, y in trajectory]
    if not len(pts):
        raise InputError("empty trajectory")
    if resolution < 1:
        raise InputError("resolution must be positive")
    arr = np.asarray(pts, dtype=float)
    hull = _hull(arr)
    phis = np.arange(resolution) * (math.pi / resolution)
    normals = np.stack([-np.sin(phis), np.cos(phis)], axis=1)
    # snap the axis directions exact so axis-aligned paths report width 0
    normals[np.abs(normals) < 1e-14] = 0.0
    proj = normals @ hull.T
    widths = proj.max(axis=1) - proj.min(axis=1)
    k = int(widths.argmin())
    w = Fraction(float(widths[k]))
    return BandResult(width=RationalBracket(w, w),
                      direction=float(phis[k]), resolution=resolution)


# ---------------------------------------------------------------------------
# Exceptional-lattice constructor


def _scale_square(R: Fraction, s: int, q: int, theta) -> RationalBracket:
    """Square of the expansion factor: ((2qR/s)^2) * (1 + slope^2)."""
    coef = Fraction(2 * q) * Fraction(R) / s
    w2 = br_add(1, br_mul(theta, theta))
    return br_mul(coef * coef, w2)


def build_lattice(R, s: int, q: int, theta, tau, *,
                  epsilon=Fraction(1, 10), prec: int = 256):
    """Scaled sheared rotation of the square lattice whose obstacle picture
    realizes the (s, q) slit surface flowed in the direction of slope theta.

    Returns (Lattice2D, t_star bracket) where t_star is the log of the
    expansion factor; requires theta <= 1/(4q) (which caps t_star by the
    admissibility budget), |tau| < epsilon, certified |t_star| < epsilon,
    and a certified circular-admissibility pass on the result.
    """
    R = Fraction(R)
    if not (0 < R < Fraction(1, 2)):
        raise InputError("radius must lie in (0, 1/2)")
    validate_slit_params(0, s, q)
    if s < 0:
        raise InputError("s must be positive")
    tau = Fraction(tau)
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    if abs(tau) >= epsilon:
        raise InputError(f"|tau| must be below epsilon={epsilon}")
    theta = as_bracket(theta)
    if theta.lo <= 0:
        raise InputError("direction slope enclosure must be positive")
    if theta.hi > Fraction(1, 4 * q):
        raise ConstructionError(
            "direction slope exceeds 1/(4q): the admissibility bound on the "
            "normalization time is not certified")

    # The basis is realized at the exact rational midpoint of the slope
    # enclosure: every entry is a rational function of the slope, so exact
    # arithmetic gives covolume 1 identically (interval entries would
    # decorrelate the determinant products and lose the certification).
    # The normalization-time bound below still covers the full enclosure.
    w = theta.mid
    coef = Fraction(2 * q) * R / s            # R / (s/2q)
    den = coef * (1 + w * w)
    b11 = coef * w
    b12 = -coef
    b21 = (1 + tau * w) / den
    b22 = (w - tau) / den
    lat = Lattice2D(basis=((b11, b12), (b21, b22)))

    scale2 = _scale_square(R, s, q, theta)

    def compute(num):
        t_star = num.real(scale2).sqrt().log()
        if not lt(abs(t_star), num.real(epsilon)):
            raise ConstructionError(
                f"normalization time not certified below epsilon={epsilon}")
        return to_bracket(t_star)

    t_star = run_certified(compute, exact=False, start_prec=max(prec, 256),
                           max_prec=4096)
    verdict = admissible_circular(lat, R)
    if verdict is not Decision.YES:
        raise ConstructionError(
            f"constructed lattice failed circular admissibility: {verdict.value}")
    return lat, t_star


# ---------------------------------------------------------------------------
# Serialization

PLANE_CSV_HEADER = ("t", "x", "y", "orientation", "event")


def plane_event_row(ev: PlaneEvent) -> Optional[tuple]:
    """CSV cells for an event; None for "end" bookkeeping rows."""
    if ev.kind == "end":
        return None
    return (format_exact(ev.time), format_exact(ev.x), format_exact(ev.y),
            ev.orientation, ev.kind)


def write_plane_csv(fileobj, events: Iterable[PlaneEvent]) -> None:
    w = csv.writer(fileobj)
    w.writerow(PLANE_CSV_HEADER)
    for ev in events:
        row = plane_event_row(ev)
        if row is not None:
            w.writerow(row)


def _bracket_pair(v) -> list:
    b = as_bracket(v)
    return [format_rational(b.lo), format_rational(b.hi)]


def lattice_json(lat: Lattice2D, R=None, t_star=None) -> dict:
    b11, b12, b21, b22 = lat.entries
    out = {
        "basis": [[_mid_float(b11), _mid_float(b12)],
                  [_mid_float(b21), _mid_float(b22)]],
        "basis_exact": [[_bracket_pair(b11), _bracket_pair(b12)],
                        [_bracket_pair(b21), _bracket_pair(b22)]],
    }
    if R is not None:
        out["R"] = format_rational(Fraction(R))
    if t_star is not None:
        t = as_bracket(t_star)
        out["t_star"] = [float(t.lo), float(t.hi)]
        out["t_star_exact"] = _bracket_pair(t)
    return out


def dump_lattice_json(fileobj, lat: Lattice2D, R=None, t_star=None) -> None:
    json.dump(lattice_json(lat, R, t_star), fileobj, indent=2)
    fileobj.write("\n")
