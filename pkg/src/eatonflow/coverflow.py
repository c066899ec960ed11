"""Event-driven linear flow on the double cover of a slit two-torus.

The phase space is two copies (squares 1 and 2) of the unit torus
[-1/2, 1/2)^2 glued along the open segment from -z to z.  A trajectory moves
in a straight line; its torus position is independent of the gluing, so the
engine tracks the straight line in unwrapped coordinates and computes every
event in closed form from the initial data.  Event kinds:

* edge_x / edge_y: the line leaves the current unit cell.  Crossing the
  section x = -1/2 (mod 1) adds the sign of dx to the first deck coordinate
  in square 1 and subtracts it in square 2; crossings of y = -1/2 (mod 1)
  act on the second coordinate the same way.  This is the cocycle recording
  intersection numbers against the anti-invariant covering classes.
* slit: the line meets the open slit copy inside the current cell; the
  square toggles, position and deck are unchanged.
* singularity: the line hits a slit endpoint (a cone point of the glued
  surface); the flow is not defined past it, so the run halts and reports
  everything up to the hit.
* sample / end: bookkeeping rows (deck snapshot on a uniform time grid,
  final state).

Arithmetic is exact (Fraction) whenever the slit, direction, start, and
duration are all point rationals; otherwise certified intervals with
automatic precision escalation.  Time is measured in units of the supplied
direction vector, so rational data stays rational at every event.

Cell convention is half-open, [m - 1/2, m + 1/2) on each axis.  A crossing
of a right or top edge at exactly the final time still fires; a crossing of
a left or bottom edge at exactly the final time does not (the point lands on
the section but stays in its cell).  This makes flowing t1 + t2 agree with
flowing t1 then t2 event for event.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

from .errors import InputError, SingularPointError
from .homology import HALF, Point
from .intervals import (RationalBracket, le, lt, run_certified, sign,
                        to_bracket, tri_lt)

ExactReal = Union[Fraction, RationalBracket]

NEG_HALF = Fraction(-1, 2)
ONE = Fraction(1)


def _as_exact(x) -> ExactReal:
    if isinstance(x, RationalBracket):
        return x.lo if x.lo == x.hi else x
    return Fraction(x)


def _is_point(x) -> bool:
    return isinstance(x, Fraction)


@dataclass(frozen=True)
class SlitSurface:
    """Two unit tori glued along the open segment from -z to z, z interior."""

    z: Point

    def __post_init__(self):
        if not (abs(self.z.x) < HALF and abs(self.z.y) < HALF):
            raise InputError(f"slit endpoint {self.z} must be interior")


def make_surface(z: Point) -> SlitSurface:
    return SlitSurface(z)


@dataclass(frozen=True)
class CoverState:
    """Square index, torus position, and integer deck coordinates."""

    square: int
    x: ExactReal
    y: ExactReal
    deck: tuple = (0, 0)

    def __post_init__(self):
        if self.square not in (1, 2):
            raise InputError(f"square must be 1 or 2, got {self.square}")
        n1, n2 = self.deck
        if not (isinstance(n1, int) and isinstance(n2, int)):
            raise InputError("deck coordinates must be integers")


def _check_domain(v: ExactReal, name: str) -> ExactReal:
    lo = v.lo if isinstance(v, RationalBracket) else v
    hi = v.hi if isinstance(v, RationalBracket) else v
    if not (-HALF <= lo and hi < HALF):
        raise InputError(f"{name} must lie in [-1/2, 1/2), got {v}")
    return v


def start_state(x, y, square: int = 1, deck=(0, 0)) -> CoverState:
    return CoverState(square=square,
                      x=_check_domain(_as_exact(x), "x"),
                      y=_check_domain(_as_exact(y), "y"),
                      deck=(int(deck[0]), int(deck[1])))


@dataclass(frozen=True)
class FlowEvent:
    time: ExactReal
    kind: str              # edge_x | edge_y | slit | sample | end | singularity
    square_before: int
    square_after: int
    deck_delta: tuple
    x: ExactReal
    y: ExactReal
    deck: tuple            # deck after the event


@dataclass(frozen=True)
class DiffusionStats:
    cells_visited: int
    deck_min: tuple
    deck_max: tuple
    events: dict
    samples: tuple         # (time, n1, n2) rows


@dataclass(frozen=True)
class FlowResult:
    state: Optional[CoverState]   # None when the run halted at a cone point
    events: tuple
    halted: Optional[str]
    stats: Optional[DiffusionStats] = None


class _EndpointHit(Exception):
    def __init__(self, t, x, y, square):
        self.t, self.x, self.y, self.square = t, x, y, square


def _final(v) -> ExactReal:
    return v if isinstance(v, Fraction) else to_bracket(v)


def _run(num, surface: SlitSurface, state: CoverState, d: tuple,
         duration, sink: Callable) -> CoverState:
    """One pass of the engine at a fixed numerics level."""
    zx_zero = surface.z.x == 0
    zx, zy = num.real(surface.z.x), num.real(surface.z.y)
    dx, dy = num.real(d[0]), num.real(d[1])
    x0, y0 = num.real(state.x), num.real(state.y)
    T = num.real(duration)
    sdx, sdy = sign(dx), sign(dy)
    if sdx == 0 and sdy == 0:
        raise InputError("direction must be nonzero")
    square = state.square
    n1, n2 = state.deck
    m = 0            # x cell index of the unwrapped line
    cn = 0           # y cell index
    t_cur = num.real(Fraction(0))
    slit_checked = False
    cross = dx * zy - dy * zx
    cross_sign = sign(cross)

    def emit(kind, t, sq_before, sq_after, delta, x, y):
        sink(FlowEvent(time=_final(t), kind=kind, square_before=sq_before,
                       square_after=sq_after, deck_delta=delta,
                       x=_final(x), y=_final(y), deck=(n1, n2)))

    budget = 200_000_000
    while True:
        budget -= 1
        if budget < 0:
            raise InputError("event budget exceeded")

        tx = ((m + (HALF if sdx > 0 else -HALF)) - x0) / dx if sdx else None
        ty = ((cn + (HALF if sdy > 0 else -HALF)) - y0) / dy if sdy else None
        if tx is None:
            axis, t_edge = "y", ty
        elif ty is None:
            axis, t_edge = "x", tx
        else:
            r = tri_lt(ty, tx)
            if r is None:
                lt(ty, tx)   # raises Undecided, escalating precision
            # ties resolve sequentially: the second axis fires next pass
            axis, t_edge = ("y", ty) if r else ("x", tx)

        if not slit_checked:
            if cross_sign != 0:
                t_star = ((m - x0) * zy - (cn - y0) * zx) / cross
                if lt(t_cur, t_star) and lt(t_star, t_edge) and le(t_star, T):
                    if zx_zero:
                        u = (y0 + dy * t_star - cn) / zy
                    else:
                        u = (x0 + dx * t_star - m) / zx
                    au = abs(u)
                    r = tri_lt(au, ONE)
                    if r is None:
                        lt(au, ONE)
                    if r:
                        sq_before = square
                        square = 3 - square
                        emit("slit", t_star, sq_before, square, (0, 0),
                             x0 + dx * t_star - m, y0 + dy * t_star - cn)
                        t_cur = t_star
                        slit_checked = True
                        continue
                    if le(au, ONE):       # certified au == 1: cone point
                        raise _EndpointHit(t_star, x0 + dx * t_star - m,
                                           y0 + dy * t_star - cn, square)
            else:
                # direction parallel to the slit: either the segment is
                # entered through an endpoint or nothing happens at all
                offset = (x0 - m) * zy - (y0 - cn) * zx
                if sign(offset) == 0:
                    if zx_zero:
                        u_now = (y0 + dy * t_cur - cn) / zy
                        du = dy / zy
                    else:
                        u_now = (x0 + dx * t_cur - m) / zx
                        du = dx / zx
                    if lt(abs(u_now), ONE):
                        raise _EndpointHit(t_cur, x0 + dx * t_cur - m,
                                           y0 + dy * t_cur - cn, square)
                    target = -ONE if sign(du) > 0 else ONE
                    t_hit = t_cur + (target - u_now) / du
                    window = t_edge if lt(t_edge, T) else T
                    if lt(t_cur, t_hit) and le(t_hit, window):
                        raise _EndpointHit(t_hit, x0 + dx * t_hit - m,
                                           y0 + dy * t_hit - cn, square)
            slit_checked = True

        if lt(T, t_edge):
            break
        if axis == "x":
            fires = le(t_edge, T) if sdx > 0 else lt(t_edge, T)
        else:
            fires = le(t_edge, T) if sdy > 0 else lt(t_edge, T)
        if not fires:
            # a tied crossing on the other axis may still fire at this time
            if axis == "x" and ty is not None and le(ty, tx):
                fires = le(ty, T) if sdy > 0 else lt(ty, T)
                axis, t_edge = "y", ty
            elif axis == "y" and tx is not None and le(tx, ty):
                fires = le(tx, T) if sdx > 0 else lt(tx, T)
                axis, t_edge = "x", tx
            if not fires:
                break

        if axis == "x":
            dn1 = sdx if square == 1 else -sdx
            n1 += dn1
            m += sdx
            # crossing point wraps to x = -1/2 exactly in either direction
            emit("edge_x", t_edge, square, square, (dn1, 0),
                 NEG_HALF, y0 + dy * t_edge - cn)
        else:
            dn2 = sdy if square == 1 else -sdy
            n2 += dn2
            cn += sdy
            emit("edge_y", t_edge, square, square, (0, dn2),
                 x0 + dx * t_edge - m, NEG_HALF)
        t_cur = t_edge
        slit_checked = False

    fx = x0 + dx * T - m
    fy = y0 + dy * T - cn
    emit("end", T, square, square, (0, 0), fx, fy)
    return CoverState(square=square, x=_final(fx), y=_final(fy), deck=(n1, n2))


def _validate_duration(duration) -> Fraction:
    duration = _as_exact(duration)
    if not isinstance(duration, Fraction) or duration < 0:
        raise InputError("duration must be a nonnegative rational")
    return duration


def _direction_pair(direction) -> tuple:
    dx, dy = direction
    return _as_exact(dx), _as_exact(dy)


def _all_point(surface: SlitSurface, d: tuple, state: CoverState) -> bool:
    return all(_is_point(v) for v in (d[0], d[1], state.x, state.y))


def advance(surface: SlitSurface, state: CoverState, direction, duration, *,
            start_prec: int = 53, max_prec: int = 4096) -> FlowResult:
    """Flow the state for the given duration, collecting every event.

    A cone-point hit halts the run: the result carries the events up to the
    hit, a terminal singularity event, and state None.
    """
    d = _direction_pair(direction)
    duration = _validate_duration(duration)
    exact = _all_point(surface, d, state)

    def compute(num):
        events = []
        try:
            final = _run(num, surface, state, d, duration, events.append)
            return FlowResult(state=final, events=tuple(events), halted=None)
        except _EndpointHit as hit:
            deck = events[-1].deck if events else state.deck
            events.append(FlowEvent(
                time=_final(hit.t), kind="singularity",
                square_before=hit.square, square_after=hit.square,
                deck_delta=(0, 0), x=_final(hit.x), y=_final(hit.y),
                deck=deck))
            return FlowResult(state=None, events=tuple(events),
                              halted="singularity")

    return run_certified(compute, exact=exact, start_prec=start_prec,
                         max_prec=max_prec)


def simulate(surface: SlitSurface, direction, start: CoverState, duration,
             sample_dt=None, *, collect_events: bool = False,
             start_prec: int = 53, max_prec: int = 4096) -> FlowResult:
    """Flow and fold diffusion statistics; optionally keep the event list.

    sample_dt adds (time, n1, n2) deck snapshots on a uniform grid; a
    snapshot landing exactly on an event time reports the deck before that
    event.
    """
    d = _direction_pair(direction)
    duration = _validate_duration(duration)
    step = None
    if sample_dt is not None:
        step = _as_exact(sample_dt)
        if not isinstance(step, Fraction) or step <= 0:
            raise InputError("sample_dt must be a positive rational")
    exact = _all_point(surface, d, start)

    def compute(num):
        cells = {start.deck}
        lo1, lo2 = start.deck
        hi1, hi2 = start.deck
        counts: dict = {}
        samples: list = []
        kept: list = []
        cursor = {"deck": start.deck, "next": step}

        def sink(ev: FlowEvent):
            nonlocal lo1, lo2, hi1, hi2
            while cursor["next"] is not None and le(cursor["next"], ev.time):
                samples.append((cursor["next"],) + cursor["deck"])
                if collect_events:
                    kept.append(FlowEvent(
                        time=cursor["next"], kind="sample",
                        square_before=ev.square_before,
                        square_after=ev.square_before, deck_delta=(0, 0),
                        x=ev.x, y=ev.y, deck=cursor["deck"]))
                nxt = cursor["next"] + step
                cursor["next"] = nxt if nxt <= duration else None
            counts[ev.kind] = counts.get(ev.kind, 0) + 1
            cursor["deck"] = ev.deck
            n1, n2 = ev.deck
            if ev.kind in ("edge_x", "edge_y"):
                cells.add(ev.deck)
                lo1, hi1 = min(lo1, n1), max(hi1, n1)
                lo2, hi2 = min(lo2, n2), max(hi2, n2)
            if collect_events:
                kept.append(ev)

        halted = None
        final = None
        try:
            final = _run(num, surface, start, d, duration, sink)
        except _EndpointHit as hit:
            halted = "singularity"
            sink(FlowEvent(time=_final(hit.t), kind="singularity",
                           square_before=hit.square, square_after=hit.square,
                           deck_delta=(0, 0), x=_final(hit.x),
                           y=_final(hit.y), deck=cursor["deck"]))
        stats = DiffusionStats(
            cells_visited=len(cells),
            deck_min=(lo1, lo2), deck_max=(hi1, hi2),
            events=counts, samples=tuple(samples))
        return FlowResult(state=final, events=tuple(kept), halted=halted,
                          stats=stats)

    return run_certified(compute, exact=exact, start_prec=start_prec,
                         max_prec=max_prec)


def cocycle_additive(surface: SlitSurface, direction, start: CoverState,
                     t1, t2) -> bool:
    """Whether flowing t1 + t2 equals flowing t1 then t2 (exact data only)."""
    t1, t2 = Fraction(t1), Fraction(t2)
    whole = advance(surface, start, direction, t1 + t2)
    first = advance(surface, start, direction, t1)
    if whole.halted or first.halted:
        raise SingularPointError("orbit halts before the comparison time")
    second = advance(surface, first.state, direction, t2)
    if second.halted:
        raise SingularPointError("orbit halts before the comparison time")
    a, b = whole.state, second.state
    return (a.square == b.square and a.deck == b.deck
            and a.x == b.x and a.y == b.y)


COVER_CSV_HEADER = ("t", "square", "x", "y", "n1", "n2", "event")


def format_exact(v, digits: int = 17) -> str:
    """Decimal rendering trimmed to the certified width of the value."""
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else repr(float(v))
    if v.lo == v.hi:
        return format_exact(v.lo)
    width = float(v.width)
    good = max(1, min(digits, -int(math.floor(math.log10(width)))))
    return f"{float(v.mid):.{good}g}"


def event_row(ev: FlowEvent) -> Optional[tuple]:
    """CSV cells for an event; None for "end" bookkeeping rows, so a
    zero-duration run exports a header-only file."""
    if ev.kind == "end":
        return None
    return (format_exact(ev.time), str(ev.square_after), format_exact(ev.x),
            format_exact(ev.y), str(ev.deck[0]), str(ev.deck[1]), ev.kind)


def write_events_csv(fileobj, events: Iterable[FlowEvent]) -> None:
    w = csv.writer(fileobj)
    w.writerow(COVER_CSV_HEADER)
    for ev in events:
        row = event_row(ev)
        if row is not None:
            w.writerow(row)
