"""HTTP service exposing the core operations.

Semantic outcomes ride in the `status` field of 200 responses: "ok",
"failed" (a check or construction did not pass), "undecided" (interval
precision exhausted).  Invalid inputs return 422.  Exact rationals travel
as strings.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..cf import (convergents, direction_enclosure, ergodic_quotients,
                  solve_block_pair)
from ..coverflow import (COVER_CSV_HEADER, event_row, format_exact,
                         make_surface, simulate, start_state)
from ..errors import (ConstructionError, EatonflowError, InfeasibleError,
                      InputError, PrecisionExhaustedError, SingularPointError,
                      TargetUnreachableError, Undecided)
from ..hausdorff import IFSFamily, find_branch_count
from ..homology import Point, slit_point, verify_fixing_word
from ..intervals import RationalBracket, format_rational, parse_rational
from ..plane import (PLANE_CSV_HEADER, LensConfig, Lattice2D, build_lattice,
                     lattice_json, make_lattice, plane_event_row, plane_state,
                     rotation_lattice, simulate_plane, square_lattice)
from .models import (BandModel, BracketOut, BuildSpec, CoverSimRequest,
                     CoverSimResponse, CoverStateModel, CoverStatsModel,
                     DirectionRequest, DirectionResponse, HausdorffRequest,
                     HausdorffResponse, HealthResponse, LatticeRequest,
                     LatticeResponse, LatticeSpec, PlaneSimRequest,
                     PlaneSimResponse, PlaneStateModel, PlaneStatsModel,
                     VerifyWordRequest, VerifyWordResponse)


def _bracket_out(b: RationalBracket) -> BracketOut:
    return BracketOut(lo=float(b.lo), hi=float(b.hi),
                      exact=[format_rational(b.lo), format_rational(b.hi)])


def _exact_str(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    return format_exact(v)


def _theta_bracket(spec: BuildSpec) -> RationalBracket:
    if spec.quotients is not None:
        return direction_enclosure(spec.quotients, precision=spec.precision)
    lo, hi = (parse_rational(t) for t in spec.theta)
    return RationalBracket(lo, hi)


def _build_from_spec(spec: BuildSpec):
    theta = _theta_bracket(spec)
    return build_lattice(parse_rational(spec.radius), spec.s, spec.q, theta,
                         parse_rational(spec.tau),
                         epsilon=parse_rational(spec.epsilon),
                         prec=spec.precision)


def _lattice_from_spec(spec: LatticeSpec):
    """Returns (lattice, build extras dict or None)."""
    if spec.square:
        return square_lattice(), None
    if spec.rotation is not None:
        return rotation_lattice(parse_rational(spec.rotation)), None
    if spec.basis is not None:
        rows = tuple(tuple(parse_rational(e) for e in row)
                     for row in spec.basis)
        return make_lattice(rows), None
    lat, t_star = _build_from_spec(spec.build)
    extras = lattice_json(lat, parse_rational(spec.build.radius), t_star)
    return lat, extras


def create_app() -> FastAPI:
    app = FastAPI(title="eatonflow", version=__version__)

    @app.exception_handler(InputError)
    @app.exception_handler(InfeasibleError)
    @app.exception_handler(SingularPointError)
    async def _invalid(request: Request, exc: EatonflowError):
        return JSONResponse(status_code=422,
                            content={"status": "invalid", "detail": str(exc)})

    @app.exception_handler(ConstructionError)
    async def _failed(request: Request, exc: ConstructionError):
        return JSONResponse(status_code=200,
                            content={"status": "failed", "message": str(exc)})

    @app.exception_handler(Undecided)
    @app.exception_handler(PrecisionExhaustedError)
    async def _undecided(request: Request, exc: Exception):
        return JSONResponse(status_code=200, content={"status": "undecided",
                                                      "message": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/direction", response_model=DirectionResponse,
              response_model_exclude_none=False)
    def direction(req: DirectionRequest):
        a, d = solve_block_pair(req.r, req.s, req.q)
        if req.blocks == 0:
            return DirectionResponse(status="ok", a=a, d=d, cf=[], theta=None)
        n_seq = req.n_seq if req.n_seq is not None else [8 * req.q] * req.blocks
        cf = ergodic_quotients(req.r, req.s, req.q, n_seq, req.blocks)
        theta = direction_enclosure(cf, precision=req.precision)
        return DirectionResponse(status="ok", a=a, d=d, cf=list(cf),
                                 theta=_bracket_out(theta))

    @app.post("/verify-word", response_model=VerifyWordResponse)
    def verify_word(req: VerifyWordRequest):
        rep = verify_fixing_word(req.r, req.s, req.q, req.m)
        return VerifyWordResponse(
            status="ok" if rep.passed else "failed",
            passed=rep.passed, fixed_point=rep.fixed_point,
            action_trivial=rep.action_trivial, n=rep.n, a=rep.a, d=rep.d,
            word_length=len(rep.word),
            point=[format_rational(rep.point.x), format_rational(rep.point.y)],
            action=[list(row) for row in rep.action.rows()])

    @app.post("/simulate/cover", response_model=CoverSimResponse)
    def simulate_cover(req: CoverSimRequest):
        if req.slit is not None:
            z = slit_point(req.slit.r, req.slit.s, req.slit.q)
        else:
            z = Point(parse_rational(req.z[0]), parse_rational(req.z[1]))
        surface = make_surface(z)
        if req.direction.quotients is not None:
            conv = convergents(req.direction.quotients)[-1]
            d = (Fraction(conv.q), Fraction(conv.p))
        else:
            d = tuple(parse_rational(c) for c in req.direction.vector)
        start = start_state(parse_rational(req.start.x),
                            parse_rational(req.start.y), req.start.square,
                            (req.start.n1, req.start.n2))
        sample_dt = (parse_rational(req.sample_dt)
                     if req.sample_dt is not None else None)
        res = simulate(surface, d, start, parse_rational(req.duration),
                       sample_dt=sample_dt, collect_events=req.include_events)
        st = res.stats
        stats = CoverStatsModel(
            cells_visited=st.cells_visited,
            deck_min=list(st.deck_min), deck_max=list(st.deck_max),
            distinct_n1=st.deck_max[0] - st.deck_min[0] + 1,
            distinct_n2=st.deck_max[1] - st.deck_min[1] + 1,
            events=dict(st.events),
            samples=[[format_exact(t), str(n1), str(n2)]
                     for t, n1, n2 in st.samples])
        final = None
        if res.state is not None:
            final = CoverStateModel(square=res.state.square,
                                    x=_exact_str(res.state.x),
                                    y=_exact_str(res.state.y),
                                    n1=res.state.deck[0],
                                    n2=res.state.deck[1])
        rows = None
        if req.include_events:
            rows = [list(r) for r in map(event_row, res.events)
                    if r is not None]
        return CoverSimResponse(status="ok", halted=res.halted, final=final,
                                stats=stats, header=list(COVER_CSV_HEADER),
                                events=rows)

    @app.post("/simulate/plane", response_model=PlaneSimResponse)
    def simulate_plane_ep(req: PlaneSimRequest):
        lat, extras = _lattice_from_spec(req.lattice)
        if req.radius is not None:
            radius = parse_rational(req.radius)
        elif req.lattice.build is not None:
            radius = parse_rational(req.lattice.build.radius)
        else:
            raise InputError("radius required unless the lattice is built")
        cfg = LensConfig(lattice=lat, radius=radius, kind=req.kind)
        start = plane_state(parse_rational(req.start.x),
                            parse_rational(req.start.y),
                            req.start.orientation)
        res = simulate_plane(cfg, start, parse_rational(req.duration),
                             collect_events=req.include_events,
                             band_resolution=req.band_resolution)
        st = res.stats
        band = None
        if st.band is not None:
            band = BandModel(
                width=[float(st.band.width.lo), float(st.band.width.hi)],
                width_exact=[format_rational(st.band.width.lo),
                             format_rational(st.band.width.hi)],
                direction=st.band.direction, resolution=st.band.resolution)
        stats = PlaneStatsModel(reflections=st.reflections,
                                events=dict(st.events),
                                displacement=list(st.displacement), band=band)
        final = None
        if res.state is not None:
            final = PlaneStateModel(x=_exact_str(res.state.x),
                                    y=_exact_str(res.state.y),
                                    orientation=res.state.orientation)
        rows = None
        if req.include_events:
            rows = [list(r) for r in map(plane_event_row, res.events)
                    if r is not None]
        return PlaneSimResponse(status="ok", halted=res.halted, final=final,
                                stats=stats, header=list(PLANE_CSV_HEADER),
                                events=rows, lattice=extras)

    @app.post("/hausdorff", response_model=HausdorffResponse)
    def hausdorff(req: HausdorffRequest):
        fam = IFSFamily(front=tuple(req.a_block), back=tuple(req.b_block),
                        stride=req.d, offset=req.c)
        target = parse_rational(req.target)
        try:
            w = find_branch_count(fam, target=target,
                                  tol=parse_rational(req.tol),
                                  u_max=req.u_max)
        except TargetUnreachableError as exc:
            cert = exc.certificate
            return HausdorffResponse(
                status="failed", target=format_rational(target),
                message=str(exc),
                certificate=_bracket_out(cert) if cert is not None else None)
        return HausdorffResponse(status="ok", u=w.u,
                                 s=_bracket_out(w.s_bracket),
                                 target=format_rational(w.target))

    @app.post("/lattice", response_model=LatticeResponse)
    def lattice(req: LatticeRequest):
        lat, t_star = _build_from_spec(req.build)
        payload = lattice_json(lat, parse_rational(req.build.radius), t_star)
        return LatticeResponse(status="ok", lattice=payload)

    return app


app = create_app()
