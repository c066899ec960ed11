"""Command-line client for the service endpoints.

Every command talks HTTP: to a remote server when --server is given,
otherwise to the service mounted in-process.  Exit codes: 0 success,
1 check-failed, 2 invalid input, 3 precision-undecided.
"""

from __future__ import annotations

import asyncio
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional

import click
import httpx

from .intervals import format_rational, parse_rational

_EXIT = {"ok": 0, "failed": 1, "invalid": 2, "undecided": 3}


def _call(server: Optional[str], method: str, path: str, payload=None):
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            return client.request(method, path, json=payload)

    async def go():
        from .service import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://eatonflow.local",
                                     timeout=600.0) as client:
            return await client.request(method, path, json=payload)

    return asyncio.run(go())


def _write_csv(path: str, header: list, rows: Optional[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows or []:
            w.writerow(row)


def _finish(resp: httpx.Response, out: Optional[str] = None) -> None:
    if resp.status_code == 422:
        click.echo(json.dumps(resp.json(), indent=2))
        sys.exit(2)
    resp.raise_for_status()
    data = resp.json()
    if out and "header" in data:
        _write_csv(out, data["header"], data.get("events"))
        data = {k: v for k, v in data.items() if k != "events"}
        data["csv"] = out
    click.echo(json.dumps(data, indent=2))
    sys.exit(_EXIT.get(data.get("status"), 1))


def _ints(text: str) -> list:
    text = text.strip()
    return [int(t) for t in text.split(",")] if text else []


def _rat_str(text: str) -> str:
    return format_rational(parse_rational(text))


server_option = click.option(
    "--server", default=None, metavar="URL",
    help="Base URL of a running service; default runs it in-process.")
prec_option = click.option(
    "--prec", default=128, show_default=True, metavar="BITS",
    help="Working precision in bits (>= 64).")


@click.group()
def main():
    """Certified slit-cover and lens-lattice dynamics toolkit."""


@main.command()
@click.argument("r", type=int)
@click.argument("s", type=int)
@click.argument("q", type=int)
@click.option("--n-seq", default=None, metavar="N1,N2,...",
              help="Per-block twist exponents (positive multiples of 8q); "
                   "default 8q each.")
@click.option("--blocks", default=1, show_default=True)
@prec_option
@server_option
def direction(r, s, q, n_seq, blocks, prec, server):
    """Quotients and enclosure of the explicitly ergodic direction."""
    payload = {"r": r, "s": s, "q": q, "blocks": blocks, "precision": prec}
    if n_seq is not None:
        payload["n_seq"] = _ints(n_seq)
    _finish(_call(server, "POST", "/direction", payload))


@main.command("verify-word")
@click.argument("r", type=int)
@click.argument("s", type=int)
@click.argument("q", type=int)
@click.option("--m", default=1, show_default=True,
              help="Twist multiplier: the word twists n=8qm times.")
@server_option
def verify_word(r, s, q, m, server):
    """Check the slit-fixing word: fixed point and homology action."""
    _finish(_call(server, "POST", "/verify-word",
                  {"r": r, "s": s, "q": q, "m": m}))


@main.group()
def simulate():
    """Event-driven flow simulators."""


@simulate.command("cover")
@click.option("--slit", default=None, metavar="R,S,Q",
              help="Slit endpoint (r/2q, s/2q) of the double cover.")
@click.option("--z", "z_coords", default=None, metavar="X,Y",
              help="Explicit slit endpoint coordinates (rationals).")
@click.option("--quotients", default=None, metavar="A1,A2,...",
              help="Direction as continued-fraction quotients "
                   "(deepest convergent is flowed).")
@click.option("--vector", default=None, metavar="DX,DY",
              help="Direction as an exact rational vector.")
@click.option("--start", multiple=True, metavar="X,Y",
              help="Start point (repeatable for independent runs).")
@click.option("--square", default=1, show_default=True, type=click.IntRange(1, 2))
@click.option("--time", "time_", default="1", show_default=True,
              metavar="SPAN", help="Horizontal span to flow across "
              "(converted to direction-vector units exactly).")
@click.option("--sample-dt", default=None, metavar="DT",
              help="Deck-vector sampling step, in direction-vector units.")
@click.option("--out", default=None, metavar="PATH", help="CSV output path.")
@click.option("--events/--no-events", "events_", default=None,
              help="Include event rows (default: only when --out is set).")
@click.option("--jobs", default=1, show_default=True,
              help="Parallel independent runs when --start repeats.")
@prec_option
@server_option
def simulate_cover(slit, z_coords, quotients, vector, start, square, time_,
                   sample_dt, out, events_, jobs, prec, server):
    """Straight-line flow on the two-square slit cover."""
    payload: dict = {"precision": prec}
    if slit is not None:
        rr, ss, qq = _ints(slit)
        payload["slit"] = {"r": rr, "s": ss, "q": qq}
    if z_coords is not None:
        payload["z"] = [_rat_str(t) for t in z_coords.split(",")]
    if quotients is not None:
        payload["direction"] = {"quotients": _ints(quotients)}
        from .cf import convergents

        conv = convergents(_ints(quotients))[-1]
        dx, dy = Fraction(conv.q), Fraction(conv.p)
    elif vector is not None:
        parts = [parse_rational(t) for t in vector.split(",")]
        payload["direction"] = {"vector": [format_rational(p) for p in parts]}
        dx, dy = parts
    else:
        raise click.UsageError("give --quotients or --vector")
    span = parse_rational(time_)
    denom = abs(dx) if dx != 0 else abs(dy)
    duration = span / denom
    payload["duration"] = format_rational(duration)
    if sample_dt is not None:
        payload["sample_dt"] = _rat_str(sample_dt)
    include = events_ if events_ is not None else out is not None
    payload["include_events"] = include

    def run_one(start_text, out_path):
        p = dict(payload)
        if start_text is not None:
            x, y = (format_rational(parse_rational(t))
                    for t in start_text.split(","))
            p["start"] = {"x": x, "y": y, "square": square}
        return _call(server, "POST", "/simulate/cover", p), out_path

    starts = list(start) or [None]
    if len(starts) == 1:
        _finish(*run_one(starts[0], out))
    outs = [f"{out}.{i}" if out else None for i in range(len(starts))]
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda sp: run_one(*sp), zip(starts, outs)))
    worst = 0
    for resp, out_path in results:
        code = 2 if resp.status_code == 422 else None
        if code is None:
            resp.raise_for_status()
            data = resp.json()
            if out_path and "header" in data:
                _write_csv(out_path, data["header"], data.get("events"))
                data = {k: v for k, v in data.items() if k != "events"}
                data["csv"] = out_path
            click.echo(json.dumps(data, indent=2))
            code = _EXIT.get(data.get("status"), 1)
        else:
            click.echo(json.dumps(resp.json(), indent=2))
        worst = max(worst, code)
    sys.exit(worst)


@simulate.command("plane")
@click.option("--lattice", "lattice_", default="square", show_default=True,
              metavar="SPEC", help="square | rot:ANGLE | basis:A,B;C,D | build")
@click.option("--radius", default=None, metavar="P/Q")
@click.option("--kind", default="flat", show_default=True,
              type=click.Choice(["flat", "circular"]))
@click.option("--s", "s_", default=1, show_default=True,
              help="Slit numerator for --lattice build.")
@click.option("--q", "q_", default=2, show_default=True,
              help="Slit denominator parameter for --lattice build.")
@click.option("--quotients", default=None, metavar="A1,A2,...",
              help="Direction quotients for --lattice build.")
@click.option("--theta", default=None, metavar="LO,HI",
              help="Explicit slope enclosure for --lattice build.")
@click.option("--tau", default="0", show_default=True,
              help="Shear parameter for --lattice build.")
@click.option("--eps", default="1/10", show_default=True,
              help="Normalization-time budget for --lattice build.")
@click.option("--start", multiple=True, metavar="X,Y")
@click.option("--orientation", default="up", show_default=True,
              type=click.Choice(["up", "down"]))
@click.option("--time", "time_", default="1", show_default=True,
              metavar="T", help="Unit-speed flow time (rational).")
@click.option("--band-res", default=3600, show_default=True)
@click.option("--out", default=None, metavar="PATH", help="CSV output path.")
@click.option("--events/--no-events", "events_", default=None)
@click.option("--jobs", default=1, show_default=True)
@prec_option
@server_option
def simulate_plane_cmd(lattice_, radius, kind, s_, q_, quotients, theta, tau,
                       eps, start, orientation, time_, band_res, out, events_,
                       jobs, prec, server):
    """Vertical flow through a lattice of flat retro-reflectors."""
    spec: dict
    if lattice_ == "square":
        spec = {"square": True}
    elif lattice_.startswith("rot:"):
        spec = {"rotation": _rat_str(lattice_[4:])}
    elif lattice_.startswith("basis:"):
        rows = lattice_[6:].split(";")
        spec = {"basis": [[_rat_str(t) for t in row.split(",")]
                          for row in rows]}
    elif lattice_ == "build":
        if radius is None:
            raise click.UsageError("--lattice build requires --radius")
        build: dict = {"radius": _rat_str(radius), "s": s_, "q": q_,
                       "tau": _rat_str(tau), "epsilon": _rat_str(eps),
                       "precision": max(prec, 256)}
        if quotients is not None:
            build["quotients"] = _ints(quotients)
        elif theta is not None:
            build["theta"] = [_rat_str(t) for t in theta.split(",")]
        else:
            raise click.UsageError("--lattice build requires --quotients or --theta")
        spec = {"build": build}
    else:
        raise click.UsageError(f"unknown lattice spec: {lattice_}")
    payload: dict = {"lattice": spec, "kind": kind,
                     "duration": _rat_str(time_),
                     "band_resolution": band_res, "precision": prec}
    if radius is not None:
        payload["radius"] = _rat_str(radius)
    include = events_ if events_ is not None else out is not None
    payload["include_events"] = include

    def run_one(start_text, out_path):
        p = dict(payload)
        if start_text is not None:
            x, y = (format_rational(parse_rational(t))
                    for t in start_text.split(","))
            p["start"] = {"x": x, "y": y, "orientation": orientation}
        return _call(server, "POST", "/simulate/plane", p), out_path

    starts = list(start) or [None]
    if len(starts) == 1:
        _finish(*run_one(starts[0], out))
    outs = [f"{out}.{i}" if out else None for i in range(len(starts))]
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda sp: run_one(*sp), zip(starts, outs)))
    worst = 0
    for resp, out_path in results:
        if resp.status_code == 422:
            click.echo(json.dumps(resp.json(), indent=2))
            worst = max(worst, 2)
            continue
        resp.raise_for_status()
        data = resp.json()
        if out_path and "header" in data:
            _write_csv(out_path, data["header"], data.get("events"))
            data = {k: v for k, v in data.items() if k != "events"}
            data["csv"] = out_path
        click.echo(json.dumps(data, indent=2))
        worst = max(worst, _EXIT.get(data.get("status"), 1))
    sys.exit(worst)


@main.command()
@click.option("--a-block", required=True, metavar="A1,A2,...",
              help="Leading fixed quotient block.")
@click.option("--b-block", required=True, metavar="B1,B2,...",
              help="Trailing fixed quotient block.")
@click.option("--d", default=1, show_default=True,
              help="Stride of the middle-quotient progression.")
@click.option("--c", default=0, show_default=True,
              help="Offset of the middle-quotient progression.")
@click.option("--target", default="1/2", show_default=True)
@click.option("--tol", default="1/1000000", show_default=True)
@click.option("--u-max", default=10 ** 6, show_default=True)
@server_option
def hausdorff(a_block, b_block, d, c, target, tol, u_max, server):
    """Search for a branch count certifying the pressure root above target."""
    _finish(_call(server, "POST", "/hausdorff", {
        "a_block": _ints(a_block), "b_block": _ints(b_block), "d": d, "c": c,
        "target": _rat_str(target), "tol": _rat_str(tol), "u_max": u_max}))


@main.command()
@click.option("--radius", required=True, metavar="P/Q")
@click.option("--s", "s_", default=1, show_default=True)
@click.option("--q", "q_", default=2, show_default=True)
@click.option("--quotients", default=None, metavar="A1,A2,...")
@click.option("--theta", default=None, metavar="LO,HI")
@click.option("--tau", default="0", show_default=True)
@click.option("--eps", default="1/10", show_default=True)
@click.option("--out", default=None, metavar="PATH", help="JSON output path.")
@prec_option
@server_option
def lattice(radius, s_, q_, quotients, theta, tau, eps, out, prec, server):
    """Build the scaled sheared-rotation lattice and certify it."""
    build: dict = {"radius": _rat_str(radius), "s": s_, "q": q_,
                   "tau": _rat_str(tau), "epsilon": _rat_str(eps),
                   "precision": max(prec, 256)}
    if quotients is not None:
        build["quotients"] = _ints(quotients)
    elif theta is not None:
        build["theta"] = [_rat_str(t) for t in theta.split(",")]
    else:
        raise click.UsageError("give --quotients or --theta")
    resp = _call(server, "POST", "/lattice", {"build": build})
    if resp.status_code == 422:
        click.echo(json.dumps(resp.json(), indent=2))
        sys.exit(2)
    resp.raise_for_status()
    data = resp.json()
    if out and data.get("status") == "ok":
        with open(out, "w") as fh:
            json.dump(data["lattice"], fh, indent=2)
            fh.write("\n")
        data["json"] = out
    click.echo(json.dumps(data, indent=2))
    sys.exit(_EXIT.get(data.get("status"), 1))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
