"""Request/response schemas for the HTTP service.

Rationals travel as strings ("p/q", plain integers, or decimal literals)
so that exact values survive the wire; floats appear only in convenience
mirrors next to their exact counterparts.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

Rational = str


class BracketOut(BaseModel):
    lo: float
    hi: float
    exact: list[str]          # [lo, hi] as exact rational strings


class DirectionRequest(BaseModel):
    r: int
    s: int
    q: int
    n_seq: Optional[list[int]] = None    # default: 8q for every block
    blocks: int = Field(default=1, ge=0)
    precision: int = Field(default=128, ge=64)


class DirectionResponse(BaseModel):
    status: str
    a: int
    d: int
    cf: list[int]
    theta: Optional[BracketOut] = None   # None when blocks == 0


class VerifyWordRequest(BaseModel):
    r: int
    s: int
    q: int
    m: int = Field(default=1, ge=1)


class VerifyWordResponse(BaseModel):
    status: str               # ok when both checks pass, failed otherwise
    passed: bool
    fixed_point: bool
    action_trivial: bool
    n: int
    a: int
    d: int
    word_length: int
    point: list[str]
    action: list[list[int]]


class SlitSpec(BaseModel):
    r: int
    s: int
    q: int


class DirectionSpec(BaseModel):
    quotients: Optional[list[int]] = None
    vector: Optional[list[Rational]] = None   # (dx, dy)

    @model_validator(mode="after")
    def _one_of(self):
        if (self.quotients is None) == (self.vector is None):
            raise ValueError("give exactly one of quotients or vector")
        if self.vector is not None and len(self.vector) != 2:
            raise ValueError("vector must have two components")
        return self


class CoverStartModel(BaseModel):
    x: Rational = "1/5"
    y: Rational = "1/7"
    square: int = Field(default=1, ge=1, le=2)
    n1: int = 0
    n2: int = 0


class CoverSimRequest(BaseModel):
    z: Optional[list[Rational]] = None   # slit endpoint in the open square
    slit: Optional[SlitSpec] = None      # or its (r, s, q) parameters
    direction: DirectionSpec
    start: CoverStartModel = CoverStartModel()
    duration: Rational
    sample_dt: Optional[Rational] = None
    include_events: bool = False
    precision: int = Field(default=128, ge=64)

    @model_validator(mode="after")
    def _one_of(self):
        if (self.z is None) == (self.slit is None):
            raise ValueError("give exactly one of z or slit")
        if self.z is not None and len(self.z) != 2:
            raise ValueError("z must have two coordinates")
        return self


class CoverStateModel(BaseModel):
    square: int
    x: str
    y: str
    n1: int
    n2: int


class CoverStatsModel(BaseModel):
    cells_visited: int
    deck_min: list[int]
    deck_max: list[int]
    distinct_n1: int
    distinct_n2: int
    events: dict[str, int]
    samples: list[list[str]]  # (time, n1, n2) rows


class CoverSimResponse(BaseModel):
    status: str
    halted: Optional[str]
    final: Optional[CoverStateModel]
    stats: CoverStatsModel
    header: list[str]
    events: Optional[list[list[str]]] = None   # rows matching header


class BuildSpec(BaseModel):
    radius: Rational
    s: int
    q: int
    quotients: Optional[list[int]] = None
    theta: Optional[list[Rational]] = None     # explicit [lo, hi]
    tau: Rational = "0"
    epsilon: Rational = "1/10"
    precision: int = Field(default=256, ge=64)

    @model_validator(mode="after")
    def _one_of(self):
        if (self.quotients is None) == (self.theta is None):
            raise ValueError("give exactly one of quotients or theta")
        if self.theta is not None and len(self.theta) != 2:
            raise ValueError("theta must be [lo, hi]")
        return self


class LatticeSpec(BaseModel):
    square: bool = False
    rotation: Optional[Rational] = None        # angle in radians
    basis: Optional[list[list[Rational]]] = None
    build: Optional[BuildSpec] = None

    @model_validator(mode="after")
    def _one_of(self):
        chosen = sum((self.square, self.rotation is not None,
                      self.basis is not None, self.build is not None))
        if chosen != 1:
            raise ValueError(
                "give exactly one of square, rotation, basis, build")
        if self.basis is not None and (
                len(self.basis) != 2 or any(len(r) != 2 for r in self.basis)):
            raise ValueError("basis must be a 2x2 array")
        return self


class PlaneStartModel(BaseModel):
    x: Rational = "0"
    y: Rational = "0"
    orientation: Literal["up", "down"] = "up"


class PlaneSimRequest(BaseModel):
    lattice: LatticeSpec
    radius: Optional[Rational] = None    # defaults to build radius
    kind: Literal["flat", "circular"] = "flat"
    start: PlaneStartModel = PlaneStartModel()
    duration: Rational
    band_resolution: int = Field(default=3600, ge=0)
    include_events: bool = False
    precision: int = Field(default=128, ge=64)


class BandModel(BaseModel):
    width: list[float]        # [lo, hi]
    width_exact: list[str]
    direction: float
    resolution: int


class PlaneStatsModel(BaseModel):
    reflections: int
    events: dict[str, int]
    displacement: list[float]
    band: Optional[BandModel]


class PlaneStateModel(BaseModel):
    x: str
    y: str
    orientation: str


class PlaneSimResponse(BaseModel):
    status: str
    halted: Optional[str]
    final: Optional[PlaneStateModel]
    stats: PlaneStatsModel
    header: list[str]
    events: Optional[list[list[str]]] = None
    lattice: Optional[dict] = None       # present when built server-side


class HausdorffRequest(BaseModel):
    a_block: list[int]
    b_block: list[int]
    d: int = Field(default=1, ge=1)      # middle-quotient stride
    c: int = Field(default=0, ge=0)      # middle-quotient offset
    target: Rational = "1/2"
    tol: Rational = "1/1000000"
    u_max: int = Field(default=10 ** 6, ge=1)


class HausdorffResponse(BaseModel):
    status: str               # ok: witness found; failed: certified out of reach
    target: str
    u: Optional[int] = None
    s: Optional[BracketOut] = None
    message: Optional[str] = None
    certificate: Optional[BracketOut] = None


class LatticeRequest(BaseModel):
    build: BuildSpec


class LatticeResponse(BaseModel):
    status: str
    lattice: dict


class HealthResponse(BaseModel):
    status: str
    version: str
