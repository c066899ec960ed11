"""Certified shear-word calculus, slit-cover flows, and lens-lattice
dynamics for explicit ergodic directions on lattices of retro-reflectors."""

from .cf import (Convergent, block_exponents, block_lower_bounds_hold,
                 cf_value, convergents, direction_enclosure,
                 ergodic_quotients, solve_block_pair, validate_quotients,
                 validate_slit_params, word_matrix)
from .coverflow import (COVER_CSV_HEADER, CoverState, DiffusionStats,
                        FlowEvent, FlowResult, SlitSurface, advance,
                        cocycle_additive, format_exact, simulate, start_state,
                        write_events_csv)
from .errors import (ConstructionError, EatonflowError, InfeasibleError,
                     InputError, PrecisionExhaustedError, SingularPointError,
                     TargetUnreachableError, Undecided)
from .hausdorff import (ExponentWitness, IFSFamily, certified_pressure,
                        e_value, find_branch_count, solve_pressure_exponent)
from .homology import (PUNCTURES, Point, StarResult, VerificationReport,
                       apply_matrix, build_fixing_word, in_central_strip,
                       negation_symmetry_check, reduce_point, slit_point,
                       star_power, star_word, verify_fixing_word)
from .intervals import (PRECISION_LADDER, Decision, FloatInterval, MPInterval,
                        RationalBracket, format_rational, parse_rational,
                        run_certified)
from .mat2 import (IDENTITY, QUARTER_TURN, SHEAR_X, SHEAR_Y, Gen, IMat,
                   is_proj_identity, proj_equal, shear_power)
from .plane import (PLANE_CSV_HEADER, BandResult, Lattice2D, LensConfig,
                    PlaneEvent, PlaneResult, PlaneState, PlaneStats,
                    admissible_circular, admissible_flat, band_width,
                    build_lattice, dump_lattice_json, lattice_json,
                    make_lattice, plane_state, rotation_lattice,
                    simulate_plane, square_lattice, write_plane_csv)
from .surface import (Cylinder, RenormalizedMatrix, StripQuality,
                      base_cylinders, no_drift_check, renormalized_matrix,
                      strip_quality, transported_cylinder)

__version__ = "0.1.0"

__all__ = [
    "Convergent", "block_exponents", "block_lower_bounds_hold", "cf_value",
    "convergents", "direction_enclosure", "ergodic_quotients",
    "solve_block_pair", "validate_quotients", "validate_slit_params",
    "word_matrix",
    "COVER_CSV_HEADER", "CoverState", "DiffusionStats", "FlowEvent",
    "FlowResult", "SlitSurface", "advance", "cocycle_additive",
    "format_exact", "simulate", "start_state", "write_events_csv",
    "ConstructionError", "EatonflowError", "InfeasibleError", "InputError",
    "PrecisionExhaustedError", "SingularPointError", "TargetUnreachableError",
    "Undecided",
    "ExponentWitness", "IFSFamily", "certified_pressure", "e_value",
    "find_branch_count", "solve_pressure_exponent",
    "PUNCTURES", "Point", "StarResult", "VerificationReport", "apply_matrix",
    "build_fixing_word", "in_central_strip", "negation_symmetry_check",
    "reduce_point", "slit_point", "star_power", "star_word",
    "verify_fixing_word",
    "PRECISION_LADDER", "Decision", "FloatInterval", "MPInterval",
    "RationalBracket", "format_rational", "parse_rational", "run_certified",
    "IDENTITY", "QUARTER_TURN", "SHEAR_X", "SHEAR_Y", "Gen", "IMat",
    "is_proj_identity", "proj_equal", "shear_power",
    "PLANE_CSV_HEADER", "BandResult", "Lattice2D", "LensConfig", "PlaneEvent",
    "PlaneResult", "PlaneState", "PlaneStats", "admissible_circular",
    "admissible_flat", "band_width", "build_lattice", "dump_lattice_json",
    "lattice_json", "make_lattice", "plane_state", "rotation_lattice",
    "simulate_plane", "square_lattice", "write_plane_csv",
    "Cylinder", "RenormalizedMatrix", "StripQuality", "base_cylinders",
    "no_drift_check", "renormalized_matrix", "strip_quality",
    "transported_cylinder",
    "__version__",
]
