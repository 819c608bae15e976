"""Solvers, an exact oracle and instance generators for the doubling pour puzzle.

Each pour picks two vessels with ``0 < x <= y`` and moves ``x`` units from
the fuller one into the emptier one, doubling it. The goal is an empty vessel.
"""

from .core import PourTrace, State, canonical, check_state, pour, reverse_pours, successors
from .errors import (
    AllZero,
    CapExceeded,
    DegenerateState,
    InvalidPour,
    InvalidState,
    InvariantViolation,
    NotFoundWithinCap,
    NotPourable,
    NotPow2,
    PoolExhausted,
    PouringError,
    TooSmall,
)
from .four_vessel import FourVesselRun, solve4, step_count_profile
from .instances import g3_instance, g4_lower_instance, omega_instance, seq_ab
from .oracle import (
    GHRecord,
    PourabilityTable,
    build_table,
    compute_g,
    compute_g_prime,
    compute_h,
    compute_h_prime,
    enumerate_states,
    m,
)
from .three_vessel import RoundResult, frei_round, janson_round, solve3_frei, solve3_pow2, solve3_remainder, state_shift
from .two_vessel import TwoVesselVerdict, solve2, verdict

__version__ = "0.1.0"

__all__ = [
    "AllZero",
    "CapExceeded",
    "DegenerateState",
    "FourVesselRun",
    "GHRecord",
    "InvalidPour",
    "InvalidState",
    "InvariantViolation",
    "NotFoundWithinCap",
    "NotPourable",
    "NotPow2",
    "PoolExhausted",
    "PourTrace",
    "PourabilityTable",
    "PouringError",
    "RoundResult",
    "State",
    "TooSmall",
    "TwoVesselVerdict",
    "build_table",
    "canonical",
    "check_state",
    "compute_g",
    "compute_g_prime",
    "compute_h",
    "compute_h_prime",
    "enumerate_states",
    "frei_round",
    "g3_instance",
    "g4_lower_instance",
    "janson_round",
    "m",
    "omega_instance",
    "pour",
    "reverse_pours",
    "seq_ab",
    "solve2",
    "solve3_frei",
    "solve3_pow2",
    "solve3_remainder",
    "solve4",
    "state_shift",
    "step_count_profile",
    "successors",
    "verdict",
]
