"""Exact tools for continuous, surjective, locally injective maps on ordered cut spaces.

The main entry points are re-exported here; see the README for a tour.
"""

from .analysis import (
    csli_verdict,
    is_local_homeomorphism,
    locally_open_at,
    necessary_condition,
    stratify,
)
from .certificates import CutPath, NonAdmissibilityCertificate, check_certificate
from .cocycle import (
    CocycleFn,
    construct_branch_selection,
    construct_inverse_count,
    degeneracy,
    expectation,
    repair_continuity,
    transfer_apply,
    verify_cocycle,
    verify_identity,
)
from .functions import PiecewiseFunction
from .maps import Piece, PiecewiseMonotoneMap, compose
from .pipeline import run_pipeline
from .poly import Poly
from .space import Component, CutSpec, ExtPoint, Interval, OrderedCutSpace, Side

__version__ = "0.1.0"
