"""Operational entanglement monotones: the least pure-state entanglement that
LOCC can convert into a given state, with convex-roof baselines and oracles."""

from .decompositions import Ensemble, average_schmidt_vector, ensemble_reconstructs, hjw_ensemble
from .monotones import AVG_E, CONCURRENCE, ENTROPY, MonotoneSpec, custom_monotone, eval_pure, get_monotone
from .optimizer import SolverConfig, SolverResult, compare, minimize_convex_roof, minimize_ef
from .oracles import Theorem4Params, brute_force_ef, theorem4_state, theorem4_value, wootters_concurrence
from .states import (
    DensityMatrix,
    InvalidStateError,
    PureState,
    eigendecompose,
    majorizes,
    random_density,
    random_local_unitary,
    random_pure,
    schmidt_decompose,
)

__version__ = "0.1.0"
