"""Kicked-rotor quantum ratchet simulations.

Exact Floquet evolution at fixed quasi-momentum, the near-resonant
classical map, the pendulum-approximation scaling law for the ratchet
current, and finite quasi-momentum-spread corrections, with a CLI for
reproducible sweeps and figure bundles.
"""

__version__ = "0.1.0"

from .betaspread import (BetaSpreadParams, quantum_beta_average,
                         suppressed_resonant_current)
from .epsmap import (EpsCoords, EpsEnsemble, ResonanceError, build_ensemble,
                     ensemble_current, map_step)
from .model import (InitialState, LabUnits, RatchetParams, canonical_angle,
                    eps_from_offset, initial_density, kick_strength_from_laser)
from .pendulum import (PendulumPoint, ScalingCurve, build_scaling_curve,
                       default_curve, pendulum_flow, predicted_current,
                       scaling_F)
from .quantum import (BasisOverflowError, MomentumDistribution, QuantumState,
                      evolve, free_evolution, kick, make_initial_state,
                      mean_current)

__all__ = [
    "__version__",
    "BetaSpreadParams", "quantum_beta_average", "suppressed_resonant_current",
    "EpsCoords", "EpsEnsemble", "ResonanceError", "build_ensemble",
    "ensemble_current", "map_step",
    "InitialState", "LabUnits", "RatchetParams", "canonical_angle",
    "eps_from_offset", "initial_density", "kick_strength_from_laser",
    "PendulumPoint", "ScalingCurve", "build_scaling_curve", "default_curve",
    "pendulum_flow", "predicted_current", "scaling_F",
    "BasisOverflowError", "MomentumDistribution", "QuantumState", "evolve",
    "free_evolution", "kick", "make_initial_state", "mean_current",
]
