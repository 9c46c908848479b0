"""Near-resonant classical map on weighted ensembles.

The map acts on scaled coordinates (theta, J):

    theta' = theta + J
    J'     = J + k_tilde * sin(theta')

with k_tilde = |eps| * phi_d.  The physical current in units of hbar*G is
recovered as <J_t - J_0> / eps.  J is evolved unwrapped; theta is wrapped
only for readout.  This module is singular at resonance and rejects
|eps| below a cutoff (use the quantum module there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import eps_map_mean_j
from .model import InitialState, RatchetParams, canonical_angle

RESONANCE_EPS_MIN = 1e-6
DEFAULT_POINTS = 8192


class ResonanceError(ValueError):
    """Raised when |eps| is below the resonance cutoff."""


@dataclass(frozen=True)
class EpsCoords:
    """A single phase-space point of the map."""

    theta: float
    J: float

    def wrapped(self) -> "EpsCoords":
        return EpsCoords(float(canonical_angle(self.theta)), self.J)


@dataclass(frozen=True, eq=False)
class EpsEnsemble:
    """Weighted phase-space ensemble with scaled kick strength k_tilde."""

    theta: np.ndarray
    J: np.ndarray
    weights: np.ndarray
    k_tilde: float

    def __post_init__(self):
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("ensemble weights must sum to 1")

    def mean(self, values: np.ndarray) -> float:
        return float(self.weights @ values)


def map_step(point: EpsCoords, k_tilde: float) -> EpsCoords:
    """One iteration of the map (theta updated first)."""
    if k_tilde < 0.0:
        raise ValueError(f"k_tilde must be >= 0, got {k_tilde}")
    theta = point.theta + point.J
    J = point.J + k_tilde * math.sin(theta)
    return EpsCoords(theta, J)


def build_ensemble(gamma: float, n_points: int, k_tilde: float,
                   mode: str = "deterministic", seed: int = 0) -> EpsEnsemble:
    """Initial ensemble: theta from the ratchet angular density, J = 0.

    deterministic -- uniform mid-cell theta grid, weights proportional to
                     the density (periodic midpoint quadrature)
    sampled      -- inverse-CDF draws with the given seed, uniform weights
    """
    if n_points < 16:
        raise ValueError(f"n_points must be >= 16, got {n_points}")
    state = InitialState(gamma)
    if mode == "deterministic":
        theta = -math.pi + (np.arange(n_points) + 0.5) * 2.0 * math.pi / n_points
        w = state.density(theta)
        weights = w / w.sum()
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        theta = state.sample(n_points, rng)
        weights = np.full(n_points, 1.0 / n_points)
    else:
        raise ValueError(f"mode must be 'deterministic' or 'sampled', got {mode!r}")
    return EpsEnsemble(theta, np.zeros(n_points), weights, k_tilde)


def ensemble_current(params: RatchetParams, n_points: int = DEFAULT_POINTS,
                     mode: str = "deterministic", seed: int = 0) -> np.ndarray:
    """Per-kick current <p>_t - <p>_0 in units of hbar*G, length kicks+1.

    For eps < 0 the theta origin is shifted by pi at initialization (the
    map's position variable carries the offset pi*(1 - sign(eps))/2).
    """
    if abs(params.eps) < RESONANCE_EPS_MIN:
        raise ResonanceError(
            f"|eps| = {abs(params.eps):.2e} is below {RESONANCE_EPS_MIN}; the map "
            "is singular at resonance -- use the quantum module instead")
    ens = build_ensemble(params.gamma, n_points, params.k_tilde, mode, seed)
    theta = ens.theta.copy()
    if params.eps < 0.0:
        theta = theta + math.pi
    mean_j = eps_map_mean_j(theta, ens.J.copy(), ens.weights,
                            ens.k_tilde, params.kicks)
    return (mean_j - mean_j[0]) / params.eps
