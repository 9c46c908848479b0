"""Exact one-period Floquet evolution of the kicked rotor at fixed
quasi-momentum.

The state lives on the momentum ladder n in [-N, N] at quasi-momentum
beta.  One period is free flight (diagonal in momentum) followed by a
kick (diagonal in angle, applied via FFT to an angle grid).  Each period
is free flight then kick, with the initial state given at t = 0, so the
state after t kicks is (Kick * Free)^t applied to it.  At exact
resonance the free flight is a global phase, keeping the resonant
closed-form current exact; the convention also makes kick number s carry
s free rotations of quasi-momentum phase, as the finite-spread
closed-form current requires.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import RatchetParams, TWO_PI

DEFAULT_BASIS = 128
MAX_BASIS = 2048
TAIL_GUARD = 8
TAIL_TOL = 1e-10


class BasisOverflowError(RuntimeError):
    """Momentum support hit the maximum basis size; parameters are likely
    outside the intended (t, phi_d) regime."""


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Complex amplitudes c_n over n in [-N, N] at quasi-momentum beta.

    amplitudes[i] is the coefficient of the plane wave exp(i*n*theta) /
    sqrt(2*pi) with n = i - N.
    """

    amplitudes: np.ndarray
    beta: float

    @property
    def basis_size(self) -> int:
        return (len(self.amplitudes) - 1) // 2

    @property
    def n_values(self) -> np.ndarray:
        N = self.basis_size
        return np.arange(-N, N + 1)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def tail_mass(self) -> float:
        """Probability beyond |n| > N - TAIL_GUARD."""
        p = np.abs(self.amplitudes) ** 2
        return float(np.sum(p[:TAIL_GUARD]) + np.sum(p[-TAIL_GUARD:]))

    def grown(self, new_size: int) -> "QuantumState":
        """Re-embed in a larger basis (lossless)."""
        pad = new_size - self.basis_size
        amps = np.pad(self.amplitudes, (pad, pad))
        return QuantumState(amps, self.beta)

    def position_density(self, theta) -> np.ndarray:
        """|psi(theta)|^2 with psi(theta) = sum_n c_n exp(i n theta) / sqrt(2 pi)."""
        th = np.atleast_1d(np.asarray(theta, float))
        psi = (self.amplitudes[None, :] *
               np.exp(1j * np.outer(th, self.n_values))).sum(axis=1)
        return np.abs(psi) ** 2 / TWO_PI

    def distribution(self) -> "MomentumDistribution":
        return MomentumDistribution(np.abs(self.amplitudes) ** 2, self.beta)


@dataclass(frozen=True, eq=False)
class MomentumDistribution:
    """Probabilities over the momentum ladder n + beta."""

    probabilities: np.ndarray
    beta: float

    @property
    def n_values(self) -> np.ndarray:
        N = (len(self.probabilities) - 1) // 2
        return np.arange(-N, N + 1)

    @property
    def mean_p(self) -> float:
        """<p> in units of hbar*G."""
        return float(self.probabilities @ (self.n_values + self.beta))

    @property
    def energy(self) -> float:
        """<p^2>/2."""
        return float(self.probabilities @ (self.n_values + self.beta) ** 2) / 2.0


def make_initial_state(gamma: float, beta: float, N: int = DEFAULT_BASIS) -> QuantumState:
    """Equal superposition of n = 0 and n = 1 with relative phase gamma."""
    if N < 8:
        raise ValueError(f"basis size N must be >= 8, got {N}")
    amps = np.zeros(2 * N + 1, dtype=complex)
    amps[N] = 1.0 / math.sqrt(2.0)
    amps[N + 1] = np.exp(1j * gamma) / math.sqrt(2.0)
    return QuantumState(amps, beta)


def free_evolution(state: QuantumState, tau: float) -> QuantumState:
    """Multiply each amplitude by exp(-i * tau * (n + beta)^2 / 2)."""
    p = state.n_values + state.beta
    phase = np.exp(-0.5j * tau * p ** 2)
    return replace(state, amplitudes=state.amplitudes * phase)


def _grid_size(N: int) -> int:
    return 1 << (4 * N + 4 - 1).bit_length()


def kick(state: QuantumState, phi_d: float) -> QuantumState:
    """Apply exp(-i * phi_d * cos(theta)).

    Diagonal on an angle grid; transforms are FFTs with the spectrum
    packed at frequencies n mod M.  Auto-grows the basis (doubling, up to
    MAX_BASIS) whenever the tail-mass check fails after the kick.
    """
    if phi_d < 0.0:
        raise ValueError(f"phi_d must be >= 0, got {phi_d}")
    while True:
        N = state.basis_size
        M = _grid_size(N)
        theta = TWO_PI * np.arange(M) / M
        spec = np.zeros(M, dtype=complex)
        n = state.n_values
        spec[n % M] = state.amplitudes
        psi = np.fft.ifft(spec)
        psi *= np.exp(-1j * phi_d * np.cos(theta))
        spec = np.fft.fft(psi)
        out = QuantumState(spec[n % M], state.beta)
        if out.tail_mass() < TAIL_TOL:
            return out
        if 2 * N > MAX_BASIS:
            raise BasisOverflowError(
                f"momentum tail mass {out.tail_mass():.3e} >= {TAIL_TOL} at "
                f"maximum basis size N = {N}")
        state = state.grown(2 * N)


def evolve(params: RatchetParams, N: int = DEFAULT_BASIS) -> list[MomentumDistribution]:
    """Run the full Floquet evolution; returns one distribution snapshot
    per kick count 0..params.kicks."""
    state = make_initial_state(params.gamma, params.beta, N)
    history = [state.distribution()]
    for _ in range(params.kicks):
        state = free_evolution(state, params.tau)
        state = kick(state, params.phi_d)
        history.append(state.distribution())
    return history


def mean_current(history: list[MomentumDistribution]) -> np.ndarray:
    """Current <p>_t - <p>_0 per kick, in units of hbar*G."""
    if not history:
        raise ValueError("history must be non-empty")
    means = np.array([d.mean_p for d in history])
    return means - means[0]
