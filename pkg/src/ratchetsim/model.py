"""Dimensionless parameter set, lab-unit conversions, and the ratchet
initial state.

All physics modules consume only :class:`RatchetParams`; :class:`LabUnits`
is a convenience layer for translating experimental knobs (pulse period,
Rabi frequency, detuning) into the dimensionless set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

#: Half-Talbot time of the reference experiment, in microseconds.
DEFAULT_HALF_TALBOT_US = 51.5


def canonical_angle(theta):
    """Wrap angle(s) into [-pi, pi)."""
    return (theta + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class RatchetParams:
    """Dimensionless parameters of one kicked-ratchet run.

    phi_d  -- kick strength (>= 0)
    l      -- resonance order (positive integer)
    eps    -- detuning of the scaled pulse period from 2*pi*l (may be
              negative; 0 means exact resonance)
    beta   -- quasi-momentum in [0, 1), units of hbar*G
    gamma  -- phase of the initial two-wave superposition, radians
    kicks  -- number of kicks t (non-negative integer)

    The scaled pulse period tau = 2*pi*l + eps is always derived, never
    stored independently.
    """

    phi_d: float
    l: int = 1
    eps: float = 0.0
    beta: float = 0.5
    gamma: float = 0.0
    kicks: int = 0

    def __post_init__(self):
        if not self.phi_d >= 0.0:
            raise ValueError(f"phi_d must be >= 0, got {self.phi_d}")
        if int(self.l) != self.l or self.l < 1:
            raise ValueError(f"l must be a positive integer, got {self.l}")
        if not 0.0 <= self.beta < 1.0:
            raise ValueError(f"beta must lie in [0, 1), got {self.beta}")
        if int(self.kicks) != self.kicks or self.kicks < 0:
            raise ValueError(f"kicks must be a non-negative integer, got {self.kicks}")

    @property
    def tau(self) -> float:
        """Scaled pulse period, tau = 2*pi*l + eps."""
        return TWO_PI * self.l + self.eps

    @property
    def k_tilde(self) -> float:
        """Scaled kicking strength of the near-resonant map, |eps|*phi_d."""
        return abs(self.eps) * self.phi_d

    @property
    def x(self) -> float:
        """Scaling variable sqrt(phi_d*|eps|) * kicks."""
        return math.sqrt(self.phi_d * abs(self.eps)) * self.kicks

    @classmethod
    def from_tau(cls, phi_d: float, l: int, tau: float, **kw) -> "RatchetParams":
        """Build from the scaled pulse period instead of the detuning."""
        return cls(phi_d=phi_d, l=l, eps=tau - TWO_PI * l, **kw)


def eps_from_offset(offset_us: float, l: int = 1,
                    half_talbot_us: float = DEFAULT_HALF_TALBOT_US) -> float:
    """Detuning eps from the pulse-period offset (microseconds) relative to
    the l-th resonance at l * half_talbot_us."""
    if half_talbot_us <= 0.0:
        raise ValueError(f"half_talbot_us must be > 0, got {half_talbot_us}")
    return TWO_PI * offset_us / half_talbot_us


def kick_strength_from_laser(rabi_frequency: float, pulse_length: float,
                             detuning: float) -> float:
    """Kick strength phi_d = Omega^2 * dt / (8 * delta_L).

    rabi_frequency and detuning in rad/s, pulse_length in seconds.
    """
    if detuning == 0.0:
        raise ValueError("detuning must be nonzero (far-detuned kicking model)")
    if pulse_length <= 0.0:
        raise ValueError(f"pulse_length must be > 0, got {pulse_length}")
    return rabi_frequency ** 2 * pulse_length / (8.0 * detuning)


@dataclass(frozen=True)
class LabUnits:
    """Experimental knobs with derived dimensionless quantities."""

    pulse_period_us: float
    rabi_frequency: float  # rad/s
    pulse_length_s: float
    detuning: float        # rad/s
    half_talbot_us: float = DEFAULT_HALF_TALBOT_US
    l: int = 1

    @property
    def eps(self) -> float:
        offset = self.pulse_period_us - self.l * self.half_talbot_us
        return eps_from_offset(offset, self.l, self.half_talbot_us)

    @property
    def phi_d(self) -> float:
        return kick_strength_from_laser(self.rabi_frequency,
                                        self.pulse_length_s, self.detuning)


def initial_density(theta, gamma: float):
    """Angular density of the two-wave superposition,
    P(theta) = (1 + cos(theta + gamma)) / (2*pi)."""
    return np.maximum(0.0, (1.0 + np.cos(np.asarray(theta, float) + gamma)) / TWO_PI)


@dataclass(frozen=True)
class InitialState:
    """The equal superposition of the 0 and 1 hbar*G plane waves with
    relative phase gamma."""

    gamma: float = 0.0

    def density(self, theta):
        return initial_density(theta, self.gamma)

    def cdf(self, theta):
        """Cumulative distribution of the density over [-pi, pi)."""
        th = np.asarray(theta, float)
        return (th + math.pi + np.sin(th + self.gamma) + math.sin(self.gamma)) / TWO_PI

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw n angles from the density by inverse-CDF transform."""
        u = rng.random(n)
        grid = np.linspace(-math.pi, math.pi, 20001)
        theta = np.interp(u, self.cdf(grid), grid)
        # polish with a few Newton steps (density can vanish; guard slope)
        for _ in range(4):
            f = self.cdf(theta) - u
            fp = np.maximum(self.density(theta), 1e-12)
            theta = np.clip(theta - f / fp, -math.pi, math.pi)
        return theta
