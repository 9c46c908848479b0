"""Pendulum approximation of the near-resonant dynamics and the
one-parameter scaling law.

The scaled flow is dtheta/ds = J', dJ'/ds = sin(theta), integrated with a
fixed-step symplectic scheme.  The scaling function is

    F(x) = (1/2pi) * integral sin(theta0) * J'(theta0, J'0=0, x) dtheta0

over theta0 in [-pi, pi); the universal ratchet curve is F(x)/x and the
physical prediction is <p> = -phi_d * t * sin(gamma) * F(x)/x with
x = sqrt(phi_d*|eps|) * t.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from ._kernels import leapfrog_batch
from .model import RatchetParams

DEFAULT_STEP = 1e-3
DEFAULT_N_THETA = 4096
CACHE_X_MAX = 12.0
CACHE_DX = 0.01


@dataclass(frozen=True)
class PendulumPoint:
    """Phase-space point of the unit-parameter scaled pendulum."""

    theta: float
    Jp: float

    @property
    def energy(self) -> float:
        """H' = J'^2/2 + cos(theta)."""
        return 0.5 * self.Jp ** 2 + math.cos(self.theta)


def _steps_for(x: float, step: float) -> tuple[int, float]:
    """Fixed step min(step, x/1000); returns (n_steps, actual step)."""
    if x == 0.0:
        return 0, step
    h = min(step, x / 1000.0)
    n = max(1, math.ceil(x / h - 1e-9))
    return n, x / n


def pendulum_flow(theta0: float, Jp0: float, x: float,
                  step: float = DEFAULT_STEP) -> PendulumPoint:
    """Integrate one trajectory from s = 0 to s = x."""
    if x < 0.0:
        raise ValueError(f"x must be >= 0, got {x}")
    if step <= 0.0:
        raise ValueError(f"step must be > 0, got {step}")
    n, h = _steps_for(x, step)
    theta = np.array([float(theta0)])
    J = np.array([float(Jp0)])
    leapfrog_batch(theta, J, n, h)
    return PendulumPoint(float(theta[0]), float(J[0]))


def _theta_grid(n_theta: int) -> np.ndarray:
    # mid-cell offset keeps the unstable fixed point off the grid
    return -math.pi + (np.arange(n_theta) + 0.5) * 2.0 * math.pi / n_theta


def scaling_F(x: float, n_theta: int = DEFAULT_N_THETA,
              step: float = DEFAULT_STEP) -> float:
    """F(x) by periodic midpoint quadrature over the theta0 grid."""
    if x < 0.0:
        raise ValueError(f"x must be >= 0, got {x}")
    if n_theta < 64:
        raise ValueError(f"n_theta must be >= 64, got {n_theta}")
    if x == 0.0:
        return 0.0
    theta0 = _theta_grid(n_theta)
    sin0 = np.sin(theta0)
    theta = theta0.copy()
    J = np.zeros(n_theta)
    n, h = _steps_for(x, step)
    leapfrog_batch(theta, J, n, h)
    return float(sin0 @ J) / n_theta


@dataclass(frozen=True, eq=False)
class ScalingCurve:
    """F(x)/x sampled on a uniform x grid, with cubic interpolation."""

    x: np.ndarray
    f_over_x: np.ndarray
    step: float
    n_theta: int

    def __call__(self, x):
        spline = self._spline()
        return spline(x)

    @functools.cache
    def _spline(self):
        return CubicSpline(self.x, self.f_over_x)

    def minimum(self) -> tuple[float, float]:
        """(x, F(x)/x) at the curve minimum on the sampled grid, refined
        on a 10x finer grid through the spline."""
        fine = np.arange(self.x[0], self.x[-1], (self.x[1] - self.x[0]) / 10.0)
        vals = self(fine)
        i = int(np.argmin(vals))
        return float(fine[i]), float(vals[i])

    def zero_crossing(self, lo: float = 0.5, hi: float | None = None) -> float:
        """First sign change of F(x)/x after lo, located by bisection."""
        from scipy.optimize import brentq

        if hi is None:
            hi = float(self.x[-1])
        xs = np.arange(lo, hi, CACHE_DX)
        vals = self(xs)
        sign = np.sign(vals)
        idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        if len(idx) == 0:
            raise ValueError("no sign change on the sampled interval")
        a, b = xs[idx[0]], xs[idx[0] + 1]
        return float(brentq(self, a, b))

    def save_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"# x_max = {self.x[-1]:.17g}\n")
            fh.write(f"# dx = {self.x[1] - self.x[0]:.17g}\n")
            fh.write(f"# step = {self.step:.17g}\n")
            fh.write(f"# n_theta = {self.n_theta}\n")
            fh.write("x,F_over_x\n")
            for xv, fv in zip(self.x, self.f_over_x):
                fh.write(f"{xv:.17g},{fv:.17g}\n")

    @classmethod
    def load_csv(cls, path) -> "ScalingCurve":
        meta = {}
        xs, fs = [], []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line.startswith("#"):
                    key, _, val = line[1:].partition("=")
                    meta[key.strip()] = val.strip()
                elif line and not line.startswith("x,"):
                    a, b = line.split(",")
                    xs.append(float(a))
                    fs.append(float(b))
        return cls(np.array(xs), np.array(fs),
                   float(meta.get("step", DEFAULT_STEP)),
                   int(meta.get("n_theta", DEFAULT_N_THETA)))


def build_scaling_curve(x_max: float = CACHE_X_MAX, dx: float = CACHE_DX,
                        n_theta: int = DEFAULT_N_THETA,
                        step: float = DEFAULT_STEP) -> ScalingCurve:
    """Tabulate F(x)/x on [0, x_max] by progressive integration of the
    whole theta0 grid (one pass, F recorded at each grid x)."""
    n_x = int(round(x_max / dx))
    steps_per_sample = max(1, int(round(dx / step)))
    h = dx / steps_per_sample
    theta0 = _theta_grid(n_theta)
    sin0 = np.sin(theta0)
    theta = theta0.copy()
    J = np.zeros(n_theta)
    xs = np.empty(n_x + 1)
    fox = np.empty(n_x + 1)
    xs[0] = 0.0
    fox[0] = 0.5  # impulse limit of F(x)/x
    for k in range(1, n_x + 1):
        leapfrog_batch(theta, J, steps_per_sample, h)
        xs[k] = k * dx
        fox[k] = (float(sin0 @ J) / n_theta) / xs[k]
    return ScalingCurve(xs, fox, h, n_theta)


@functools.lru_cache(maxsize=1)
def default_curve() -> ScalingCurve:
    """The shared F(x)/x table (built once per process)."""
    return build_scaling_curve()


def predicted_current(params: RatchetParams,
                      curve: ScalingCurve | None = None) -> float:
    """Scaling-law prediction <p> = -phi_d * t * sin(gamma) * F(x)/x."""
    if params.eps == 0.0:
        raise ValueError("eps = 0 is exact resonance; use the resonant "
                         "closed form -(phi_d*t/2)*sin(gamma)")
    if params.kicks < 1:
        raise ValueError(f"kicks must be >= 1, got {params.kicks}")
    if curve is None:
        curve = default_curve()
    x = params.x
    return -params.phi_d * params.kicks * math.sin(params.gamma) * float(curve(x))
