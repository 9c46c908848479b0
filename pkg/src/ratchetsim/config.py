"""Run-configuration parsing and validation.

Configs are INI-style key/value files with sections:

    [run]
    model = quantum            ; quantum | eps_classical | pendulum | beta_spread

    [params]
    phi_d = 2.6                ; required
    l = 1
    eps = 0.1                  ; exactly one of eps / offset_us
    offset_us = 0.82
    half_talbot_us = 51.5      ; only used with offset_us
    beta = 0.5
    gamma = -1.5707963267948966
    kicks = 10

    [sweep]                    ; required by the sweep subcommand
    axis = eps                 ; eps | t | phi_d | offset_us
    from = 0.01
    to = 0.2
    step = 0.01

    [spread]                   ; required by model = beta_spread
    delta_beta = 0.02
    n_beta = 32

    [eps_classical]
    n_points = 8192
    mode = deterministic       ; deterministic | sampled
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace

import numpy as np

from .model import DEFAULT_HALF_TALBOT_US, RatchetParams, eps_from_offset

MODELS = ("quantum", "eps_classical", "pendulum", "beta_spread")
SWEEP_AXES = ("eps", "t", "phi_d", "offset_us")


class ConfigError(Exception):
    """Invalid configuration; the message names the offending field."""


@dataclass(frozen=True)
class SweepSpec:
    """One swept axis over a strictly monotone grid."""

    axis: str
    grid: np.ndarray

    def apply(self, base: RatchetParams, value: float,
              half_talbot_us: float) -> RatchetParams:
        if self.axis == "eps":
            return replace(base, eps=float(value))
        if self.axis == "t":
            return replace(base, kicks=int(round(value)))
        if self.axis == "phi_d":
            return replace(base, phi_d=float(value))
        if self.axis == "offset_us":
            return replace(base, eps=eps_from_offset(float(value), base.l,
                                                     half_talbot_us))
        raise ConfigError(f"sweep.axis: unknown axis {self.axis!r}")


@dataclass(frozen=True)
class RunConfig:
    model: str
    params: RatchetParams
    half_talbot_us: float = DEFAULT_HALF_TALBOT_US
    sweep: SweepSpec | None = None
    delta_beta: float | None = None
    n_beta: int = 32
    n_points: int = 8192
    mode: str = "deterministic"
    basis: int = 128


def _get(section, key, cast, field):
    try:
        raw = section[key]
    except KeyError:
        raise ConfigError(f"{field}: required key missing")
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"{field}: cannot parse {raw!r}")


def load_config(path, model_override: str | None = None) -> RunConfig:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")

    if model_override is not None:
        model = model_override
    elif cp.has_section("run"):
        model = _get(cp["run"], "model", str, "run.model").strip()
    else:
        raise ConfigError("run.model: required key missing")
    if model not in MODELS:
        raise ConfigError(f"run.model: unknown model {model!r}, "
                          f"expected one of {', '.join(MODELS)}")

    if not cp.has_section("params"):
        raise ConfigError("params: required section missing")
    sec = cp["params"]
    phi_d = _get(sec, "phi_d", float, "params.phi_d")
    l = int(sec.get("l", "1"))
    beta = float(sec.get("beta", "0.5"))
    gamma = float(sec.get("gamma", "0.0"))
    kicks = int(sec.get("kicks", "0"))
    half_talbot_us = float(sec.get("half_talbot_us",
                                   str(DEFAULT_HALF_TALBOT_US)))
    has_eps = "eps" in sec
    has_offset = "offset_us" in sec
    if has_eps and has_offset:
        raise ConfigError("params.eps: give either eps or offset_us, not both")
    if has_offset:
        if half_talbot_us <= 0:
            raise ConfigError("params.half_talbot_us: must be > 0")
        eps = eps_from_offset(float(sec["offset_us"]), l, half_talbot_us)
    else:
        eps = float(sec.get("eps", "0.0"))
    try:
        params = RatchetParams(phi_d=phi_d, l=l, eps=eps, beta=beta,
                               gamma=gamma, kicks=kicks)
    except ValueError as exc:
        raise ConfigError(f"params: {exc}")

    sweep = None
    if cp.has_section("sweep"):
        ssec = cp["sweep"]
        axis = _get(ssec, "axis", str, "sweep.axis").strip()
        if axis not in SWEEP_AXES:
            raise ConfigError(f"sweep.axis: unknown axis {axis!r}, "
                              f"expected one of {', '.join(SWEEP_AXES)}")
        lo = _get(ssec, "from", float, "sweep.from")
        hi = _get(ssec, "to", float, "sweep.to")
        step = _get(ssec, "step", float, "sweep.step")
        if step == 0 or (hi - lo) * step <= 0:
            raise ConfigError("sweep.step: grid must be strictly monotone "
                              "(step nonzero, same sign as to - from)")
        n = int(np.floor((hi - lo) / step + 1e-9)) + 1
        sweep = SweepSpec(axis, lo + step * np.arange(n))

    delta_beta = None
    n_beta = 32
    if cp.has_section("spread"):
        delta_beta = _get(cp["spread"], "delta_beta", float, "spread.delta_beta")
        if not 0.0 <= delta_beta < 0.2:
            raise ConfigError("spread.delta_beta: must lie in [0, 0.2)")
        n_beta = int(cp["spread"].get("n_beta", "32"))
        if n_beta < 8:
            raise ConfigError("spread.n_beta: must be >= 8")
    if model == "beta_spread" and delta_beta is None:
        raise ConfigError("spread.delta_beta: required for model = beta_spread")

    n_points = 8192
    mode = "deterministic"
    if cp.has_section("eps_classical"):
        esec = cp["eps_classical"]
        n_points = int(esec.get("n_points", "8192"))
        mode = esec.get("mode", "deterministic").strip()
        if mode not in ("deterministic", "sampled"):
            raise ConfigError("eps_classical.mode: expected deterministic or sampled")
        if n_points < 16:
            raise ConfigError("eps_classical.n_points: must be >= 16")

    return RunConfig(model=model, params=params, half_talbot_us=half_talbot_us,
                     sweep=sweep, delta_beta=delta_beta, n_beta=n_beta,
                     n_points=n_points, mode=mode)
