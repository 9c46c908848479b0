"""Command-line entry point: single runs, parameter sweeps, canned
figure-reproduction bundles, and the scaling-function cache.

Subcommands:

    run           one model at one parameter point
    sweep         grid of points along one axis, long-format CSV
    figure        emit the CSV bundle for one of fig1a/fig1b/fig2a/fig2b/fig3
    scaling-cache tabulate F(x)/x to a CSV cache file

All CSV output carries a '#'-prefixed metadata header sufficient to
re-run it, and is byte-reproducible from (config, seed, code version).
Exit codes: 0 success, 1 invalid config, 2 model error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .betaspread import quantum_beta_average, suppressed_resonant_current
from .config import ConfigError, RunConfig, load_config
from .epsmap import ResonanceError, ensemble_current
from .model import TWO_PI, RatchetParams, eps_from_offset
from .pendulum import build_scaling_curve, default_curve, predicted_current
from .quantum import BasisOverflowError, evolve, mean_current

FIGURE_IDS = ("fig1a", "fig1b", "fig2a", "fig2b", "fig3")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_csv(path, meta: dict, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        for k, v in meta.items():
            fh.write(f"# {k} = {_fmt(v)}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _meta(cfg: RunConfig, seed: int, **extra) -> dict:
    p = cfg.params
    meta = {
        "version": __version__,
        "model": cfg.model,
        "seed": seed,
        "phi_d": p.phi_d,
        "l": p.l,
        "eps": p.eps,
        "tau": p.tau,
        "beta": p.beta,
        "gamma": p.gamma,
        "kicks": p.kicks,
    }
    if cfg.model == "eps_classical":
        meta.update(n_points=cfg.n_points, mode=cfg.mode)
    if cfg.delta_beta is not None:
        meta.update(delta_beta=cfg.delta_beta, n_beta=cfg.n_beta)
    meta.update(extra)
    return meta


def scaled_current(current: float, phi_d: float, t: int, gamma: float) -> float:
    """current / (-phi_d * t * sin(gamma)); nan where undefined."""
    denom = -phi_d * t * math.sin(gamma)
    return current / denom if denom != 0.0 else float("nan")


def current_history(cfg: RunConfig, params: RatchetParams, seed: int) -> np.ndarray:
    """Per-kick current <p>_t - <p>_0 (length kicks+1) for cfg.model."""
    if cfg.model == "quantum":
        return mean_current(evolve(params, cfg.basis))
    if cfg.model == "eps_classical":
        return ensemble_current(params, cfg.n_points, cfg.mode, seed)
    if cfg.model == "pendulum":
        out = np.zeros(params.kicks + 1)
        for t in range(1, params.kicks + 1):
            out[t] = predicted_current(replace(params, kicks=t))
        return out
    if cfg.model == "beta_spread":
        return quantum_beta_average(params, cfg.delta_beta, cfg.n_beta,
                                    cfg.basis)
    raise ConfigError(f"run.model: unknown model {cfg.model!r}")


def run_single(cfg: RunConfig, out_dir: Path, seed: int) -> None:
    """One parameter point; writes currents.csv plus model-specific files."""
    out_dir.mkdir(parents=True, exist_ok=True)
    p = cfg.params
    if cfg.model == "quantum":
        history = evolve(p, cfg.basis)
        current = mean_current(history)
        means = [d.mean_p for d in history]
        write_csv(out_dir / "currents.csv", _meta(cfg, seed),
                  ["kick", "mean_p", "current", "energy"],
                  [(t, means[t], current[t], history[t].energy)
                   for t in range(len(history))])
        rows = []
        for t, dist in enumerate(history):
            for n, prob in zip(dist.n_values, dist.probabilities):
                if prob > 1e-14:
                    rows.append((t, n, dist.beta, prob))
        write_csv(out_dir / "distributions.csv", _meta(cfg, seed),
                  ["kick", "n", "beta", "probability"], rows)
    elif cfg.model == "eps_classical":
        current = ensemble_current(p, cfg.n_points, cfg.mode, seed)
        write_csv(out_dir / "currents.csv", _meta(cfg, seed),
                  ["kick", "current", "k_tilde", "eps", "n_points", "mode", "seed"],
                  [(t, current[t], p.k_tilde, p.eps, cfg.n_points, cfg.mode, seed)
                   for t in range(len(current))])
    elif cfg.model == "pendulum":
        current = current_history(cfg, p, seed)
        write_csv(out_dir / "currents.csv", _meta(cfg, seed),
                  ["kick", "x", "current", "scaled_current"],
                  [(t, replace(p, kicks=t).x, current[t],
                    scaled_current(current[t], p.phi_d, t, p.gamma))
                   for t in range(len(current))])
    elif cfg.model == "beta_spread":
        ens = quantum_beta_average(p, cfg.delta_beta, cfg.n_beta, cfg.basis)
        formula = np.concatenate([
            [0.0],
            suppressed_resonant_current(p.phi_d, p.l, p.tau, p.beta, p.gamma,
                                        cfg.delta_beta, p.kicks)
        ]) if p.kicks >= 1 else np.zeros(1)
        rows = [(t, ens[t], p.eps, cfg.delta_beta, "ensemble")
                for t in range(len(ens))]
        rows += [(t, formula[t], p.eps, cfg.delta_beta, "formula")
                 for t in range(len(formula))]
        write_csv(out_dir / "currents.csv", _meta(cfg, seed),
                  ["kick", "current", "eps", "delta_beta", "source"], rows)
    else:
        raise ConfigError(f"run.model: unknown model {cfg.model!r}")


def run_sweep(cfg: RunConfig, out_dir: Path, seed: int, threads: int) -> None:
    """Execute the configured grid; one long-format CSV in axis order.

    Per-point failures are recorded in errors.csv and do not abort the
    remaining points.
    """
    if cfg.sweep is None:
        raise ConfigError("sweep: required section missing for the sweep command")
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = cfg.sweep

    def one(value):
        params = spec.apply(cfg.params, value, cfg.half_talbot_us)
        return current_history(cfg, params, seed), params

    results = []
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = [pool.submit(one, v) for v in spec.grid]
        for v, fut in zip(spec.grid, futures):
            try:
                results.append((v, *fut.result()))
            except (ResonanceError, BasisOverflowError, ValueError) as exc:
                results.append((v, None, exc))

    rows = []
    errors = []
    for v, current, params_or_exc in results:
        if current is None:
            errors.append((v, str(params_or_exc)))
            continue
        params = params_or_exc
        for t in range(len(current)):
            pt = replace(params, kicks=t)
            rows.append((v, t, current[t],
                         scaled_current(current[t], params.phi_d, t, params.gamma),
                         pt.x))
    meta = _meta(cfg, seed, sweep_axis=spec.axis,
                 sweep_from=spec.grid[0], sweep_to=spec.grid[-1],
                 sweep_points=len(spec.grid))
    write_csv(out_dir / "sweep.csv", meta,
              [spec.axis, "kick", "current", "scaled_current", "x"], rows)
    if errors:
        write_csv(out_dir / "errors.csv", meta, [spec.axis, "error"], errors)


# --- canned figure bundles -------------------------------------------------

def _quantum_current(params: RatchetParams) -> np.ndarray:
    return mean_current(evolve(params))


def _bundle_fig1a(out_dir: Path, threads: int) -> list[str]:
    offsets = np.round(np.arange(-3.0, 3.0 + 1e-9, 0.1), 10)
    base = dict(phi_d=2.6, l=1, beta=0.5, gamma=-math.pi / 2, kicks=10)

    def one(offset):
        params = RatchetParams(eps=eps_from_offset(offset), **base)
        return evolve(params)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        runs = list(pool.map(one, offsets))

    heat = []
    cur = []
    curve = default_curve()
    for offset, history in zip(offsets, runs):
        eps = eps_from_offset(float(offset))
        final = history[-1]
        for n, prob in zip(final.n_values, final.probabilities):
            if prob > 1e-12:
                heat.append((offset, eps, n, prob))
        current = mean_current(history)[-1]
        params = RatchetParams(eps=eps, **base)
        theory = (float("nan") if eps == 0.0 else predicted_current(params, curve))
        cur.append((offset, eps, params.x, current,
                    scaled_current(current, base["phi_d"], base["kicks"],
                                   base["gamma"]), theory))
    meta = {"version": __version__, "figure_id": "fig1a", **base}
    write_csv(out_dir / "heatmap.csv", meta,
              ["offset_us", "eps", "n", "probability"], heat)
    write_csv(out_dir / "current.csv", meta,
              ["offset_us", "eps", "x", "current", "scaled_current",
               "predicted_current"], cur)
    return ["heatmap.csv", "current.csv"]


def _bundle_fig1b(out_dir: Path, threads: int) -> list[str]:
    params = RatchetParams(phi_d=1.8, eps=0.18, beta=0.5, gamma=-math.pi / 2,
                           kicks=16)
    history = evolve(params)
    current = mean_current(history)
    curve = default_curve()
    heat = []
    for t, dist in enumerate(history):
        for n, prob in zip(dist.n_values, dist.probabilities):
            if prob > 1e-12:
                heat.append((t, n, prob))
    cur = []
    for t in range(len(current)):
        pt = replace(params, kicks=t)
        resonant = -(params.phi_d * t / 2.0) * math.sin(params.gamma)
        theory = predicted_current(pt, curve) if t >= 1 else 0.0
        cur.append((t, pt.x, current[t], resonant, theory))
    meta = {"version": __version__, "figure_id": "fig1b", "phi_d": params.phi_d,
            "eps": params.eps, "gamma": params.gamma, "kicks": params.kicks}
    write_csv(out_dir / "heatmap.csv", meta, ["kick", "n", "probability"], heat)
    write_csv(out_dir / "current.csv", meta,
              ["kick", "x", "current", "resonant_line", "predicted_current"], cur)
    return ["heatmap.csv", "current.csv"]


def _theory_rows(x_max: float = 8.0) -> list[tuple]:
    curve = default_curve()
    xs = np.round(np.arange(0.0, x_max + 1e-9, 0.05), 10)
    return [(x, float(curve(x))) for x in xs]


def _scaled_rows(sets, threads: int) -> list[tuple]:
    """sets: iterables of (label, params).  Rows restricted to t >= 1."""
    def one(item):
        label, params = item
        return label, params, _quantum_current(params)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(one, sets))
    rows = []
    for label, params, current in results:
        t = params.kicks
        rows.append((label, params.phi_d, params.eps, params.gamma, t,
                     params.x,
                     scaled_current(current[t], params.phi_d, t, params.gamma)))
    return rows


def _bundle_fig2a(out_dir: Path, threads: int) -> list[str]:
    combos = [(2.6, 0.11, -math.pi / 2), (2.6, 0.20, -math.pi / 2),
              (3.0, 0.15, -math.pi / 3), (2.6, 0.05, -math.pi / 2),
              (1.8, 0.18, -math.pi / 2)]
    sets = []
    for phi_d, eps, gamma in combos:
        label = f"phi{phi_d}_eps{eps}_g{gamma:.3f}"
        for t in range(1, 16):
            sets.append((label, RatchetParams(phi_d=phi_d, eps=eps,
                                              gamma=gamma, kicks=t)))
    meta = {"version": __version__, "figure_id": "fig2a"}
    write_csv(out_dir / "scaled.csv", meta,
              ["set", "phi_d", "eps", "gamma", "t", "x", "scaled_current"],
              _scaled_rows(sets, threads))
    write_csv(out_dir / "theory.csv", meta, ["x", "F_over_x"], _theory_rows())
    return ["scaled.csv", "theory.csv"]


def _bundle_fig2b(out_dir: Path, threads: int) -> list[str]:
    sets = []
    eps_grid = np.round(np.arange(0.005, 0.2001, 0.005), 10)
    for t, phi_d in ((8, 3.0), (10, 2.6)):
        label = f"eps_scan_t{t}_phi{phi_d}"
        for eps in eps_grid:
            sets.append((label, RatchetParams(phi_d=phi_d, eps=float(eps),
                                              gamma=-math.pi / 2, kicks=t)))
    phi_grid = np.round(np.arange(0.2, 3.001, 0.1), 10)
    for phi_d in phi_grid:
        sets.append(("phi_scan_eps0.18_t8",
                     RatchetParams(phi_d=float(phi_d), eps=0.18,
                                   gamma=-math.pi / 2, kicks=8)))
    meta = {"version": __version__, "figure_id": "fig2b"}
    write_csv(out_dir / "scaled.csv", meta,
              ["set", "phi_d", "eps", "gamma", "t", "x", "scaled_current"],
              _scaled_rows(sets, threads))
    write_csv(out_dir / "theory.csv", meta, ["x", "F_over_x"], _theory_rows())
    return ["scaled.csv", "theory.csv"]


def _bundle_fig3(out_dir: Path, threads: int) -> list[str]:
    eps_family = (0.006, 0.04, 0.07, 0.09, 0.19)
    phi_d, gamma, kicks = 1.3, -math.pi / 3, 16

    def one(eps):
        return _quantum_current(RatchetParams(phi_d=phi_d, eps=eps,
                                              gamma=gamma, kicks=kicks))

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        currents = list(pool.map(one, eps_family))

    rows = [(eps, t, cur[t])
            for eps, cur in zip(eps_family, currents)
            for t in range(kicks + 1)]
    meta = {"version": __version__, "figure_id": "fig3", "phi_d": phi_d,
            "gamma": gamma, "kicks": kicks}
    write_csv(out_dir / "currents.csv", meta, ["eps", "kick", "current"], rows)

    curve = default_curve()
    theory = []
    for t in range(kicks + 1):
        theory.append(("resonant", 0.0, t,
                       -(phi_d * t / 2.0) * math.sin(gamma)))
    damped = suppressed_resonant_current(phi_d, 1, TWO_PI, 0.5, gamma,
                                         0.02, kicks)
    theory.append(("delta_beta_formula", 0.0, 0, 0.0))
    for t in range(1, kicks + 1):
        theory.append(("delta_beta_formula", 0.0, t, damped[t - 1]))
    for eps in eps_family:
        theory.append(("pendulum", eps, 0, 0.0))
        for t in range(1, kicks + 1):
            p = RatchetParams(phi_d=phi_d, eps=eps, gamma=gamma, kicks=t)
            theory.append(("pendulum", eps, t, predicted_current(p, curve)))
    write_csv(out_dir / "theory.csv",
              {**meta, "delta_beta": 0.02},
              ["series", "eps", "kick", "value"], theory)
    return ["currents.csv", "theory.csv"]


def reproduce_figure(figure_id: str, out_dir: Path, threads: int = 4) -> Path:
    """Emit the CSV bundle (plus manifest.json) for one paper figure."""
    if figure_id not in FIGURE_IDS:
        raise ConfigError(f"figure: unknown id {figure_id!r}, expected one "
                          f"of {', '.join(FIGURE_IDS)}")
    out_dir.mkdir(parents=True, exist_ok=True)
    builder = {"fig1a": _bundle_fig1a, "fig1b": _bundle_fig1b,
               "fig2a": _bundle_fig2a, "fig2b": _bundle_fig2b,
               "fig3": _bundle_fig3}[figure_id]
    members = builder(out_dir, threads)
    axes = {
        "fig1a": {"x": "pulse period offset (us)", "y": "momentum (hbar G)"},
        "fig1b": {"x": "kick number", "y": "momentum (hbar G)"},
        "fig2a": {"x": "x", "y": "scaled mean momentum"},
        "fig2b": {"x": "x", "y": "scaled mean momentum"},
        "fig3": {"x": "kick number", "y": "momentum current (hbar G)"},
    }[figure_id]
    manifest = {"figure_id": figure_id, "members": members, "axes": axes,
                "version": __version__}
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out_dir / "manifest.json"


# --- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratchetsim",
        description="Kicked-rotor quantum ratchet simulations")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", type=Path, default=Path("."),
                       help="output directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=4)

    p_run = sub.add_parser("run", help="single parameter point")
    p_run.add_argument("--config", type=Path, required=True)
    p_run.add_argument("--model", default=None,
                       help="override the configured model")
    common(p_run)

    p_sweep = sub.add_parser("sweep", help="grid along one axis")
    p_sweep.add_argument("--config", type=Path, required=True)
    p_sweep.add_argument("--model", default=None)
    common(p_sweep)

    p_fig = sub.add_parser("figure", help="canned figure bundle")
    p_fig.add_argument("--figure", required=True, choices=FIGURE_IDS)
    common(p_fig)

    p_cache = sub.add_parser("scaling-cache", help="tabulate F(x)/x")
    p_cache.add_argument("--out", type=Path, required=True,
                         help="output CSV path")
    p_cache.add_argument("--x-max", type=float, default=12.0)
    p_cache.add_argument("--dx", type=float, default=0.01)
    p_cache.add_argument("--n-theta", type=int, default=4096)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config, args.model)
            run_single(cfg, args.out, args.seed)
        elif args.command == "sweep":
            cfg = load_config(args.config, args.model)
            run_sweep(cfg, args.out, args.seed, args.threads)
        elif args.command == "figure":
            reproduce_figure(args.figure, args.out, args.threads)
        elif args.command == "scaling-cache":
            curve = build_scaling_curve(args.x_max, args.dx, args.n_theta)
            args.out.parent.mkdir(parents=True, exist_ok=True)
            curve.save_csv(args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ResonanceError, BasisOverflowError, ValueError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
