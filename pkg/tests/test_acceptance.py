"""End-to-end acceptance checks.

Each criterion prints one PASS/FAIL line (run pytest with ``-s`` to see
them) and asserts at the stated tolerance, so the module doubles as a
human-readable report and a hard gate.
"""

import math

import numpy as np
import pytest

from ratchetsim.betaspread import (quantum_beta_average,
                                   suppressed_resonant_current)
from ratchetsim.epsmap import ensemble_current
from ratchetsim.model import RatchetParams
from ratchetsim.pendulum import default_curve, scaling_F
from ratchetsim.quantum import evolve, mean_current


def report(criterion, ok, detail):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def curve():
    return default_curve()


def quantum_final_current(phi_d, eps, gamma, t):
    p = RatchetParams(phi_d=phi_d, eps=eps, gamma=gamma, kicks=t)
    return mean_current(evolve(p))[-1]


def quantum_scaled(phi_d, eps, gamma, t):
    return quantum_final_current(phi_d, eps, gamma, t) / (
        -phi_d * t * math.sin(gamma))


def test_criterion_1_resonant_ramp():
    worst = 0.0
    for phi_d in (1.3, 2.6):
        for gamma in (-math.pi / 2, -math.pi / 3):
            p = RatchetParams(phi_d=phi_d, eps=0.0, gamma=gamma, kicks=20)
            cur = mean_current(evolve(p))
            expect = -(phi_d / 2) * math.sin(gamma) * np.arange(21)
            worst = max(worst, float(np.max(np.abs(cur - expect))))
    report(1, worst < 1e-6,
           f"resonant ramp worst |error| = {worst:.3g} (tol 1e-6)")


def test_criterion_2_small_x_limit():
    val = scaling_F(0.01) / 0.01
    report(2, abs(val - 0.5) < 1e-4,
           f"F(x)/x at x = 0.01 is {val:.8f} (want 0.5 +- 1e-4)")


def test_criterion_3_scaling_collapse(curve):
    # 12 parameter sets: 9 t-scans, 2 eps-scans, 1 phi_d-scan.  The grids
    # stay inside the pendulum-approximation validity window (resonant
    # island wide compared to |eps|, enough kicks for the continuous-time
    # limit): t-scans use t = 5..15 and |eps| <= 0.12, the phi_d scan uses
    # phi_d >= 1.8 at |eps| = 0.18.
    t_scan_combos = [(2.6, 0.11, -math.pi / 2), (2.6, 0.08, -math.pi / 2),
                     (3.0, 0.10, -math.pi / 3), (2.6, 0.05, -math.pi / 2),
                     (3.0, 0.06, -math.pi / 3), (2.6, 0.12, -math.pi / 3),
                     (3.0, 0.12, -math.pi / 2), (2.6, 0.09, -math.pi / 3),
                     (3.0, 0.08, -math.pi / 2)]
    sets = {}
    for phi_d, eps, gamma in t_scan_combos:
        pts = []
        for t in range(5, 16):
            p = RatchetParams(phi_d=phi_d, eps=eps, gamma=gamma, kicks=t)
            if p.x <= 8.0:
                pts.append((p.x, quantum_scaled(phi_d, eps, gamma, t)))
        sets[f"t-scan phi{phi_d} eps{eps} g{gamma:.2f}"] = pts
    for t, phi_d in ((8, 3.0), (10, 2.6)):
        pts = []
        for eps in np.arange(0.01, 0.2001, 0.01):
            p = RatchetParams(phi_d=phi_d, eps=float(eps),
                              gamma=-math.pi / 2, kicks=t)
            if p.x <= 8.0:
                pts.append((p.x, quantum_scaled(phi_d, float(eps),
                                                -math.pi / 2, t)))
        sets[f"eps-scan t{t} phi{phi_d}"] = pts
    pts = []
    for phi_d in np.arange(1.8, 3.001, 0.1):
        p = RatchetParams(phi_d=float(phi_d), eps=0.18,
                          gamma=-math.pi / 2, kicks=8)
        if p.x <= 8.0:
            pts.append((p.x, quantum_scaled(float(phi_d), 0.18,
                                            -math.pi / 2, 8)))
    sets["phi-scan eps0.18 t8"] = pts

    assert len(sets) >= 12
    worst_theory = 0.0
    for pts in sets.values():
        for x, val in pts:
            worst_theory = max(worst_theory, abs(val - float(curve(x))))

    worst_pair = 0.0
    names = list(sets)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            for xa, va in sets[a]:
                for xb, vb in sets[b]:
                    if abs(xa - xb) <= 0.05:
                        worst_pair = max(worst_pair, abs(va - vb))

    ok = worst_theory < 0.1 and worst_pair < 0.05
    report(3, ok, f"{len(sets)} sets: worst deviation from F(x)/x = "
                  f"{worst_theory:.4f} (tol 0.1), worst same-x spread = "
                  f"{worst_pair:.4f} (tol 0.05)")


def test_criterion_4_current_inversion(curve):
    phi_d, gamma, t = 2.6, -math.pi / 2, 10
    eps_grid = np.arange(0.035, 0.2001, 0.0025)
    xs = np.sqrt(phi_d * eps_grid) * t
    vals = np.array([quantum_scaled(phi_d, float(e), gamma, t)
                     for e in eps_grid])
    crosses = bool(np.any(vals < 0) and np.any(vals > 0))
    x_min_quantum = float(xs[np.argmin(vals)])
    x_min_pendulum, _ = curve.minimum()
    ok = (crosses and abs(x_min_quantum - 5.6) <= 0.5
          and abs(x_min_pendulum - 5.6) <= 0.5)
    report(4, ok, f"quantum minimum at x = {x_min_quantum:.3f}, pendulum "
                  f"minimum at x = {x_min_pendulum:.3f} (want 5.6 +- 0.5), "
                  f"zero crossing observed = {crosses}")


def test_criterion_5_eps_classical_vs_quantum():
    combos = [(2.6, 0.035, -math.pi / 2), (2.6, 0.1, -math.pi / 2),
              (1.3, 0.07, -math.pi / 3), (2.6, 0.2, -math.pi / 2),
              (3.0, 0.15, -math.pi / 3)]
    worst_ratio = 0.0
    for phi_d, eps, gamma in combos:
        p = RatchetParams(phi_d=phi_d, eps=eps, gamma=gamma, kicks=10)
        q = mean_current(evolve(p))
        c = ensemble_current(p)
        for t in range(1, 11):
            bound = 0.15 * phi_d * t * abs(math.sin(gamma))
            worst_ratio = max(worst_ratio, abs(q[t] - c[t]) / bound)
    report(5, worst_ratio < 1.0,
           f"worst |quantum - classical| / (0.15 phi_d t |sin gamma|) = "
           f"{worst_ratio:.3f} over {len(combos)} parameter sets")


def test_criterion_6_beta_spread_cross_validation():
    phi_d, gamma, t, db = 1.3, -math.pi / 3, 16, 0.02
    p = RatchetParams(phi_d=phi_d, eps=0.0, gamma=gamma, kicks=t)
    ens = quantum_beta_average(p, db, 32)
    formula = suppressed_resonant_current(phi_d, 1, p.tau, 0.5, gamma, db, t)
    worst = float(np.max(np.abs(ens[1:] - formula)))
    zero_case = quantum_beta_average(p, 0.0)
    ramp = -(phi_d / 2) * math.sin(gamma) * np.arange(t + 1)
    worst_zero = float(np.max(np.abs(zero_case - ramp)))
    ok = worst < 0.1 and worst_zero < 1e-6
    report(6, ok, f"ensemble vs formula worst |error| = {worst:.3g} "
                  f"(tol 0.1); delta_beta = 0 ramp error = {worst_zero:.3g} "
                  f"(tol 1e-6)")


def test_criterion_7_family_ordering():
    phi_d, gamma = 1.3, -math.pi / 3
    firsts = []
    for eps in (0.006, 0.04, 0.07, 0.09, 0.19):
        p = RatchetParams(phi_d=phi_d, eps=eps, gamma=gamma, kicks=80)
        cur = mean_current(evolve(p))
        neg = np.nonzero(cur[1:] < 0)[0]
        firsts.append(int(neg[0]) + 1 if len(neg) else None)
    ok = (all(f is not None for f in firsts)
          and all(a > b for a, b in zip(firsts, firsts[1:])))
    report(7, ok, f"first negative kick per |eps| family = {firsts} "
                  f"(must be strictly decreasing)")


def test_criterion_8_property_suites():
    rng = np.random.default_rng(0)
    checks = {}

    # unitarity across a long off-resonant run
    from ratchetsim.quantum import free_evolution, kick, make_initial_state
    st = make_initial_state(-math.pi / 2, 0.5, 128)
    for _ in range(50):
        st = kick(free_evolution(st, 2 * math.pi + 0.1), 6.0)
    checks["unitarity"] = abs(st.norm() - 1.0) < 1e-10

    # kick operator equals the dense Bessel matrix
    from scipy.special import jv
    from ratchetsim.quantum import QuantumState
    amps = np.zeros(129, dtype=complex)
    amps[56:73] = rng.normal(size=17) + 1j * rng.normal(size=17)
    amps /= np.linalg.norm(amps)
    st = QuantumState(amps, 0.5)
    out = kick(st, 2.6)
    n = st.n_values
    diff = n[:, None] - n[None, :]
    mat = (-1j) ** (diff % 4) * jv(diff, 2.6)
    expect = mat @ st.amplitudes
    No = out.basis_size
    checks["bessel_matrix"] = (
        np.linalg.norm(out.amplitudes[No - 64:No + 65] - expect) < 1e-9)

    # classical map preserves phase-space volume
    h = 1e-6
    theta = rng.uniform(-math.pi, math.pi, 1000)
    J = rng.uniform(-2, 2, 1000)

    def step(th, j, k=0.5):
        th2 = th + j
        return th2, j + k * np.sin(th2)

    t_pt, j_pt = step(theta + h, J)
    t_mt, j_mt = step(theta - h, J)
    t_pj, j_pj = step(theta, J + h)
    t_mj, j_mj = step(theta, J - h)
    det = ((t_pt - t_mt) * (j_pj - j_mj)
           - (t_pj - t_mj) * (j_pt - j_mt)) / (4 * h * h)
    checks["volume_preservation"] = bool(np.max(np.abs(det - 1.0)) < 1e-6)

    # pendulum integrator conserves energy to 1e-8 per unit time
    from ratchetsim.pendulum import PendulumPoint, pendulum_flow
    worst = 0.0
    for _ in range(10):
        th0 = rng.uniform(-math.pi, math.pi)
        j0 = rng.uniform(-3, 3)
        e0 = PendulumPoint(th0, j0).energy
        pt = pendulum_flow(th0, j0, 10.0)
        worst = max(worst, abs(pt.energy - e0) / 10.0)
    checks["energy_conservation"] = worst < 1e-8

    # initial angular density has the stated Fourier moments
    from scipy.integrate import quad
    from ratchetsim.model import initial_density
    ok_moments = True
    for gamma in (0.4, -math.pi / 2, 2.0):
        total, _ = quad(initial_density, -math.pi, math.pi, args=(gamma,))
        s, _ = quad(lambda th: initial_density(th, gamma) * math.sin(th),
                    -math.pi, math.pi)
        ok_moments &= abs(total - 1.0) < 1e-10
        ok_moments &= abs(s + 0.5 * math.sin(gamma)) < 1e-10
    checks["density_moments"] = ok_moments

    failed = [k for k, v in checks.items() if not v]
    report(8, not failed,
           f"property suites {'all pass' if not failed else failed}: "
           + ", ".join(checks))
