"""Hot inner loops, numba-compiled when available.

Two kernels dominate runtime: iterating the near-resonant classical map
over large ensembles, and batch-integrating pendulum trajectories for the
scaling-function quadrature.  Each exists in a plain-numpy vectorized form
and a numba ``@njit`` form; the exported names pick the numba path unless
``RATCHETSIM_NO_NUMBA=1`` is set (or numba is missing).

The benchmark in ``benchmarks/bench_kernels.py`` times both paths.
"""

import os

import numpy as np

# Yoshida 4th-order composition coefficients for the leapfrog substeps.
_W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_W0 = 1.0 - 2.0 * _W1

FORCE_NUMPY = os.environ.get("RATCHETSIM_NO_NUMBA", "0") not in ("", "0")

try:
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def prange(n):  # noqa: D103 - plain range when numba is absent
        return range(n)


def eps_map_mean_j_numpy(theta, J, weights, k_tilde, n_kicks):
    """Iterate theta' = theta + J, J' = J + k_tilde*sin(theta') over an
    ensemble, returning the weighted mean of J after 0..n_kicks kicks.

    theta and J are modified in place.
    """
    mean_j = np.empty(n_kicks + 1)
    mean_j[0] = weights @ J
    for t in range(1, n_kicks + 1):
        theta += J
        J += k_tilde * np.sin(theta)
        mean_j[t] = weights @ J
    return mean_j


def _eps_map_mean_j_loops(theta, J, weights, k_tilde, n_kicks):
    n = theta.shape[0]
    mean_j = np.empty(n_kicks + 1)
    acc = 0.0
    for i in range(n):
        acc += weights[i] * J[i]
    mean_j[0] = acc
    for t in range(1, n_kicks + 1):
        for i in prange(n):
            theta[i] += J[i]
            J[i] += k_tilde * np.sin(theta[i])
        # summed sequentially so the result does not depend on the
        # parallel chunking
        acc = 0.0
        for i in range(n):
            acc += weights[i] * J[i]
        mean_j[t] = acc
    return mean_j


def leapfrog_batch_numpy(theta, J, n_steps, h):
    """Advance the pendulum flow dtheta/ds = J, dJ/ds = sin(theta) by
    n_steps composite steps of size h (4th-order symplectic composition
    of velocity-Verlet substeps).  Arrays are modified in place.
    """
    for _ in range(n_steps):
        for w in (_W1, _W0, _W1):
            hh = w * h
            J += 0.5 * hh * np.sin(theta)
            theta += hh * J
            J += 0.5 * hh * np.sin(theta)
    return theta, J


def _leapfrog_batch_loops(theta, J, n_steps, h):
    n = theta.shape[0]
    h1 = _W1 * h
    h0 = _W0 * h
    for i in prange(n):
        th = theta[i]
        j = J[i]
        for _ in range(n_steps):
            for hh in (h1, h0, h1):
                j += 0.5 * hh * np.sin(th)
                th += hh * j
                j += 0.5 * hh * np.sin(th)
        theta[i] = th
        J[i] = j
    return theta, J


if HAVE_NUMBA:
    eps_map_mean_j_numba = njit(cache=True, parallel=True,
                                fastmath=False)(_eps_map_mean_j_loops)
    leapfrog_batch_numba = njit(cache=True, parallel=True,
                                fastmath=False)(_leapfrog_batch_loops)

if HAVE_NUMBA and not FORCE_NUMPY:
    eps_map_mean_j = eps_map_mean_j_numba
    leapfrog_batch = leapfrog_batch_numba
else:
    eps_map_mean_j = eps_map_mean_j_numpy
    leapfrog_batch = leapfrog_batch_numpy
