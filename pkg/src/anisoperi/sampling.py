"""Deterministic low-discrepancy sampling primitives.

All geometric oracles in this package classify points against direction
samples.  To keep every derived quantity reproducible, direction sets and
quasi-random point clouds come from seeded Sobol sequences: a caller that
passes the same (dim, count, seed) always receives the same array.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import qmc
from scipy.special import ndtri

# Canonical seed for the direction sets that back body oracles.  User-level
# seeds drive experiment sampling; oracle geometry must not move with them.
ORACLE_SEED = 20770


def _sobol(dim: int, count: int, seed: int) -> np.ndarray:
    eng = qmc.Sobol(d=dim, scramble=True, seed=seed)
    # Draw a power-of-2 batch (balance property), return the prefix.
    m = max(1, math.ceil(math.log2(count)))
    return eng.random_base2(m)[:count]


def sphere_directions(dim: int, count: int, seed: int = ORACLE_SEED) -> np.ndarray:
    """Quasi-uniform unit vectors on S^{dim-1}, shape (count, dim).

    Low-discrepancy uniforms are pushed through the Gaussian inverse CDF and
    normalized; the resulting set is deterministic for fixed seed and close
    to uniform in angle.  For dim == 1 the only directions are +-1.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if dim == 1:
        out = np.ones((count, 1))
        out[1::2, 0] = -1.0
        return out
    u = _sobol(dim, count, seed)
    g = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    norms = np.linalg.norm(g, axis=1)
    # A Sobol point may map to (almost) the zero vector; nudge it.
    bad = norms < 1e-9
    if np.any(bad):
        g[bad] = 1.0
        norms[bad] = np.sqrt(dim)
    return g / norms[:, None]


def symmetric_directions(dim: int, count: int, seed: int = ORACLE_SEED) -> np.ndarray:
    """Direction set closed under v -> -v (count rounded up to even)."""
    half = (count + 1) // 2
    d = sphere_directions(dim, half, seed)
    return np.vstack([d, -d])


def box_points(lo: np.ndarray, hi: np.ndarray, count: int, seed: int) -> np.ndarray:
    """Quasi-random points filling the axis box [lo, hi], shape (count, d)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    u = _sobol(lo.size, count, seed)
    return lo + u * (hi - lo)


def subspace_frames(ambient_dim: int, sub_dim: int, count: int,
                    seed: int) -> np.ndarray:
    """Quasi-random orthonormal frames, shape (count, ambient_dim, sub_dim).

    Gaussian matrices from the Sobol stream, orthonormalized by QR.  The
    induced distribution over the Grassmannian is uniform for true Gaussians
    and near-uniform here, which is all the search and audit code needs.
    """
    u = _sobol(ambient_dim * sub_dim, count, seed)
    g = ndtri(np.clip(u, 1e-12, 1 - 1e-12)).reshape(count, ambient_dim, sub_dim)
    frames = np.empty_like(g)
    for i in range(count):
        q, r = np.linalg.qr(g[i])
        # Fix the sign gauge so the frame is a deterministic function of g.
        q *= np.sign(np.diag(r) + (np.diag(r) == 0))
        frames[i] = q
    return frames


def rng_stream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator derived from a root seed and a purpose path."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=path))
