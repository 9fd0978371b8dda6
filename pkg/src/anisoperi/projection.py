"""Projections of convex bodies onto n-planes and minimal-shadow search.

The projection of a body onto a subspace is the Wulff shape of the
restricted support function, so shadow areas can be measured entirely
through support values.  The minimal projection W* is found by multi-start
Givens-rotation descent over orthonormal frames; minimality is certified
only where an analytic value exists (ellipsoids, axis-aligned products).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.spatial import ConvexHull

from .bodies import ConvexBody, Ellipsoid, HalfspacePolytope, ProductBody, ball_volume
from .frames import Frame
from .sampling import box_points, rng_stream, symmetric_directions


@dataclass
class ProjectionResult:
    frame: Frame
    area: float
    area_tol: float
    is_certified_min: bool
    stationary: bool
    analytic_min: float | None = None
    method: str = "givens-descent"

    def csv_row(self) -> list:
        row = list(np.round(self.frame.basis.T.reshape(-1), 12))
        row += [self.area, self.area_tol, int(self.is_certified_min)]
        return row


def projection_area(body: ConvexBody, plane: Frame, points: int = 200_000,
                    seed: int = 3, direction_budget: int = 2000):
    """Monte-Carlo n-volume of proj_P(body) with a standard-error estimate.

    Membership of shadow points is tested against the restricted support
    function (the shadow is its Wulff shape); sample points fill the shadow's
    axis bounding box with scrambled low-discrepancy replicates.
    """
    if plane.ambient_dim != body.dim:
        raise ValueError("frame does not match body dimension")
    k = plane.sub_dim
    phi = body.support_fn.restrict(plane)
    w = np.asarray(phi(np.eye(k)))
    if np.any(w <= 1e-14):
        return 0.0, 0.0  # degenerate: body has no width along the plane
    if k == 1:
        return 2.0 * float(w[0]), 0.0
    dirs = symmetric_directions(k, direction_budget)
    h = np.asarray(phi(dirs))
    box_vol = float(np.prod(2 * w))
    reps, per = 8, max(points // 8, 256)
    vals = np.empty(reps)
    vals_half = np.empty(reps)  # with half the directions: bias probe
    nh = len(dirs) // 2
    for r in range(reps):
        pts = box_points(-w, w, per, seed + 7919 * r)
        margins = pts @ dirs.T - h
        vals[r] = box_vol * np.mean(np.all(margins <= 0, axis=1))
        vals_half[r] = box_vol * np.mean(np.all(margins[:, :nh] <= 0, axis=1))
    se = float(vals.std(ddof=1) / math.sqrt(reps))
    # Sampled directions give an outer approximation of the shadow; the
    # excess shrinks with the budget, so the half-budget gap estimates it.
    bias = max(float(vals_half.mean() - vals.mean()), 0.0)
    return float(vals.mean()), se + bias


def ellipsoid_projection_area_exact(e: Ellipsoid, plane: Frame) -> float:
    """|B^k| sqrt(det(R^T Q diag(l^2) Q^T R)) for the frame's basis R."""
    m = plane.basis.T @ e.rotation @ np.diag(e.semi_axes)
    return ball_volume(plane.sub_dim) * math.sqrt(max(np.linalg.det(m @ m.T), 0.0))


def _support_polygon_area(phi, angles: int = 512) -> float:
    """Area of a 2-d convex body from its support function.

    Outer polygon bounded by support lines at uniformly spaced normals;
    O(angles^-2) accurate for smooth bodies, near-exact for polygons.
    """
    th = (np.arange(angles) + 0.5) * (2 * math.pi / angles)
    nu = np.column_stack([np.cos(th), np.sin(th)])
    h = np.asarray(phi(nu))
    nxt = np.roll(np.arange(angles), -1)
    det = nu[:, 0] * nu[nxt, 1] - nu[:, 1] * nu[nxt, 0]
    vx = (h * nu[nxt, 1] - h[nxt] * nu[:, 1]) / det
    vy = (h[nxt] * nu[:, 0] - h * nu[nxt, 0]) / det
    return 0.5 * float(np.sum(vx * (np.roll(vy, -1) - np.roll(vy, 1))))


def _polytope_shadow_area(poly: HalfspacePolytope, basis: np.ndarray) -> float:
    pts = poly.vertices @ basis
    return float(ConvexHull(pts).volume)


def _shadow_objective(body: ConvexBody, k: int, angles: int):
    """Fast deterministic area-of-shadow function used inside the search."""
    if isinstance(body, Ellipsoid):
        sa2 = body.rotation @ np.diag(body.semi_axes ** 2) @ body.rotation.T
        bk = ball_volume(k)

        def f(basis):
            return bk * math.sqrt(max(np.linalg.det(basis.T @ sa2 @ basis), 0.0))

        return f, "analytic"
    if k == 1:
        return (lambda basis: 2.0 * float(body.support(basis[:, 0]))), "support-width"
    if isinstance(body, HalfspacePolytope) and k == 2:
        return (lambda basis: _polytope_shadow_area(body, basis)), "vertex-hull"
    if k == 2:
        def f(basis):
            return _support_polygon_area(body.support_fn.restrict(Frame(basis)), angles)

        return f, "support-polygon"

    def f(basis):
        return projection_area(body, Frame(basis), points=8192)[0]

    return f, "monte-carlo"


def _givens(d: int, i: int, j: int, theta: float) -> np.ndarray:
    g = np.eye(d)
    c, s = math.cos(theta), math.sin(theta)
    g[i, i] = g[j, j] = c
    g[i, j], g[j, i] = -s, s
    return g


def _plane_rotation(a: np.ndarray, b: np.ndarray, theta: float) -> np.ndarray:
    """Rotation by theta in the plane spanned by orthonormal a, b."""
    c, s = math.cos(theta), math.sin(theta)
    outer_aa = np.outer(a, a)
    outer_bb = np.outer(b, b)
    return (np.eye(a.size) + (c - 1) * (outer_aa + outer_bb)
            + s * (np.outer(b, a) - np.outer(a, b)))


def _coordinate_frames(d: int, k: int):
    return [Frame.coordinate(d, axes) for axes in combinations(range(d), k)]


def _coordinate_shadow_exact(body: ConvexBody, axes: tuple):
    """Exact measure of the shadow onto a coordinate frame, if available."""
    k = len(axes)
    if k == 0:
        return 1.0
    fr = Frame.coordinate(body.dim, axes)
    if isinstance(body, Ellipsoid):
        return ellipsoid_projection_area_exact(body, fr)
    if isinstance(body, HalfspacePolytope):
        if k == 1:
            return 2.0 * float(body.support(fr.basis[:, 0]))
        pts = body.vertices @ fr.basis
        return float(ConvexHull(pts).volume)
    if isinstance(body, ProductBody):
        # Coordinate shadows of a product factor through the block structure.
        val = 1.0
        for factor, faxes in body.factors:
            sel = tuple(faxes.index(a) for a in axes if a in faxes)
            sub = _coordinate_shadow_exact(factor, sel)
            if sub is None:
                return None
            val *= sub
        return val
    return None


def _analytic_minimum(body: ConvexBody, k: int):
    """(value, frame) of the true minimal shadow where a closed form exists."""
    if isinstance(body, Ellipsoid):
        val = ball_volume(k) * float(np.prod(body.semi_axes[:k]))
        return val, body.principal_frame(range(k))
    axis_aligned = isinstance(body, HalfspacePolytope) and np.allclose(
        np.abs(body.normals), np.eye(body.dim)[np.argmax(np.abs(body.normals), axis=1)])
    if axis_aligned or isinstance(body, ProductBody):
        # Minimum over coordinate frames; for boxes and axis-aligned products
        # the facet-aligned shadow is the global minimum.
        best_val, best_fr = math.inf, None
        for axes in combinations(range(body.dim), k):
            v = _coordinate_shadow_exact(body, axes)
            if v is None:
                return None, None
            if v < best_val:
                best_val, best_fr = v, Frame.coordinate(body.dim, axes)
        return best_val, best_fr
    return None, None


def min_projection(body: ConvexBody, n: int, restarts: int = 32, rounds: int = 40,
                   seed: int = 0, angles: int = 256) -> ProjectionResult:
    """Search for an area-minimizing n-dimensional projection.

    Multi-start derivative-free descent: ambient Givens rotations in random
    coordinate pairs, step shrinking geometrically (factor 0.7).  Coordinate
    frames are always included among the starts so facet-aligned minima of
    product bodies are reachable exactly.
    """
    d = body.dim
    if not 0 < n < d:
        raise ValueError("need 0 < n < dim")
    f, method = _shadow_objective(body, n, angles)
    pairs = list(combinations(range(d), 2))
    rng = rng_stream(seed, 41)
    starts = [fr.basis for fr in _coordinate_frames(d, n)]
    extra = max(restarts - len(starts), 0)
    if extra:
        from .sampling import subspace_frames

        starts += list(subspace_frames(d, n, extra, seed + 1))

    best_val, best_basis, stationary = math.inf, None, False
    for basis in starts:
        u = np.array(basis)
        val = f(u)
        step = 0.4
        for _ in range(rounds):
            for _ in range(4):  # resweep at this step while it pays off
                improved = False
                rotations = [_givens(d, i, j, step) for i, j in pairs]
                # Random-plane rotations break coordinate-valley stalls when
                # the descent direction is not axis-aligned.
                for _ in range(2 * n):
                    q, _r = np.linalg.qr(rng.standard_normal((d, 2)))
                    rotations.append(_plane_rotation(q[:, 0], q[:, 1], step))
                for g in rotations:
                    for cand in (g @ u, g.T @ u):
                        v = f(cand)
                        if v < val - 1e-15:
                            u, val, improved = cand, v, True
                if not improved:
                    break
            step *= 0.7
            if step < 3e-8:
                break
        if val < best_val:
            best_val, best_basis = val, u
            stationary = step < 3e-8

    tol = getattr(body.support_fn, "tol", 0.0) + 1e-9 * max(best_val, 1.0)
    if method == "support-polygon":
        # Polish the winning value at a finer angular budget; report the
        # change as the discretization tolerance of this path.
        fine = _support_polygon_area(body.support_fn.restrict(Frame(best_basis)), 4096)
        tol += abs(best_val - fine)
        best_val = min(best_val, fine)
    analytic, _ = _analytic_minimum(body, n)
    certified = False
    if analytic is not None:
        certified = abs(best_val - analytic) <= max(1e-3 * analytic, tol)
    # re-orthonormalize against accumulated rotation round-off
    q, _ = np.linalg.qr(best_basis)
    return ProjectionResult(frame=Frame(q), area=float(best_val), area_tol=float(tol),
                            is_certified_min=bool(certified), stationary=bool(stationary),
                            analytic_min=analytic, method=method)


def ratio_rhs(body: ConvexBody, n: int, **kwargs) -> float:
    """n |W*|^{1/n}: the anisotropic ratio of any minimal projection."""
    res = min_projection(body, n, **kwargs)
    return n * res.area ** (1.0 / n)
