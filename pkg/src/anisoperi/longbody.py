"""Gluing and cutting of convex bodies along area-minimizing projections.

Both operations must be performed along a plane whose shadow is already
area-minimizing for the input body; operations along other planes are
rejected, which is exactly what rules out shapes like the short cylinder.
Gluing takes a support-function payload (the hull is then a pointwise max,
exact); cutting intersects with a prism over a subset of the shadow and is
membership-natural.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import (ConvexBody, Ellipsoid, HalfspacePolytope, SampledSupportBody,
                     SupportFunction, WulffBody)
from .frames import Frame
from .projection import ellipsoid_projection_area_exact, min_projection, projection_area
from .sampling import symmetric_directions


class LongBodyError(ValueError):
    pass


@dataclass
class LongBodyOp:
    kind: str                      # "glue" | "cut"
    plane: Frame                   # n-dimensional projection subspace
    payload: object = None         # glue: ConvexBody; cut: shrink float or HalfspacePolytope

    def __post_init__(self):
        if self.kind not in ("glue", "cut"):
            raise LongBodyError(f"unknown long-body op {self.kind!r}")


def _plane_shadow_area(body: ConvexBody, plane: Frame) -> float:
    if isinstance(body, Ellipsoid):
        return ellipsoid_projection_area_exact(body, plane)
    return projection_area(body, plane, points=100_000)[0]


def check_min_projection_plane(body: ConvexBody, plane: Frame, rtol: float = 0.02,
                               restarts: int = 12, seed: int = 0) -> float:
    """Reject planes that are not area-minimizing within search tolerance."""
    res = min_projection(body, plane.sub_dim, restarts=restarts, seed=seed)
    target = res.analytic_min if res.analytic_min is not None else res.area
    ours = _plane_shadow_area(body, plane)
    if ours > target * (1 + rtol) + res.area_tol:
        raise LongBodyError(
            "plane is not an area-minimizing projection: shadow "
            f"{ours:.6g} vs minimum {target:.6g} (necessary condition)")
    return ours


def shadow_gauge_function(body: ConvexBody, plane: Frame, direction_budget: int = 2000):
    """Gauge of proj_plane(body) in plane coordinates (exact for ellipsoids)."""
    if isinstance(body, Ellipsoid):
        m = plane.basis.T @ body.rotation @ np.diag(body.semi_axes)
        shadow_inv = np.linalg.inv(m @ m.T)
        chol = np.linalg.cholesky(shadow_inv)

        def gauge(p):
            return np.linalg.norm(np.atleast_2d(p) @ chol, axis=-1)

        return gauge
    phi = body.support_fn.restrict(plane)
    dirs = symmetric_directions(plane.sub_dim, direction_budget)
    h = np.asarray(phi(dirs))

    def gauge(p):
        return np.max(np.atleast_2d(p) @ dirs.T / h, axis=-1)

    return gauge


def glue(body: ConvexBody, op: LongBodyOp, rtol: float = 0.02, seed: int = 0) -> ConvexBody:
    """Convex hull of body and payload, constrained to leave proj_P unchanged.

    The hull of two bodies given by support functions has support equal to
    the pointwise max, so the result is exact on the support side.
    """
    if op.kind != "glue":
        raise LongBodyError("expected a glue op")
    payload = op.payload
    if not isinstance(payload, ConvexBody) or payload.dim != body.dim:
        raise LongBodyError("glue payload must be a body of the same dimension")
    check_min_projection_plane(body, op.plane, rtol=rtol, seed=seed)
    # Shadow must not grow: support restricted to the plane agrees before/after.
    dirs = symmetric_directions(op.plane.sub_dim, 2000)
    h_body = np.asarray(body.support_fn.restrict(op.plane)(dirs))
    h_pay = np.asarray(payload.support_fn.restrict(op.plane)(dirs))
    tol = body.support_fn.tol + payload.support_fn.tol + 1e-9 * float(np.max(h_body))
    excess = float(np.max(h_pay - h_body))
    if excess > tol:
        raise LongBodyError(
            f"glue would change the projection: restricted support grows by {excess:.3g}")
    merged = SupportFunction.pointwise_max(body.support_fn, payload.support_fn)
    out = WulffBody(merged, provenance={"kind": "glue"})
    out.provenance = {"kind": "glue", "base": body, "payload": payload, "plane": op.plane}
    return out


def cut(body: ConvexBody, op: LongBodyOp, rtol: float = 0.02, seed: int = 0) -> ConvexBody:
    """Intersection of body with the prism over a subset S of its shadow."""
    if op.kind != "cut":
        raise LongBodyError("expected a cut op")
    plane = op.plane
    check_min_projection_plane(body, plane, rtol=rtol, seed=seed)
    shadow_gauge = shadow_gauge_function(body, plane)

    payload = op.payload
    if isinstance(payload, (int, float)):
        shrink = float(payload)
        if not 0 < shrink <= 1:
            raise LongBodyError("shrink factor must lie in (0, 1]")

        def s_gauge(p):
            return shadow_gauge(p) / shrink

        payload_desc = {"shrink": shrink}
    elif isinstance(payload, HalfspacePolytope):
        if payload.dim != plane.sub_dim:
            raise LongBodyError("cut polytope must live in the plane")
        # S must sit inside the shadow: compare supports on sampled directions.
        dirs = symmetric_directions(plane.sub_dim, 2000)
        h_shadow = np.asarray(body.support_fn.restrict(plane)(dirs))
        h_s = np.asarray(payload.support_fn(dirs))
        if float(np.max(h_s - h_shadow)) > body.support_fn.tol + 1e-9:
            raise LongBodyError("cut region is not contained in the projection")
        s_gauge = payload.gauge
        payload_desc = {"polytope": payload}
    else:
        raise LongBodyError("cut payload must be a shrink factor or a polytope")

    basis = plane.basis

    def gauge(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.maximum(body.gauge(pts), s_gauge(pts @ basis))

    out = SampledSupportBody(body.dim, gauge, body.axis_widths(),
                             provenance={"kind": "cut"})
    out.provenance = {"kind": "cut", "base": body, "plane": plane, **payload_desc}
    return out


def generating_ellipsoid(body: ConvexBody) -> Ellipsoid | None:
    """Root ellipsoid of a glue/cut provenance tree, if there is one."""
    seen = body
    while True:
        if isinstance(seen, Ellipsoid):
            return seen
        prov = getattr(seen, "provenance", {})
        if prov.get("kind") in ("glue", "cut") and isinstance(prov.get("base"), ConvexBody):
            seen = prov["base"]
            continue
        return None
