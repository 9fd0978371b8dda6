"""Centrally symmetric convex bodies with dual support/membership oracles.

Every body answers two questions: the support value sup{x.v : x in W} for a
unit direction v, and the gauge inf{t > 0 : x in tW} for a point x.  One of
the two is native to each construction (support for ellipsoids, polytopes,
products and hulls; gauge for intersections) and the other is derived
numerically with an explicit tolerance carried on the body.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.spatial import HalfspaceIntersection

from .frames import Frame
from .sampling import ORACLE_SEED, box_points, sphere_directions, symmetric_directions

DEFAULT_DIRECTION_BUDGET = 2000
IN, BOUNDARY, OUT = 1, 0, -1


def ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d: pi^{d/2} / Gamma(d/2 + 1)."""
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


class NonUnitDirectionWarning(UserWarning):
    pass


class SupportFunction:
    """Positively 1-homogeneous convex evaluator v -> sup{x.v : x in W}.

    evaluator acts on unit vectors, vectorized over the leading axes;
    homogeneity handles the rest.  tol is the absolute evaluation error
    (0 for closed forms).
    """

    def __init__(self, dim, evaluator, kind="closed-form", tol=0.0):
        self.dim = dim
        self.evaluator = evaluator
        self.kind = kind
        self.tol = float(tol)

    def __call__(self, dirs: np.ndarray) -> np.ndarray:
        v = np.asarray(dirs, dtype=float)
        squeeze = v.ndim == 1
        v = np.atleast_2d(v)
        norms = np.linalg.norm(v, axis=-1)
        if np.any(norms <= 0):
            raise ValueError("zero direction")
        vals = norms * self.evaluator(v / norms[..., None])
        return float(vals[0]) if squeeze else vals

    def restrict(self, plane: Frame) -> "SupportFunction":
        """Restriction to a subspace: the support function of the shadow."""
        if plane.ambient_dim != self.dim:
            raise ValueError("frame ambient dimension mismatch")
        basis_t = plane.basis.T

        def ev(unit_sub):
            return self.evaluator(np.asarray(unit_sub) @ basis_t)

        return SupportFunction(plane.sub_dim, ev,
                               kind=f"restricted({self.kind})", tol=self.tol)

    @staticmethod
    def pointwise_max(a: "SupportFunction", b: "SupportFunction") -> "SupportFunction":
        if a.dim != b.dim:
            raise ValueError("dimension mismatch")

        def ev(unit):
            return np.maximum(a.evaluator(unit), b.evaluator(unit))

        return SupportFunction(a.dim, ev, kind="max", tol=max(a.tol, b.tol))

    def convexity_violation(self, pairs: int = 200, seed: int = 7) -> float:
        """Max of h(v1+v2) - h(v1) - h(v2) over random pairs (<= 0 if convex)."""
        d1 = sphere_directions(self.dim, pairs, seed)
        d2 = sphere_directions(self.dim, pairs, seed + 1)
        s = d1 + d2
        keep = np.linalg.norm(s, axis=1) > 1e-9
        return float(np.max(self(s[keep]) - self(d1[keep]) - self(d2[keep])))

    def symmetry_violation(self, count: int = 200, seed: int = 11) -> float:
        d = sphere_directions(self.dim, count, seed)
        return float(np.max(np.abs(self(d) - self(-d))))


class ConvexBody:
    """Base class; subclasses fill in support/gauge and declare exactness."""

    dim: int
    support_fn: SupportFunction
    support_tol: float = 0.0
    gauge_tol: float = 0.0  # relative band on gauge values
    provenance: dict

    def support(self, dirs) -> np.ndarray:
        return self.support_fn(dirs)

    def gauge(self, points) -> np.ndarray:
        raise NotImplementedError

    # -- derived geometry ---------------------------------------------------

    def axis_widths(self) -> np.ndarray:
        """Half-width h(e_i) along each coordinate axis."""
        return np.asarray(self.support(np.eye(self.dim)))

    def circumradius_estimate(self, budget: int = 512) -> float:
        return float(np.max(self.support(sphere_directions(self.dim, budget))))

    def inradius_estimate(self, budget: int = 512) -> float:
        return float(np.min(self.support(sphere_directions(self.dim, budget))))

    def diameter_estimate(self) -> float:
        return 2.0 * self.circumradius_estimate()

    def boundary_band(self) -> float:
        """Relative gauge band equivalent to the 1e-6 * diam length default."""
        return 1e-6 * self.diameter_estimate() / max(self.inradius_estimate(), 1e-300)

    def classify(self, points, band: float | None = None) -> np.ndarray:
        """IN / BOUNDARY / OUT codes per point (vectorized)."""
        pts = np.asarray(points, dtype=float)
        squeeze = pts.ndim == 1
        g = self.gauge(np.atleast_2d(pts))
        if band is None:
            band = self.boundary_band()
        codes = np.where(g <= 1 - band, IN, np.where(g >= 1 + band, OUT, BOUNDARY))
        return int(codes[0]) if squeeze else codes

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self.gauge(pts) <= 1.0

    def sample_interior(self, count: int, seed: int) -> np.ndarray:
        """Quasi-random interior points by rejection inside the axis box."""
        w = self.axis_widths()
        out = []
        got, batch, stream = 0, max(4 * count, 1024), 0
        while got < count:
            pts = box_points(-w, w, batch, seed + 1000 * stream)
            acc = pts[self.gauge(pts) <= 1.0]
            out.append(acc)
            got += len(acc)
            stream += 1
            if stream > 64 and got == 0:
                raise RuntimeError("rejection sampling found no interior points")
        return np.vstack(out)[:count]

    def volume_estimate(self, count: int = 200_000, seed: int = 3) -> tuple[float, float]:
        """Monte-Carlo volume with a replicate-based standard error."""
        w = self.axis_widths()
        box_vol = float(np.prod(2 * w))
        reps = 8
        vals = []
        for r in range(reps):
            pts = box_points(-w, w, count // reps, seed + r)
            vals.append(box_vol * float(np.mean(self.gauge(pts) <= 1.0)))
        vals = np.asarray(vals)
        return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(reps))


class Ellipsoid(ConvexBody):
    """Origin-centered ellipsoid {x : |diag(1/l) Q^T x| <= 1}.

    semi_axes are sorted nondecreasing; rotation columns are the principal
    axis directions and get permuted along with the sort.
    """

    def __init__(self, semi_axes, rotation=None):
        lam = np.asarray(semi_axes, dtype=float)
        if lam.ndim != 1 or np.any(lam <= 0):
            raise ValueError("semi-axes must be positive")
        d = lam.size
        if rotation is None:
            rot = np.eye(d)
        else:
            rot = np.asarray(rotation, dtype=float)
            if rot.shape != (d, d) or not np.allclose(rot.T @ rot, np.eye(d), atol=1e-12):
                raise ValueError("rotation must be orthogonal (1e-12)")
        order = np.argsort(lam, kind="stable")
        self.semi_axes = lam[order]
        self.rotation = rot[:, order]
        self.dim = d
        self._A = np.diag(1.0 / self.semi_axes) @ self.rotation.T  # body -> unit ball
        self._SA = np.diag(self.semi_axes) @ self.rotation.T       # for support
        self.provenance = {"kind": "ellipsoid", "semi_axes": self.semi_axes.tolist()}
        self.support_fn = SupportFunction(d, self._support_unit, kind="ellipsoid")

    def _support_unit(self, unit):
        return np.linalg.norm(np.asarray(unit) @ self._SA.T, axis=-1)

    def gauge(self, points):
        return np.linalg.norm(np.atleast_2d(points) @ self._A.T, axis=-1)

    def volume(self) -> float:
        return ball_volume(self.dim) * float(np.prod(self.semi_axes))

    def boundary_points(self, count: int, seed: int = 5) -> np.ndarray:
        u = sphere_directions(self.dim, count, seed)
        return u @ self._SA  # Q diag(l) u

    def principal_frame(self, axes) -> Frame:
        """Frame spanned by the principal directions with the given indices."""
        return Frame(self.rotation[:, list(axes)])


def Ball(dim: int, radius: float = 1.0) -> Ellipsoid:
    return Ellipsoid([radius] * dim)


class HalfspacePolytope(ConvexBody):
    """Bounded symmetric polytope {x : |a_i . x| <= b_i}."""

    def __init__(self, normals, offsets):
        a = np.atleast_2d(np.asarray(normals, dtype=float))
        b = np.asarray(offsets, dtype=float)
        if a.shape[0] != b.size or np.any(b <= 0):
            raise ValueError("need one positive offset per normal")
        norms = np.linalg.norm(a, axis=1)
        if np.any(norms <= 0):
            raise ValueError("zero normal")
        self.normals = a / norms[:, None]
        self.offsets = b / norms
        self.dim = a.shape[1]
        # Two-sided constraints: bounded iff the normals span R^d.
        if np.linalg.matrix_rank(self.normals, tol=1e-10) < self.dim:
            raise ValueError("polytope is unbounded: normals do not span R^d")
        self._vertices = None
        self.provenance = {"kind": "polytope", "facets": int(b.size)}
        self.support_fn = SupportFunction(self.dim, self._support_unit, kind="polytope")

    @property
    def vertices(self) -> np.ndarray:
        if self._vertices is None:
            half = np.vstack([
                np.hstack([self.normals, -self.offsets[:, None]]),
                np.hstack([-self.normals, -self.offsets[:, None]]),
            ])
            hs = HalfspaceIntersection(half, np.zeros(self.dim))
            self._vertices = hs.intersections
        return self._vertices

    def _support_unit(self, unit):
        return np.max(np.asarray(unit) @ self.vertices.T, axis=-1)

    def gauge(self, points):
        scaled = np.abs(np.atleast_2d(points) @ self.normals.T) / self.offsets
        return np.max(scaled, axis=-1)


def cube(dim: int, half_width: float = 1.0) -> HalfspacePolytope:
    return HalfspacePolytope(np.eye(dim), np.full(dim, half_width))


def cross_polytope(dim: int, scale: float = 1.0) -> HalfspacePolytope:
    """{x : |x|_1 <= scale}; facet normals are the sign vectors."""
    signs = np.array(np.meshgrid(*([[1.0, -1.0]] * dim))).reshape(dim, -1).T
    signs = signs[signs[:, 0] > 0]  # one representative per +- pair
    return HalfspacePolytope(signs, np.full(len(signs), scale))


class ProductBody(ConvexBody):
    """Orthogonal product of bodies living on disjoint coordinate blocks."""

    def __init__(self, factors):
        # factors: list of (body, axes tuple)
        axes_seen = []
        for _, axes in factors:
            axes_seen.extend(axes)
        dim = len(axes_seen)
        if sorted(axes_seen) != list(range(dim)):
            raise ValueError("factor axes must partition 0..d-1")
        self.factors = [(body, tuple(axes)) for body, axes in factors]
        for body, axes in self.factors:
            if body.dim != len(axes):
                raise ValueError("factor dimension mismatch")
        self.dim = dim
        self.provenance = {"kind": "product",
                           "factors": [b.provenance for b, _ in self.factors]}
        self.support_fn = SupportFunction(dim, self._support_unit, kind="product")

    def _support_unit(self, unit):
        u = np.asarray(unit)
        total = np.zeros(u.shape[:-1])
        for body, axes in self.factors:
            sub = u[..., list(axes)]
            norms = np.linalg.norm(sub, axis=-1)
            pos = norms > 1e-15
            vals = np.zeros_like(norms)
            if np.any(pos):
                vals[pos] = norms[pos] * body.support_fn.evaluator(
                    sub[pos] / norms[pos][..., None])
            total = total + vals
        return total

    def gauge(self, points):
        pts = np.atleast_2d(points)
        g = np.zeros(pts.shape[0])
        for body, axes in self.factors:
            g = np.maximum(g, body.gauge(pts[:, list(axes)]))
        return g


def cylinder(radius: float, half_height: float) -> ProductBody:
    """B^2(radius) x [-half_height, half_height] in R^3."""
    return ProductBody([(Ball(2, radius), (0, 1)), (Ellipsoid([half_height]), (2,))])


class WulffBody(ConvexBody):
    """Body defined by a support function; membership derived by sampling.

    The gauge is max over sampled directions of (x.v)/h(v), an outer
    approximation: points within O(covering radius * diam) outside the
    boundary can classify as inside.  The band is reported via gauge_tol.
    """

    def __init__(self, support_fn: SupportFunction, provenance=None,
                 direction_budget: int = DEFAULT_DIRECTION_BUDGET,
                 seed: int = ORACLE_SEED):
        self.dim = support_fn.dim
        self.support_fn = support_fn
        self.support_tol = support_fn.tol
        self.provenance = provenance or {"kind": "wulff"}
        self._dirs = symmetric_directions(self.dim, direction_budget, seed)
        self._hvals = np.asarray(support_fn(self._dirs))
        if np.any(self._hvals <= 0):
            raise ValueError("support function must be positive")
        # The sampled gauge underestimates the true gauge; "in" answers can
        # be wrong within a band set by the covering radius ~ N^{-1/(d-1)}.
        n = len(self._dirs)
        self.outer_tolerance_rel = 2.0 * n ** (-1.0 / max(self.dim - 1, 1))

    def gauge(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.max(pts @ self._dirs.T / self._hvals, axis=-1)


class SampledSupportBody(ConvexBody):
    """Body with native (exact) gauge; support derived from interior samples.

    Per-direction queries take the best cloud point and push it to the
    boundary along the query direction by bisection on the gauge.
    """

    def __init__(self, dim, gauge_fn, box_halfwidths, provenance=None,
                 cloud_size: int = 2 ** 14, seed: int = ORACLE_SEED):
        self.dim = dim
        self._gauge_fn = gauge_fn
        self.provenance = provenance or {"kind": "sampled-support"}
        w = np.asarray(box_halfwidths, dtype=float)
        pts = box_points(-w, w, cloud_size, seed + 17)
        cloud = pts[gauge_fn(pts) <= 1.0]
        if len(cloud) < 32:
            raise ValueError("membership oracle accepts too few box samples")
        self._cloud = cloud
        diam = 2 * float(np.max(np.linalg.norm(cloud, axis=1)))
        self.support_tol = diam * len(cloud) ** (-1.0 / dim)
        self.support_fn = SupportFunction(dim, self._support_unit,
                                          kind="sampled", tol=self.support_tol)

    def gauge(self, points):
        return self._gauge_fn(np.atleast_2d(np.asarray(points, dtype=float)))

    def _push_to_boundary(self, starts, unit_dir):
        # Largest t with gauge(p + t * dir) <= 1, per start point.
        lo = np.zeros(len(starts))
        hi = np.full(len(starts), 4.0 * float(np.max(np.abs(self._cloud))) + 1.0)
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            inside = self._gauge_fn(starts + mid[:, None] * unit_dir) <= 1.0
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        return lo

    def _support_unit(self, unit):
        u = np.atleast_2d(np.asarray(unit))
        out = np.empty(u.shape[0])
        dots_all = self._cloud @ u.T
        for i, v in enumerate(u):
            top = np.argsort(dots_all[:, i])[-4:]
            starts = self._cloud[top]
            t = self._push_to_boundary(starts, v)
            out[i] = np.max((starts + t[:, None] * v) @ v)
        return out.reshape(np.asarray(unit).shape[:-1])


def support_of_ellipsoid(e: Ellipsoid, nu) -> float:
    """Support value of an ellipsoid: |diag(l) Q^T nu| for unit nu."""
    v = np.asarray(nu, dtype=float)
    norm = np.linalg.norm(v)
    if norm <= 0:
        raise ValueError("zero direction")
    if abs(norm - 1.0) > 1e-9:
        warnings.warn("direction was not unit; normalized", NonUnitDirectionWarning)
        v = v / norm
    return float(np.linalg.norm(e._SA @ v))


def wulff_membership(phi: SupportFunction, x, direction_budget: int = DEFAULT_DIRECTION_BUDGET,
                     tol: float | None = None) -> str:
    """Classify a point against the Wulff shape of phi by direction sampling.

    Outer approximation: "in" can misclassify points within
    O(covering radius * diam) of the boundary.
    """
    body = WulffBody(phi, direction_budget=direction_budget)
    band = tol if tol is not None else body.boundary_band()
    code = body.classify(np.asarray(x, dtype=float), band=band)
    return {IN: "in", BOUNDARY: "boundary", OUT: "out"}[int(code)]


def support_restrict(phi: SupportFunction, plane: Frame) -> SupportFunction:
    """Restriction of a support function to a subspace frame."""
    return phi.restrict(plane)
