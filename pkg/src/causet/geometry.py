"""Exactly computable unit-volume Cauchy-slab geometries.

Every model exposes the causal relation, a signed time-separation
function, uniform-by-volume sampling, and analytic region volumes where
closed forms exist.  Charts put the time coordinate first; spatial
coordinates are angles on a flat circle (cylinder models) or lightcone
coordinates (the square model).  Total volume is normalized to 1.

Models are immutable after construction and all queries are pure, so
they are safe for concurrent use; randomness enters only through
caller-supplied generators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import CapabilityError, DomainError, EstimationError
from .seeding import substream


@dataclass(frozen=True)
class Point:
    """A chart point: time coordinate first, spatial coordinates after."""

    coords: tuple

    def __iter__(self):
        return iter(self.coords)


def as_coords(x) -> np.ndarray:
    """Coerce a Point or coordinate sequence to a 1-d float array."""
    if isinstance(x, Point):
        x = x.coords
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a single point, got shape {arr.shape}")
    return arr


def as_coord_array(pts) -> np.ndarray:
    """Coerce a list of points (or an (n, dim) array) to a 2-d float array."""
    if isinstance(pts, np.ndarray) and pts.ndim == 2:
        return pts.astype(float, copy=False)
    rows = [as_coords(p) for p in pts]
    return np.asarray(rows, dtype=float)


def circle_distance(a, b, circumference: float):
    """Shortest distance between angles a, b on a circle of given circumference."""
    d = np.abs(np.asarray(a) - np.asarray(b)) % circumference
    return np.minimum(d, circumference - d)


class SpacetimeModel:
    """Base class: scalar operations wrap the vectorized primitives."""

    dimension: int = 2
    total_volume: float = 1.0
    tau_is_lower_bound: bool = False
    tdiam_is_exact: bool = True
    has_flip: bool = False

    # -- chart -------------------------------------------------------------

    def contains(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check_inside(self, *points):
        for p in points:
            c = as_coords(p)
            if c.shape[0] != self.dimension:
                raise DomainError(f"point has {c.shape[0]} coordinates, chart needs {self.dimension}")
            if not bool(self.contains(c[None, :])[0]):
                raise DomainError(f"point {tuple(c)} outside chart domain of {self.kind}")

    # -- vectorized primitives ----------------------------------------------
    #
    # Models implement the *_pairs forms, which broadcast over leading axes
    # of (..., dimension) coordinate arrays; cross and per-trial block forms
    # derive from them.

    def leq_pairs(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def tau_signed_pairs(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def flip_pairs(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        raise CapabilityError(f"flip metric not available on {self.kind}")

    def leq_cross(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """(len A, len B) boolean matrix of the causal relation A[i] <= B[j]."""
        return self.leq_pairs(A[:, None, :], B[None, :, :])

    def tau_signed_cross(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """(len A, len B) signed time separations; negative on the past cone."""
        return self.tau_signed_pairs(A[:, None, :], B[None, :, :])

    def leq_block(self, pts: np.ndarray) -> np.ndarray:
        """(b, K, K) relation matrices for a (b, K, dimension) batch of nets."""
        return self.leq_pairs(pts[:, :, None, :], pts[:, None, :, :])

    def sample_batch(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n volume-uniform points, shape (n, dimension)."""
        raise NotImplementedError

    # -- scalar wrappers ------------------------------------------------------

    def causal_leq(self, x, y) -> bool:
        """True iff y lies in the causal future of x."""
        self._check_inside(x, y)
        return bool(self.leq_cross(as_coords(x)[None], as_coords(y)[None])[0, 0])

    def signed_tau(self, x, y) -> float:
        """Time separation: tau(x,y) if x <= y, -tau(y,x) if y <= x, else 0."""
        self._check_inside(x, y)
        return float(self.tau_signed_cross(as_coords(x)[None], as_coords(y)[None])[0, 0])

    def sample_uniform(self, rng: np.random.Generator) -> Point:
        return Point(tuple(self.sample_batch(rng, 1)[0]))

    def flip_cross(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return self.flip_pairs(A[:, None, :], B[None, :, :])

    def flip_distance(self, x, y) -> float:
        """Riemannian distance of the metric with the time sign reversed."""
        self._check_inside(x, y)
        return float(self.flip_cross(as_coords(x)[None], as_coords(y)[None])[0, 0])

    # -- global quantities -----------------------------------------------------

    def tdiam_bounds(self) -> tuple:
        """Certified (lower, upper) bounds on the timelike diameter."""
        raise NotImplementedError

    def tdiam(self) -> float:
        """Timelike diameter; a certified lower bound when tdiam_is_exact is False."""
        return self.tdiam_bounds()[0]

    # -- analytic volume hooks (None where no closed form exists) -------------

    def past_cone_volume(self, p):
        return None

    def future_cone_volume(self, p):
        return None

    def diamond_volume(self, p, q):
        return None

    def past_intersection_volume(self, p, q):
        return None

    def future_intersection_volume(self, p, q):
        return None

    def spec_dict(self) -> dict:
        raise NotImplementedError

    @property
    def kind(self) -> str:
        return self.spec_dict()["kind"]


class FlatCylinder(SpacetimeModel):
    """Flat cylinder of timelike extent T over an n-torus.

    The spatial factor is a torus whose circles all have circumference
    L = T**(-1/n), so the total volume T * L**n is exactly 1.  The causal
    relation is dt >= d_S with d_S the shortest torus distance, and
    tau = sqrt(dt**2 - d_S**2) on causal pairs.
    """

    has_flip = True

    def __init__(self, T: float, n: int = 1):
        if T <= 0:
            raise ValueError("T must be positive")
        if n < 1:
            raise ValueError("need at least one spatial dimension")
        self.T = float(T)
        self.n_spatial = int(n)
        self.circumference = self.T ** (-1.0 / n)
        self.dimension = 1 + self.n_spatial

    def contains(self, pts):
        # sampling is supported on the open slab; point queries accept the
        # closure (the boundary carries measure zero)
        pts = np.asarray(pts, dtype=float)
        t_ok = (pts[:, 0] >= 0.0) & (pts[:, 0] <= self.T)
        sp_ok = np.all((pts[:, 1:] >= 0.0) & (pts[:, 1:] <= self.circumference), axis=1)
        return t_ok & sp_ok

    def _spatial_pairs(self, P, Q):
        d = circle_distance(P[..., 1:], Q[..., 1:], self.circumference)
        return np.sqrt(np.sum(d * d, axis=-1))

    def leq_pairs(self, P, Q):
        dt = Q[..., 0] - P[..., 0]
        return dt >= self._spatial_pairs(P, Q)

    def tau_signed_pairs(self, P, Q):
        dt = Q[..., 0] - P[..., 0]
        ds = self._spatial_pairs(P, Q)
        mag = np.sqrt(np.maximum(dt * dt - ds * ds, 0.0))
        sign = (np.abs(dt) >= ds) * np.sign(dt)
        return sign * mag

    def flip_pairs(self, P, Q):
        dt = Q[..., 0] - P[..., 0]
        ds = self._spatial_pairs(P, Q)
        return np.sqrt(dt * dt + ds * ds)

    def sample_batch(self, rng, n):
        t = rng.random(n) * self.T
        sp = rng.random((n, self.n_spatial)) * self.circumference
        return np.column_stack([t, sp])

    def tdiam_bounds(self):
        return (self.T, self.T)

    # -- analytic cone volumes (n = 1 only) -------------------------------------

    def _cone_volume(self, depth: float) -> float:
        # volume of a cone of temporal depth `depth` on the n=1 cylinder
        L = self.circumference
        if depth <= L / 2.0:
            return depth * depth
        return L * depth - L * L / 4.0

    def past_cone_volume(self, p):
        if self.n_spatial != 1:
            return None
        p = as_coords(p)
        return self._cone_volume(p[0])

    def future_cone_volume(self, p):
        if self.n_spatial != 1:
            return None
        p = as_coords(p)
        return self._cone_volume(self.T - p[0])

    def _arc_overlap(self, centers_delta, r1, r2):
        """Length of the overlap of two circle arcs with given radii.

        Arcs are {theta : d(theta, c_i) <= r_i}; centers_delta is the circle
        distance between the centers.  Vectorized over all arguments.
        """
        L = self.circumference
        r1 = np.minimum(np.asarray(r1, dtype=float), L / 2.0)
        r2 = np.minimum(np.asarray(r2, dtype=float), L / 2.0)
        d = np.asarray(centers_delta, dtype=float)

        def seg(shift):
            lo = np.maximum(-r1, d + shift - r2)
            hi = np.minimum(r1, d + shift + r2)
            return np.maximum(hi - lo, 0.0)

        out = seg(0.0) + seg(-L) + seg(L)
        full1 = r1 >= L / 2.0
        full2 = r2 >= L / 2.0
        out = np.where(full1 & full2, L, out)
        out = np.where(full1 & ~full2, 2.0 * r2, out)
        out = np.where(~full1 & full2, 2.0 * r1, out)
        return np.minimum(out, L)

    _QUAD_POINTS = 4097

    def _quad_between(self, t_lo, t_hi, radius_at):
        """Integrate an arc-overlap integrand over [t_lo, t_hi] with Simpson."""
        if t_hi <= t_lo:
            return 0.0
        ts = np.linspace(t_lo, t_hi, self._QUAD_POINTS)
        return float(simpson(radius_at(ts), x=ts))

    def diamond_volume(self, p, q):
        if self.n_spatial != 1:
            return None
        p, q = as_coords(p), as_coords(q)
        if not bool(self.leq_cross(p[None], q[None])[0, 0]):
            return 0.0
        dth = float(circle_distance(p[1], q[1], self.circumference))

        def integrand(ts):
            return self._arc_overlap(dth, ts - p[0], q[0] - ts)

        return self._quad_between(p[0], q[0], integrand)

    def past_intersection_volume(self, p, q):
        if self.n_spatial != 1:
            return None
        p, q = as_coords(p), as_coords(q)
        dth = float(circle_distance(p[1], q[1], self.circumference))
        t_hi = min(p[0], q[0])

        def integrand(ts):
            return self._arc_overlap(dth, p[0] - ts, q[0] - ts)

        return self._quad_between(0.0, t_hi, integrand)

    def future_intersection_volume(self, p, q):
        if self.n_spatial != 1:
            return None
        p, q = as_coords(p), as_coords(q)
        dth = float(circle_distance(p[1], q[1], self.circumference))
        t_lo = max(p[0], q[0])

        def integrand(ts):
            return self._arc_overlap(dth, ts - p[0], ts - q[0])

        return self._quad_between(t_lo, self.T, integrand)

    def spec_dict(self):
        return {"kind": "flat_cylinder", "T": self.T, "n": self.n_spatial}


class LightconeSquare(SpacetimeModel):
    """Unit square in lightcone coordinates u, v in [0, 1].

    The causal relation is the product order, tau = sqrt(du * dv) on
    causal pairs, and the volume measure is du dv (total volume 1).  An
    exactly solvable stand-in for a generic slab: every cone and cone
    intersection is a union of axis rectangles.
    """

    dimension = 2
    has_flip = True

    def contains(self, pts):
        pts = np.asarray(pts, dtype=float)
        return np.all((pts >= 0.0) & (pts <= 1.0), axis=1)

    def leq_pairs(self, P, Q):
        du = Q[..., 0] - P[..., 0]
        dv = Q[..., 1] - P[..., 1]
        return (du >= 0.0) & (dv >= 0.0)

    def tau_signed_pairs(self, P, Q):
        du = Q[..., 0] - P[..., 0]
        dv = Q[..., 1] - P[..., 1]
        fwd = (du >= 0.0) & (dv >= 0.0)
        bwd = (du <= 0.0) & (dv <= 0.0)
        sign = fwd.astype(float) - bwd.astype(float)
        return sign * np.sqrt(np.abs(du * dv))

    def flip_pairs(self, P, Q):
        # Euclidean in (t, x) = ((u+v)/2, (v-u)/2): ds^2 = (du^2 + dv^2)/2
        du = Q[..., 0] - P[..., 0]
        dv = Q[..., 1] - P[..., 1]
        return np.sqrt(0.5 * (du * du + dv * dv))

    def sample_batch(self, rng, n):
        return rng.random((n, 2))

    def tdiam_bounds(self):
        return (1.0, 1.0)

    def past_cone_volume(self, p):
        p = as_coords(p)
        return float(p[0] * p[1])

    def future_cone_volume(self, p):
        p = as_coords(p)
        return float((1.0 - p[0]) * (1.0 - p[1]))

    def diamond_volume(self, p, q):
        p, q = as_coords(p), as_coords(q)
        du, dv = q[0] - p[0], q[1] - p[1]
        if du < 0.0 or dv < 0.0:
            return 0.0
        return float(du * dv)

    def past_intersection_volume(self, p, q):
        p, q = as_coords(p), as_coords(q)
        return float(min(p[0], q[0]) * min(p[1], q[1]))

    def future_intersection_volume(self, p, q):
        p, q = as_coords(p), as_coords(q)
        return float((1.0 - max(p[0], q[0])) * (1.0 - max(p[1], q[1])))

    def spec_dict(self):
        return {"kind": "lightcone_square"}


class NeedleSlab(SpacetimeModel):
    """Flat cylinder with a thin conformally stretched vertical strip.

    Inside the strip {t >= needle_start, |theta - needle_center| <= w/2}
    the metric carries a conformal factor lam**2 >= 1; outside it is the
    flat cylinder metric.  Conformal rescaling leaves the causal order
    untouched, so causal_leq and the induced sprinkle orders agree with
    the base cylinder exactly.  The whole metric is then divided by the
    raw volume 1 + (lam**2 - 1) * strip_area, restoring total volume 1
    and rescaling all proper times by 1/sqrt(raw volume).

    signed_tau returns a certified lower bound in magnitude (best of the
    conformal-minorant bound and a three-segment path routed along the
    needle axis); tdiam_bounds carries an analytic lower bound from the
    axis curve and no finite upper bound.
    """

    tau_is_lower_bound = True
    tdiam_is_exact = False

    def __init__(self, T: float = 1.0, needle_center: float = 0.0,
                 needle_halfwidth: float = 1e-4, needle_start: float = 0.5,
                 lam: float = 1.0):
        base = FlatCylinder(T, 1)
        if lam < 1.0:
            raise ValueError("conformal factor must be >= 1")
        if not (0.0 < needle_start < T):
            raise ValueError("needle_start must lie strictly inside (0, T)")
        if not (0.0 < 2.0 * needle_halfwidth <= base.circumference):
            raise ValueError("needle width must be positive and fit the circle")
        self.base = base
        self.T = base.T
        self.circumference = base.circumference
        self.dimension = 2
        self.theta0 = float(needle_center) % base.circumference
        self.halfwidth = float(needle_halfwidth)
        self.t0 = float(needle_start)
        self.lam = float(lam)
        self.strip_area = (self.T - self.t0) * 2.0 * self.halfwidth
        self.raw_volume = 1.0 + (lam * lam - 1.0) * self.strip_area
        self.time_rescale = 1.0 / np.sqrt(self.raw_volume)

    # causal structure is conformally invariant
    def contains(self, pts):
        return self.base.contains(pts)

    def leq_pairs(self, P, Q):
        return self.base.leq_pairs(P, Q)

    def in_strip(self, pts):
        pts = np.asarray(pts, dtype=float)
        dth = circle_distance(pts[:, 1], self.theta0, self.circumference)
        return (pts[:, 0] >= self.t0) & (dth <= self.halfwidth)

    def density(self, pts):
        """Volume density relative to the chart measure dt dtheta."""
        lam2 = self.lam * self.lam
        return np.where(self.in_strip(pts), lam2, 1.0) / self.raw_volume

    def strip_volume(self) -> float:
        """Volume of the stretched strip in the normalized measure."""
        return self.lam * self.lam * self.strip_area / self.raw_volume

    def sample_batch(self, rng, n):
        # exact inverse transform over the three chart boxes
        lam2 = self.lam * self.lam
        w = 2.0 * self.halfwidth
        L = self.circumference
        p_strip = lam2 * self.strip_area / self.raw_volume
        area_below = self.t0 * L
        area_side = (self.T - self.t0) * (L - w)
        p_below = (area_below / self.raw_volume)
        sel = rng.random(n)
        ut = rng.random(n)
        uth = rng.random(n)
        t = np.empty(n)
        th = np.empty(n)
        in_strip = sel < p_strip
        below = ~in_strip & (sel < p_strip + p_below)
        side = ~in_strip & ~below
        t[in_strip] = self.t0 + ut[in_strip] * (self.T - self.t0)
        th[in_strip] = (self.theta0 - self.halfwidth + uth[in_strip] * w) % L
        t[below] = ut[below] * self.t0
        th[below] = uth[below] * L
        t[side] = self.t0 + ut[side] * (self.T - self.t0)
        th[side] = (self.theta0 + self.halfwidth + uth[side] * (L - w)) % L
        return np.column_stack([t, th])

    def _axis_path_bound(self, x, y) -> float:
        """Max proper time over 3-segment causal paths x -> axis -> axis -> y."""
        if not bool(self.base.leq_cross(x[None], y[None])[0, 0]):
            return 0.0
        taub = self.base.tau_signed_cross
        best = float(taub(x[None], y[None])[0, 0])  # conformal factor >= 1 minorant
        lo = max(self.t0, x[0])
        hi = min(self.T, y[0])
        if hi > lo:
            s = np.linspace(lo, hi, 41)
            axis = np.column_stack([s, np.full_like(s, self.theta0)])
            t_in = np.maximum(taub(x[None], axis)[0], 0.0)       # x -> axis entry
            t_out = np.maximum(taub(axis, y[None])[:, 0], 0.0)   # axis exit -> y
            ok_in = t_in > 0.0
            ok_in |= np.isclose(axis[:, 0], x[0]) & np.isclose(axis[:, 1], x[1])
            ok_out = t_out > 0.0
            ok_out |= np.isclose(axis[:, 0], y[0]) & np.isclose(axis[:, 1], y[1])
            seg = self.lam * (s[None, :] - s[:, None])  # axis piece, fully in strip
            total = np.where(ok_in, t_in, -np.inf)[:, None] + seg \
                + np.where(ok_out, t_out, -np.inf)[None, :]
            total = np.where(s[None, :] >= s[:, None], total, -np.inf)
            cand = float(np.max(total)) if total.size else -np.inf
            if np.isfinite(cand):
                best = max(best, cand)
        return best

    def tau_signed_cross(self, A, B):
        nA, nB = A.shape[0], B.shape[0]
        leq_fwd = self.base.leq_cross(A, B)
        out = np.zeros((nA, nB))
        for i in range(nA):
            for j in range(nB):
                if leq_fwd[i, j]:
                    out[i, j] = self._axis_path_bound(A[i], B[j]) * self.time_rescale
                else:
                    back = self.base.leq_cross(B[j][None], A[i][None])[0, 0]
                    if back:
                        out[i, j] = -self._axis_path_bound(B[j], A[i]) * self.time_rescale
        return out

    def tdiam_bounds(self):
        axis_length = self.t0 + self.lam * (self.T - self.t0)
        lo = max(self.T, axis_length) * self.time_rescale
        return (lo, np.inf)

    def future_cone_volume(self, p):
        # closed form only when the strip lies inside J+(p)
        p = as_coords(p)
        dth = float(circle_distance(p[1], self.theta0, self.circumference))
        if self.t0 - p[0] >= dth + self.halfwidth:
            base_vol = self.base.future_cone_volume(p)
            return (base_vol + (self.lam ** 2 - 1.0) * self.strip_area) / self.raw_volume
        return None

    def past_cone_volume(self, p):
        p = as_coords(p)
        base_vol = self.base.past_cone_volume(p)
        if p[0] <= self.t0:
            return base_vol / self.raw_volume
        t_hi = p[0]

        def integrand(ts):
            return self.base._arc_overlap(
                circle_distance(p[1], self.theta0, self.circumference),
                p[0] - ts, np.full_like(ts, self.halfwidth))

        strip_part = self.base._quad_between(self.t0, t_hi, integrand)
        return (base_vol + (self.lam ** 2 - 1.0) * strip_part) / self.raw_volume

    def spec_dict(self):
        return {"kind": "needle_slab", "T": self.T, "needle_center": self.theta0,
                "needle_halfwidth": self.halfwidth, "needle_start": self.t0,
                "lam": self.lam}


# ---------------------------------------------------------------------------
# cone-expression regions and their volumes
# ---------------------------------------------------------------------------

class Region:
    """Boolean combination of causal cones, evaluated pointwise."""

    def indicator(self, model, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __and__(self, other):
        return Intersection(self, other)

    def __or__(self, other):
        return Union(self, other)

    def __invert__(self):
        return Complement(self)


@dataclass(frozen=True)
class PastCone(Region):
    point: tuple

    def indicator(self, model, pts):
        return model.leq_cross(pts, as_coords(self.point)[None])[:, 0]


@dataclass(frozen=True)
class FutureCone(Region):
    point: tuple

    def indicator(self, model, pts):
        return model.leq_cross(as_coords(self.point)[None], pts)[0, :]


@dataclass(frozen=True)
class Diamond(Region):
    bottom: tuple
    top: tuple

    def indicator(self, model, pts):
        lo = model.leq_cross(as_coords(self.bottom)[None], pts)[0, :]
        hi = model.leq_cross(pts, as_coords(self.top)[None])[:, 0]
        return lo & hi


class WholeSpace(Region):
    def indicator(self, model, pts):
        return np.ones(pts.shape[0], dtype=bool)


@dataclass(frozen=True)
class Intersection(Region):
    left: Region
    right: Region

    def indicator(self, model, pts):
        return self.left.indicator(model, pts) & self.right.indicator(model, pts)


@dataclass(frozen=True)
class Union(Region):
    left: Region
    right: Region

    def indicator(self, model, pts):
        return self.left.indicator(model, pts) | self.right.indicator(model, pts)


@dataclass(frozen=True)
class Complement(Region):
    inner: Region

    def indicator(self, model, pts):
        return ~self.inner.indicator(model, pts)


def analytic_region_volume(model, region):
    """Closed-form volume of a region, or None when no formula applies."""
    if isinstance(region, WholeSpace):
        return 1.0
    if isinstance(region, PastCone):
        return model.past_cone_volume(region.point)
    if isinstance(region, FutureCone):
        return model.future_cone_volume(region.point)
    if isinstance(region, Diamond):
        return model.diamond_volume(region.bottom, region.top)
    if isinstance(region, Complement):
        v = analytic_region_volume(model, region.inner)
        return None if v is None else 1.0 - v
    if isinstance(region, Intersection):
        a, b = region.left, region.right
        if isinstance(a, PastCone) and isinstance(b, PastCone):
            return model.past_intersection_volume(a.point, b.point)
        if isinstance(a, FutureCone) and isinstance(b, FutureCone):
            return model.future_intersection_volume(a.point, b.point)
        if isinstance(a, PastCone) and isinstance(b, FutureCone):
            return model.diamond_volume(b.point, a.point)
        if isinstance(a, FutureCone) and isinstance(b, PastCone):
            return model.diamond_volume(a.point, b.point)
    if isinstance(region, Union):
        a, b = region.left, region.right
        # double cone J(p) = J-(p) | J+(p): interiors are disjoint
        if (isinstance(a, PastCone) and isinstance(b, FutureCone)
                and tuple(as_coords(a.point)) == tuple(as_coords(b.point))):
            va = model.past_cone_volume(a.point)
            vb = model.future_cone_volume(b.point)
            if va is not None and vb is not None:
                return va + vb
    return None


def region_volume(model, region, n_mc: int = 0, seed: int = 0):
    """Volume of a cone expression: (value, standard_error).

    Uses the closed form when one exists (standard error 0); otherwise a
    Monte Carlo estimate with n_mc volume-uniform samples.
    """
    v = analytic_region_volume(model, region)
    if v is not None:
        return float(v), 0.0
    if n_mc <= 0:
        raise EstimationError("no analytic formula for this region and n_mc = 0")
    rng = substream(seed, 101)
    pts = model.sample_batch(rng, int(n_mc))
    hits = region.indicator(model, pts)
    p = float(np.mean(hits))
    se = float(np.sqrt(max(p * (1.0 - p), 1.0 / n_mc) / n_mc))
    return p, se
