"""Volume-uniform sprinkles, class-distribution estimation, uniformity
checks, covering sequences, and the volume law.

Trials are independent work units seeded by (master seed, batch index),
so estimates are reproducible bit-for-bit and independent of worker
count; aggregation uses sums and maxima only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import CapabilityError, DegenerateSampleError
from .geometry import (Diamond, FutureCone, Intersection, LightconeSquare,
                       PastCone, Region, WholeSpace, analytic_region_volume,
                       as_coord_array, region_volume)
from .orders import ClassDistribution, FiniteOrder, OrderClass, order_from_points
from .seeding import substream

TRIAL_BATCH = 25_000


@dataclass
class Sprinkle:
    """K volume-uniform points with their induced causal order."""

    model: object
    seed: int
    K: int
    points: np.ndarray
    order: FiniteOrder
    resamples: int = 0


def sprinkle(model, K: int, seed: int) -> Sprinkle:
    """Deterministic volume-uniform sprinkle of K points.

    Coincident points (which would break antisymmetry) trigger a full
    resample from a derived substream; the attempt count is recorded.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    for attempt in range(64):
        rng = substream(seed, 11, attempt)
        pts = model.sample_batch(rng, K)
        try:
            order = order_from_points(model, pts)
        except DegenerateSampleError:
            continue
        return Sprinkle(model, seed, K, pts, order, resamples=attempt)
    raise DegenerateSampleError("could not draw a non-degenerate sprinkle")


def sprinkle_to_csv(s: Sprinkle) -> str:
    cols = ",".join(f"coord{i}" for i in range(s.points.shape[1]))
    lines = [f"index,{cols}"]
    for i, row in enumerate(s.points):
        lines.append(",".join([str(i)] + [repr(float(c)) for c in row]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# class-distribution estimation
# ---------------------------------------------------------------------------

def _relation_codes(leq_block: np.ndarray) -> np.ndarray:
    """Encode each K x K relation matrix as a single uint64 (K <= 8)."""
    b, K, _ = leq_block.shape
    flat = leq_block.reshape(b, K * K).astype(np.uint64)
    powers = (np.uint64(1) << np.arange(K * K, dtype=np.uint64))
    return flat @ powers


def _code_to_order(code: int, K: int) -> FiniteOrder:
    bits = [(code >> i) & 1 for i in range(K * K)]
    mat = np.array(bits, dtype=bool).reshape(K, K)
    return FiniteOrder(K, mat)


def _class_counts_batch(model, K: int, n_trials: int, seed: int, batch_index: int):
    """Relation-code counts for one batch of sprinkles."""
    rng = substream(seed, 21, batch_index)
    pts = model.sample_batch(rng, n_trials * K).reshape(n_trials, K, -1)
    leq = model.leq_block(pts)
    eye = np.eye(K, dtype=bool)
    bad = np.any(leq & leq.transpose(0, 2, 1) & ~eye, axis=(1, 2))
    while np.any(bad):
        idx = np.nonzero(bad)[0]
        redraw = model.sample_batch(rng, idx.size * K).reshape(idx.size, K, -1)
        pts[idx] = redraw
        leq[idx] = model.leq_block(redraw)
        bad[idx] = np.any(leq[idx] & leq[idx].transpose(0, 2, 1) & ~eye, axis=(1, 2))
    codes, counts = np.unique(_relation_codes(leq), return_counts=True)
    return codes, counts


def estimate_class_distribution(model, K: int, n_trials: int, seed: int = 0,
                                workers: int = 1) -> ClassDistribution:
    """Empirical isomorphism-class frequencies over independent sprinkles.

    Classes are label-free by construction: each trial's relation matrix
    is reduced to its canonical key, so the estimate is exactly invariant
    under relabeling of the sample points.
    """
    from .orders import canonical_class  # local import to keep module load light

    if K > 8:
        raise CapabilityError("class estimation limited to K <= 8")
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    batches = [(b, min(TRIAL_BATCH, n_trials - b * TRIAL_BATCH))
               for b in range((n_trials + TRIAL_BATCH - 1) // TRIAL_BATCH)]
    results = _map_units(_class_counts_batch,
                         [(model, K, nt, seed, b) for b, nt in batches],
                         workers)
    code_counts: dict = {}
    for codes, counts in results:
        for code, cnt in zip(codes.tolist(), counts.tolist()):
            code_counts[code] = code_counts.get(code, 0) + cnt
    canon_memo: dict = {}
    class_counts: dict = {}
    for code, cnt in code_counts.items():
        key = canon_memo.get(code)
        if key is None:
            key = canonical_class(_code_to_order(code, K))
            canon_memo[code] = key
        class_counts[key] = class_counts.get(key, 0) + cnt
    weights = {cls: cnt / n_trials for cls, cnt in class_counts.items()}
    return ClassDistribution(K, weights, sample_count=n_trials, counts=class_counts)


def _map_units(fn, args_list, workers: int):
    if workers <= 1 or len(args_list) <= 1:
        return [fn(*args) for args in args_list]
    import multiprocessing as mp
    with mp.get_context("fork").Pool(processes=workers) as pool:
        return pool.starmap(_apply_unit, [(fn, args) for args in args_list])


def _apply_unit(fn, args):
    return fn(*args)


def l1_distance(p: ClassDistribution, q: ClassDistribution) -> float:
    """L1 distance between class distributions; lies in [0, 2]."""
    if p.K != q.K:
        raise ValueError(f"distributions have different K: {p.K} vs {q.K}")
    keys = set(p.weights) | set(q.weights)
    return float(sum(abs(p.probability(c) - q.probability(c)) for c in keys))


def l1_combined_stderr(p: ClassDistribution, q: ClassDistribution) -> float:
    """Error scale for the L1 estimate from per-class binomial errors."""
    keys = set(p.weights) | set(q.weights)
    var = sum(p.stderr(c) ** 2 + q.stderr(c) ** 2 for c in keys)
    return float(np.sqrt(var))


def _chain_fraction_batch(model, K, n_trials, seed, batch_index):
    rng = substream(seed, 22, batch_index)
    pts = model.sample_batch(rng, n_trials * K).reshape(n_trials, K, -1)
    leq = model.leq_block(pts)
    comp = leq | leq.transpose(0, 2, 1)
    return int(np.sum(np.all(comp, axis=(1, 2)))), n_trials


def total_order_probability(model, K: int, n_trials: int, seed: int = 0,
                            workers: int = 1):
    """Fraction of sprinkles whose order is a chain: (estimate, stderr)."""
    if K == 1:
        return 1.0, 0.0
    batches = [(b, min(TRIAL_BATCH, n_trials - b * TRIAL_BATCH))
               for b in range((n_trials + TRIAL_BATCH - 1) // TRIAL_BATCH)]
    results = _map_units(_chain_fraction_batch,
                         [(model, K, nt, seed, b) for b, nt in batches],
                         workers)
    hits = sum(h for h, _ in results)
    total = sum(n for _, n in results)
    e = hits / total
    return float(e), float(np.sqrt(e * (1.0 - e) / total))


# ---------------------------------------------------------------------------
# s-uniformity
# ---------------------------------------------------------------------------

@dataclass
class UniformityReport:
    """Worst count-versus-volume defect over a family of probe regions."""

    s_achieved: float
    probe_count: int
    worst_region: str
    skipped: int = 0
    table: list = field(default_factory=list)


def probe_family(model, n_probes: int, seed: int = 0,
                 kinds=("diamond", "past", "future", "past_intersection")):
    """Random causally convex probe regions with analytic volumes."""
    rng = substream(seed, 31)
    probes = []
    per_kind = max(1, n_probes // len(kinds))
    for kind in kinds:
        made = 0
        attempts = 0
        while made < per_kind and attempts < 50 * per_kind:
            attempts += 1
            pts = model.sample_batch(rng, 2)
            if kind == "diamond":
                if not bool(model.leq_cross(pts[:1], pts[1:])[0, 0]):
                    continue
                region = Diamond(tuple(pts[0]), tuple(pts[1]))
            elif kind == "past":
                region = PastCone(tuple(pts[0]))
            elif kind == "future":
                region = FutureCone(tuple(pts[0]))
            elif kind == "past_intersection":
                region = PastCone(tuple(pts[0])) & PastCone(tuple(pts[1]))
            else:
                raise ValueError(f"unknown probe kind {kind}")
            probes.append(region)
            made += 1
    return probes


def _describe_region(region) -> str:
    return repr(region)


def check_s_uniform(spr: Sprinkle, probes=None, n_probes: int = 50,
                    seed: int = 0, n_mc: int = 0,
                    kinds=("diamond", "past", "future", "past_intersection")) -> UniformityReport:
    """Max over probes of |count/K - vol(probe)| for a sprinkle.

    Probe volumes come from closed forms where available, otherwise from
    Monte Carlo with the reported error folded into the table.  Probes
    without either are skipped and counted.
    """
    model = spr.model
    if probes is None:
        probes = probe_family(model, n_probes, seed=seed, kinds=kinds)
    worst = -1.0
    worst_desc = "none"
    skipped = 0
    table = []
    for region in probes:
        vol = analytic_region_volume(model, region)
        vol_se = 0.0
        if vol is None:
            if n_mc <= 0:
                skipped += 1
                continue
            vol, vol_se = region_volume(model, region, n_mc=n_mc, seed=seed)
        count = int(np.sum(region.indicator(model, spr.points)))
        defect = abs(count / spr.K - vol)
        table.append({"region": _describe_region(region), "vol": float(vol),
                      "vol_se": float(vol_se), "count": count,
                      "defect": float(defect)})
        if defect > worst:
            worst = defect
            worst_desc = _describe_region(region)
    if worst < 0.0:
        raise ValueError("all probes were skipped")
    return UniformityReport(s_achieved=float(worst), probe_count=len(table),
                            worst_region=worst_desc, skipped=skipped, table=table)


# ---------------------------------------------------------------------------
# covering sequences and the volume law
# ---------------------------------------------------------------------------

@dataclass
class CoveringSequence:
    """Covering nets at scales 1/k, concatenated block by block."""

    points: np.ndarray
    block_starts: list   # index of the first element of block k (1-based ks)
    k_values: list

    def prefix(self, n: int) -> np.ndarray:
        return self.points[:n]

    def block(self, k: int) -> np.ndarray:
        i = self.k_values.index(k)
        lo = self.block_starts[i]
        hi = self.block_starts[i + 1] if i + 1 < len(self.block_starts) else len(self.points)
        return self.points[lo:hi]


def _flip_coords(model, pts: np.ndarray) -> np.ndarray:
    """Embed points so the flip metric becomes Euclidean (with wrap flags)."""
    if isinstance(model, LightconeSquare):
        return pts / np.sqrt(2.0), None
    # flat cylinder: Euclidean on (t, theta) with theta wrapped
    return pts.copy(), model.circumference


def _wrap_tile(coords: np.ndarray, circumference) -> np.ndarray:
    if circumference is None:
        return coords
    shifted_up = coords.copy()
    shifted_up[:, 1] += circumference
    shifted_dn = coords.copy()
    shifted_dn[:, 1] -= circumference
    return np.vstack([coords, shifted_up, shifted_dn])


def hausdorff_covering_sequence(model, k_max: int = None, seed: int = 0,
                                n_target: int = None,
                                method: str = "lattice") -> CoveringSequence:
    """Coverings of the model by flip-metric 1/k-balls, one block per k.

    ``method="lattice"`` (default) places a randomly offset hexagonal
    covering lattice at each scale; the uniformly random offset makes
    block counts unbiased for interior regions, and block sizes track the
    minimal covering number.  ``method="greedy"`` grows the net by
    farthest-point insertion over a random candidate pool instead; it
    covers just as well but carries a measurable equidistribution bias,
    so the lattice generator is what the volume-law experiments use.

    Every block is verified against a deterministic grid (spacing well
    under 1/k) and patched until each grid point lies within 1/k of a
    block element.  Blocks for k = 1, 2, ... are concatenated until
    k_max or n_target is reached.
    """
    if k_max is None and n_target is None:
        raise ValueError("need k_max or n_target")
    if not getattr(model, "has_flip", False):
        raise CapabilityError(f"covering sequences need the flip metric ({model.kind})")
    if getattr(model, "n_spatial", 1) != 1:
        raise CapabilityError("covering sequences implemented for one spatial dimension")
    if method not in ("lattice", "greedy"):
        raise ValueError(f"unknown covering method {method!r}")
    blocks = []
    k_values = []
    total = 0
    est_centers = 8.0
    k = 0
    while True:
        k += 1
        if k_max is not None and k > k_max:
            break
        radius = 1.0 / k
        rng = substream(seed, 41, k)
        _, circ = _flip_coords(model, np.zeros((1, model.dimension)))
        if method == "lattice":
            centers = _lattice_cover(model, radius, rng)
        else:
            pool_size = int(max(400, 5.0 * est_centers))
            pool = model.sample_batch(rng, pool_size)
            pool_f, circ = _flip_coords(model, pool)
            start = int(rng.integers(pool_size))
            centers = pool[_fps_cover(pool_f, start, radius, circ)]
        centers = _patch_cover_with_grid(model, centers, radius, circ)
        centers = centers[rng.permutation(len(centers))]
        blocks.append(centers)
        k_values.append(k)
        est_centers = max(est_centers, len(centers) * ((k + 1) / k) ** 2)
        total += len(centers)
        if n_target is not None and total >= n_target and k_max is None:
            break
    starts = []
    acc = 0
    for b in blocks:
        starts.append(acc)
        acc += len(b)
    return CoveringSequence(np.vstack(blocks), starts, k_values)


def _euclid_torus(pts, center, circumference):
    d = pts - center[None, :]
    if circumference is not None:
        w = np.abs(d[:, 1]) % circumference
        d = d.copy()
        d[:, 1] = np.minimum(w, circumference - w)
    return np.sqrt(np.sum(d * d, axis=1))


def _fps_cover(pool_f, start: int, radius: float, circ):
    """Farthest-point insertion over a candidate pool until covered.

    Candidates inside the current covering radius are pruned from the
    pool as the net grows, which keeps late insertions cheap.
    """
    centers = [start]
    active = np.arange(len(pool_f))
    d = _euclid_torus(pool_f, pool_f[start], circ).astype(np.float32)
    while True:
        keep = d > radius
        if not keep.all():
            active = active[keep]
            d = d[keep]
        if active.size == 0:
            return centers
        far = int(np.argmax(d))
        gi = int(active[far])
        centers.append(gi)
        d = np.minimum(d, _euclid_torus(pool_f[active], pool_f[gi], circ).astype(np.float32))

def _stratified_cover(model, radius: float, rng) -> np.ndarray:
    """Covering net from one uniform sample per cell of an exact tiling.

    The chart is tiled by equal rectangular cells whose flip-metric
    diameter stays below the covering radius, so the cell's own sample
    covers the cell and the block is a covering by construction.  Because
    the cells partition the space exactly, the expected count of any
    region equals (number of cells) * vol(region): block counts carry no
    boundary bias at all.
    """
    margin = 0.999
    if isinstance(model, LightconeSquare):
        # flip distance is Euclidean (u, v) distance / sqrt(2)
        side_max = radius * margin
        m = int(np.ceil(1.0 / side_max))
        u0 = np.repeat(np.arange(m), m) / m
        v0 = np.tile(np.arange(m), m) / m
        jitter = rng.random((m * m, 2)) / m
        return np.column_stack([u0, v0]) + jitter
    T, L = model.T, model.circumference
    side_max = radius * margin / np.sqrt(2.0)
    rows = int(np.ceil(T / side_max))
    cols = int(np.ceil(L / side_max))
    h, w = T / rows, L / cols
    t0 = np.repeat(np.arange(rows), cols) * h
    th0 = np.tile(np.arange(cols), rows) * w
    jitter = rng.random((rows * cols, 2)) * np.array([h, w])
    return np.column_stack([t0, th0]) + jitter


def _verification_grid(model, radius: float) -> np.ndarray:
    step = radius / 3.0
    if isinstance(model, LightconeSquare):
        ax = np.arange(0.0, 1.0 + 1e-12, step * np.sqrt(2.0))
        g = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
        return g
    T, L = model.T, model.circumference
    ts = np.arange(0.0, T + 1e-12, step)
    ths = np.arange(0.0, L, max(step, 1e-9))
    g = np.stack(np.meshgrid(ts, ths, indexing="ij"), axis=-1).reshape(-1, 2)
    return g


def _patch_cover_with_grid(model, centers, radius, circ):
    grid = _verification_grid(model, radius)
    gf, _ = _flip_coords(model, grid)
    for _ in range(64):
        cf, _ = _flip_coords(model, centers)
        tree = cKDTree(_wrap_tile(cf, circ))
        d, _idx = tree.query(gf)
        bad = d > radius
        if not np.any(bad):
            return centers
        worst = np.argsort(d)[::-1]
        add = worst[bad[worst]][:64]
        centers = np.vstack([centers, grid[add]])
    raise RuntimeError("covering did not close after grid patching")


@dataclass
class VolumeLawReport:
    """Count-fraction versus volume deviations over a diamond family."""

    n: int
    entries: list
    pass_fraction: float

    def max_deviation(self) -> float:
        return max(e["deviation"] for e in self.entries)


def volume_law_check(points: np.ndarray, model, diamonds, n: int,
                     band_sigmas: float = 4.0) -> VolumeLawReport:
    """Compare diamond counts over the first n points with exact volumes.

    Each diamond passes when |count/n - vol| <= band_sigmas *
    sqrt(vol (1 - vol) / n) (plus any Monte Carlo error on the volume).
    """
    pts = as_coord_array(points)[:n]
    entries = []
    for dia in diamonds:
        region = dia if isinstance(dia, Region) else Diamond(tuple(dia[0]), tuple(dia[1]))
        vol = analytic_region_volume(model, region)
        vol_se = 0.0
        if vol is None:
            vol, vol_se = region_volume(model, region, n_mc=200_000, seed=17)
        count = int(np.sum(region.indicator(model, pts)))
        dev = abs(count / n - vol)
        band = band_sigmas * float(np.sqrt(max(vol * (1.0 - vol), 1.0 / n) / n)) \
            + band_sigmas * vol_se
        entries.append({"region": _describe_region(region), "vol": float(vol),
                        "count": count, "deviation": float(dev),
                        "band": float(band), "passed": bool(dev <= band)})
    frac = sum(e["passed"] for e in entries) / len(entries)
    return VolumeLawReport(n=n, entries=entries, pass_fraction=float(frac))
