"""Finite partial orders on {1..K}: construction, canonical classes, intervals.

Orders are stored as reflexive, antisymmetric, transitively closed K x K
boolean matrices.  Canonicalization works for K <= 12 via invariant
refinement plus a breadth-first lexicographic-minimum search whose state
deduplication keeps symmetric inputs (antichains, stacked layers)
polynomial; the same search counts order automorphisms exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import CapabilityError, DegenerateSampleError
from .geometry import as_coord_array

CANONICAL_K_MAX = 12
ENUMERATE_K_MAX = 5
_SEARCH_STATE_CAP = 300_000


@dataclass
class FiniteOrder:
    """A partial order on {1..K}; ``leq[i, j]`` means i <= j."""

    K: int
    leq: np.ndarray

    def __post_init__(self):
        leq = np.asarray(self.leq, dtype=bool)
        if leq.shape != (self.K, self.K):
            raise ValueError(f"leq must be {self.K}x{self.K}")
        if not leq.trace() == self.K:
            raise ValueError("order must be reflexive")
        if np.any(leq & leq.T & ~np.eye(self.K, dtype=bool)):
            raise ValueError("order must be antisymmetric")
        closure = _bool_square(leq)
        if np.any(closure & ~leq):
            raise ValueError("order must be transitively closed")
        self.leq = leq

    def __eq__(self, other):
        return isinstance(other, FiniteOrder) and self.K == other.K \
            and np.array_equal(self.leq, other.leq)

    def strict(self) -> np.ndarray:
        return self.leq & ~np.eye(self.K, dtype=bool)

    def is_chain(self) -> bool:
        return bool(np.all(self.leq | self.leq.T))


@dataclass(frozen=True)
class OrderClass:
    """Canonical byte key identifying an order-isomorphism class."""

    canonical_key: bytes

    def hex(self) -> str:
        return self.canonical_key.hex()


@dataclass
class ClassDistribution:
    """Probability weights over order-isomorphism classes on K elements."""

    K: int
    weights: dict          # OrderClass -> probability
    sample_count: int = 0  # 0 marks an exact distribution
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        total = sum(self.weights.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, expected 1")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("negative weight")

    def probability(self, cls: OrderClass) -> float:
        return self.weights.get(cls, 0.0)

    def stderr(self, cls: OrderClass) -> float:
        if self.sample_count <= 0:
            return 0.0
        p = self.probability(cls)
        return float(np.sqrt(p * (1.0 - p) / self.sample_count))


def _bool_square(m: np.ndarray) -> np.ndarray:
    return (m.astype(np.uint8) @ m.astype(np.uint8)) > 0


def transitive_closure(m: np.ndarray) -> np.ndarray:
    out = np.asarray(m, dtype=bool).copy()
    while True:
        step = out | _bool_square(out)
        if np.array_equal(step, out):
            return out
        out = step


def order_from_points(model, points) -> FiniteOrder:
    """Order induced on sampled points by the model's causal relation.

    Raises DegenerateSampleError when distinct indices carry coincident
    points (the only way antisymmetry can fail); callers resample.
    """
    pts = as_coord_array(points)
    K = pts.shape[0]
    leq = model.leq_cross(pts, pts)
    sym = leq & leq.T & ~np.eye(K, dtype=bool)
    if np.any(sym):
        i, j = np.argwhere(sym)[0]
        raise DegenerateSampleError(f"points {i} and {j} coincide")
    return FiniteOrder(K, leq)


# ---------------------------------------------------------------------------
# canonicalization
# ---------------------------------------------------------------------------

def _refinement_ranks(leq: np.ndarray) -> np.ndarray:
    """Isomorphism-invariant integer ranks from iterated signature refinement."""
    K = leq.shape[0]
    strict = leq & ~np.eye(K, dtype=bool)
    sig = [(int(strict[:, i].sum()), int(strict[i, :].sum())) for i in range(K)]
    ranks = _ranks_from_signatures(sig)
    for _ in range(K):
        sig = []
        for i in range(K):
            above = tuple(sorted(ranks[j] for j in range(K) if strict[i, j]))
            below = tuple(sorted(ranks[j] for j in range(K) if strict[j, i]))
            sig.append((ranks[i], below, above))
        new_ranks = _ranks_from_signatures(sig)
        if np.array_equal(new_ranks, ranks):
            break
        ranks = new_ranks
    return ranks


def _ranks_from_signatures(signatures) -> np.ndarray:
    distinct = sorted(set(signatures))
    lookup = {s: r for r, s in enumerate(distinct)}
    return np.array([lookup[s] for s in signatures], dtype=int)


def _canonical_search(leq: np.ndarray):
    """Minimal corner-code ordering and the number of orderings achieving it.

    Vertices are consumed in nondecreasing refinement rank; among those,
    the search keeps every ordering whose growing corner code (new column
    bits then new row bits at each step) stays lexicographically minimal.
    Orderings achieving the final minimal code are exactly the canonical
    labelings, and their count equals the automorphism count.  States that
    present identical views to the unchosen vertices are merged with their
    multiplicities added, which keeps antichain-like inputs polynomial.
    """
    K = leq.shape[0]
    ranks = _refinement_ranks(leq)
    states = {(): 1}  # ordering tuple -> multiplicity
    for _ in range(K):
        best_code = None
        bucket = {}
        for ordering, mult in states.items():
            chosen = set(ordering)
            remaining = [v for v in range(K) if v not in chosen]
            min_rank = min(ranks[v] for v in remaining)
            for c in remaining:
                if ranks[c] != min_rank:
                    continue
                code = 0
                for v in ordering:
                    code = (code << 1) | int(leq[v, c])
                for v in ordering:
                    code = (code << 1) | int(leq[c, v])
                if best_code is None or code < best_code:
                    best_code = code
                    bucket = {}
                if code == best_code:
                    new_ordering = ordering + (c,)
                    rest = [v for v in range(K) if v not in chosen and v != c]
                    view = tuple(
                        (w,
                         tuple(int(leq[v, w]) for v in new_ordering),
                         tuple(int(leq[w, v]) for v in new_ordering))
                        for w in rest)
                    key = (frozenset(new_ordering), view)
                    prev = bucket.get(key)
                    if prev is None:
                        bucket[key] = (new_ordering, mult)
                    else:
                        bucket[key] = (prev[0], prev[1] + mult)
        if len(bucket) > _SEARCH_STATE_CAP:
            raise CapabilityError("canonical search state explosion")
        states = {ordering: mult for ordering, mult in bucket.values()}
    # all surviving orderings produce the same canonical matrix
    ordering = next(iter(states))
    return list(ordering), sum(states.values())


def canonical_class(order: FiniteOrder) -> OrderClass:
    """Relabeling-invariant canonical key of the order's isomorphism class."""
    if order.K > CANONICAL_K_MAX:
        raise CapabilityError(f"canonicalization limited to K <= {CANONICAL_K_MAX}")
    ordering, _ = _canonical_search(order.leq)
    mat = order.leq[np.ix_(ordering, ordering)]
    return OrderClass(bytes([order.K]) + np.packbits(mat).tobytes())


def automorphism_count(order: FiniteOrder) -> int:
    """Number of order-preserving bijections of {1..K} onto itself."""
    if order.K > CANONICAL_K_MAX:
        raise CapabilityError(f"automorphism count limited to K <= {CANONICAL_K_MAX}")
    _, count = _canonical_search(order.leq)
    return count


def canonical_matrix(order: FiniteOrder) -> np.ndarray:
    """The canonical representative matrix of the order's class."""
    ordering, _ = _canonical_search(order.leq)
    return order.leq[np.ix_(ordering, ordering)]


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def enumerate_orders(K: int):
    """All labeled partial orders on {1..K} (K <= 5), without duplicates.

    Each unordered pair independently takes one of three states
    (incomparable, i<j, j<i); the 3**C(K,2) candidates are filtered by
    transitivity in a vectorized pass.
    """
    if K > ENUMERATE_K_MAX:
        raise CapabilityError(f"enumeration limited to K <= {ENUMERATE_K_MAX}")
    if K < 1:
        raise ValueError("K must be >= 1")
    pairs = [(i, j) for i in range(K) for j in range(i + 1, K)]
    n_pairs = len(pairs)
    states = np.array(list(product(range(3), repeat=n_pairs)), dtype=np.uint8)
    n_cand = states.shape[0]
    mats = np.zeros((n_cand, K, K), dtype=bool)
    mats[:, np.arange(K), np.arange(K)] = True
    for idx, (i, j) in enumerate(pairs):
        mats[:, i, j] = states[:, idx] == 1
        mats[:, j, i] = states[:, idx] == 2
    m8 = mats.astype(np.uint8)
    closure = np.einsum("bij,bjk->bik", m8, m8) > 0
    transitive = ~np.any(closure & ~mats, axis=(1, 2))
    return [FiniteOrder(K, mats[b]) for b in np.nonzero(transitive)[0]]


# ---------------------------------------------------------------------------
# order-theoretic constructions
# ---------------------------------------------------------------------------

def down_set(order: FiniteOrder, A) -> set:
    """Common lower bounds: {m : m <= a for every a in A}."""
    idx = sorted(A)
    mask = np.all(order.leq[:, idx], axis=1)
    return set(np.nonzero(mask)[0].tolist())


def order_interval(order: FiniteOrder, u: int, v: int) -> set:
    """The order interval {k : u <= k <= v}."""
    mask = order.leq[u, :] & order.leq[:, v]
    return set(np.nonzero(mask)[0].tolist())


def interval_measure_estimate(order: FiniteOrder, u: int, v: int) -> float:
    """Fraction of elements inside the interval [u, v]."""
    if not order.leq[u, v]:
        raise ValueError(f"{u} <= {v} does not hold in the order")
    return len(order_interval(order, u, v)) / order.K


def _interval_not_total(order: FiniteOrder) -> np.ndarray:
    """not_total[u, v]: [u, v] contains an incomparable pair (u <= v only)."""
    K = order.K
    leq = order.leq
    comp = (leq | leq.T).astype(np.float32)
    # member[u, v, a] = (u <= a) and (a <= v)
    member = (leq[:, None, :] & leq.T[None, :, :])
    memf = member.astype(np.float32).reshape(K * K, K)
    sizes = memf.sum(axis=1)
    comparable_pairs = np.einsum("xa,xa->x", memf @ comp, memf)
    return (comparable_pairs < sizes * sizes - 1e-6).reshape(K, K) & leq


def chronology_relation(order: FiniteOrder) -> np.ndarray:
    """Pairs x <= y whose witness interval is not totally ordered.

    Marks (x, y) iff there are u, v with x < u <= {interval} and the
    interval [u, v] with v < y contains an incomparable pair; every chain
    therefore yields the empty relation.
    """
    strict = order.strict().astype(np.float32)
    middle = (_interval_not_total(order) & (order.strict())).astype(np.float32)
    reach = (strict @ middle @ strict) > 0
    return reach & order.leq


def permute_order(order: FiniteOrder, sigma) -> FiniteOrder:
    """Relabel the order: element i becomes sigma[i]."""
    sigma = np.asarray(sigma, dtype=int)
    if sorted(sigma.tolist()) != list(range(order.K)):
        raise ValueError("sigma must be a bijection of {0..K-1}")
    inv = np.argsort(sigma)
    return FiniteOrder(order.K, order.leq[np.ix_(inv, inv)])


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def order_to_text(order: FiniteOrder) -> str:
    rows = ["".join("1" if b else "0" for b in row) for row in order.leq]
    return "\n".join([str(order.K)] + rows) + "\n"


def order_from_text(text: str) -> FiniteOrder:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    K = int(lines[0])
    if len(lines) != K + 1:
        raise ValueError(f"expected {K} matrix rows, got {len(lines) - 1}")
    mat = np.array([[ch == "1" for ch in ln.strip()] for ln in lines[1:]], dtype=bool)
    return FiniteOrder(K, mat)


def distribution_to_csv(dist: ClassDistribution) -> str:
    lines = ["canonical_key,probability,count"]
    for cls in sorted(dist.weights, key=lambda c: c.canonical_key):
        count = dist.counts.get(cls, 0)
        lines.append(f"{cls.hex()},{dist.weights[cls]!r},{count}")
    return "\n".join(lines) + "\n"


def distribution_from_csv(text: str, K: int) -> ClassDistribution:
    lines = text.strip().splitlines()
    weights, counts = {}, {}
    for ln in lines[1:]:
        key_hex, prob, count = ln.split(",")
        cls = OrderClass(bytes.fromhex(key_hex))
        weights[cls] = float(prob)
        counts[cls] = int(count)
    return ClassDistribution(K, weights, sample_count=sum(counts.values()), counts=counts)
