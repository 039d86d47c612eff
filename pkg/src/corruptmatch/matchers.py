"""The two information-theoretic estimators and their analysis machinery.

Maximum-overlap and k-core matching are not polynomial-time solvable, so the
exact solvers here carry hard instance-size caps and a scalable local-search
stand-in is provided for the overlap objective. The genie variant of the
k-core estimator (which peels the true intersection graph) is for analysis
and validation only: it reads the latent permutation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .corruption import CorruptedInstance
from .errors import ParameterError, SizeLimitError
from .graphs import (
    Graph,
    Matching,
    Permutation,
    intersection_edge_count,
    intersection_graph,
)

__all__ = [
    "default_k",
    "KCoreResult",
    "k_core_of_graph",
    "genie_k_core",
    "k_core_estimator_exact",
    "is_k_core_matching",
    "max_overlap_exact",
    "max_overlap_localsearch",
    "overlap_objective",
    "f_statistic",
    "is_weak_k_core",
    "extend_to_maximal",
    "MaximalMatchingEnum",
    "enumerate_maximal_matchings",
    "maximal_matching_count_bound",
    "MAX_OVERLAP_EXACT_CAP",
    "KCORE_EXACT_CAP",
    "MAXIMAL_ENUM_CAP",
]

MAX_OVERLAP_EXACT_CAP = 10
KCORE_EXACT_CAP = 8
MAXIMAL_ENUM_CAP = 8


def default_k(n: int) -> int:
    """Degree threshold used by the k-core estimator: ceil(sqrt(log n))."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return math.ceil(math.sqrt(math.log(n)))


# -- k-core machinery --------------------------------------------------------


def k_core_of_graph(g: Graph, k: int) -> np.ndarray:
    """Largest node set whose induced subgraph has minimum degree >= k,
    found by iteratively peeling nodes of degree < k. Returns sorted ids."""
    if k < 0:
        raise ParameterError(f"k must be >= 0, got {k}")
    adj = g.dense()
    alive = np.ones(g.n, dtype=bool)
    while True:
        deg = (adj & alive[None, :]).sum(axis=1)
        drop = alive & (deg < k)
        if not drop.any():
            return np.flatnonzero(alive).astype(np.int64)
        alive &= ~drop


def genie_k_core(inst: CorruptedInstance, k: int) -> Matching:
    """Latent permutation restricted to the k-core of the true intersection
    graph. Analysis object only: precision is 1 by construction."""
    img = inst.pi_star.images
    a1 = inst.g1_tilde.dense()
    a2 = inst.g2_tilde.dense()[np.ix_(img, img)]
    core = k_core_of_graph(Graph.from_dense(a1 & a2, validate=False), k)
    return Matching(core, img[core])


def is_k_core_matching(mu: Matching | Permutation, h1: Graph, h2: Graph, k: int) -> bool:
    """True iff the intersection graph under ``mu`` has min degree >= k
    (vacuously true for the empty matching)."""
    ig = intersection_graph(h1, h2, mu)
    md = ig.min_degree()
    return True if md is None else md >= k


def _matching_sort_key(mu: Matching) -> tuple:
    return (tuple(mu.domain.tolist()), tuple(mu.images.tolist()))


@dataclass(frozen=True)
class KCoreResult:
    """A k-core matching with its threshold and a flag telling whether it came
    from the exhaustive solver (hence is of maximum domain cardinality)."""

    matching: Matching
    k: int
    certified_exact: bool


def k_core_estimator_exact(h1: Graph, h2: Graph, k: int) -> KCoreResult:
    """Search all matchings for a k-core matching of maximum domain size.

    Domains are scanned largest-first in lexicographic order and images in
    increasing order, so the first hit is the (domain, image-sequence)
    lexicographic minimum among maximum-cardinality solutions. Branch and
    bound: a domain is skipped when its induced first-graph degrees cannot
    reach k, and partial assignments are cut once an assigned node can no
    longer collect k intersection edges.
    """
    n = h1.n
    if n != h2.n:
        raise ParameterError("graphs must have the same node count")
    if n > KCORE_EXACT_CAP:
        raise SizeLimitError(
            f"exact k-core search is capped at n <= {KCORE_EXACT_CAP}, got {n}"
        )
    if k < 0:
        raise ParameterError(f"k must be >= 0, got {k}")
    a1 = h1.dense()
    a2 = h2.dense()
    deg2_ok = h2.degrees() >= k

    for d in range(n, 0, -1):
        for domain in itertools.combinations(range(n), d):
            dom = np.array(domain, dtype=np.int64)
            sub1 = a1[np.ix_(dom, dom)]
            if (sub1.sum(axis=1) < k).any():
                continue
            neighbor_lists = [np.flatnonzero(row) for row in sub1]
            images = np.full(d, -1, dtype=np.int64)
            attained = np.zeros(d, dtype=np.int64)
            used = np.zeros(n, dtype=bool)

            def backtrack(q: int) -> np.ndarray | None:
                if q == d:
                    return images.copy()
                for m in range(n):
                    if used[m] or not deg2_ok[m]:
                        continue
                    gained = [
                        r
                        for r in neighbor_lists[q]
                        if r < q and a2[m, images[r]]
                    ]
                    images[q] = m
                    used[m] = True
                    attained[q] = len(gained)
                    for r in gained:
                        attained[r] += 1
                    feasible = True
                    for r in range(q + 1):
                        remaining = int((neighbor_lists[r] > q).sum())
                        if attained[r] + remaining < k:
                            feasible = False
                            break
                    if feasible:
                        found = backtrack(q + 1)
                        if found is not None:
                            return found
                    for r in gained:
                        attained[r] -= 1
                    attained[q] = 0
                    used[m] = False
                    images[q] = -1
                return None

            result = backtrack(0)
            if result is not None:
                return KCoreResult(
                    matching=Matching(dom, result), k=k, certified_exact=True
                )
    return KCoreResult(matching=Matching.empty(), k=k, certified_exact=True)


# -- maximum overlap ----------------------------------------------------------


def overlap_objective(h1: Graph, h2: Graph, mu: Matching | Permutation) -> int:
    """Number of edges of the intersection graph under ``mu``."""
    return intersection_edge_count(h1, h2, mu)


def max_overlap_exact(h1: Graph, h2: Graph) -> Permutation:
    """Argmax over all full permutations of the intersection edge count.

    Domains are extended to all nodes without loss (extending a matching
    never removes intersection edges). Ties break to the lexicographically
    smallest image sequence. Factorial search, capped.
    """
    n = h1.n
    if n != h2.n:
        raise ParameterError("graphs must have the same node count")
    if n > MAX_OVERLAP_EXACT_CAP:
        raise SizeLimitError(
            f"exact max-overlap search is capped at n <= {MAX_OVERLAP_EXACT_CAP}, got {n}"
        )
    edges = h1.edges()
    if edges.shape[0] == 0:
        return Permutation.identity(n)
    a2 = h2.dense()
    best_perm: tuple[int, ...] | None = None
    best_val = -1
    chunk = 40320
    perm_iter = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(perm_iter, chunk))
        if not block:
            break
        parr = np.array(block, dtype=np.int64)
        vals = np.zeros(parr.shape[0], dtype=np.int64)
        for i, j in edges:
            vals += a2[parr[:, i], parr[:, j]]
        top = int(vals.argmax())
        if int(vals[top]) > best_val:
            best_val = int(vals[top])
            best_perm = block[top]
    assert best_perm is not None
    return Permutation(np.array(best_perm, dtype=np.int64))


def max_overlap_localsearch(
    h1: Graph,
    h2: Graph,
    rng: np.random.Generator,
    restarts: int = 20,
    sweeps: int = 200,
    temperature: float = 0.0,
) -> Permutation:
    """Transposition hill-climb on the overlap objective.

    First-improvement sweeps over all 2-swaps; the identity permutation seeds
    the first restart and the rest start from random permutations. With a
    positive temperature, worsening swaps are accepted with Metropolis
    probability (annealing disabled by default). The returned permutation is
    the best over restarts, ties broken by lexicographic image sequence; the
    result is a deterministic function of the generator state.
    """
    n = h1.n
    if n != h2.n:
        raise ParameterError("graphs must have the same node count")
    a1 = h1.dense().astype(np.int16)
    a2 = h2.dense().astype(np.int16)

    def climb(sigma: np.ndarray) -> tuple[int, np.ndarray]:
        for _ in range(sweeps):
            improved = False
            for u in range(n - 1):
                for v in range(u + 1, n):
                    d1 = a1[u] - a1[v]
                    d2 = (a2[sigma[v]] - a2[sigma[u]])[sigma]
                    delta = int(d1 @ d2) - int(d1[u] * d2[u]) - int(d1[v] * d2[v])
                    accept = delta > 0
                    if not accept and temperature > 0.0 and delta < 0:
                        accept = rng.random() < math.exp(delta / temperature)
                    if accept:
                        sigma[u], sigma[v] = sigma[v], sigma[u]
                        improved = True
            if not improved:
                break
        perm = Permutation(sigma.copy())
        return overlap_objective(h1, h2, perm), sigma

    best_val = -1
    best_sigma: np.ndarray | None = None
    for r in range(max(1, restarts)):
        start = np.arange(n, dtype=np.int64) if r == 0 else rng.permutation(n).astype(np.int64)
        val, sigma = climb(start)
        if val > best_val or (
            val == best_val
            and best_sigma is not None
            and tuple(sigma.tolist()) < tuple(best_sigma.tolist())
        ):
            best_val, best_sigma = val, sigma
    assert best_sigma is not None
    return Permutation(best_sigma)


# -- weak k-core statistics ----------------------------------------------------


def _disagreement_mask(mu: Matching, mu_star: Matching | Permutation) -> np.ndarray:
    if isinstance(mu_star, Permutation):
        return mu.images != mu_star.images[mu.domain]
    ref = mu_star.as_dict()
    return np.array(
        [ref.get(int(i), -1) != int(j) for i, j in zip(mu.domain, mu.images)],
        dtype=bool,
    )


def f_statistic(
    mu: Matching | Permutation,
    mu_star: Matching | Permutation,
    h1: Graph,
    h2: Graph,
) -> int:
    """Total intersection-graph degree of the nodes where ``mu`` disagrees
    with the reference matching."""
    mu = mu.as_matching() if isinstance(mu, Permutation) else mu
    if len(mu) == 0:
        return 0
    ig = intersection_graph(h1, h2, mu)
    mask = _disagreement_mask(mu, mu_star)
    return int(ig.degrees()[mask].sum())


def is_weak_k_core(
    mu: Matching | Permutation,
    mu_star: Matching | Permutation,
    h1: Graph,
    h2: Graph,
    k: int,
) -> bool:
    """True iff the disagreeing nodes have average intersection degree >= k."""
    mu = mu.as_matching() if isinstance(mu, Permutation) else mu
    d = int(_disagreement_mask(mu, mu_star).sum()) if len(mu) else 0
    return f_statistic(mu, mu_star, h1, h2) >= k * d


def extend_to_maximal(mu: Matching, mu_star: Permutation) -> Matching:
    """Unique extension of ``mu`` by reference pairs: add i -> mu_star(i) for
    every unmatched i whose reference image is still free."""
    taken = set(mu.images.tolist())
    dom = set(mu.domain.tolist())
    extra = [
        (i, int(mu_star.images[i]))
        for i in range(mu_star.n)
        if i not in dom and int(mu_star.images[i]) not in taken
    ]
    return Matching(
        np.concatenate([mu.domain, np.array([i for i, _ in extra], dtype=np.int64)]),
        np.concatenate([mu.images, np.array([j for _, j in extra], dtype=np.int64)]),
    )


def is_maximal_matching(mu: Matching, mu_star: Permutation) -> bool:
    """Every reference node is matched or has its reference image taken."""
    dom = set(mu.domain.tolist())
    rng_set = set(mu.images.tolist())
    return all(i in dom or int(mu_star.images[i]) in rng_set for i in range(mu_star.n))


@dataclass(frozen=True)
class MaximalMatchingEnum:
    """Stream of reference-maximal matchings at a fixed disagreement count."""

    reference: Permutation
    d: int
    items: Iterator[Matching]


def _maximal_matchings(mu_star: Permutation, d: int) -> Iterator[Matching]:
    n = mu_star.n
    ref = mu_star.images
    if d == 0:
        yield mu_star.as_matching()
        return
    for domain in itertools.combinations(range(n), d):
        ref_here = [int(ref[i]) for i in domain]
        for images in itertools.permutations(range(n), d):
            if any(m == r for m, r in zip(images, ref_here)):
                continue
            img_set = set(images)
            # The agreeing part is forced: every other node whose reference
            # image is not consumed by the disagreeing block keeps it.
            rest = [
                (i, int(ref[i]))
                for i in range(n)
                if i not in domain and int(ref[i]) not in img_set
            ]
            dom_full = list(domain) + [i for i, _ in rest]
            img_full = list(images) + [j for _, j in rest]
            yield Matching(dom_full, img_full)


def enumerate_maximal_matchings(mu_star: Permutation, d: int) -> MaximalMatchingEnum:
    """Every reference-maximal matching with exactly ``d`` disagreements,
    emitted exactly once. Exhaustive: capped at small n."""
    n = mu_star.n
    if n > MAXIMAL_ENUM_CAP:
        raise SizeLimitError(
            f"maximal-matching enumeration is capped at n <= {MAXIMAL_ENUM_CAP}, got {n}"
        )
    if not 0 <= d <= n:
        raise ParameterError(f"d must be in [0, {n}], got {d}")
    return MaximalMatchingEnum(reference=mu_star, d=d, items=_maximal_matchings(mu_star, d))


def maximal_matching_count_bound(n: int, d: int) -> float:
    """Counting bound on reference-maximal matchings: n^(2d) / d!."""
    return float(n) ** (2 * d) / math.factorial(d)
