"""Computationally feasible matchers and the shared assignment rounding step.

All three baselines are blind: they see only the two (possibly corrupted)
graphs, never the latent permutation or the corrupted node sets, and each
returns a total permutation so overlap/n is directly the recovered fraction.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ComputationError, ParameterError
from .graphs import Graph, Permutation

__all__ = [
    "linear_assignment",
    "grampa",
    "degree_profile",
    "degree_profile_cost_matrix",
    "canonical_labeling",
    "DEFAULT_GRAMPA_ETA",
    "DEFAULT_QUANTILE_GRID",
]

DEFAULT_GRAMPA_ETA = 0.2
DEFAULT_QUANTILE_GRID = 128


def linear_assignment(cost: np.ndarray, sense: str = "min") -> Permutation:
    """Optimal assignment for a square cost matrix (augmenting-path solver).

    ``sense`` is "min" or "max". Non-finite entries are rejected.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ParameterError(f"cost matrix must be square, got shape {cost.shape}")
    if not np.isfinite(cost).all():
        raise ParameterError("cost matrix entries must be finite")
    if sense not in ("min", "max"):
        raise ParameterError(f"sense must be 'min' or 'max', got {sense!r}")
    row, col = linear_sum_assignment(cost, maximize=(sense == "max"))
    images = np.empty(cost.shape[0], dtype=np.int64)
    images[row] = col
    return Permutation(images)


def _unit_scale_adjacency(g: Graph) -> np.ndarray:
    """Adjacency rescaled by sqrt(n * density * (1 - density)).

    Puts the spectral bulk on a size-independent [-2, 2]-ish range so a fixed
    kernel bandwidth is meaningful across graph sizes. Density is estimated
    from the graph itself (no hidden knowledge). Degenerate empty/complete
    graphs are returned unscaled.
    """
    a = g.dense().astype(np.float64)
    pairs = g.n * (g.n - 1)
    density = a.sum() / pairs if pairs else 0.0
    if 0.0 < density < 1.0:
        a = a / math.sqrt(g.n * density * (1.0 - density))
    return a


def grampa(h1: Graph, h2: Graph, eta: float = DEFAULT_GRAMPA_ETA) -> Permutation:
    """Spectral similarity matching with a Cauchy-of-order-2 spectrum kernel.

    Builds K = sum_{i,j} (u_i^T 1)(1^T v_j) / ((lambda_i - mu_j)^2 + eta^2)
    * u_i v_j^T over the eigenpairs of the two unit-scaled adjacency
    matrices, then rounds K to a permutation by maximum-weight assignment.
    K does not depend on eigenvector sign or eigenbasis choices: within any
    eigenspace the kernel weight is constant, so only projectors enter.
    """
    n = h1.n
    if n != h2.n:
        raise ParameterError("graphs must have the same node count")
    if n < 2:
        raise ParameterError("spectral matching needs at least 2 nodes")
    if eta <= 0:
        raise ParameterError(f"eta must be > 0, got {eta}")
    a1 = _unit_scale_adjacency(h1)
    a2 = _unit_scale_adjacency(h2)
    try:
        w1, u = np.linalg.eigh(a1)
        w2, v = np.linalg.eigh(a2)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy rarely fails here
        raise ComputationError(f"adjacency eigendecomposition failed: {exc}") from exc
    weights = 1.0 / ((w1[:, None] - w2[None, :]) ** 2 + eta * eta)
    ones = np.ones(n)
    coeff = weights * np.outer(u.T @ ones, v.T @ ones)
    similarity = u @ coeff @ v.T
    return linear_assignment(similarity, sense="max")


def _neighbor_degree_signatures(g: Graph) -> list[np.ndarray]:
    """Per node, the sorted degrees of its neighbors rescaled to [0, 1].

    Isolated nodes get the single-atom signature {0}.
    """
    scale = max(g.n - 1, 1)
    degs = g.degrees().astype(np.float64) / scale
    dense = g.dense()
    out = []
    for i in range(g.n):
        vals = degs[dense[i]]
        out.append(np.sort(vals) if vals.size else np.zeros(1))
    return out


def _quantile_table(signatures: list[np.ndarray], grid: int) -> np.ndarray:
    taus = (np.arange(grid) + 0.5) / grid
    return np.stack([np.quantile(sig, taus, method="linear") for sig in signatures])


def degree_profile_cost_matrix(h1: Graph, h2: Graph, grid: int = DEFAULT_QUANTILE_GRID) -> np.ndarray:
    """Pairwise 1-Wasserstein distances between neighbor-degree signatures.

    Distances are evaluated as the average absolute difference of the two
    quantile functions on a common mid-quantile grid, with linear
    interpolation bridging unequal signature sizes. Zero diagonal when the
    graphs coincide.
    """
    q1 = _quantile_table(_neighbor_degree_signatures(h1), grid)
    q2 = _quantile_table(_neighbor_degree_signatures(h2), grid)
    n = q1.shape[0]
    cost = np.zeros((n, n))
    for col in range(grid):
        cost += np.abs(q1[:, col, None] - q2[None, :, col])
    return cost / grid


def degree_profile(h1: Graph, h2: Graph, grid: int = DEFAULT_QUANTILE_GRID) -> Permutation:
    """Match nodes by the distributional similarity of their neighbors'
    degrees, rounding the Wasserstein cost matrix by minimum assignment."""
    if h1.n != h2.n:
        raise ParameterError("graphs must have the same node count")
    return linear_assignment(degree_profile_cost_matrix(h1, h2, grid), sense="min")


def _degree_rank(g: Graph) -> np.ndarray:
    """Node ids ordered by decreasing degree, ties broken by node index."""
    degs = g.degrees()
    return np.lexsort((np.arange(g.n), -degs))


def canonical_labeling(h1: Graph, h2: Graph, seed_count: int | None = None) -> Permutation:
    """Seed-and-extend matching: the top-degree nodes of each graph are
    paired by degree rank, and the rest are matched by minimum Hamming
    distance between their adjacency bit-vectors onto the seeds.

    ``seed_count`` defaults to ceil(log2 n) and is clamped to n. Returns a
    total permutation.
    """
    n = h1.n
    if n != h2.n:
        raise ParameterError("graphs must have the same node count")
    if seed_count is None:
        seed_count = max(1, math.ceil(math.log2(n))) if n > 1 else 1
    if seed_count < 1:
        raise ParameterError(f"seed_count must be >= 1, got {seed_count}")
    seed_count = min(seed_count, n)

    rank1, rank2 = _degree_rank(h1), _degree_rank(h2)
    seeds1, seeds2 = rank1[:seed_count], rank2[:seed_count]
    images = np.full(n, -1, dtype=np.int64)
    images[seeds1] = seeds2

    rest1 = np.sort(rank1[seed_count:])
    rest2 = np.sort(rank2[seed_count:])
    if rest1.size:
        sig1 = h1.dense()[np.ix_(rest1, seeds1)].astype(np.int16)
        sig2 = h2.dense()[np.ix_(rest2, seeds2)].astype(np.int16)
        hamming = np.abs(sig1[:, None, :] - sig2[None, :, :]).sum(axis=2)
        sub = linear_assignment(hamming, sense="min")
        images[rest1] = rest2[sub.images]
    return Permutation(images)
