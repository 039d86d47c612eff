"""Graph, permutation and matching primitives.

Nodes are 0-based integers ``0..n-1``. Graphs are undirected and simple;
adjacency is stored as packed bit rows (one row of ``ceil(n/8)`` bytes per
node), and intersection-graph edge counting runs on row-wise AND plus
popcount. Permutations, matchings and graphs are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyDomainError, ParameterError, SchemaError

__all__ = [
    "Graph",
    "Permutation",
    "Matching",
    "CorrelatedPair",
    "sample_er",
    "sample_cer",
    "sample_cer_identity",
    "apply_permutation",
    "intersection_graph",
    "IntersectionGraph",
    "overlap",
    "precision",
    "write_edgelist",
    "read_edgelist",
    "matching_to_json",
    "matching_from_json",
]


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Graph:
    """Undirected simple graph on nodes ``0..n-1`` with bitset adjacency."""

    __slots__ = ("n", "_rows", "_dense", "_degrees")

    def __init__(self, n: int, rows: np.ndarray):
        if n < 1:
            raise ParameterError(f"graph needs at least one node, got n={n}")
        self.n = int(n)
        self._rows = _freeze(rows)
        self._dense: np.ndarray | None = None
        self._degrees: np.ndarray | None = None

    # -- construction -------------------------------------------------

    @classmethod
    def from_dense(cls, adj: np.ndarray, *, validate: bool = True) -> "Graph":
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ParameterError(f"adjacency must be square, got shape {adj.shape}")
        if validate:
            if adj.diagonal().any():
                raise ParameterError("self-loops are not allowed")
            if not np.array_equal(adj, adj.T):
                raise ParameterError("adjacency must be symmetric")
        g = cls(adj.shape[0], np.packbits(adj, axis=1))
        g._dense = _freeze(adj.copy())
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ParameterError(f"self-loop ({i},{i}) is not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ParameterError(f"edge ({i},{j}) out of range for n={n}")
            adj[i, j] = adj[j, i] = True
        return cls.from_dense(adj, validate=False)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_dense(np.zeros((n, n), dtype=bool), validate=False)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        adj = np.ones((n, n), dtype=bool)
        np.fill_diagonal(adj, False)
        return cls.from_dense(adj, validate=False)

    # -- views ---------------------------------------------------------

    @property
    def rows(self) -> np.ndarray:
        """Packed adjacency rows, shape ``(n, ceil(n/8))`` uint8."""
        return self._rows

    def dense(self) -> np.ndarray:
        """Boolean adjacency matrix (cached, read-only)."""
        if self._dense is None:
            self._dense = _freeze(
                np.unpackbits(self._rows, axis=1, count=self.n).astype(bool)
            )
        return self._dense

    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            self._degrees = _freeze(
                np.bitwise_count(self._rows).sum(axis=1, dtype=np.int64)
            )
        return self._degrees

    @property
    def edge_count(self) -> int:
        return int(self.degrees().sum()) // 2

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        return bool(self._rows[i, j >> 3] & (0x80 >> (j & 7)))

    def edges(self) -> np.ndarray:
        """Edge list as an ``(m, 2)`` array with i < j, lexicographic order."""
        return np.argwhere(np.triu(self.dense(), 1))

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.dense()[i])

    # -- comparison ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._rows, other._rows)

    def __hash__(self) -> int:  # pragma: no cover - identity hash only
        return id(self)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


class Permutation:
    """Bijection on ``0..n-1`` stored as the sequence of images."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int] | np.ndarray):
        images = np.asarray(images, dtype=np.int64)
        n = images.shape[0]
        if images.ndim != 1 or not np.array_equal(np.sort(images), np.arange(n)):
            raise ParameterError("images must be a rearrangement of 0..n-1")
        self.images = _freeze(images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n, dtype=np.int64))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(rng.permutation(n))

    @property
    def n(self) -> int:
        return int(self.images.shape[0])

    def __call__(self, i: int) -> int:
        return int(self.images[i])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.n)
        return Permutation(inv)

    def fixed_point_count(self) -> int:
        return int((self.images == np.arange(self.n)).sum())

    def fixed_point_fraction(self) -> float:
        return self.fixed_point_count() / self.n

    def as_matching(self) -> "Matching":
        return Matching(np.arange(self.n), self.images)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.images, other.images)

    def __hash__(self) -> int:  # pragma: no cover
        return hash(tuple(self.images.tolist()))

    def __repr__(self) -> str:
        return f"Permutation({self.images.tolist()})"


class Matching:
    """Partial injective map ``domain -> [n]``; a total one is a permutation."""

    __slots__ = ("domain", "images", "_map")

    def __init__(self, domain: Sequence[int] | np.ndarray, images: Sequence[int] | np.ndarray):
        domain = np.asarray(domain, dtype=np.int64)
        images = np.asarray(images, dtype=np.int64)
        if domain.shape != images.shape or domain.ndim != 1:
            raise ParameterError("domain and images must be 1-D arrays of equal length")
        order = np.argsort(domain)
        domain, images = domain[order], images[order]
        if domain.size and np.any(domain[1:] == domain[:-1]):
            raise ParameterError("domain nodes must be distinct")
        if np.unique(images).size != images.size:
            raise ParameterError("matching must be injective")
        self.domain = _freeze(domain)
        self.images = _freeze(images)
        self._map: dict[int, int] | None = None

    @classmethod
    def empty(cls) -> "Matching":
        return cls(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Matching":
        pairs = list(pairs)
        return cls([i for i, _ in pairs], [j for _, j in pairs])

    def as_dict(self) -> dict[int, int]:
        if self._map is None:
            self._map = dict(zip(self.domain.tolist(), self.images.tolist()))
        return self._map

    def __len__(self) -> int:
        return int(self.domain.size)

    def __call__(self, i: int) -> int:
        return self.as_dict()[i]

    def __contains__(self, i: int) -> bool:
        return i in self.as_dict()

    def is_total(self, n: int) -> bool:
        return len(self) == n

    def pairs(self) -> list[tuple[int, int]]:
        """``[i, mu(i)]`` pairs sorted by i (the JSON wire ordering)."""
        return list(zip(self.domain.tolist(), self.images.tolist()))

    def restricted_to(self, nodes: Sequence[int] | np.ndarray) -> "Matching":
        keep = np.isin(self.domain, np.asarray(nodes, dtype=np.int64))
        return Matching(self.domain[keep], self.images[keep])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return np.array_equal(self.domain, other.domain) and np.array_equal(
            self.images, other.images
        )

    def __hash__(self) -> int:  # pragma: no cover
        return hash((tuple(self.domain.tolist()), tuple(self.images.tolist())))

    def __repr__(self) -> str:
        return f"Matching({self.pairs()})"


def _as_matching(mu: Matching | Permutation) -> Matching:
    return mu.as_matching() if isinstance(mu, Permutation) else mu


@dataclass(frozen=True)
class CorrelatedPair:
    """A correlated graph pair with its latent correspondence retained."""

    g1: Graph
    g2: Graph
    pi_star: Permutation
    n: int
    p: float
    s: float


# -- sampling -----------------------------------------------------------


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} must be in [0, 1], got {value}")
    return value


def _random_pair_mask(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Symmetric boolean matrix whose upper-triangle entries are iid Bern(p)."""
    upper = np.triu(rng.random((n, n)) < p, 1)
    return upper | upper.T


def sample_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Sample an Erdos-Renyi graph: each unordered pair is an edge iid w.p. p."""
    p = _check_probability("p", p)
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if p == 0.0:
        return Graph.empty(n)
    if p == 1.0:
        return Graph.complete(n)
    return Graph.from_dense(_random_pair_mask(n, p, rng), validate=False)


def _sample_subsampled_pair(
    n: int, p: float, s: float, rng: np.random.Generator
) -> tuple[Graph, Graph]:
    """Two graphs subsampled edge-wise from a common parent, identity-aligned."""
    parent = _random_pair_mask(n, p, rng)
    keep1 = _random_pair_mask(n, s, rng)
    keep2 = _random_pair_mask(n, s, rng)
    g1 = Graph.from_dense(parent & keep1, validate=False)
    g2 = Graph.from_dense(parent & keep2, validate=False)
    return g1, g2


def sample_cer(n: int, p: float, s: float, rng: np.random.Generator) -> CorrelatedPair:
    """Sample a correlated pair: parent ER(n, p), edges kept iid w.p. s on each
    side, and the second graph relabeled by a uniform latent permutation."""
    p = _check_probability("p", p)
    s = _check_probability("s", s)
    g1, g2_aligned, pi_star = _sample_cer_parts(n, p, s, rng)
    g2 = apply_permutation(g2_aligned, pi_star)
    return CorrelatedPair(g1=g1, g2=g2, pi_star=pi_star, n=n, p=p, s=s)


def sample_cer_identity(n: int, p: float, s: float, rng: np.random.Generator) -> CorrelatedPair:
    """Correlated pair in the exchangeability frame: latent map fixed to the
    identity. Distributionally equivalent to relabeling a sampled pair back."""
    p = _check_probability("p", p)
    s = _check_probability("s", s)
    g1, g2 = _sample_subsampled_pair(n, p, s, rng)
    return CorrelatedPair(g1=g1, g2=g2, pi_star=Permutation.identity(n), n=n, p=p, s=s)


def _sample_cer_parts(
    n: int, p: float, s: float, rng: np.random.Generator
) -> tuple[Graph, Graph, Permutation]:
    g1, g2_aligned = _sample_subsampled_pair(n, p, s, rng)
    pi_star = Permutation.random(n, rng)
    return g1, g2_aligned, pi_star


# -- operations ---------------------------------------------------------


def apply_permutation(g: Graph, pi: Permutation) -> Graph:
    """Relabel nodes so that the image graph has edge {pi(i), pi(j)} iff
    {i, j} is an edge of ``g``."""
    if pi.n != g.n:
        raise ParameterError(f"permutation size {pi.n} != graph size {g.n}")
    inv = pi.inverse().images
    return Graph.from_dense(g.dense()[np.ix_(inv, inv)], validate=False)


@dataclass(frozen=True)
class IntersectionGraph:
    """Graph on a matching's domain, nodes kept under their original labels.

    ``nodes[k]`` is the original id of positional node ``k`` of ``graph``.
    """

    nodes: np.ndarray
    graph: Graph

    def position_of(self, node: int) -> int:
        k = int(np.searchsorted(self.nodes, node))
        if k >= self.nodes.size or self.nodes[k] != node:
            raise ParameterError(f"node {node} is not in the intersection domain")
        return k

    def degree(self, node: int) -> int:
        return int(self.graph.degrees()[self.position_of(node)])

    def has_edge(self, u: int, v: int) -> bool:
        return self.graph.has_edge(self.position_of(u), self.position_of(v))

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count if self.nodes.size else 0

    def degrees(self) -> np.ndarray:
        """Degrees aligned with ``nodes``."""
        if self.nodes.size == 0:
            return np.empty(0, dtype=np.int64)
        return self.graph.degrees()

    def min_degree(self) -> int | None:
        """Minimum degree over the domain; None for an empty domain."""
        degs = self.degrees()
        return int(degs.min()) if degs.size else None


def intersection_graph(h1: Graph, h2: Graph, mu: Matching | Permutation) -> IntersectionGraph:
    """Intersection graph on dom(mu): {i,j} is an edge iff it is an edge of
    ``h1`` and {mu(i), mu(j)} is an edge of ``h2``."""
    mu = _as_matching(mu)
    dom, img = mu.domain, mu.images
    if dom.size == 0:
        # No nodes: represent with a one-node placeholder graph and an empty
        # node list; all queries go through `nodes`.
        return IntersectionGraph(nodes=_freeze(dom.copy()), graph=Graph.empty(1))
    if dom.min() < 0 or dom.max() >= h1.n:
        raise ParameterError("matching domain must lie inside the first graph")
    if img.min() < 0 or img.max() >= h2.n:
        raise ParameterError("matching image out of range of the second graph")
    a1 = h1.dense()[np.ix_(dom, dom)]
    a2 = h2.dense()[np.ix_(img, img)]
    return IntersectionGraph(
        nodes=_freeze(dom.copy()), graph=Graph.from_dense(a1 & a2, validate=False)
    )


def intersection_edge_count(h1: Graph, h2: Graph, mu: Matching | Permutation) -> int:
    """|E(h1 /\\_mu h2)| without materializing the intersection graph.

    For a total matching this is a row-wise AND + popcount over packed rows.
    """
    mu = _as_matching(mu)
    if mu.is_total(h1.n) and h1.n == h2.n:
        relabeled = h2.dense()[np.ix_(mu.images, mu.images)]
        packed = np.packbits(relabeled, axis=1)
        both = np.bitwise_count(h1.rows & packed)
        return int(both.sum()) // 2
    return intersection_graph(h1, h2, mu).edge_count


def overlap(mu: Matching | Permutation, pi_star: Permutation) -> int:
    """Number of domain nodes on which ``mu`` agrees with ``pi_star``."""
    mu = _as_matching(mu)
    if mu.domain.size == 0:
        return 0
    return int((mu.images == pi_star.images[mu.domain]).sum())


def precision(mu: Matching | Permutation, pi_star: Permutation) -> float:
    """Fraction of the matching that is correct. Undefined on empty domains."""
    mu = _as_matching(mu)
    if len(mu) == 0:
        raise EmptyDomainError("precision is undefined for an empty matching")
    return overlap(mu, pi_star) / len(mu)


# -- serialization ------------------------------------------------------


def write_edgelist(g: Graph, path_or_file) -> None:
    """Write the edge-list text format: ``n m`` then ``i j`` lines, i < j,
    lexicographically ordered."""
    edges = g.edges()
    lines = [f"{g.n} {edges.shape[0]}"]
    lines.extend(f"{i} {j}" for i, j in edges.tolist())
    text = "\n".join(lines) + "\n"
    if isinstance(path_or_file, (str,)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        path_or_file.write(text)


def read_edgelist(path_or_file) -> Graph:
    if isinstance(path_or_file, (str,)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "r", encoding="ascii") as fh:
            return read_edgelist(fh)
    header = path_or_file.readline().split()
    if len(header) != 2:
        raise SchemaError("edge-list header must be 'n m'")
    n, m = int(header[0]), int(header[1])
    edges = []
    for _ in range(m):
        parts = path_or_file.readline().split()
        if len(parts) != 2:
            raise SchemaError("edge line must be 'i j'")
        i, j = int(parts[0]), int(parts[1])
        if not i < j:
            raise SchemaError(f"edge ({i},{j}) must satisfy i < j")
        edges.append((i, j))
    return Graph.from_edges(n, edges)


def matching_to_json(mu: Matching | Permutation) -> list[list[int]]:
    """JSON wire format: array of [i, mu(i)] pairs sorted by i."""
    return [[int(i), int(j)] for i, j in _as_matching(mu).pairs()]


def matching_from_json(pairs: list[list[int]]) -> Matching:
    return Matching.from_pairs((int(i), int(j)) for i, j in pairs)
