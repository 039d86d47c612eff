"""Node-corruption models: the random (weak) sampler and explicit strong
adversaries.

A corrupted instance keeps the ground truth (latent permutation and the
corrupted node sets) so estimators can be scored; estimators themselves must
only ever look at the corrupted graphs.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError, SchemaError
from .graphs import (
    CorrelatedPair,
    Graph,
    Matching,
    Permutation,
    _check_probability,
    _random_pair_mask,
    _sample_cer_parts,
    apply_permutation,
    read_edgelist,
    write_edgelist,
)

__all__ = [
    "CorruptionParams",
    "CorruptedInstance",
    "budget_sizes",
    "sample_wcg",
    "sample_wcg_with_pair",
    "adversary_imitation",
    "imitation_swap",
    "adversary_overwhelm",
    "overwhelm_sets",
    "overwhelm_swap_matching",
    "validate_corruption",
    "CorruptionReport",
    "random_guess_matching",
    "save_instance",
    "load_instance",
    "save_pair",
    "load_pair",
]

INSTANCE_SCHEMA = "corruptmatch-instance-v1"
PAIR_SCHEMA = "corruptmatch-cer-v1"


@dataclass(frozen=True)
class CorruptionParams:
    n: int
    p: float
    s: float
    gamma: float
    lam: float
    model: str


@dataclass(frozen=True)
class CorruptedInstance:
    """Corrupted graph pair plus the ground truth needed for scoring.

    ``b1`` and ``b2`` are the corrupted node sets of each graph; ``b2_pre``
    is the preimage of ``b2`` under the latent permutation, i.e. the nodes of
    the first graph whose counterparts are corrupted on the other side.
    """

    b1: np.ndarray
    b2: np.ndarray
    b2_pre: np.ndarray
    g1_tilde: Graph
    g2_tilde: Graph
    pi_star: Permutation
    params: CorruptionParams

    @property
    def n(self) -> int:
        return self.params.n

    def corrupted_nodes(self) -> np.ndarray:
        """B1 union B2-preimage, sorted: the nodes no estimator can recover."""
        return np.union1d(self.b1, self.b2_pre)

    def corrupted_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[self.corrupted_nodes()] = True
        return mask


def budget_sizes(n: int, gamma: float, lam: float) -> tuple[int, int]:
    """Corrupted-set sizes: floor(lam*gamma*n) and floor((1-lam)*gamma*n)."""
    gamma = _check_probability("gamma", gamma)
    lam = _check_probability("lambda", lam)
    return math.floor(lam * gamma * n), math.floor((1.0 - lam) * gamma * n)


def _preimage(pi_star: Permutation, b2: np.ndarray) -> np.ndarray:
    return np.sort(pi_star.inverse().images[b2]) if b2.size else b2.copy()


def _choose_nodes(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    if size == 0:
        return np.empty(0, dtype=np.int64)
    return np.sort(rng.choice(n, size=size, replace=False).astype(np.int64))


def _touch_mask(n: int, nodes: np.ndarray) -> np.ndarray:
    """Boolean matrix of pairs with at least one endpoint in ``nodes``."""
    m = np.zeros(n, dtype=bool)
    m[nodes] = True
    return m[:, None] | m[None, :]


def sample_wcg_with_pair(
    n: int, p: float, s: float, gamma: float, lam: float, rng: np.random.Generator
) -> tuple[CorruptedInstance, CorrelatedPair]:
    """Sample a weakly corrupted instance along with its uncorrupted pair.

    The corrupted sets are chosen uniformly at random, blind to the graphs;
    every pair touching a corrupted node is resampled iid Bern(p*s) in that
    node's own graph.
    """
    p = _check_probability("p", p)
    s = _check_probability("s", s)
    size1, size2 = budget_sizes(n, gamma, lam)
    if p == 0.0:
        # Empty parent: both graphs and all resampled pairs are empty.
        empty = Graph.empty(n)
        pi_star = Permutation.random(n, rng)
        b1 = _choose_nodes(n, size1, rng)
        b2 = _choose_nodes(n, size2, rng)
        params = CorruptionParams(n=n, p=p, s=s, gamma=gamma, lam=lam, model="wcg")
        inst = CorruptedInstance(
            b1=b1, b2=b2, b2_pre=_preimage(pi_star, b2),
            g1_tilde=empty, g2_tilde=empty, pi_star=pi_star, params=params,
        )
        return inst, CorrelatedPair(g1=empty, g2=empty, pi_star=pi_star, n=n, p=p, s=s)

    g1, g2_aligned, pi_star = _sample_cer_parts(n, p, s, rng)
    g2 = apply_permutation(g2_aligned, pi_star)
    b1 = _choose_nodes(n, size1, rng)
    b2 = _choose_nodes(n, size2, rng)

    def resample_side(g: Graph, nodes: np.ndarray) -> Graph:
        if nodes.size == 0:
            return g
        fresh = _random_pair_mask(n, p * s, rng)
        touched = _touch_mask(n, nodes)
        out = np.where(touched, fresh, g.dense())
        np.fill_diagonal(out, False)
        return Graph.from_dense(out, validate=False)

    g1_tilde = resample_side(g1, b1)
    g2_tilde = resample_side(g2, b2)
    params = CorruptionParams(n=n, p=p, s=s, gamma=gamma, lam=lam, model="wcg")
    inst = CorruptedInstance(
        b1=b1, b2=b2, b2_pre=_preimage(pi_star, b2),
        g1_tilde=g1_tilde, g2_tilde=g2_tilde, pi_star=pi_star, params=params,
    )
    return inst, CorrelatedPair(g1=g1, g2=g2, pi_star=pi_star, n=n, p=p, s=s)


def sample_wcg(
    n: int, p: float, s: float, gamma: float, lam: float, rng: np.random.Generator
) -> CorruptedInstance:
    return sample_wcg_with_pair(n, p, s, gamma, lam, rng)[0]


# -- imitation adversary (block swap) ------------------------------------


def imitation_swap(n: int, gamma: float, lam: float) -> Permutation:
    """The involution that swaps the two halves of the corrupted block.

    The block is the first floor(lam*gamma*n) nodes, floored to an even size
    so it splits into equal halves; everything else is fixed.
    """
    size1, _ = budget_sizes(n, gamma, lam)
    m = size1 - (size1 % 2)
    images = np.arange(n, dtype=np.int64)
    if m >= 2:
        h = m // 2
        images[:h] += h
        images[h:m] -= h
    return Permutation(images)


def adversary_imitation(
    g1: Graph,
    g2: Graph,
    pi_star: Permutation,
    gamma: float,
    lam: float,
    *,
    p: float = float("nan"),
    s: float = float("nan"),
) -> CorruptedInstance:
    """Strong adversary that relabels a block of the first graph onto itself.

    The corrupted graph equals the original relabeled by `imitation_swap`,
    so the output is isomorphic to the input with identical node names and
    the swapped nodes carry no information. Degenerates to a no-op when the
    block would have fewer than two nodes. The second graph is untouched.
    """
    n = g1.n
    size1, size2 = budget_sizes(n, gamma, lam)
    m = size1 - (size1 % 2)
    swap = imitation_swap(n, gamma, lam)
    b1 = np.arange(m, dtype=np.int64)
    b2_pre = np.arange(size2, dtype=np.int64)
    b2 = np.sort(pi_star.images[b2_pre]) if size2 else b2_pre.copy()
    g1_tilde = apply_permutation(g1, swap) if m >= 2 else g1
    params = CorruptionParams(n=n, p=p, s=s, gamma=gamma, lam=lam, model="scg-imitation")
    return CorruptedInstance(
        b1=b1, b2=b2, b2_pre=b2_pre,
        g1_tilde=g1_tilde, g2_tilde=g2, pi_star=pi_star, params=params,
    )


# -- overwhelm adversary (forced high degrees) ----------------------------


def overwhelm_sets(n: int, gamma: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Node sets used by the overwhelm adversary (lambda fixed at 1/2).

    Returns (b1, b2, grid1, grid2): two disjoint corrupted blocks at the low
    indices, and the odd/even-indexed uncorrupted nodes they each get wired
    to.
    """
    m = math.floor(gamma * n / 2.0)
    b1 = np.arange(m, dtype=np.int64)
    b2 = np.arange(m, 2 * m, dtype=np.int64)
    rest = np.arange(2 * m, n, dtype=np.int64)
    grid1 = rest[rest % 2 == 1]
    grid2 = rest[rest % 2 == 0]
    return b1, b2, grid1, grid2


def adversary_overwhelm(
    g1: Graph,
    g2: Graph,
    pi_star: Permutation,
    gamma: float,
    *,
    p: float = float("nan"),
    s: float = float("nan"),
) -> CorruptedInstance:
    """Strong adversary that forces corrupted nodes to overwhelm the overlap
    objective: every pair between b1 and the odd-indexed uncorrupted nodes is
    set to 1 in the first graph, every pair between b2 and the even-indexed
    uncorrupted nodes is set to 1 in the second. All other pairs untouched.
    """
    n = g1.n
    gamma = _check_probability("gamma", gamma)
    b1, b2, grid1, grid2 = overwhelm_sets(n, gamma)

    def add_block(g: Graph, rows: np.ndarray, cols: np.ndarray) -> Graph:
        if rows.size == 0 or cols.size == 0:
            return g
        out = g.dense().copy()
        out[np.ix_(rows, cols)] = True
        out[np.ix_(cols, rows)] = True
        return Graph.from_dense(out, validate=False)

    g1_tilde = add_block(g1, b1, grid1)
    g2_tilde = add_block(g2, b2, grid2)
    params = CorruptionParams(n=n, p=p, s=s, gamma=gamma, lam=0.5, model="scg-overwhelm")
    return CorruptedInstance(
        b1=b1, b2=b2, b2_pre=_preimage(pi_star, b2),
        g1_tilde=g1_tilde, g2_tilde=g2_tilde, pi_star=pi_star, params=params,
    )


def overwhelm_swap_matching(n: int, gamma: float) -> Permutation:
    """Zero-overlap permutation aligned with the overwhelm construction:
    maps b1 onto b2 (and back) and the odd uncorrupted nodes onto the even
    ones (and back), pairing each sorted set elementwise. A leftover node
    (odd-sized remainder) maps to itself."""
    b1, b2, grid1, grid2 = overwhelm_sets(n, gamma)
    images = np.arange(n, dtype=np.int64)
    images[b1], images[b2] = b2, b1
    k = min(grid1.size, grid2.size)
    images[grid1[:k]], images[grid2[:k]] = grid2[:k], grid1[:k]
    return Permutation(images)


# -- validation -----------------------------------------------------------


@dataclass(frozen=True)
class CorruptionReport:
    ok: bool
    violations: tuple[str, ...]

    def __bool__(self) -> bool:  # pragma: no cover - convenience
        return self.ok


def validate_corruption(inst: CorruptedInstance, g1: Graph, g2: Graph) -> CorruptionReport:
    """Check the adversary contract: size budgets respected, preimage set
    consistent, and every pair not touching a corrupted set bit-identical to
    the original. Reports the first violated pair per side."""
    violations: list[str] = []
    n = inst.n
    size1, size2 = budget_sizes(n, inst.params.gamma, inst.params.lam)
    if inst.b1.size > size1:
        violations.append(f"|B1|={inst.b1.size} exceeds budget {size1}")
    if inst.b2.size > size2:
        violations.append(f"|B2|={inst.b2.size} exceeds budget {size2}")
    if not np.array_equal(inst.b2_pre, _preimage(inst.pi_star, inst.b2)):
        violations.append("b2_pre is not the preimage of b2 under pi_star")

    for side, orig, tilde, nodes in (
        (1, g1, inst.g1_tilde, inst.b1),
        (2, g2, inst.g2_tilde, inst.b2),
    ):
        allowed = _touch_mask(n, nodes)
        diff = (orig.dense() != tilde.dense()) & ~allowed
        if diff.any():
            i, j = np.argwhere(diff)[0]
            violations.append(
                f"graph {side}: pair ({int(i)},{int(j)}) outside the corrupted "
                f"pair set was modified"
            )
    return CorruptionReport(ok=not violations, violations=tuple(violations))


# -- baselines for the impossibility results -------------------------------


def random_guess_matching(inst: CorruptedInstance, rng: np.random.Generator) -> Matching:
    """Match the corrupted nodes onto their true image set uniformly at
    random: the best any estimator can do on those nodes."""
    domain = inst.corrupted_nodes()
    codomain = inst.pi_star.images[domain]
    return Matching(domain, rng.permutation(codomain))


# -- serialization ---------------------------------------------------------


def _float_or_none(x: float) -> float | None:
    return None if math.isnan(x) else float(x)


def save_instance(inst: CorruptedInstance, dirpath: str) -> None:
    os.makedirs(dirpath, exist_ok=True)
    write_edgelist(inst.g1_tilde, os.path.join(dirpath, "g1_tilde.txt"))
    write_edgelist(inst.g2_tilde, os.path.join(dirpath, "g2_tilde.txt"))
    manifest = {
        "schema": INSTANCE_SCHEMA,
        "model": inst.params.model,
        "n": inst.params.n,
        "p": _float_or_none(inst.params.p),
        "s": _float_or_none(inst.params.s),
        "gamma": inst.params.gamma,
        "lambda": inst.params.lam,
        "b1": inst.b1.tolist(),
        "b2": inst.b2.tolist(),
        "pi_star": inst.pi_star.images.tolist(),
    }
    with open(os.path.join(dirpath, "manifest.json"), "w", encoding="ascii") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_instance(dirpath: str) -> CorruptedInstance:
    with open(os.path.join(dirpath, "manifest.json"), "r", encoding="ascii") as fh:
        manifest = json.load(fh)
    if manifest.get("schema") != INSTANCE_SCHEMA:
        raise SchemaError(f"expected schema {INSTANCE_SCHEMA!r} in {dirpath}")
    g1_tilde = read_edgelist(os.path.join(dirpath, "g1_tilde.txt"))
    g2_tilde = read_edgelist(os.path.join(dirpath, "g2_tilde.txt"))
    pi_star = Permutation(manifest["pi_star"])
    b1 = np.asarray(manifest["b1"], dtype=np.int64)
    b2 = np.asarray(manifest["b2"], dtype=np.int64)
    nan = float("nan")
    params = CorruptionParams(
        n=int(manifest["n"]),
        p=nan if manifest["p"] is None else float(manifest["p"]),
        s=nan if manifest["s"] is None else float(manifest["s"]),
        gamma=float(manifest["gamma"]),
        lam=float(manifest["lambda"]),
        model=str(manifest["model"]),
    )
    return CorruptedInstance(
        b1=b1, b2=b2, b2_pre=_preimage(pi_star, b2),
        g1_tilde=g1_tilde, g2_tilde=g2_tilde, pi_star=pi_star, params=params,
    )


def save_pair(pair: CorrelatedPair, dirpath: str) -> None:
    os.makedirs(dirpath, exist_ok=True)
    write_edgelist(pair.g1, os.path.join(dirpath, "g1.txt"))
    write_edgelist(pair.g2, os.path.join(dirpath, "g2.txt"))
    manifest = {
        "schema": PAIR_SCHEMA,
        "n": pair.n,
        "p": pair.p,
        "s": pair.s,
        "pi_star": pair.pi_star.images.tolist(),
    }
    with open(os.path.join(dirpath, "manifest.json"), "w", encoding="ascii") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_pair(dirpath: str) -> CorrelatedPair:
    with open(os.path.join(dirpath, "manifest.json"), "r", encoding="ascii") as fh:
        manifest = json.load(fh)
    if manifest.get("schema") != PAIR_SCHEMA:
        raise SchemaError(f"expected schema {PAIR_SCHEMA!r} in {dirpath}")
    return CorrelatedPair(
        g1=read_edgelist(os.path.join(dirpath, "g1.txt")),
        g2=read_edgelist(os.path.join(dirpath, "g2.txt")),
        pi_star=Permutation(manifest["pi_star"]),
        n=int(manifest["n"]),
        p=float(manifest["p"]),
        s=float(manifest["s"]),
    )
