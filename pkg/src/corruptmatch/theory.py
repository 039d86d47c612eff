"""Closed-form oracles for the recovery thresholds and the combinatorial
machinery behind them: permutation orbit profiles, the orbit-product moment
generating function of the overlap count, worst-case corruption budgets, and
binomial tail bounds.

All values are computed in double precision; cross-checks against an
arbitrary-precision side evaluation (frozen in the test fixtures) hold to a
relative tolerance of 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ParameterError
from .graphs import Graph, Permutation

__all__ = [
    "alpha_star",
    "c_threshold",
    "scg_gamma_bound_log",
    "scg_gamma_bound_lin",
    "OrbitProfile",
    "orbit_profile",
    "mgf_L_matrix",
    "mgf_Lk",
    "mgf_L1",
    "mgf_L2",
    "mgf_X",
    "z_statistic",
    "top_degree_sum",
    "t_star",
    "aux_positivity",
    "binom_chernoff_upper",
    "binom_chernoff_lower",
    "ThresholdReport",
    "threshold_report",
]


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} must be in [0, 1], got {value}")
    return value


# -- recovery thresholds ---------------------------------------------------


def alpha_star(gamma: float, lam: float) -> float:
    """Best achievable recovered fraction under random node corruption:
    1 - gamma + lam*(1-lam)*gamma^2."""
    gamma = _check_unit("gamma", gamma)
    lam = _check_unit("lambda", lam)
    return 1.0 - gamma + lam * (1.0 - lam) * gamma * gamma


def c_threshold(s: float, alpha: float) -> float:
    """Average-degree constant above which full recovery of the uncorrupted
    part is possible: 1 / (s^2 * alpha)."""
    s = _check_unit("s", s)
    alpha = _check_unit("alpha_star", alpha)
    if s == 0.0 or alpha == 0.0:
        raise ParameterError("c_threshold needs s > 0 and alpha_star > 0")
    return 1.0 / (s * s * alpha)


def scg_gamma_bound_log(s: float, alpha: float) -> float:
    """Adversarial budget under which max-overlap still alpha-recovers in the
    logarithmic-degree regime: s*(1-alpha^2)/4."""
    s = _check_unit("s", s)
    alpha = _check_unit("alpha", alpha)
    return s * (1.0 - alpha * alpha) / 4.0


def scg_gamma_bound_lin(p: float, s: float, alpha: float) -> float:
    """Adversarial budget for the constant-density regime:
    1 - sqrt(1 - s^2*p*(1-p)*(1-alpha^2)/2)."""
    p = _check_unit("p", p)
    s = _check_unit("s", s)
    alpha = _check_unit("alpha", alpha)
    radicand = 1.0 - s * s * p * (1.0 - p) * (1.0 - alpha * alpha) / 2.0
    assert radicand >= 0.0, "radicand is nonnegative on the valid input range"
    return 1.0 - math.sqrt(radicand)


# -- orbit decomposition ----------------------------------------------------


@dataclass(frozen=True)
class OrbitProfile:
    """Cycle counts of a permutation acting on nodes and on unordered pairs.

    ``node_orbits[k]`` is the number of k-cycles; ``edge_orbits[k]`` the
    number of size-k orbits of the action on unordered node pairs.
    """

    n: int
    node_orbits: dict[int, int]
    edge_orbits: dict[int, int]

    def fixed_points(self) -> int:
        return self.node_orbits.get(1, 0)


def orbit_profile(pi: Permutation) -> OrbitProfile:
    """Compute node-cycle and pair-orbit counts by direct iteration.

    Pair orbits are found by repeatedly applying the permutation to each
    unvisited pair until it returns; a pair inside one even cycle may close
    in half the cycle length, which the walk handles without special cases.
    """
    n = pi.n
    img = pi.images
    node_orbits: dict[int, int] = {}
    seen = np.zeros(n, dtype=bool)
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = img[j]
            length += 1
        node_orbits[length] = node_orbits.get(length, 0) + 1

    edge_orbits: dict[int, int] = {}
    visited = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if visited[i, j]:
                continue
            length = 0
            u, v = i, j
            while not visited[u, v]:
                visited[u, v] = True
                u, v = int(img[u]), int(img[v])
                if u > v:
                    u, v = v, u
                length += 1
            edge_orbits[length] = edge_orbits.get(length, 0) + 1
    return OrbitProfile(n=n, node_orbits=node_orbits, edge_orbits=edge_orbits)


# -- moment generating function of the overlap count ------------------------


def mgf_L_matrix(p: float, s: float, t: float) -> np.ndarray:
    """2x2 transfer matrix whose k-th power's trace is the MGF contribution
    of a single pair orbit of size k."""
    p = _check_unit("p", p)
    s = _check_unit("s", s)
    ps = p * s
    if ps == 1.0:
        # Degenerate limit: conditioning weight 1/(1-ps) blows up, but the
        # off-diagonal entry stays finite: ps(1-s+...)/(1-ps) -> s(1-s)e^t + ...
        # Avoid division by zero by evaluating the entry's closed form.
        top_right = p * s * (1.0 - s) * math.exp(t)  # (1-p) and (1-s)^2 terms vanish
    else:
        top_right = (
            ps
            / (1.0 - ps)
            * (1.0 - p + p * (1.0 - s) ** 2 + ps * (1.0 - s) * math.exp(t))
        )
    return np.array(
        [
            [1.0 - ps, top_right],
            [1.0 - ps, ps * (1.0 - s + s * math.exp(t))],
        ]
    )


def mgf_Lk(p: float, s: float, t: float, k: int) -> float:
    """Trace of the k-th power of the transfer matrix, via its eigenvalues.

    The discriminant (a-d)^2 + 4bc is nonnegative because the off-diagonal
    entries are, so both eigenvalues are real.
    """
    if k < 1:
        raise ParameterError(f"orbit length must be >= 1, got {k}")
    mat = mgf_L_matrix(p, s, t)
    a, b = mat[0]
    c, d = mat[1]
    half_gap = math.sqrt((a - d) ** 2 + 4.0 * b * c) / 2.0
    mean = (a + d) / 2.0
    return (mean + half_gap) ** k + (mean - half_gap) ** k


def mgf_L1(p: float, s: float, t: float) -> float:
    """Closed form of the size-1 orbit factor: 1 - ps + ps(1-s+s*e^t)."""
    ps = p * s
    return 1.0 - ps + ps * (1.0 - s + s * math.exp(t))


def mgf_L2(p: float, s: float, t: float) -> float:
    """Closed form of the size-2 orbit factor."""
    ps = p * s
    et = math.exp(t)
    inner = 1.0 - p + p * (1.0 - s) ** 2 + ps * (1.0 - s) * et
    return (1.0 - ps) ** 2 + 2.0 * ps * inner + (ps * (1.0 - s + s * et)) ** 2


def mgf_X(pi: Permutation, p: float, s: float, t: float) -> float:
    """E[exp(t * X(pi))] for the intersection-edge count X of a correlated
    pair matched by ``pi``: the product of per-orbit factors over the pair
    orbit profile. Accumulated in log space for stability."""
    profile = orbit_profile(pi)
    log_total = 0.0
    for k, count in profile.edge_orbits.items():
        log_total += count * math.log(mgf_Lk(p, s, t, k))
    return math.exp(log_total)


# -- worst-case corruption mass ---------------------------------------------


def top_degree_sum(g: Graph, m: int) -> int:
    """Sum of the m largest degrees (the worst-case count of edge slots
    incident to any m designated nodes)."""
    if m <= 0:
        return 0
    degs = np.sort(g.degrees())[::-1]
    return int(degs[: min(m, g.n)].sum())


def z_statistic(g2: Graph, gamma: float) -> int:
    """Worst-case number of second-graph edge slots an adversary with per-set
    budget floor(gamma*n) can point at: since only the union of its two sets
    matters and degrees are nonnegative, the maximum is the top-(2b) degree
    sum."""
    gamma = _check_unit("gamma", gamma)
    b = math.floor(gamma * g2.n)
    return top_degree_sum(g2, 2 * b)


# -- Chernoff exponent helpers ----------------------------------------------


def t_star(beta: float, gamma: float, s: float) -> float:
    """Optimal tilt for the union-bound exponent: log((1 - 4*gamma/s) / beta^2).

    Requires beta > 0 and gamma < s*(1-beta^2)/4 (so the argument exceeds 1).
    """
    s = _check_unit("s", s)
    beta = _check_unit("beta", beta)
    gamma = _check_unit("gamma", gamma)
    if beta <= 0.0:
        raise ParameterError("t_star needs beta > 0")
    if not gamma < s * (1.0 - beta * beta) / 4.0:
        raise ParameterError(
            f"hypothesis violated: gamma={gamma} must be < s*(1-beta^2)/4 = "
            f"{s * (1.0 - beta * beta) / 4.0}"
        )
    return math.log((1.0 - 4.0 * gamma / s) / (beta * beta))


def aux_positivity(beta: float, gamma: float, s: float) -> float:
    """Value of s*beta^2 + 4*gamma - s + (s-4g)*log(s-4g) - (s-4g)*log(s*beta^2).

    Strictly positive under the t_star hypothesis; the same range checks
    apply. Equivalent to x*(1 - z + z*log z) with x = s*beta^2 and
    z = (s-4*gamma)/x, which vanishes only in the z -> 1 boundary limit.
    """
    s = _check_unit("s", s)
    beta = _check_unit("beta", beta)
    gamma = _check_unit("gamma", gamma)
    if beta <= 0.0:
        raise ParameterError("aux_positivity needs beta > 0")
    if not gamma < s * (1.0 - beta * beta) / 4.0:
        raise ParameterError(
            f"hypothesis violated: gamma={gamma} must be < s*(1-beta^2)/4 = "
            f"{s * (1.0 - beta * beta) / 4.0}"
        )
    y = s - 4.0 * gamma
    return s * beta * beta + 4.0 * gamma - s + y * math.log(y) - y * math.log(s * beta * beta)


def binom_chernoff_upper(n: int, p: float, delta: float) -> float:
    """Chernoff bound on P(Bin(n,p) >= (1+delta)*n*p): (e^d/(1+d)^(1+d))^(np)."""
    p = _check_unit("p", p)
    if delta <= 0.0:
        raise ParameterError(f"delta must be > 0, got {delta}")
    base = math.exp(delta) / (1.0 + delta) ** (1.0 + delta)
    return base ** (n * p)


def binom_chernoff_lower(n: int, p: float, delta: float) -> float:
    """Chernoff bound on P(Bin(n,p) <= (1-delta)*n*p): (e^-d/(1-d)^(1-d))^(np)."""
    p = _check_unit("p", p)
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must be in (0, 1), got {delta}")
    base = math.exp(-delta) / (1.0 - delta) ** (1.0 - delta)
    return base ** (n * p)


# -- report -----------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdReport:
    """All closed-form thresholds for one parameter point, inputs echoed."""

    p: float
    s: float
    gamma: float
    lam: float
    alpha: float
    alpha_star: float
    c_threshold: float
    scg_log_bound: float
    scg_lin_bound: float

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def threshold_report(p: float, s: float, gamma: float, lam: float, alpha: float) -> ThresholdReport:
    a_star = alpha_star(gamma, lam)
    return ThresholdReport(
        p=float(p),
        s=float(s),
        gamma=float(gamma),
        lam=float(lam),
        alpha=float(alpha),
        alpha_star=a_star,
        c_threshold=c_threshold(s, a_star),
        scg_log_bound=scg_gamma_bound_log(s, alpha),
        scg_lin_bound=scg_gamma_bound_lin(p, s, alpha),
    )
