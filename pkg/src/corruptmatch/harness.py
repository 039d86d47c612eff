"""Configuration-driven Monte-Carlo experiment runner.

A sweep is the cartesian product of a corruption-budget grid, an algorithm
list and a trial count. Every cell derives its generators from
(master_seed, cell_index) alone, so records are bit-identical regardless of
thread count or execution order. Results go to a v1-schema CSV plus a
per-cell aggregate and a manifest echoing the effective configuration.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .baselines import canonical_labeling, degree_profile, grampa
from .corruption import (
    CorruptedInstance,
    adversary_imitation,
    adversary_overwhelm,
    random_guess_matching,
    sample_wcg,
)
from .errors import CorruptMatchError, ParameterError
from .graphs import Matching, Permutation, overlap, sample_cer
from .matchers import (
    default_k,
    genie_k_core,
    k_core_estimator_exact,
    max_overlap_exact,
    max_overlap_localsearch,
)
from .rng import child_rng, stable_key
from .theory import alpha_star

__all__ = [
    "CSV_SCHEMA_V1",
    "MODELS",
    "ALGORITHMS",
    "ExperimentConfig",
    "TrialRecord",
    "trial_seed",
    "run_trial",
    "run_sweep",
    "thread_count",
]

CSV_SCHEMA_V1 = (
    "model", "n", "p", "s", "gamma", "lambda", "algo", "trial", "seed",
    "overlap_frac", "precision", "dom_size", "corrupted_hits",
    "uncorrupted_recovered", "wall_ms",
)

MODELS = ("wcg", "scg-imitation", "scg-overwhelm", "cer")

THREADS_ENV = "CORRUPTMATCH_THREADS"


def thread_count() -> int:
    """Worker-pool size; defaults to 1 and is capped by CORRUPTMATCH_THREADS."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}")


# -- algorithm registry ------------------------------------------------------


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    needs_truth: bool
    run: Callable[[CorruptedInstance, np.random.Generator, dict], Matching | Permutation]


def _blind(fn):
    """Wrap a graph-pair matcher so it can only ever see the corrupted pair."""

    def run(inst: CorruptedInstance, rng: np.random.Generator, params: dict):
        return fn(inst.g1_tilde, inst.g2_tilde, rng, params)

    return run


def _run_grampa(g1, g2, rng, params):
    return grampa(g1, g2, eta=params.get("eta", 0.2))


def _run_degprof(g1, g2, rng, params):
    return degree_profile(g1, g2, grid=params.get("grid", 64))


def _run_canon(g1, g2, rng, params):
    return canonical_labeling(g1, g2, seed_count=params.get("seed_count"))


def _run_kcore(g1, g2, rng, params):
    k = params.get("k", default_k(g1.n))
    return k_core_estimator_exact(g1, g2, k).matching


def _run_maxov(g1, g2, rng, params):
    return max_overlap_exact(g1, g2)


def _run_maxov_ls(g1, g2, rng, params):
    return max_overlap_localsearch(
        g1,
        g2,
        rng,
        restarts=params.get("restarts", 20),
        sweeps=params.get("sweeps", 200),
        temperature=params.get("temperature", 0.0),
    )


def _run_genie(inst: CorruptedInstance, rng, params):
    return genie_k_core(inst, params.get("k", default_k(inst.n)))


def _run_random_guess(inst: CorruptedInstance, rng, params):
    return random_guess_matching(inst, rng)


ALGORITHMS: dict[str, AlgorithmSpec] = {
    "grampa": AlgorithmSpec("grampa", False, _blind(_run_grampa)),
    "degprof": AlgorithmSpec("degprof", False, _blind(_run_degprof)),
    "canon": AlgorithmSpec("canon", False, _blind(_run_canon)),
    "kcore": AlgorithmSpec("kcore", False, _blind(_run_kcore)),
    "maxov": AlgorithmSpec("maxov", False, _blind(_run_maxov)),
    "maxov-ls": AlgorithmSpec("maxov-ls", False, _blind(_run_maxov_ls)),
    "genie-kcore": AlgorithmSpec("genie-kcore", True, _run_genie),
    "random-guess": AlgorithmSpec("random-guess", True, _run_random_guess),
}


# -- configuration -----------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep definition. Exactly one of ``p`` (edge probability) or ``C``
    (p = C*ln(n)/n) must be given."""

    model: str
    n: int
    s: float
    lam: float
    gammas: tuple[float, ...]
    algorithms: tuple[str, ...]
    trials: int
    master_seed: int
    p: float | None = None
    C: float | None = None
    output_path: str = "sweep_out"
    algo_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ParameterError(f"unknown model {self.model!r}; choose from {MODELS}")
        if (self.p is None) == (self.C is None):
            raise ParameterError("exactly one of p and C must be set")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"p must be in [0, 1], got {self.p}")
        if self.C is not None and self.C <= 0.0:
            raise ParameterError(f"C must be > 0, got {self.C}")
        if not 0.0 <= self.s <= 1.0:
            raise ParameterError(f"s must be in [0, 1], got {self.s}")
        if not 0.0 <= self.lam <= 1.0:
            raise ParameterError(f"lambda must be in [0, 1], got {self.lam}")
        for g in self.gammas:
            if not 0.0 <= g <= 1.0:
                raise ParameterError(f"gamma grid value {g} out of [0, 1]")
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ParameterError(
                    f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}"
                )
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))

    def effective_p(self) -> float:
        """Edge probability; C is interpreted with the natural logarithm."""
        if self.p is not None:
            return self.p
        return min(1.0, self.C * math.log(self.n) / self.n)

    @property
    def cell_count(self) -> int:
        return len(self.gammas) * self.trials

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        data["gammas"] = tuple(data["gammas"])
        data["algorithms"] = tuple(data["algorithms"])
        return cls(**data)

    @classmethod
    def from_json_file(cls, path: str) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class TrialRecord:
    model: str
    n: int
    p: float
    s: float
    gamma: float
    lam: float
    algo: str
    trial: int
    seed: int
    overlap_frac: float | None
    precision: float | None
    dom_size: int | None
    corrupted_hits: int | None
    uncorrupted_recovered: int | None
    wall_ms: float
    error: str | None = None

    def key(self) -> tuple:
        """All fields that are a pure function of (config, master_seed):
        everything except the wall-clock measurement."""
        return (
            self.model, self.n, self.p, self.s, self.gamma, self.lam, self.algo,
            self.trial, self.seed, self.overlap_frac, self.precision,
            self.dom_size, self.corrupted_hits, self.uncorrupted_recovered,
            self.error,
        )

    def csv_row(self) -> list[str]:
        def fmt(x):
            return "" if x is None else repr(x) if isinstance(x, float) else str(x)

        return [
            self.model, str(self.n), repr(self.p), repr(self.s), repr(self.gamma),
            repr(self.lam), self.algo, str(self.trial), str(self.seed),
            fmt(self.overlap_frac), fmt(self.precision), fmt(self.dom_size),
            fmt(self.corrupted_hits), fmt(self.uncorrupted_recovered),
            repr(round(self.wall_ms, 3)),
        ]


# -- trial execution ----------------------------------------------------------


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Per-cell seed: a pure function of (master_seed, trial_index)."""
    seq = np.random.SeedSequence((master_seed, trial_index))
    return int(seq.generate_state(1, np.uint64)[0])


def _sample_instance(config: ExperimentConfig, gamma: float, seed: int) -> CorruptedInstance:
    n, s, lam = config.n, config.s, config.lam
    p = config.effective_p()
    rng = child_rng(seed, 0)
    if config.model == "wcg":
        return sample_wcg(n, p, s, gamma, lam, rng)
    if config.model == "cer":
        return sample_wcg(n, p, s, 0.0, lam, rng)
    pair = sample_cer(n, p, s, rng)
    if config.model == "scg-imitation":
        return adversary_imitation(pair.g1, pair.g2, pair.pi_star, gamma, lam, p=p, s=s)
    if config.model == "scg-overwhelm":
        if abs(lam - 0.5) > 1e-12:
            raise ParameterError("the overwhelm adversary requires lambda = 1/2")
        return adversary_overwhelm(pair.g1, pair.g2, pair.pi_star, gamma, p=p, s=s)
    raise ParameterError(f"unknown model {config.model!r}")


def score_matching(inst: CorruptedInstance, mu: Matching | Permutation) -> dict:
    """Overlap/precision metrics of a matching against the retained truth."""
    mu_m = mu.as_matching() if isinstance(mu, Permutation) else mu
    ov = overlap(mu_m, inst.pi_star)
    dom_size = len(mu_m)
    hits = overlap(mu_m.restricted_to(inst.corrupted_nodes()), inst.pi_star)
    return {
        "overlap_frac": ov / inst.n,
        "precision": (ov / dom_size) if dom_size else None,
        "dom_size": dom_size,
        "corrupted_hits": hits,
        "uncorrupted_recovered": ov - hits,
    }


def run_trial(config: ExperimentConfig, trial_index: int) -> list[TrialRecord]:
    """Sample one instance and run every configured algorithm on it.

    ``trial_index`` walks the (gamma, trial) grid row-major. Incompatible
    algorithm/model combinations (e.g. exact solvers above their size cap)
    are reported on the record, not raised.
    """
    if not 0 <= trial_index < config.cell_count:
        raise ParameterError(
            f"trial_index must be in [0, {config.cell_count}), got {trial_index}"
        )
    gamma = config.gammas[trial_index // config.trials]
    trial = trial_index % config.trials
    seed = trial_seed(config.master_seed, trial_index)
    inst = _sample_instance(config, gamma, seed)
    base = dict(
        model=config.model,
        n=config.n,
        p=config.effective_p(),
        s=config.s,
        gamma=gamma,
        lam=config.lam,
        trial=trial,
        seed=seed,
    )
    records = []
    for position, name in enumerate(config.algorithms):
        spec = ALGORITHMS[name]
        rng = child_rng(seed, 1, stable_key(name))
        start = time.perf_counter()
        try:
            mu = spec.run(inst, rng, config.algo_params)
            metrics = score_matching(inst, mu)
            error = None
        except CorruptMatchError as exc:
            metrics = dict(
                overlap_frac=None, precision=None, dom_size=None,
                corrupted_hits=None, uncorrupted_recovered=None,
            )
            error = f"{type(exc).__name__}: {exc}"
        wall_ms = (time.perf_counter() - start) * 1e3
        records.append(TrialRecord(algo=name, wall_ms=wall_ms, error=error, **base, **metrics))
    return records


# -- sweep --------------------------------------------------------------------


def _aggregate(records: list[TrialRecord]) -> list[dict]:
    cells: dict[tuple, list[TrialRecord]] = {}
    for rec in records:
        cells.setdefault((rec.gamma, rec.algo), []).append(rec)
    rows = []
    for (gamma, algo), recs in sorted(cells.items()):
        ovs = [r.overlap_frac for r in recs if r.overlap_frac is not None]
        precs = [r.precision for r in recs if r.precision is not None]

        def mean_std(vals):
            if not vals:
                return None, None
            m = float(np.mean(vals))
            sd = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
            return m, sd

        ov_mean, ov_std = mean_std(ovs)
        pr_mean, pr_std = mean_std(precs)
        ref = recs[0]
        rows.append(
            {
                "model": ref.model, "n": ref.n, "p": ref.p, "s": ref.s,
                "gamma": gamma, "lambda": ref.lam, "algo": algo,
                "trials": len(recs),
                "overlap_frac_mean": ov_mean, "overlap_frac_std": ov_std,
                "precision_mean": pr_mean, "precision_std": pr_std,
                "alpha_star": alpha_star(gamma, ref.lam),
            }
        )
    return rows


def run_sweep(config: ExperimentConfig) -> str:
    """Run the full grid and write records.csv, aggregate.csv, manifest.json
    into the configured output directory. Returns the records path."""
    os.makedirs(config.output_path, exist_ok=True)
    indices = range(config.cell_count)
    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(lambda i: run_trial(config, i), indices))
    else:
        batches = [run_trial(config, i) for i in indices]
    records = [rec for batch in batches for rec in batch]
    records.sort(key=lambda r: (r.gamma, r.algo, r.trial))

    csv_path = os.path.join(config.output_path, "records.csv")
    with open(csv_path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_SCHEMA_V1)
        for rec in records:
            writer.writerow(rec.csv_row())

    agg_path = os.path.join(config.output_path, "aggregate.csv")
    agg_rows = _aggregate(records)
    agg_fields = [
        "model", "n", "p", "s", "gamma", "lambda", "algo", "trials",
        "overlap_frac_mean", "overlap_frac_std", "precision_mean",
        "precision_std", "alpha_star",
    ]
    with open(agg_path, "w", newline="", encoding="ascii") as fh:
        writer = csv.DictWriter(fh, fieldnames=agg_fields)
        writer.writeheader()
        for row in agg_rows:
            writer.writerow({k: ("" if v is None else v) for k, v in row.items()})

    failures = [
        {"gamma": r.gamma, "algo": r.algo, "trial": r.trial, "error": r.error}
        for r in records
        if r.error
    ]
    manifest = {
        "schema": "corruptmatch-sweep-v1",
        "csv_schema": list(CSV_SCHEMA_V1),
        "version": __version__,
        "config": config.to_dict(),
        "effective_p": config.effective_p(),
        "failures": failures,
    }
    with open(os.path.join(config.output_path, "manifest.json"), "w", encoding="ascii") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path
