"""Render a corruption-budget comparison figure from a sweep CSV.

The CSV (schema v1, validated against the exact header) is the entire
contract with the experiment runner: mean overlap fraction per corruption
budget, one curve per algorithm with standard-deviation error bars, plus the
dashed closed-form ceiling 1 - gamma + lambda*(1-lambda)*gamma^2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["CSV_SCHEMA_V1", "PlotSpec", "RenderResult", "SchemaError", "read_sweep", "render"]

# Pinned v1 record schema of the sweep CSV; the column set is versioned and
# validated verbatim.
CSV_SCHEMA_V1 = (
    "model", "n", "p", "s", "gamma", "lambda", "algo", "trial", "seed",
    "overlap_frac", "precision", "dom_size", "corrupted_hits",
    "uncorrupted_recovered", "wall_ms",
)


class SchemaError(ValueError):
    """The CSV does not carry the pinned v1 column set."""


@dataclass(frozen=True)
class PlotSpec:
    """What to read and where to draw it."""

    csv_path: str
    out_path: str
    lam: float | None = None  # default: taken from the data
    figsize: tuple[float, float] = (6.4, 4.4)
    dpi: int = 150


@dataclass(frozen=True)
class RenderResult:
    out_path: str
    algorithms: tuple[str, ...]
    lam: float
    points_per_curve: dict[str, int] = field(default_factory=dict)


def ceiling_fraction(gamma: float, lam: float) -> float:
    return 1.0 - gamma + lam * (1.0 - lam) * gamma * gamma


def read_sweep(csv_path: str) -> list[dict[str, str]]:
    """Read and schema-check a v1 sweep CSV."""
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise SchemaError(f"{csv_path}: empty file, expected a v1 header row")
        if header != CSV_SCHEMA_V1:
            raise SchemaError(
                f"{csv_path}: header does not match sweep schema v1; "
                f"got {list(header)}"
            )
        return [dict(zip(header, row)) for row in reader]


def _aggregate(rows: list[dict[str, str]]) -> dict[str, list[tuple[float, float, float]]]:
    """Per algorithm: sorted (gamma, mean, std) of the overlap fraction."""
    cells: dict[tuple[str, float], list[float]] = {}
    for row in rows:
        if row["overlap_frac"] == "":
            continue
        key = (row["algo"], float(row["gamma"]))
        cells.setdefault(key, []).append(float(row["overlap_frac"]))
    curves: dict[str, list[tuple[float, float, float]]] = {}
    for (algo, gamma), vals in cells.items():
        mean = float(np.mean(vals))
        std = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
        curves.setdefault(algo, []).append((gamma, mean, std))
    for points in curves.values():
        points.sort()
    return curves


def _resolve_lambda(rows: list[dict[str, str]], requested: float | None) -> float:
    if requested is not None:
        return float(requested)
    lams = sorted({float(row["lambda"]) for row in rows})
    if len(lams) > 1:
        raise SchemaError(
            f"CSV mixes lambda values {lams}; pass an explicit --lambda"
        )
    return lams[0] if lams else 1.0


def render(spec: PlotSpec) -> RenderResult:
    """Draw the comparison figure and write it as a PNG.

    Output bytes are deterministic for a fixed CSV: fixed figure geometry,
    Agg backend, and no software/date metadata in the image.
    """
    rows = read_sweep(spec.csv_path)
    lam = _resolve_lambda(rows, spec.lam)
    curves = _aggregate(rows)

    gammas = sorted({float(row["gamma"]) for row in rows})
    lo = min(gammas) if gammas else 0.0
    hi = max(gammas) if gammas else 0.5
    ref_x = np.linspace(lo, hi, 101)
    ref_y = [ceiling_fraction(g, lam) for g in ref_x]

    fig, ax = plt.subplots(figsize=spec.figsize)
    ax.plot(ref_x, ref_y, "k--", label="achievable ceiling")
    for algo in sorted(curves):
        points = curves[algo]
        xs = [g for g, _, _ in points]
        ys = [m for _, m, _ in points]
        es = [sd for _, _, sd in points]
        ax.errorbar(xs, ys, yerr=es, marker="o", capsize=3, label=algo)
    ax.set_xlabel("corrupted fraction")
    ax.set_ylabel("mean overlap fraction")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="upper right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=spec.dpi, metadata={"Software": None})
    plt.close(fig)
    return RenderResult(
        out_path=spec.out_path,
        algorithms=tuple(sorted(curves)),
        lam=lam,
        points_per_curve={algo: len(points) for algo, points in curves.items()},
    )
