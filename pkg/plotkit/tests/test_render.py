import os

import pytest

from plotkit.render import (
    CSV_SCHEMA_V1,
    PlotSpec,
    SchemaError,
    ceiling_fraction,
    read_sweep,
    render,
)

DATA = os.path.join(os.path.dirname(__file__), "data")
FIGURE1_CSV = os.path.join(DATA, "figure1_records.csv")

HEADER = ",".join(CSV_SCHEMA_V1) + "\n"

SINGLE_ALGO_ROWS = HEADER + "".join(
    f"wcg,100,0.1,0.9,{g},1.0,canon,{t},1,{0.5 - g * 0.5 + 0.01 * t},0.5,100,0,50,1.0\n"
    for g in (0.0, 0.2, 0.4)
    for t in (0, 1)
)


def png_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestSchema:
    def test_header_only_csv_renders_reference_only(self, tmp_path):
        csv_path = tmp_path / "empty.csv"
        csv_path.write_text(HEADER)
        out = tmp_path / "empty.png"
        result = render(PlotSpec(str(csv_path), str(out)))
        assert result.algorithms == ()
        assert png_bytes(out)[:8] == b"\x89PNG\r\n\x1a\n"

    def test_schema_mismatch_aborts(self, tmp_path):
        csv_path = tmp_path / "bad.csv"
        csv_path.write_text("gamma,algo,overlap\n0.1,x,0.5\n")
        with pytest.raises(SchemaError):
            render(PlotSpec(str(csv_path), str(tmp_path / "bad.png")))

    def test_empty_file_aborts(self, tmp_path):
        csv_path = tmp_path / "none.csv"
        csv_path.write_text("")
        with pytest.raises(SchemaError):
            read_sweep(str(csv_path))

    def test_mixed_lambda_needs_flag(self, tmp_path):
        rows = HEADER + (
            "wcg,10,0.1,0.9,0.1,1.0,canon,0,1,0.5,0.5,10,0,5,1.0\n"
            "wcg,10,0.1,0.9,0.1,0.5,canon,0,1,0.5,0.5,10,0,5,1.0\n"
        )
        csv_path = tmp_path / "mixed.csv"
        csv_path.write_text(rows)
        with pytest.raises(SchemaError):
            render(PlotSpec(str(csv_path), str(tmp_path / "m.png")))
        result = render(PlotSpec(str(csv_path), str(tmp_path / "m.png"), lam=1.0))
        assert result.lam == 1.0


class TestCurves:
    def test_single_algorithm_curve(self, tmp_path):
        csv_path = tmp_path / "one.csv"
        csv_path.write_text(SINGLE_ALGO_ROWS)
        result = render(PlotSpec(str(csv_path), str(tmp_path / "one.png")))
        assert result.algorithms == ("canon",)
        assert result.points_per_curve["canon"] == 3
        assert result.lam == 1.0

    def test_blank_metric_cells_are_skipped(self, tmp_path):
        rows = HEADER + "wcg,10,0.1,0.9,0.1,1.0,maxov,0,1,,,,,,1.0\n"
        csv_path = tmp_path / "blank.csv"
        csv_path.write_text(rows)
        result = render(PlotSpec(str(csv_path), str(tmp_path / "blank.png")))
        assert result.algorithms == ()

    def test_ceiling_formula(self):
        assert ceiling_fraction(0.0, 1.0) == 1.0
        assert ceiling_fraction(0.4, 1.0) == pytest.approx(0.6)
        assert ceiling_fraction(0.4, 0.5) == pytest.approx(0.64)


class TestFigureOne:
    def test_renders_one_curve_per_algorithm(self, tmp_path):
        out = tmp_path / "figure1.png"
        result = render(PlotSpec(FIGURE1_CSV, str(out)))
        assert result.algorithms == ("canon", "degprof", "grampa")
        assert all(n == 6 for n in result.points_per_curve.values())
        assert result.lam == 1.0
        assert out.stat().st_size > 10_000

    def test_curves_lie_below_reference_for_positive_budget(self):
        rows = read_sweep(FIGURE1_CSV)
        from collections import defaultdict

        cells = defaultdict(list)
        for row in rows:
            cells[(row["algo"], float(row["gamma"]))].append(float(row["overlap_frac"]))
        for (algo, gamma), vals in cells.items():
            if gamma > 0:
                mean = sum(vals) / len(vals)
                assert mean < ceiling_fraction(gamma, 1.0), (algo, gamma)

    def test_deterministic_bytes_across_runs(self, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        render(PlotSpec(FIGURE1_CSV, str(a)))
        render(PlotSpec(FIGURE1_CSV, str(b)))
        assert png_bytes(a) == png_bytes(b)
