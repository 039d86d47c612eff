import csv
import json
import math
import os

import numpy as np
import pytest

from corruptmatch.errors import ParameterError
from corruptmatch.harness import (
    ALGORITHMS,
    CSV_SCHEMA_V1,
    ExperimentConfig,
    run_sweep,
    run_trial,
    trial_seed,
)


def small_config(**overrides):
    base = dict(
        model="wcg",
        n=30,
        p=0.3,
        s=0.9,
        lam=1.0,
        gammas=(0.0, 0.2),
        algorithms=("canon", "random-guess"),
        trials=2,
        master_seed=7,
        output_path="unused",
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfig:
    def test_p_and_c_mutually_exclusive(self):
        with pytest.raises(ParameterError):
            small_config(p=0.3, C=4.0)
        with pytest.raises(ParameterError):
            small_config(p=None)

    def test_effective_p_uses_natural_log(self):
        cfg = small_config(p=None, C=4.0, n=3000)
        assert cfg.effective_p() == pytest.approx(4.0 * math.log(3000) / 3000)

    def test_unknown_algorithm_rejected(self):
        with pytest.raises(ParameterError):
            small_config(algorithms=("nope",))

    def test_unknown_model_rejected(self):
        with pytest.raises(ParameterError):
            small_config(model="other")

    def test_grid_range_checked(self):
        with pytest.raises(ParameterError):
            small_config(gammas=(0.0, 1.5))

    def test_json_round_trip(self, tmp_path):
        cfg = small_config()
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg.to_dict()))
        assert ExperimentConfig.from_json_file(str(path)) == cfg


class TestRunTrial:
    def test_clean_isomorphic_genie_recovers_everything(self):
        cfg = small_config(
            model="wcg", s=1.0, gammas=(0.0,), algorithms=("genie-kcore",),
            algo_params={"k": 0},
        )
        (rec,) = run_trial(cfg, 0)
        assert rec.overlap_frac == 1.0
        assert rec.precision == 1.0
        assert rec.dom_size == cfg.n

    def test_bit_identical_records_for_same_seed(self):
        cfg = small_config(algorithms=("canon", "random-guess", "genie-kcore"))
        a = [r.key() for r in run_trial(cfg, 1)]
        b = [r.key() for r in run_trial(cfg, 1)]
        assert a == b

    def test_seed_derivation_is_pure(self):
        assert trial_seed(7, 3) == trial_seed(7, 3)
        assert trial_seed(7, 3) != trial_seed(7, 4)
        assert trial_seed(8, 3) != trial_seed(7, 3)

    def test_size_cap_reported_per_record(self):
        cfg = small_config(algorithms=("maxov", "canon"), gammas=(0.1,))
        records = run_trial(cfg, 0)
        by_algo = {r.algo: r for r in records}
        assert by_algo["maxov"].error is not None
        assert by_algo["maxov"].overlap_frac is None
        assert by_algo["canon"].error is None

    def test_hits_plus_uncorrupted_equal_overlap(self):
        cfg = small_config(
            model="wcg", gammas=(0.3,), lam=0.5,
            algorithms=("canon", "genie-kcore", "random-guess"),
        )
        for rec in run_trial(cfg, 1):
            total = round(rec.overlap_frac * cfg.n)
            assert rec.corrupted_hits + rec.uncorrupted_recovered == total

    def test_index_out_of_range(self):
        with pytest.raises(ParameterError):
            run_trial(small_config(), 99)

    def test_genie_corrupted_hits_bounded_by_random_guessing(self):
        # ceiling: a correct matcher should hit at most as many corrupted
        # nodes as uniform guessing (mean 1, variance 1) over 200 trials
        cfg = ExperimentConfig(
            model="wcg", n=300, C=4.0, s=0.9, lam=1.0, gammas=(0.2,),
            algorithms=("genie-kcore",), trials=200, master_seed=606,
            output_path="unused",
        )
        hits = [run_trial(cfg, t)[0].corrupted_hits for t in range(200)]
        assert float(np.mean(hits)) <= 1.0 + 4.0 / math.sqrt(200)


class TestRunSweep:
    def test_schema_and_row_count(self, tmp_path):
        cfg = small_config(output_path=str(tmp_path / "out"))
        path = run_sweep(cfg)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == CSV_SCHEMA_V1
        assert len(rows) - 1 == len(cfg.gammas) * len(cfg.algorithms) * cfg.trials

    def test_empty_grid_gives_header_only_csv(self, tmp_path):
        cfg = small_config(gammas=(), output_path=str(tmp_path / "out"))
        path = run_sweep(cfg)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 1 and tuple(rows[0]) == CSV_SCHEMA_V1

    def test_aggregate_carries_reference_column(self, tmp_path):
        cfg = small_config(output_path=str(tmp_path / "out"))
        run_sweep(cfg)
        with open(tmp_path / "out" / "aggregate.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert rows
        for row in rows:
            gamma, lam = float(row["gamma"]), float(row["lambda"])
            expected = 1 - gamma + lam * (1 - lam) * gamma * gamma
            assert float(row["alpha_star"]) == pytest.approx(expected)

    def test_manifest_echoes_config(self, tmp_path):
        cfg = small_config(output_path=str(tmp_path / "out"))
        run_sweep(cfg)
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["config"]["master_seed"] == cfg.master_seed
        assert manifest["csv_schema"] == list(CSV_SCHEMA_V1)

    def test_thread_pool_does_not_change_records(self, tmp_path, monkeypatch):
        cfg1 = small_config(output_path=str(tmp_path / "serial"))
        run_sweep(cfg1)
        monkeypatch.setenv("CORRUPTMATCH_THREADS", "2")
        cfg2 = small_config(output_path=str(tmp_path / "pool"))
        run_sweep(cfg2)

        def science_rows(path):
            with open(path) as fh:
                return [row[:-1] for row in csv.reader(fh)]  # drop wall_ms

        assert science_rows(tmp_path / "serial" / "records.csv") == science_rows(
            tmp_path / "pool" / "records.csv"
        )

    def test_failures_recorded_and_sweep_continues(self, tmp_path):
        cfg = small_config(
            algorithms=("maxov", "canon"), output_path=str(tmp_path / "out")
        )
        run_sweep(cfg)
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["failures"]
        assert all(f["algo"] == "maxov" for f in manifest["failures"])


class TestRegistry:
    def test_blind_algorithms_never_see_truth(self):
        for name in ("grampa", "degprof", "canon", "kcore", "maxov", "maxov-ls"):
            assert not ALGORITHMS[name].needs_truth
        for name in ("genie-kcore", "random-guess"):
            assert ALGORITHMS[name].needs_truth
