import json

import pytest

from corruptmatch.cli import main
from corruptmatch.corruption import load_instance, load_pair
from corruptmatch.graphs import matching_from_json


def run_cli(*argv):
    return main(list(argv))


class TestPipeline:
    def test_gen_corrupt_match_round_trip(self, tmp_path, capsys):
        pair_dir = str(tmp_path / "pair")
        inst_dir = str(tmp_path / "inst")
        assert run_cli("gen", "--n", "40", "--p", "0.3", "--s", "0.9",
                       "--seed", "3", "--out", pair_dir) == 0
        pair = load_pair(pair_dir)
        assert pair.n == 40

        assert run_cli("corrupt", "--in", pair_dir, "--model", "imitation",
                       "--gamma", "0.2", "--lam", "1.0", "--out", inst_dir) == 0
        inst = load_instance(inst_dir)
        assert inst.params.model == "scg-imitation"
        assert inst.b1.size == 8

        out_json = str(tmp_path / "mu.json")
        capsys.readouterr()
        assert run_cli("match", "--in", inst_dir, "--algo", "degprof",
                       "--out", out_json) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["algo"] == "degprof"
        assert 0.0 <= summary["overlap_frac"] <= 1.0
        mu = matching_from_json(json.loads(open(out_json).read()))
        assert len(mu) == 40

    def test_corrupt_wcg_resamples(self, tmp_path):
        pair_dir = str(tmp_path / "pair")
        inst_dir = str(tmp_path / "inst")
        run_cli("gen", "--n", "30", "--p", "0.3", "--s", "0.8", "--out", pair_dir)
        assert run_cli("corrupt", "--in", pair_dir, "--model", "wcg",
                       "--gamma", "0.3", "--lam", "0.5", "--seed", "9",
                       "--out", inst_dir) == 0
        inst = load_instance(inst_dir)
        assert inst.params.model == "wcg"
        assert inst.b1.size == 4 and inst.b2.size == 4

    def test_match_respects_size_caps(self, tmp_path, capsys):
        pair_dir = str(tmp_path / "pair")
        inst_dir = str(tmp_path / "inst")
        run_cli("gen", "--n", "30", "--p", "0.3", "--s", "0.8", "--out", pair_dir)
        run_cli("corrupt", "--in", pair_dir, "--model", "wcg", "--gamma", "0.1",
                "--lam", "1.0", "--out", inst_dir)
        capsys.readouterr()
        assert run_cli("match", "--in", inst_dir, "--algo", "maxov") == 2
        assert "capped" in capsys.readouterr().err


class TestTheoryCommand:
    def test_json_report(self, capsys):
        assert run_cli("theory", "--p", "0.1", "--s", "0.9", "--gamma", "0.2",
                       "--lam", "1.0", "--alpha", "0.5") == 0
        report = json.loads(capsys.readouterr().out)
        assert report["alpha_star"] == pytest.approx(0.8)
        assert report["c_threshold"] == pytest.approx(1 / (0.81 * 0.8))


class TestVerifyCommand:
    def test_passing_suite_exits_zero(self, capsys):
        assert run_cli("verify", "zstat", "--seed", "123") == 0
        out = capsys.readouterr().out
        assert "PASS" in out

    def test_unknown_suite_lists_available(self, capsys):
        assert run_cli("verify", "nonsense") == 2
        err = capsys.readouterr().err
        assert "hypergeom" in err and "mgf" in err


class TestSweepCommand:
    def test_sweep_from_config_file(self, tmp_path, capsys):
        cfg = {
            "model": "wcg", "n": 25, "p": 0.3, "s": 0.9, "lam": 1.0,
            "gammas": [0.0, 0.2], "algorithms": ["canon"], "trials": 2,
            "master_seed": 5, "output_path": str(tmp_path / "ignored"),
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        out_dir = str(tmp_path / "out")
        assert run_cli("sweep", "--config", str(cfg_path), "--out", out_dir) == 0
        lines = open(tmp_path / "out" / "records.csv").read().splitlines()
        assert len(lines) == 1 + 2 * 1 * 2
