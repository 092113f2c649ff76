"""CLI behavior: artifacts, manifests, exit codes, determinism."""

import json
import hashlib
import os

import pytest
from click.testing import CliRunner

from oligraph.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def corpus_args(icij_dir):
    args = []
    for name in ("officers", "entities", "intermediaries", "addresses"):
        args += ["--nodes", str(icij_dir / f"nodes-{name}.csv")]
    args += ["--edges", str(icij_dir / "relationships.csv")]
    return args


def read(path):
    with open(path, "rb") as f:
        return f.read()


class TestSynth:
    def test_identical_seeds_identical_bytes(self, runner, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            res = runner.invoke(main, [
                "synth", "--clients", "1000", "--intermediaries", "50",
                "--seed", "7", "--out", str(out),
            ])
            assert res.exit_code == 0, res.output
        assert read(out1 / "synth.edges") == read(out2 / "synth.edges")

    def test_infeasible_config_exits_3(self, runner, tmp_path):
        res = runner.invoke(main, [
            "synth", "--clients", "10", "--intermediaries", "2",
            "--mean-degree", "5", "--out", str(tmp_path),
        ])
        assert res.exit_code == 3

    def test_entity_layer_writes_tripartite(self, runner, tmp_path):
        res = runner.invoke(main, [
            "synth", "--clients", "50", "--intermediaries", "5", "--seed", "1",
            "--entities", "--out", str(tmp_path),
        ])
        assert res.exit_code == 0
        text = read(tmp_path / "synth.edges").decode()
        assert "# mode: tripartite" in text


class TestKnockout:
    def test_trajectory_csv_shape(self, runner, tmp_path, icij_dir):
        res = runner.invoke(main, [
            "knockout", *corpus_args(icij_dir), "--country", "RUS",
            "--strategy", "degree", "--k", "2", "--mode", "tripartite",
            "--out", str(tmp_path),
        ])
        assert res.exit_code == 0, res.output
        lines = read(tmp_path / "knockout_degree.csv").decode().strip().splitlines()
        assert lines[0] == "country,mode,strategy,k,metric,raw,normalized"
        # 4 metrics x (k = 0..2)
        assert len(lines) - 1 == 4 * 3
        payload = json.loads(read(tmp_path / "knockout_degree.json"))
        assert payload["strategy"] == "degree"

    def test_random_baseline_thread_invariant(self, runner, tmp_path):
        outs = []
        for threads, name in (("1", "t1"), ("4", "t4")):
            out = tmp_path / name
            res = runner.invoke(main, [
                "synth", "--clients", "400", "--intermediaries", "30",
                "--seed", "3", "--out", str(out),
            ])
            assert res.exit_code == 0
            res = runner.invoke(main, [
                "knockout", "--graph", str(out / "synth.edges"), "--k", "3",
                "--baseline-trials", "8", "--seed", "5", "--threads", threads,
                "--out", str(out),
            ])
            assert res.exit_code == 0, res.output
            outs.append(read(out / "random_baseline.csv"))
        assert outs[0] == outs[1]


class TestPipeline:
    def test_ingest_then_cached_slice(self, runner, tmp_path, icij_dir):
        cache = tmp_path / "corpus.bin"
        res = runner.invoke(main, [
            "ingest", *corpus_args(icij_dir), "--out", str(tmp_path),
            "--save-cache", str(cache),
        ])
        assert res.exit_code == 0, res.output
        report = json.loads(read(tmp_path / "ingest_report.json"))
        assert report["nodes_by_kind"]["officer"] == 4
        res = runner.invoke(main, [
            "slice", "--cache", str(cache), "--country", "RUS",
            "--export-graph", "--out", str(tmp_path),
        ])
        assert res.exit_code == 0, res.output
        counts = json.loads(read(tmp_path / "slice_RUS.json"))
        assert counts["clients"] == 2 and counts["intermediaries"] == 2

    def test_stale_cache_detected(self, runner, tmp_path, icij_dir):
        cache = tmp_path / "corpus.bin"
        res = runner.invoke(main, [
            "ingest", *corpus_args(icij_dir), "--out", str(tmp_path),
            "--save-cache", str(cache),
        ])
        assert res.exit_code == 0
        officers = icij_dir / "nodes-officers.csv"
        officers.write_text(
            officers.read_text(encoding="utf-8")
            + "99,Extra Person,RUS,leak-a\n",
            encoding="utf-8",
        )
        res = runner.invoke(main, [
            "slice", "--cache", str(cache), *corpus_args(icij_dir),
            "--country", "RUS", "--out", str(tmp_path),
        ])
        assert res.exit_code == 3
        assert "stale" in res.output

    def test_metrics_artifacts(self, runner, tmp_path, icij_dir):
        res = runner.invoke(main, [
            "metrics", *corpus_args(icij_dir), "--country", "RUS",
            "--mode", "bipartite", "--betweenness", "--out", str(tmp_path),
        ])
        assert res.exit_code == 0, res.output
        summary = json.loads(read(tmp_path / "metrics_summary.json"))
        assert summary["triangles"] is None  # absent in bipartite mode
        manifest = json.loads(read(tmp_path / "manifest_metrics.json"))
        assert any("bipartite" in w for w in manifest["warnings"])
        hist = read(tmp_path / "degrees_intermediaries.csv").decode().splitlines()
        assert hist[0] == "degree,count"

    def test_fit_from_samples_file(self, runner, tmp_path):
        import numpy as np

        rng = np.random.default_rng(1)
        samples = np.floor(4.5 * (1 - rng.uniform(size=5000)) ** (-1 / 1.5) + 0.5).astype(int)
        sfile = tmp_path / "samples.txt"
        sfile.write_text("\n".join(map(str, samples)) + "\n", encoding="utf-8")
        res = runner.invoke(main, [
            "fit", "--samples", str(sfile), "--bootstrap", "100",
            "--seed", "2", "--out", str(tmp_path),
        ])
        assert res.exit_code == 0, res.output
        fit = json.loads(read(tmp_path / "fit.json"))
        assert fit["p_value"] is not None
        assert (tmp_path / "ccdf.csv").exists()
        assert (tmp_path / "xmin_scan.csv").exists()

    def test_diversity_artifacts(self, runner, tmp_path, icij_dir):
        res = runner.invoke(main, [
            "diversity", *corpus_args(icij_dir), "--country", "RUS",
            "--out", str(tmp_path),
        ])
        assert res.exit_code == 0, res.output
        report = json.loads(read(tmp_path / "diversity_RUS.json"))
        assert report["hhi"] == 0.5

    def test_sanctions_artifacts(self, runner, tmp_path, icij_dir):
        seeds = tmp_path / "seeds.txt"
        seeds.write_text("Ivanov Pavel\nPetrov Dmitri\n", encoding="utf-8")
        res = runner.invoke(main, [
            "sanctions", *corpus_args(icij_dir), "--seeds", str(seeds),
            "--out", str(tmp_path),
        ])
        assert res.exit_code == 0, res.output
        for name in ("match_review.csv", "ego_nodes.csv", "ego_edges.csv",
                     "stitch_paths.csv", "intermediary_table.csv"):
            assert (tmp_path / name).exists()
        summary = json.loads(read(tmp_path / "sanctions_summary.json"))
        assert summary["matched"] == 2


class TestContracts:
    def test_inputs_never_mutated(self, runner, tmp_path, icij_dir):
        before = {
            p.name: hashlib.sha256(read(p)).hexdigest()
            for p in sorted(icij_dir.glob("*.csv"))
        }
        runner.invoke(main, [
            "metrics", *corpus_args(icij_dir), "--country", "RUS",
            "--out", str(tmp_path / "out"),
        ])
        after = {
            p.name: hashlib.sha256(read(p)).hexdigest()
            for p in sorted(icij_dir.glob("*.csv"))
        }
        assert before == after

    def test_manifest_records_config_digests_version(self, runner, tmp_path, icij_dir):
        res = runner.invoke(main, [
            "slice", *corpus_args(icij_dir), "--country", "RUS",
            "--out", str(tmp_path),
        ])
        assert res.exit_code == 0
        manifest = json.loads(read(tmp_path / "manifest_slice.json"))
        assert manifest["tool"] == "oligraph"
        assert manifest["version"]
        assert manifest["config"]["country"] == "RUS"
        assert len(manifest["inputs"]) == 5
        assert all(len(d) == 64 for d in manifest["inputs"].values())
        assert "slice_RUS.json" in manifest["outputs"]
        assert manifest["peak"]["nodes"] >= 6

    def test_usage_error_exits_2(self, runner, tmp_path):
        res = runner.invoke(main, ["slice", "--country", "RUS", "--out", str(tmp_path)])
        assert res.exit_code == 2

    def test_data_error_exits_3_with_json(self, runner, tmp_path, icij_dir):
        res = runner.invoke(main, [
            "slice", *corpus_args(icij_dir), "--country", "ZZZ",
            "--out", str(tmp_path),
        ])
        assert res.exit_code == 3
        err = json.loads(res.output.strip().splitlines()[-1])
        assert err["error"]["exit_code"] == 3
        assert "ZZZ" in err["error"]["message"]

    def test_output_env_var_is_default(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("OLIGRAPH_OUTPUT_DIR", str(tmp_path / "envout"))
        res = runner.invoke(main, [
            "synth", "--clients", "10", "--intermediaries", "2", "--seed", "0",
        ])
        assert res.exit_code == 0, res.output
        assert (tmp_path / "envout" / "synth.edges").exists()

    def test_console_entry_point(self):
        import subprocess
        import sys

        res = subprocess.run(
            [sys.executable, "-m", "oligraph.cli", "--version"],
            capture_output=True, text=True,
        )
        assert res.returncode == 0
        assert "oligraph" in res.stdout
