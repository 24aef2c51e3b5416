import csv
import json
import math
import os

import pytest

from jddsampler import (
    degree_histogram,
    joint_degree_matrix,
    load_edge_list,
    validate,
)
from jddsampler.cli import main, resolve_config, build_parser
from jddsampler.graph import save_edge_list, serialize_edge_list

from conftest import caveman_graph, random_simple_graph, triangle


@pytest.fixture
def k3_file(tmp_path):
    path = tmp_path / "k3.txt"
    path.write_text("0 1\n1 2\n0 2\n")
    return str(path)


@pytest.fixture
def cave_file(tmp_path):
    g = caveman_graph(6, 6)
    path = tmp_path / "cave.txt"
    save_edge_list(g, str(path))
    return str(path)


def read_manifest(directory):
    with open(os.path.join(directory, "manifest.json")) as handle:
        return json.load(handle)


class TestGenerate:
    def test_writes_samples_and_manifest(self, cave_file, tmp_path):
        out = tmp_path / "ens"
        code = main([
            "generate", "--input", cave_file, "--epsilon", "0.37",
            "--samples", "3", "--seed", "9", "--out", str(out),
        ])
        assert code == 0
        manifest = read_manifest(str(out))
        assert manifest["derived"]["seeds"] == [9, 10, 11]
        assert manifest["derived"]["samples"] == [
            "sample_0000.txt", "sample_0001.txt", "sample_0002.txt",
        ]
        g0 = load_edge_list(cave_file)
        hist, jdm = degree_histogram(g0), joint_degree_matrix(g0)
        for name in manifest["derived"]["samples"]:
            sample = load_edge_list(str(out / name))
            assert validate(sample, hist, jdm).passed

    def test_run_length_recorded_for_netscience_scale(self, tmp_path):
        g = random_simple_graph(1461, 5484, seed=71)
        path = tmp_path / "net.txt"
        save_edge_list(g, str(path))
        out = tmp_path / "out"
        code = main([
            "generate", "--input", str(path), "--epsilon", "4.5e-5",
            "--samples", "0", "--seed", "1", "--out", str(out),
        ])
        assert code == 0
        manifest = read_manifest(str(out))
        assert manifest["derived"]["run_length_per_edge"] == pytest.approx(10.0, rel=0.01)
        assert manifest["derived"]["samples"] == []

    def test_rerun_is_byte_identical(self, cave_file, tmp_path):
        args = ["generate", "--input", cave_file, "--epsilon", "0.37",
                "--samples", "2", "--seed", "4"]
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(args + ["--out", str(out_a)]) == 0
        assert main(args + ["--out", str(out_b)]) == 0
        for name in ("sample_0000.txt", "sample_0001.txt"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_manifest_rerun_reproduces_samples(self, cave_file, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["generate", "--input", cave_file, "--epsilon", "0.37",
                     "--samples", "2", "--seed", "4", "--out", str(out_a)]) == 0
        # feed the emitted manifest back as the config; only --out differs
        assert main(["generate", "--config", str(out_a / "manifest.json"),
                     "--out", str(out_b)]) == 0
        for name in ("sample_0000.txt", "sample_0001.txt"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_missing_input_is_io_error(self, tmp_path):
        code = main(["generate", "--input", str(tmp_path / "nope.txt"),
                     "--out", str(tmp_path / "o")])
        assert code == 2

    def test_bad_epsilon_is_usage_error(self, cave_file, tmp_path):
        code = main(["generate", "--input", cave_file, "--epsilon", "2.0",
                     "--out", str(tmp_path / "o")])
        assert code == 1


class TestDiagnose:
    def test_outputs_and_full_fraction_tracks_every_realized_pair(self, tmp_path):
        g = caveman_graph(4, 5)  # 4*10+4 = 44 edges
        path = tmp_path / "g.txt"
        save_edge_list(g, str(path))
        out = tmp_path / "diag"
        code = main([
            "diagnose", "--input", str(path), "--steps-per-edge", "64",
            "--fraction", "1.0", "--seed", "3", "--out", str(out), "--no-plots",
        ])
        assert code == 0
        summary = json.loads((out / "summary.json").read_text())
        with open(out / "thinning.csv") as handle:
            rows = list(csv.DictReader(handle))
        assert summary["tracked_pairs"] == summary["realized_pairs"] == len(rows)
        assert summary["k_star"] == max(int(r["k"]) for r in rows)
        assert summary["sample_count"] >= 1
        # all emitted samples preserve the input joint degree matrix
        hist, jdm = degree_histogram(g), joint_degree_matrix(g)
        sample_names = sorted(os.listdir(out / "samples"))
        assert len(sample_names) == summary["sample_count"]
        for name in sample_names:
            sample = load_edge_list(str(out / "samples" / name))
            assert validate(sample, hist, jdm).passed

    def test_figure_rendered_by_default(self, tmp_path):
        g = caveman_graph(3, 5)
        path = tmp_path / "g.txt"
        save_edge_list(g, str(path))
        out = tmp_path / "diag"
        code = main(["diagnose", "--input", str(path), "--steps-per-edge", "64",
                     "--seed", "3", "--out", str(out)])
        assert code == 0
        assert (out / "k_per_edge.png").exists()

    def test_too_short_run_exits_3(self, k3_file, tmp_path):
        code = main(["diagnose", "--input", k3_file, "--steps-per-edge", "1",
                     "--seed", "0", "--out", str(tmp_path / "d"), "--no-plots"])
        assert code == 3


class TestMetrics:
    def test_k3_row(self, k3_file, tmp_path):
        sample_dir = tmp_path / "dir"
        sample_dir.mkdir()
        (sample_dir / "k3.txt").write_text("0 1\n1 2\n0 2\n")
        out_csv = tmp_path / "m.csv"
        code = main(["metrics", "--in", str(sample_dir), "--out", str(out_csv),
                     "--no-plots"])
        assert code == 0
        with open(out_csv) as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 1
        assert float(rows[0]["clustering"]) == 1.0
        assert int(rows[0]["triangles"]) == 1
        assert int(rows[0]["diameter"]) == 1
        assert float(rows[0]["lambda_max"]) == pytest.approx(3.0, abs=1e-6)
        summary = json.loads((tmp_path / "m.summary.json").read_text())
        assert summary["warnings"] == 0

    def test_empty_directory_is_io_error(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        code = main(["metrics", "--in", str(empty), "--out", str(tmp_path / "m.csv")])
        assert code == 2

    def test_unreadable_file_counted_as_warning(self, tmp_path):
        sample_dir = tmp_path / "dir"
        sample_dir.mkdir()
        (sample_dir / "good.txt").write_text("0 1\n1 2\n0 2\n")
        (sample_dir / "bad.txt").write_text("not an edge list\n")
        out_csv = tmp_path / "m.csv"
        code = main(["metrics", "--in", str(sample_dir), "--out", str(out_csv),
                     "--no-plots"])
        assert code == 0
        summary = json.loads((tmp_path / "m.summary.json").read_text())
        assert summary["warnings"] == 1
        with open(out_csv) as handle:
            assert len(list(csv.DictReader(handle))) == 1

    def test_histograms_rendered(self, tmp_path):
        sample_dir = tmp_path / "dir"
        sample_dir.mkdir()
        for index in range(3):
            g = random_simple_graph(12, 20, seed=index)
            save_edge_list(g, str(sample_dir / f"s{index}.txt"))
        out_csv = tmp_path / "m.csv"
        assert main(["metrics", "--in", str(sample_dir), "--out", str(out_csv)]) == 0
        for name in ("clustering", "triangles", "diameter", "lambda_max"):
            assert (tmp_path / f"m_{name}.png").exists()


class TestCompare:
    def test_identical_directories_all_zero(self, tmp_path):
        sample_dir = tmp_path / "dir"
        sample_dir.mkdir()
        for index in range(3):
            g = random_simple_graph(15, 30, seed=index)
            save_edge_list(g, str(sample_dir / f"s{index}.txt"))
        out = tmp_path / "cmp.json"
        code = main(["compare", "--a", str(sample_dir), "--b", str(sample_dir),
                     "--out", str(out), "--no-plots"])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["all_similar"]
        for entry in report["metrics"].values():
            assert entry["ks_distance"] == 0.0

    def test_unmixed_vs_mixed_detected(self, cave_file, tmp_path):
        # one-tenth of an edge count of mixing vs ten edge counts
        args_common = ["--input", cave_file, "--samples", "40", "--seed", "5"]
        dir_short = tmp_path / "short"
        dir_long = tmp_path / "long"
        eps_short = math.exp(-0.1)  # run length 0.1|E|
        assert main(["generate", *args_common, "--epsilon", str(eps_short),
                     "--out", str(dir_short)]) == 0
        assert main(["generate", *args_common, "--epsilon", "4.5e-5",
                     "--out", str(dir_long)]) == 0
        out = tmp_path / "cmp.json"
        code = main(["compare", "--a", str(dir_short), "--b", str(dir_long),
                     "--out", str(out), "--no-plots"])
        assert code == 0
        report = json.loads(out.read_text())
        assert not report["all_similar"]
        assert report["metrics"]["triangles"]["ks_distance"] > 0.1

    def test_csv_inputs_and_mismatch(self, tmp_path):
        good = tmp_path / "good.csv"
        good.write_text(
            "sample,clustering,triangles,diameter,lambda_max\nx,0.5,3,2,4.0\n"
        )
        bad = tmp_path / "bad.csv"
        bad.write_text("sample,clustering\nx,0.5\n")
        out = tmp_path / "cmp.json"
        assert main(["compare", "--a", str(good), "--b", str(good),
                     "--out", str(out), "--no-plots"]) == 0
        assert main(["compare", "--a", str(good), "--b", str(bad),
                     "--out", str(out), "--no-plots"]) == 2

    def test_comparison_figures(self, tmp_path):
        sample_dir = tmp_path / "dir"
        sample_dir.mkdir()
        for index in range(3):
            g = random_simple_graph(15, 30, seed=index)
            save_edge_list(g, str(sample_dir / f"s{index}.txt"))
        out = tmp_path / "cmp.json"
        assert main(["compare", "--a", str(sample_dir), "--b", str(sample_dir),
                     "--out", str(out)]) == 0
        assert (tmp_path / "cmp_clustering.png").exists()


class TestConfigResolution:
    def test_flags_win_over_config_file(self, tmp_path, cave_file):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({
            "input_path": cave_file, "epsilon": 0.5, "samples": 7,
        }))
        parser = build_parser()
        args = parser.parse_args([
            "generate", "--config", str(config), "--samples", "2",
            "--out", str(tmp_path / "o"),
        ])
        resolved = resolve_config(args)
        assert resolved.samples == 2          # flag wins
        assert resolved.epsilon == 0.5        # config file value
        assert resolved.input_path == cave_file
        assert resolved.seed_base == 0        # default

    def test_workers_env_default(self, monkeypatch, cave_file, tmp_path):
        monkeypatch.setenv("JDDSAMPLER_WORKERS", "3")
        parser = build_parser()
        args = parser.parse_args(["generate", "--input", cave_file,
                                  "--out", str(tmp_path / "o")])
        assert resolve_config(args).workers == 3

    def test_missing_required_flag_exits_1(self):
        assert main(["generate"]) == 1

    def test_unknown_flag_exits_1(self, capsys):
        with pytest.raises(SystemExit) as err:
            build_parser().parse_args(["generate", "--bogus"])
        assert err.value.code == 1
