"""Command-line interface: zoo generation, runs, comparisons, exit codes."""

import csv
import io
import json

import pytest

from greenrunner.cli import main
from greenrunner.models import load_repository
from greenrunner.oracle import manifest_to_document
from greenrunner.oracle import DatasetManifest
from tests.conftest import MIRROR_ZOO_ROWS


def write_manifest(tmp_path, n_samples=20, seed=5):
    path = tmp_path / "manifest.json"
    manifest = DatasetManifest(name="cli", n_samples=n_samples, seed=seed)
    path.write_text(json.dumps(manifest_to_document(manifest)))
    return path


def write_mirror_zoo(tmp_path):
    repo_path = tmp_path / "repository.json"
    zoo_path = tmp_path / "zoo.json"
    repo_path.write_text(
        json.dumps(
            {
                "version": 1,
                "models": [
                    {
                        "id": r[0],
                        "size_mb": r[1],
                        "complexity_mmac": r[2],
                        "benchmark_accuracy": r[3],
                    }
                    for r in MIRROR_ZOO_ROWS
                ],
            }
        )
    )
    zoo_path.write_text(
        json.dumps(
            {
                "version": 1,
                "specs": [
                    {"id": r[0], "true_target_accuracy": r[4]} for r in MIRROR_ZOO_ROWS
                ],
            }
        )
    )
    return repo_path, zoo_path


class TestZooGenerate:
    def test_same_seed_byte_identical(self, tmp_path):
        for name in ("one", "two"):
            code = main(
                [
                    "zoo-generate",
                    "--n-models",
                    "10",
                    "--seed",
                    "42",
                    "--out",
                    str(tmp_path / name),
                ]
            )
            assert code == 0
        assert (tmp_path / "one/repository.json").read_bytes() == (
            tmp_path / "two/repository.json"
        ).read_bytes()
        assert (tmp_path / "one/zoo.json").read_bytes() == (tmp_path / "two/zoo.json").read_bytes()

    def test_degenerate_accuracy_range(self, tmp_path):
        main(
            [
                "zoo-generate",
                "--n-models",
                "5",
                "--accuracy-range",
                "0.3,0.3",
                "--out",
                str(tmp_path / "z"),
            ]
        )
        zoo = json.loads((tmp_path / "z/zoo.json").read_text())
        assert all(spec["true_target_accuracy"] == 0.3 for spec in zoo["specs"])

    def test_sizes_stay_within_requested_extremes(self, tmp_path):
        main(
            [
                "zoo-generate",
                "--n-models",
                "71",
                "--size-range",
                "22,2581",
                "--complexity-range",
                "229,127750",
                "--seed",
                "7",
                "--out",
                str(tmp_path / "z"),
            ]
        )
        repo = load_repository(tmp_path / "z/repository.json")
        assert all(22 <= card.size_mb <= 2581 for card in repo.models)
        assert all(229 <= card.complexity_mmac <= 127750 for card in repo.models)
        assert len(repo) == 71

    def test_bad_range_is_validation_exit(self, tmp_path):
        code = main(
            [
                "zoo-generate",
                "--n-models",
                "3",
                "--accuracy-range",
                "0.9,0.1",
                "--out",
                str(tmp_path / "z"),
            ]
        )
        assert code == 1


class TestRun:
    def test_explicit_weights_respect_budget(self, tmp_path, capsys):
        repo_path, zoo_path = write_mirror_zoo(tmp_path)
        manifest_path = write_manifest(tmp_path, n_samples=30)
        code = main(
            [
                "run",
                "--repo",
                str(repo_path),
                "--manifest",
                str(manifest_path),
                "--zoo",
                str(zoo_path),
                "--strategy",
                "thompson",
                "--budget",
                "100",
                "--weights",
                "1,0,0",
                "--seed",
                "5",
            ]
        )
        assert code == 0
        document = json.loads(capsys.readouterr().out)
        assert document["eval_calls_used"] <= 100
        assert document["weights_source"] == "explicit"
        assert len(document["ranking"]) == 6

    def test_use_case_without_llm_falls_back(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("GREENRUNNER_LLM_URL", raising=False)
        repo_path, zoo_path = write_mirror_zoo(tmp_path)
        manifest_path = write_manifest(tmp_path)
        code = main(
            [
                "run",
                "--repo",
                str(repo_path),
                "--manifest",
                str(manifest_path),
                "--zoo",
                str(zoo_path),
                "--budget",
                "50",
                "--use-case",
                "spot defects with an embedded camera",
            ]
        )
        assert code == 0
        document = json.loads(capsys.readouterr().out)
        assert document["weights_source"] == "fallback"

    def test_budget_below_arm_count_exits_one(self, tmp_path):
        repo_path, zoo_path = write_mirror_zoo(tmp_path)
        manifest_path = write_manifest(tmp_path)
        code = main(
            [
                "run",
                "--repo",
                str(repo_path),
                "--manifest",
                str(manifest_path),
                "--zoo",
                str(zoo_path),
                "--budget",
                "3",
                "--weights",
                "1,0,0",
            ]
        )
        assert code == 1

    def test_epsilon_strategy_shorthand(self, tmp_path, capsys):
        repo_path, zoo_path = write_mirror_zoo(tmp_path)
        manifest_path = write_manifest(tmp_path)
        code = main(
            [
                "run",
                "--repo",
                str(repo_path),
                "--manifest",
                str(manifest_path),
                "--zoo",
                str(zoo_path),
                "--strategy",
                "epsilon",
                "--epsilon",
                "0.2",
                "--budget",
                "30",
                "--weights",
                "1,0,0",
            ]
        )
        assert code == 0
        assert json.loads(capsys.readouterr().out)["eval_calls_used"] == 30

    def test_weights_and_use_case_both_given_exits_one(self, tmp_path):
        repo_path, zoo_path = write_mirror_zoo(tmp_path)
        manifest_path = write_manifest(tmp_path)
        code = main(
            [
                "run",
                "--repo",
                str(repo_path),
                "--manifest",
                str(manifest_path),
                "--zoo",
                str(zoo_path),
                "--budget",
                "50",
                "--weights",
                "1,0,0",
                "--use-case",
                "anything",
            ]
        )
        assert code == 1

    def test_trace_and_out_files_written(self, tmp_path):
        repo_path, zoo_path = write_mirror_zoo(tmp_path)
        manifest_path = write_manifest(tmp_path)
        out = tmp_path / "report.json"
        trace = tmp_path / "trace.jsonl"
        code = main(
            [
                "run",
                "--repo",
                str(repo_path),
                "--manifest",
                str(manifest_path),
                "--zoo",
                str(zoo_path),
                "--budget",
                "40",
                "--weights",
                "0.63,0.25,0.21",
                "--out",
                str(out),
                "--trace",
                str(trace),
            ]
        )
        assert code == 0
        document = json.loads(out.read_text())
        assert document["eval_calls_used"] == 40
        assert len(trace.read_text().splitlines()) == 40


def compare_args(tmp_path, *extra, budget="60", weights="1,0,0"):
    repo_path, zoo_path = write_mirror_zoo(tmp_path)
    manifest_path = write_manifest(tmp_path, n_samples=10, seed=1)
    return [
        "compare",
        "--repo",
        str(repo_path),
        "--manifest",
        str(manifest_path),
        "--zoo",
        str(zoo_path),
        "--budget",
        budget,
        "--weights",
        weights,
        *extra,
    ]


class TestCompare:
    def test_call_accounting_columns(self, tmp_path, capsys):
        code = main(compare_args(tmp_path, "--format", "table", budget="20"))
        assert code == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        header, benchmark, brute, bandit = rows
        assert header == ["method", "model", "accuracy", "size_mb", "complexity_mmac", "eval_calls"]
        assert benchmark[0] == "benchmark" and int(benchmark[5]) == 10
        assert brute[0] == "brute_force" and int(brute[5]) == 60
        assert float(bandit[5]) <= 20

    def test_accuracy_only_brute_force_selects_highest_target(self, tmp_path, capsys):
        # manifest seed 1, n=100: margin comfortably favors the 0.45 model
        repo_path, zoo_path = write_mirror_zoo(tmp_path)
        manifest_path = tmp_path / "m100.json"
        manifest_path.write_text(
            json.dumps({"version": 1, "name": "cli", "n_samples": 100, "seed": 1})
        )
        code = main(
            [
                "compare",
                "--repo",
                str(repo_path),
                "--manifest",
                str(manifest_path),
                "--zoo",
                str(zoo_path),
                "--budget",
                "270",
                "--weights",
                "1,0,0",
            ]
        )
        assert code == 0
        document = json.loads(capsys.readouterr().out)
        brute_row = next(r for r in document["rows"] if r["method"] == "brute_force")
        assert brute_row["model"] == "regnet_y_128gf"

    def test_multiple_iterations_report_modal_model(self, tmp_path, capsys):
        code = main(compare_args(tmp_path, "--iterations", "5", "--seed", "11"))
        assert code == 0
        document = json.loads(capsys.readouterr().out)
        assert document["iterations"] == 5
        assert sum(document["bandit"]["selection_frequency"].values()) == pytest.approx(1.0)

    def test_resampling_varies_the_sample_subset(self, tmp_path, capsys):
        outputs = []
        for flag in ([], ["--resample"]):
            code = main(compare_args(tmp_path, "--iterations", "3", *flag))
            assert code == 0
            outputs.append(json.loads(capsys.readouterr().out))
        fixed, resampled = outputs
        assert fixed["resample"] is False and resampled["resample"] is True
        # With a fixed subset the brute-force accuracy is one measurement; the
        # resampled average generally differs from it.
        fixed_brute = next(r for r in fixed["rows"] if r["method"] == "brute_force")
        resampled_brute = next(r for r in resampled["rows"] if r["method"] == "brute_force")
        assert fixed_brute["eval_calls"] == resampled_brute["eval_calls"]
        assert fixed_brute["accuracy"] != resampled_brute["accuracy"]

    def test_zero_iterations_exits_one(self, tmp_path):
        assert main(compare_args(tmp_path, "--iterations", "0")) == 1
