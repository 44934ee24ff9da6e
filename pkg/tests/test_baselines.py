"""Benchmark and brute-force baselines: selection and exact call accounting."""

import numpy as np
import pytest

from greenrunner.baselines import benchmark_select, brute_force_select
from greenrunner.models import ModelCard, Repository
from greenrunner.oracle import DatasetManifest, SyntheticModelSpec, make_synthetic_zoo
from greenrunner.rewards import WeightProfile, compute_reward
from tests.conftest import ACCURACY_ONLY, MIXED_WEIGHTS, mirror_specs


def zoo_of(rows, n_samples=20, seed=0):
    """rows: (id, size, complexity, benchmark_acc, target_acc)."""
    specs = [
        SyntheticModelSpec(
            card=ModelCard(id=r[0], size_mb=r[1], complexity_mmac=r[2], benchmark_accuracy=r[3]),
            true_target_accuracy=r[4],
        )
        for r in rows
    ]
    repo = Repository.from_cards(s.card for s in specs)
    manifest = DatasetManifest(name="t", n_samples=n_samples, seed=seed)
    return repo, manifest, make_synthetic_zoo(specs, manifest)


class TestBenchmarkSelect:
    def test_accuracy_weights_pick_best_card(self):
        repo, manifest, oracle = zoo_of(
            [("hi", 100, 1000, 0.80, 0.3), ("lo", 100, 1000, 0.75, 0.6)]
        )
        report = benchmark_select(repo, ACCURACY_ONLY, oracle, manifest)
        assert report.selected_model_id == "hi"  # card accuracy wins, target unseen

    def test_size_only_weights_pick_smallest(self):
        repo, manifest, oracle = zoo_of(
            [("big", 500, 1000, 0.9, 0.5), ("small", 50, 1000, 0.1, 0.5)]
        )
        report = benchmark_select(repo, WeightProfile(0, 1, 0), oracle, manifest)
        assert report.selected_model_id == "small"

    def test_call_count_is_exactly_n_samples(self):
        repo, manifest, oracle = zoo_of(
            [("a", 10, 100, 0.5, 0.5), ("b", 20, 200, 0.6, 0.5)], n_samples=20
        )
        report = benchmark_select(repo, ACCURACY_ONLY, oracle, manifest)
        assert report.eval_calls == 20
        assert oracle.meter_read()[0] == 20  # meter, not an internal counter

    def test_reports_measured_target_accuracy(self):
        repo, manifest, oracle = zoo_of([("a", 10, 100, 0.9, 1.0)], n_samples=15)
        report = benchmark_select(repo, ACCURACY_ONLY, oracle, manifest)
        assert report.selected_model_target_accuracy == 1.0
        assert report.mmacs_spent == 15 * 100

    def test_selection_matches_enumeration_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            rows = [
                (
                    f"m{i}",
                    float(rng.uniform(10, 1000)),
                    float(rng.uniform(100, 50000)),
                    float(rng.uniform(0, 1)),
                    0.5,
                )
                for i in range(5)
            ]
            repo, manifest, oracle = zoo_of(rows, n_samples=5)
            weights = WeightProfile(*(float(w) for w in rng.uniform(0, 1, 3)))
            report = benchmark_select(repo, weights, oracle, manifest)
            scores = [
                compute_reward(card.benchmark_accuracy, card, weights, repo.extents)
                for card in repo.models
            ]
            assert report.selected_model_id == repo.models[int(np.argmax(scores))].id
            assert len(report.full_scores) == 5


class TestBruteForceSelect:
    def test_call_count_is_m_times_n(self):
        repo, manifest, oracle = zoo_of(
            [("a", 10, 100, 0.5, 0.4), ("b", 20, 200, 0.5, 0.5), ("c", 30, 300, 0.5, 0.6)],
            n_samples=10,
        )
        report = brute_force_select(repo, ACCURACY_ONLY, oracle, manifest)
        assert report.eval_calls == 30
        assert oracle.meter_read()[0] == 30

    def test_equal_accuracy_smallest_wins_under_size_weight(self):
        repo, manifest, oracle = zoo_of(
            [("big", 500, 1000, 0.5, 1.0), ("small", 50, 1000, 0.5, 1.0)]
        )
        report = brute_force_select(repo, WeightProfile(0, 1, 0), oracle, manifest)
        assert report.selected_model_id == "small"

    def test_mirror_zoo_accuracy_only_selects_highest_target(self, mirror_repo, mirror_manifest):
        oracle = make_synthetic_zoo(mirror_specs(), mirror_manifest)
        report = brute_force_select(mirror_repo, ACCURACY_ONLY, oracle, mirror_manifest)
        assert report.selected_model_id == "regnet_y_128gf"  # the 0.45-target model

    def test_mirror_zoo_mixed_weights_prefer_cheap_model(self, mirror_repo, mirror_manifest):
        oracle = make_synthetic_zoo(mirror_specs(), mirror_manifest)
        report = brute_force_select(mirror_repo, MIXED_WEIGHTS, oracle, mirror_manifest)
        assert report.selected_model_id == "mobilenet_v3"

    def test_thread_counts_do_not_change_the_report(self):
        rows = [
            (f"m{i}", 10.0 + i, 100.0 * (i + 1), 0.5, 0.2 + 0.1 * i) for i in range(6)
        ]
        reports = []
        for workers in (None, 4, 8):
            repo, manifest, oracle = zoo_of(rows, n_samples=25, seed=9)
            reports.append(
                brute_force_select(repo, MIXED_WEIGHTS, oracle, manifest, max_workers=workers)
            )
        assert reports[0] == reports[1] == reports[2]

    def test_full_scores_cover_every_model(self):
        repo, manifest, oracle = zoo_of(
            [("a", 10, 100, 0.5, 0.4), ("b", 20, 200, 0.5, 0.8)], n_samples=10
        )
        report = brute_force_select(repo, ACCURACY_ONLY, oracle, manifest)
        assert [model_id for model_id, _ in report.full_scores] == ["a", "b"]


class TestWeightScalingInvariance:
    def test_scaling_never_changes_selection(self):
        rng = np.random.default_rng(77)
        for trial in range(10):
            rows = [
                (
                    f"m{i}",
                    float(rng.uniform(10, 2000)),
                    float(rng.uniform(100, 100000)),
                    float(rng.uniform(0, 1)),
                    float(rng.uniform(0, 1)),
                )
                for i in range(4)
            ]
            base = WeightProfile(*(float(w) for w in rng.uniform(0.05, 1, 3)))
            repo, manifest, oracle = zoo_of(rows, n_samples=10, seed=trial)
            bench_base = benchmark_select(repo, base, oracle, manifest).selected_model_id
            brute_base = brute_force_select(
                repo, base, make_synthetic_zoo_from(rows, trial), manifest
            ).selected_model_id
            for c in (0.5, 2.0, 10.0):
                scaled = WeightProfile(
                    base.weight_acc * c, base.weight_size * c, base.weight_complexity * c
                )
                assert (
                    benchmark_select(
                        repo, scaled, make_synthetic_zoo_from(rows, trial), manifest
                    ).selected_model_id
                    == bench_base
                )
                assert (
                    brute_force_select(
                        repo, scaled, make_synthetic_zoo_from(rows, trial), manifest
                    ).selected_model_id
                    == brute_base
                )


def make_synthetic_zoo_from(rows, seed):
    _, manifest, oracle = zoo_of(rows, n_samples=10, seed=seed)
    return oracle
