"""Comparison baselines: model-card (benchmark) selection and brute force.

Call accounting is exact and verified against the oracle meter: the
benchmark method pays n_samples calls (to measure its single pick on the
target data; the selection itself reads only the cards), brute force pays
n_models x n_samples.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

from .errors import ValidationError
from .models import Repository
from .oracle import DatasetManifest
from .rewards import WeightProfile, compute_reward


@dataclass(frozen=True)
class BaselineReport:
    method: Literal["benchmark", "brute_force"]
    selected_model_id: str
    selected_model_target_accuracy: float
    eval_calls: int
    mmacs_spent: float
    full_scores: tuple[tuple[str, float], ...]


def _argmax_lowest_index(scores: list[float]) -> int:
    best, best_score = 0, scores[0]
    for i, score in enumerate(scores[1:], start=1):
        if score > best_score:
            best, best_score = i, score
    return best


def _measure_accuracy(oracle, model_id: str, n_samples: int) -> float:
    correct = 0
    for sample_index in range(n_samples):
        if oracle.evaluate(model_id, sample_index).correct:
            correct += 1
    return correct / n_samples


def benchmark_select(
    repo: Repository,
    weights: WeightProfile,
    oracle,
    manifest: DatasetManifest | None = None,
) -> BaselineReport:
    """Select on card metadata alone, then measure only the pick on target data.

    Scoring uses each card's benchmark accuracy through the weighted reward
    and costs zero oracle calls; the single selected model is then evaluated
    on all target samples, so eval_calls equals n_samples exactly.
    """
    manifest = manifest or oracle.manifest
    calls_before, mmacs_before = oracle.meter_read()
    scores = [
        compute_reward(card.benchmark_accuracy, card, weights, repo.extents)
        for card in repo.models
    ]
    selected = _argmax_lowest_index(scores)
    selected_id = repo.models[selected].id
    target_accuracy = _measure_accuracy(oracle, selected_id, manifest.n_samples)
    calls_after, mmacs_after = oracle.meter_read()
    return BaselineReport(
        method="benchmark",
        selected_model_id=selected_id,
        selected_model_target_accuracy=target_accuracy,
        eval_calls=calls_after - calls_before,
        mmacs_spent=mmacs_after - mmacs_before,
        full_scores=tuple((card.id, score) for card, score in zip(repo.models, scores)),
    )


def brute_force_select(
    repo: Repository,
    weights: WeightProfile,
    oracle,
    manifest: DatasetManifest | None = None,
    *,
    max_workers: int | None = None,
) -> BaselineReport:
    """Evaluate every model on every sample and pick the best measured reward.

    eval_calls equals n_models x n_samples exactly. Arms may be evaluated on
    worker threads (max_workers > 1); the oracle's order-independent draws
    and by-arm aggregation keep the report identical to sequential execution.
    On any oracle failure the partial results are discarded and the error
    propagates.
    """
    manifest = manifest or oracle.manifest
    n = manifest.n_samples
    calls_before, mmacs_before = oracle.meter_read()

    ids = [card.id for card in repo.models]
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            accuracies = list(pool.map(lambda m: _measure_accuracy(oracle, m, n), ids))
    else:
        accuracies = [_measure_accuracy(oracle, model_id, n) for model_id in ids]

    scores = [
        compute_reward(accuracy, card, weights, repo.extents)
        for accuracy, card in zip(accuracies, repo.models)
    ]
    selected = _argmax_lowest_index(scores)
    calls_after, mmacs_after = oracle.meter_read()
    eval_calls = calls_after - calls_before
    expected = len(repo) * n
    if eval_calls != expected:
        raise ValidationError(
            f"brute force metered {eval_calls} calls, expected {expected}; "
            "the oracle was reused with overlapping samples"
        )
    return BaselineReport(
        method="brute_force",
        selected_model_id=ids[selected],
        selected_model_target_accuracy=accuracies[selected],
        eval_calls=eval_calls,
        mmacs_spent=mmacs_after - mmacs_before,
        full_scores=tuple(zip(ids, scores)),
    )


def brute_force_equivalent_mmacs(repo: Repository, manifest: DatasetManifest) -> float:
    """MMACs a full brute-force evaluation would spend."""
    return math.fsum(manifest.n_samples * card.complexity_mmac for card in repo.models)
