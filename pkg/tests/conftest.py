"""Shared fixtures: the six-model mirror zoo used across suites."""

from __future__ import annotations

import pytest

from greenrunner.models import ModelCard, Repository
from greenrunner.oracle import DatasetManifest, SyntheticModelSpec
from greenrunner.rewards import WeightProfile

# (id, size_mb, complexity_mmac, benchmark_accuracy, true_target_accuracy)
MIRROR_ZOO_ROWS = [
    ("convnext_small", 114.0, 4470.0, 0.77, 0.29),
    ("maxvit_t", 124.5, 19670.0, 0.80, 0.29),
    ("mobilenet_v3", 22.0, 229.0, 0.67, 0.17),
    ("regnet_y_128gf", 2581.0, 127750.0, 0.79, 0.45),
    ("regnet_y_32gf", 581.0, 32380.0, 0.76, 0.32),
    ("swin_v2_s", 199.0, 5790.0, 0.78, 0.30),
]

MIXED_WEIGHTS = WeightProfile(0.63, 0.25, 0.21)
ACCURACY_ONLY = WeightProfile(1.0, 0.0, 0.0)


def mirror_cards() -> list[ModelCard]:
    return [
        ModelCard(id=r[0], size_mb=r[1], complexity_mmac=r[2], benchmark_accuracy=r[3])
        for r in MIRROR_ZOO_ROWS
    ]


def mirror_specs() -> list[SyntheticModelSpec]:
    return [
        SyntheticModelSpec(card=card, true_target_accuracy=row[4])
        for card, row in zip(mirror_cards(), MIRROR_ZOO_ROWS)
    ]


@pytest.fixture
def mirror_repo() -> Repository:
    return Repository.from_cards(mirror_cards())


@pytest.fixture
def mirror_zoo_specs() -> list[SyntheticModelSpec]:
    return mirror_specs()


@pytest.fixture
def mirror_manifest() -> DatasetManifest:
    return DatasetManifest(name="target-100", n_samples=100, seed=1)


class FailingOracle:
    """Wraps a backend and fails with a retryable error on the Nth fresh call."""

    def __init__(self, inner, fail_at: int):
        self.inner = inner
        self.fail_at = fail_at
        self.manifest = inner.manifest

    def evaluate(self, model_id: str, sample_index: int):
        calls, _ = self.inner.meter_read()
        if calls + 1 >= self.fail_at:
            from greenrunner.errors import EvaluationUnavailableError

            raise EvaluationUnavailableError("synthetic outage")
        return self.inner.evaluate(model_id, sample_index)

    def meter_read(self):
        return self.inner.meter_read()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance" in report.nodeid and report.when == "call":
                name = report.nodeid.split("::")[-1]
                lines.append((name, "PASS" if status == "passed" else "FAIL"))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {name}")
