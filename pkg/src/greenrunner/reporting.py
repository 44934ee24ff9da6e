"""Experiment reports: ranking, selection counts, MMAC savings, exports.

Savings are exact arithmetic, not estimates: the brute-force equivalent is
n_samples x complexity summed over every model, and usage is the complexity
summed over the pulls actually made. Sums use math.fsum so the identity is
independent of summation order.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any, Mapping, Sequence

from .errors import ValidationError
from .models import Repository
from .oracle import DatasetManifest

if TYPE_CHECKING:  # pragma: no cover - typing only
    from .bandit import PullRecord

REPORT_VERSION = 1

COMPARISON_COLUMNS = ("method", "model", "accuracy", "size_mb", "complexity_mmac", "eval_calls")


@dataclass(frozen=True)
class RankedArm:
    """One row of the final ranking."""

    model_id: str
    posterior_mean_reward: float
    posterior_mean_accuracy: float
    pulls: int
    size_mb: float
    complexity_mmac: float


@dataclass(frozen=True)
class ExperimentReport:
    """Everything a finished run reports."""

    config_digest: str
    ranking: tuple[RankedArm, ...]
    selection_counts: dict[str, int]  # arm order; values sum to eval_calls_used
    eval_calls_used: int
    mmacs_used: float
    brute_force_equivalent_mmacs: float
    mmac_savings: float
    trace_ref: str | None = None

    @property
    def top3(self) -> tuple[RankedArm, ...]:
        return self.ranking[:3]

    @property
    def base_digest(self) -> str:
        """Digest of the configuration with seeds stripped (for run grouping)."""
        return self.config_digest.split(":", 1)[0]


def config_digest(config_fields: Mapping[str, Any], seeds: Sequence[int]) -> str:
    """Digest as '<base>:<seed part>' so runs can be grouped modulo seed."""
    base = hashlib.sha256(
        json.dumps(config_fields, sort_keys=True, default=str).encode()
    ).hexdigest()[:16]
    seed_part = hashlib.sha256(json.dumps(list(seeds)).encode()).hexdigest()[:16]
    return f"{base}:{seed_part}"


def compute_savings(
    repo: Repository,
    manifest: DatasetManifest,
    pulls: Sequence["PullRecord"],
) -> tuple[float, float, float]:
    """Return (mmacs_used, brute_force_equivalent, savings) for a pull trace."""
    complexity = {card.id: card.complexity_mmac for card in repo.models}
    for record in pulls:
        if record.outcome.model_id not in complexity:
            raise ValidationError(f"pull references unknown model {record.outcome.model_id!r}")
    brute_equivalent = math.fsum(
        manifest.n_samples * card.complexity_mmac for card in repo.models
    )
    mmacs_used = math.fsum(complexity[record.outcome.model_id] for record in pulls)
    return mmacs_used, brute_equivalent, brute_equivalent - mmacs_used


def report_to_document(report: ExperimentReport) -> dict[str, Any]:
    return {
        "version": REPORT_VERSION,
        "kind": "experiment_report",
        "config_digest": report.config_digest,
        "ranking": [
            {
                "model_id": row.model_id,
                "posterior_mean_reward": row.posterior_mean_reward,
                "posterior_mean_accuracy": row.posterior_mean_accuracy,
                "pulls": row.pulls,
                "size_mb": row.size_mb,
                "complexity_mmac": row.complexity_mmac,
            }
            for row in report.ranking
        ],
        "selection_counts": dict(report.selection_counts),
        "eval_calls_used": report.eval_calls_used,
        "mmacs_used": report.mmacs_used,
        "brute_force_equivalent_mmacs": report.brute_force_equivalent_mmacs,
        "mmac_savings": report.mmac_savings,
        "trace_ref": report.trace_ref,
    }


def report_from_document(document: dict) -> ExperimentReport:
    if not isinstance(document, dict) or document.get("version") != REPORT_VERSION:
        raise ValidationError("unsupported report document")
    ranking = tuple(
        RankedArm(
            model_id=row["model_id"],
            posterior_mean_reward=float(row["posterior_mean_reward"]),
            posterior_mean_accuracy=float(row["posterior_mean_accuracy"]),
            pulls=int(row["pulls"]),
            size_mb=float(row["size_mb"]),
            complexity_mmac=float(row["complexity_mmac"]),
        )
        for row in document["ranking"]
    )
    return ExperimentReport(
        config_digest=document["config_digest"],
        ranking=ranking,
        selection_counts={k: int(v) for k, v in document["selection_counts"].items()},
        eval_calls_used=int(document["eval_calls_used"]),
        mmacs_used=float(document["mmacs_used"]),
        brute_force_equivalent_mmacs=float(document["brute_force_equivalent_mmacs"]),
        mmac_savings=float(document["mmac_savings"]),
        trace_ref=document.get("trace_ref"),
    )


def report_to_table(report: ExperimentReport, method: str = "bandit") -> str:
    """Delimited export: one row per ranked arm, fixed column order."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(COMPARISON_COLUMNS)
    for row in report.ranking:
        writer.writerow(
            [
                method,
                row.model_id,
                row.posterior_mean_accuracy,
                row.size_mb,
                row.complexity_mmac,
                row.pulls,
            ]
        )
    return buffer.getvalue()


def export_report(
    report: ExperimentReport,
    fmt: str = "doc",
    path: str | Path | None = None,
    *,
    method: str = "bandit",
) -> dict | str:
    """Export as a structured document ('doc') or a delimited table ('table')."""
    if fmt == "doc":
        document: dict | str = report_to_document(report)
        rendered = json.dumps(document, indent=2, sort_keys=True) + "\n"
    elif fmt == "table":
        document = rendered = report_to_table(report, method=method)
    else:
        raise ValidationError(f"unknown export format {fmt!r}")
    if path is not None:
        try:
            Path(path).write_text(rendered)
        except OSError as exc:
            raise ValidationError(f"cannot write report to {path}: {exc}") from exc
    return document


def comparison_table(rows: Sequence[Mapping[str, Any]]) -> str:
    """Render method-comparison rows with the fixed six-column layout."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(COMPARISON_COLUMNS)
    for row in rows:
        writer.writerow([row[column] for column in COMPARISON_COLUMNS])
    return buffer.getvalue()


@dataclass(frozen=True)
class RunAggregate:
    """Summary of repeated runs of one configuration under different seeds."""

    base_digest: str
    n_runs: int
    modal_model_id: str
    modal_tied_with: tuple[str, ...]  # other models matching the modal count
    selection_frequency: dict[str, float] = field(default_factory=dict)
    mean_accuracy: float = 0.0
    mean_size_mb: float = 0.0
    mean_complexity_mmac: float = 0.0
    mean_eval_calls: float = 0.0


def most_selected(report: ExperimentReport) -> str:
    """Arm with the most pulls; ties resolve to the lowest arm index."""
    best_id, best_count = None, -1
    for model_id, count in report.selection_counts.items():  # insertion = arm order
        if count > best_count:
            best_id, best_count = model_id, count
    assert best_id is not None
    return best_id


def aggregate_runs(reports: Sequence[ExperimentReport]) -> RunAggregate:
    """Average repeated runs; requires all reports to share a base digest."""
    if not reports:
        raise ValidationError("cannot aggregate zero reports")
    base = reports[0].base_digest
    for report in reports:
        if report.base_digest != base:
            raise ValidationError("reports come from different configurations")

    arm_order = list(reports[0].selection_counts)
    wins: dict[str, int] = {model_id: 0 for model_id in arm_order}
    for report in reports:
        wins[most_selected(report)] += 1
    top_count = max(wins.values())
    tied = [model_id for model_id in arm_order if wins[model_id] == top_count]
    modal = tied[0]  # lowest arm index on ties

    chosen_rows = []
    for report in reports:
        choice = most_selected(report)
        chosen_rows.append(next(row for row in report.ranking if row.model_id == choice))
    n = len(reports)
    return RunAggregate(
        base_digest=base,
        n_runs=n,
        modal_model_id=modal,
        modal_tied_with=tuple(tied[1:]),
        selection_frequency={model_id: wins[model_id] / n for model_id in arm_order},
        mean_accuracy=math.fsum(r.posterior_mean_accuracy for r in chosen_rows) / n,
        mean_size_mb=math.fsum(r.size_mb for r in chosen_rows) / n,
        mean_complexity_mmac=math.fsum(r.complexity_mmac for r in chosen_rows) / n,
        mean_eval_calls=math.fsum(r.eval_calls_used for r in reports) / n,
    )
