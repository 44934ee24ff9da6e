"""Candidate-model repository: cards, validation, and reward extents.

A repository is the ordered set of candidate models an experiment treats as
arms; position in the list is the arm index. Loading also caches the min/max
size and complexity over the candidates, which the reward function needs for
log-normalization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import ValidationError

REPOSITORY_VERSION = 1

_CARD_FIELDS = ("id", "size_mb", "complexity_mmac", "benchmark_accuracy")


@dataclass(frozen=True)
class ModelCard:
    """Static metadata for one candidate model (one arm)."""

    id: str
    size_mb: float
    complexity_mmac: float
    benchmark_accuracy: float

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("model card has an empty id")
        if not self.size_mb > 0:
            raise ValidationError(f"model {self.id!r}: size_mb must be > 0, got {self.size_mb}")
        if not self.complexity_mmac > 0:
            raise ValidationError(
                f"model {self.id!r}: complexity_mmac must be > 0, got {self.complexity_mmac}"
            )
        if not 0.0 <= self.benchmark_accuracy <= 1.0:
            raise ValidationError(
                f"model {self.id!r}: benchmark_accuracy must be in [0, 1], "
                f"got {self.benchmark_accuracy}"
            )


@dataclass(frozen=True)
class RewardExtents:
    """Min/max size (MB) and complexity (MMAC) over a candidate set."""

    min_size: float
    max_size: float
    min_complexity: float
    max_complexity: float

    def __post_init__(self) -> None:
        if not (0 < self.min_size <= self.max_size):
            raise ValidationError(
                f"size extents must satisfy 0 < min <= max, got ({self.min_size}, {self.max_size})"
            )
        if not (0 < self.min_complexity <= self.max_complexity):
            raise ValidationError(
                "complexity extents must satisfy 0 < min <= max, "
                f"got ({self.min_complexity}, {self.max_complexity})"
            )

    def covers(self, card: ModelCard) -> bool:
        return (
            self.min_size <= card.size_mb <= self.max_size
            and self.min_complexity <= card.complexity_mmac <= self.max_complexity
        )


def compute_extents(models: Sequence[ModelCard]) -> RewardExtents:
    """Min/max scan over the candidate cards' size and complexity."""
    if not models:
        raise ValidationError("cannot compute extents of an empty model list")
    sizes = [m.size_mb for m in models]
    complexities = [m.complexity_mmac for m in models]
    return RewardExtents(
        min_size=min(sizes),
        max_size=max(sizes),
        min_complexity=min(complexities),
        max_complexity=max(complexities),
    )


@dataclass(frozen=True)
class Repository:
    """Immutable, ordered candidate set. Arm index i is models[i]."""

    models: tuple[ModelCard, ...]
    extents: RewardExtents

    @classmethod
    def from_cards(cls, cards: Iterable[ModelCard]) -> "Repository":
        models = tuple(cards)
        if not models:
            raise ValidationError("repository must contain at least one model")
        seen: set[str] = set()
        for card in models:
            if card.id in seen:
                raise ValidationError(f"duplicate model id {card.id!r}")
            seen.add(card.id)
        return cls(models=models, extents=compute_extents(models))

    def __len__(self) -> int:
        return len(self.models)

    def arm_index(self, model_id: str) -> int:
        for i, card in enumerate(self.models):
            if card.id == model_id:
                return i
        raise ValidationError(f"unknown model id {model_id!r}")

    def card(self, model_id: str) -> ModelCard:
        return self.models[self.arm_index(model_id)]

    def ids(self) -> tuple[str, ...]:
        return tuple(card.id for card in self.models)


def _reject_unknown(entry: dict, allowed: Sequence[str], where: str) -> None:
    unknown = sorted(set(entry) - set(allowed))
    if unknown:
        raise ValidationError(f"unknown field(s) {unknown} in {where}")


def repository_from_document(document: dict, *, strict: bool = False) -> Repository:
    """Build a Repository from a parsed repository document."""
    if not isinstance(document, dict):
        raise ValidationError("repository document must be a mapping")
    if document.get("version") != REPOSITORY_VERSION:
        raise ValidationError(
            f"unsupported repository document version {document.get('version')!r}"
        )
    if strict:
        _reject_unknown(document, ("version", "models"), "repository document")
    entries = document.get("models")
    if not isinstance(entries, list) or not entries:
        raise ValidationError("repository document must carry a non-empty 'models' list")
    cards = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ValidationError(f"model entry #{i} is not a mapping")
        label = entry.get("id", f"entry #{i}")
        missing = [f for f in _CARD_FIELDS if f not in entry]
        if missing:
            raise ValidationError(f"model {label!r}: missing field(s) {missing}")
        if strict:
            _reject_unknown(entry, _CARD_FIELDS, f"model {label!r}")
        try:
            card = ModelCard(
                id=str(entry["id"]),
                size_mb=float(entry["size_mb"]),
                complexity_mmac=float(entry["complexity_mmac"]),
                benchmark_accuracy=float(entry["benchmark_accuracy"]),
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"model {label!r}: non-numeric field ({exc})") from exc
        cards.append(card)
    return Repository.from_cards(cards)


def repository_to_document(repo: Repository) -> dict[str, Any]:
    return {
        "version": REPOSITORY_VERSION,
        "models": [
            {
                "id": card.id,
                "size_mb": card.size_mb,
                "complexity_mmac": card.complexity_mmac,
                "benchmark_accuracy": card.benchmark_accuracy,
            }
            for card in repo.models
        ],
    }


def load_repository(source: str | Path | dict, *, strict: bool = False) -> Repository:
    """Load a repository from a JSON file path or an already-parsed document.

    Unknown fields are rejected when `strict` is set, ignored otherwise.
    """
    if isinstance(source, dict):
        return repository_from_document(source, strict=strict)
    path = Path(source)
    try:
        document = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed repository document {path}: {exc}") from exc
    return repository_from_document(document, strict=strict)


def save_repository(repo: Repository, path: str | Path) -> None:
    Path(path).write_text(json.dumps(repository_to_document(repo), indent=2, sort_keys=True) + "\n")
