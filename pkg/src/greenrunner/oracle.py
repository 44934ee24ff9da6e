"""Evaluation oracle: answers "is model m correct on sample x?".

Each distinct (model, sample) evaluation is the metered unit the experiment
budget limits; its cost is the model's complexity in MMACs. Results are
cached so a repeated pull of the same pair costs nothing, and correctness is
a pure function of (seed, model_id, sample_index), so outcomes do not depend
on the order or interleaving of calls.

Two backends: a synthetic zoo whose models are Bernoulli sources with known
latent accuracy (for verifiable desk-scale experiments), and an HTTP client
for an external evaluation service.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import httpx

from .errors import EvaluationUnavailableError, ValidationError
from .models import ModelCard, Repository
from .seeding import MASK64, derive_seed, splitmix64, unit_uniform

MANIFEST_VERSION = 1
ZOO_VERSION = 1

EVAL_URL_ENV = "GREENRUNNER_EVAL_URL"
EVAL_TOKEN_ENV = "GREENRUNNER_EVAL_TOKEN"


@dataclass(frozen=True)
class EvaluationOutcome:
    """Result of one metered evaluation call."""

    model_id: str
    sample_index: int
    correct: bool
    mmac_spent: float


@dataclass(frozen=True)
class SyntheticModelSpec:
    """A synthetic model: its card plus the latent accuracy on the target data."""

    card: ModelCard
    true_target_accuracy: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.true_target_accuracy <= 1.0:
            raise ValidationError(
                f"model {self.card.id!r}: true_target_accuracy must be in [0, 1], "
                f"got {self.true_target_accuracy}"
            )


@dataclass(frozen=True)
class DatasetManifest:
    """Identifies the target evaluation set and the seed governing its draws."""

    name: str
    n_samples: int
    seed: int

    def __post_init__(self) -> None:
        if self.n_samples < 1:
            raise ValidationError(f"n_samples must be >= 1, got {self.n_samples}")
        if not 0 <= self.seed <= MASK64:
            raise ValidationError("seed must fit in an unsigned 64-bit integer")


def manifest_from_document(document: dict) -> DatasetManifest:
    if not isinstance(document, dict):
        raise ValidationError("manifest document must be a mapping")
    if document.get("version") != MANIFEST_VERSION:
        raise ValidationError(f"unsupported manifest version {document.get('version')!r}")
    for field in ("name", "n_samples", "seed"):
        if field not in document:
            raise ValidationError(f"manifest document missing field {field!r}")
    return DatasetManifest(
        name=str(document["name"]),
        n_samples=int(document["n_samples"]),
        seed=int(document["seed"]),
    )


def manifest_to_document(manifest: DatasetManifest) -> dict:
    return {
        "version": MANIFEST_VERSION,
        "name": manifest.name,
        "n_samples": manifest.n_samples,
        "seed": manifest.seed,
    }


def load_manifest(source: str | Path | dict) -> DatasetManifest:
    if isinstance(source, dict):
        return manifest_from_document(source)
    path = Path(source)
    try:
        document = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed manifest document {path}: {exc}") from exc
    return manifest_from_document(document)


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    Path(path).write_text(json.dumps(manifest_to_document(manifest), indent=2, sort_keys=True) + "\n")


class _MeteredOracle:
    """Shared cache + meter machinery; subclasses supply _draw()."""

    def __init__(self, cards: Iterable[ModelCard], manifest: DatasetManifest):
        self._cards = {card.id: card for card in cards}
        self.manifest = manifest
        self._cache: dict[tuple[str, int], EvaluationOutcome] = {}
        self._calls = 0
        self._mmacs = 0.0
        self._lock = threading.Lock()

    @property
    def n_samples(self) -> int:
        return self.manifest.n_samples

    def card(self, model_id: str) -> ModelCard:
        try:
            return self._cards[model_id]
        except KeyError:
            raise ValidationError(f"unknown model id {model_id!r}") from None

    def evaluate(self, model_id: str, sample_index: int) -> EvaluationOutcome:
        card = self.card(model_id)
        if not 0 <= sample_index < self.manifest.n_samples:
            raise ValidationError(
                f"sample index {sample_index} outside [0, {self.manifest.n_samples})"
            )
        key = (model_id, sample_index)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        correct = self._draw(model_id, sample_index)
        outcome = EvaluationOutcome(
            model_id=model_id,
            sample_index=sample_index,
            correct=correct,
            mmac_spent=card.complexity_mmac,
        )
        with self._lock:
            # A concurrent call may have landed first; only the winner meters.
            if key in self._cache:
                return self._cache[key]
            self._cache[key] = outcome
            self._calls += 1
            self._mmacs += card.complexity_mmac
        return outcome

    def _draw(self, model_id: str, sample_index: int) -> bool:
        raise NotImplementedError

    def meter_read(self) -> tuple[int, float]:
        with self._lock:
            return self._calls, self._mmacs

    def reset_meter(self) -> None:
        with self._lock:
            self._calls = 0
            self._mmacs = 0.0
            self._cache.clear()


class SyntheticZooOracle(_MeteredOracle):
    """Deterministic Bernoulli zoo keyed by (manifest.seed, model_id, sample)."""

    def __init__(self, specs: Sequence[SyntheticModelSpec], manifest: DatasetManifest):
        seen: set[str] = set()
        for spec in specs:
            if spec.card.id in seen:
                raise ValidationError(f"duplicate model id {spec.card.id!r}")
            seen.add(spec.card.id)
        super().__init__((spec.card for spec in specs), manifest)
        self._accuracy = {spec.card.id: spec.true_target_accuracy for spec in specs}
        # Per-model base word so the per-sample draw is a single mix step.
        self._base = {
            model_id: derive_seed(manifest.seed, "eval", model_id) for model_id in self._accuracy
        }

    def _draw(self, model_id: str, sample_index: int) -> bool:
        word = splitmix64(self._base[model_id] ^ sample_index)
        return unit_uniform(word) < self._accuracy[model_id]

    def true_accuracy(self, model_id: str) -> float:
        self.card(model_id)
        return self._accuracy[model_id]


def make_synthetic_zoo(
    specs: Sequence[SyntheticModelSpec], manifest: DatasetManifest
) -> SyntheticZooOracle:
    return SyntheticZooOracle(specs, manifest)


def zoo_from_documents(repo: Repository, zoo_document: dict) -> list[SyntheticModelSpec]:
    """Join a repository with a zoo-spec document ({id, true_target_accuracy})."""
    if not isinstance(zoo_document, dict):
        raise ValidationError("zoo document must be a mapping")
    if zoo_document.get("version") != ZOO_VERSION:
        raise ValidationError(f"unsupported zoo document version {zoo_document.get('version')!r}")
    entries = zoo_document.get("specs")
    if not isinstance(entries, list) or not entries:
        raise ValidationError("zoo document must carry a non-empty 'specs' list")
    by_id = {}
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "id" not in entry or "true_target_accuracy" not in entry:
            raise ValidationError(f"zoo entry #{i} must carry 'id' and 'true_target_accuracy'")
        by_id[str(entry["id"])] = float(entry["true_target_accuracy"])
    specs = []
    for card in repo.models:
        if card.id not in by_id:
            raise ValidationError(f"zoo document missing accuracy for model {card.id!r}")
        specs.append(SyntheticModelSpec(card=card, true_target_accuracy=by_id[card.id]))
    return specs


def zoo_to_document(specs: Sequence[SyntheticModelSpec]) -> dict:
    return {
        "version": ZOO_VERSION,
        "specs": [
            {"id": spec.card.id, "true_target_accuracy": spec.true_target_accuracy}
            for spec in specs
        ],
    }


class ExternalEvalOracle(_MeteredOracle):
    """Client for an external evaluation service.

    Contract: POST {model_id, sample_index} -> {correct: bool}. Transport
    failures and 5xx responses are retried with backoff and then surface as
    EvaluationUnavailableError; they are never turned into a correctness
    verdict.
    """

    def __init__(
        self,
        cards: Iterable[ModelCard],
        manifest: DatasetManifest,
        base_url: str,
        token: str | None = None,
        *,
        timeout: float = 10.0,
        max_retries: int = 2,
        backoff: float = 0.2,
        transport: httpx.BaseTransport | None = None,
    ):
        super().__init__(cards, manifest)
        headers = {"Authorization": f"Bearer {token}"} if token else {}
        self._client = httpx.Client(
            base_url=base_url, headers=headers, timeout=timeout, transport=transport
        )
        self._max_retries = max_retries
        self._backoff = backoff

    @classmethod
    def from_env(
        cls,
        cards: Iterable[ModelCard],
        manifest: DatasetManifest,
        **kwargs,
    ) -> "ExternalEvalOracle":
        base_url = os.environ.get(EVAL_URL_ENV)
        if not base_url:
            raise EvaluationUnavailableError(f"{EVAL_URL_ENV} is not configured")
        return cls(cards, manifest, base_url, os.environ.get(EVAL_TOKEN_ENV), **kwargs)

    def _draw(self, model_id: str, sample_index: int) -> bool:
        payload = {"model_id": model_id, "sample_index": sample_index}
        last_error: Exception | None = None
        for attempt in range(self._max_retries + 1):
            try:
                response = self._client.post("/evaluate", json=payload)
            except httpx.HTTPError as exc:
                last_error = exc
            else:
                if response.status_code >= 500:
                    last_error = EvaluationUnavailableError(
                        f"evaluation service returned {response.status_code}"
                    )
                elif response.status_code >= 400:
                    raise ValidationError(
                        f"evaluation service rejected {payload}: {response.status_code}"
                    )
                else:
                    body = response.json()
                    if "correct" not in body:
                        raise ValidationError("evaluation response missing 'correct'")
                    return bool(body["correct"])
            if attempt < self._max_retries:
                time.sleep(self._backoff * (2**attempt))
        raise EvaluationUnavailableError(f"evaluation service unreachable: {last_error}")

    def close(self) -> None:
        self._client.close()
