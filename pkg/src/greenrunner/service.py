"""Experiment service: the setup -> staging -> run -> results workflow.

Records move through a fixed state machine::

    draft -> staged -> running -> complete
                 |            \\-> failed
                 \\-> staged (weight re-edits, re-staging)

Each record is one JSON document in the store directory, replaced atomically
on every transition. Records found in `running` at startup become
failed("interrupted"): runs are cheap to repeat and resumption is out of
scope. Engine runs execute on a worker thread so progress stays observable.
"""

from __future__ import annotations

import copy
import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .bandit import STRATEGIES, ExperimentConfig, run_experiment
from .errors import (
    ConfigError,
    EvaluationUnavailableError,
    ExperimentAborted,
    GreenRunnerError,
    ReasoningError,
    ReasoningUnavailableError,
    StateError,
    UnknownExperimentError,
    ValidationError,
)
from .models import load_repository
from .oracle import ExternalEvalOracle, load_manifest, make_synthetic_zoo, zoo_from_documents
from .reasoning import LLMClient, WeightSuggestion, default_client, suggest_weights
from .reporting import report_from_document, report_to_document
from .rewards import WeightProfile
from .seeding import MASK64

RECORD_VERSION = 1

ADDR_ENV = "GREENRUNNER_ADDR"
DATA_DIR_ENV = "GREENRUNNER_DATA_DIR"

STATES = ("draft", "staged", "running", "complete", "failed")
_ALLOWED_TRANSITIONS = {
    "draft": {"staged"},
    "staged": {"staged", "running"},
    "running": {"complete", "failed"},
    "complete": set(),
    "failed": set(),
}


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class ExperimentRecord:
    """Durable state of one experiment."""

    id: str
    state: str
    created_at: str
    updated_at: str
    use_case: str
    strategy: str
    budget: int
    seed: int
    epsilon: float
    ucb_c: float
    prior_alpha: float
    prior_beta: float
    repository_doc: dict
    manifest_doc: dict
    zoo_doc: dict | None = None
    weights: dict | None = None
    suggestions: list = field(default_factory=list)
    report_doc: dict | None = None
    error: str | None = None
    calls_spent: int = 0

    def to_document(self) -> dict:
        return {
            "version": RECORD_VERSION,
            "id": self.id,
            "state": self.state,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "use_case": self.use_case,
            "strategy": self.strategy,
            "budget": self.budget,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "ucb_c": self.ucb_c,
            "prior_alpha": self.prior_alpha,
            "prior_beta": self.prior_beta,
            "repository": self.repository_doc,
            "manifest": self.manifest_doc,
            "zoo": self.zoo_doc,
            "weights": self.weights,
            "suggestions": self.suggestions,
            "report": self.report_doc,
            "error": self.error,
            "calls_spent": self.calls_spent,
        }

    @classmethod
    def from_document(cls, document: dict) -> "ExperimentRecord":
        return cls(
            id=document["id"],
            state=document["state"],
            created_at=document["created_at"],
            updated_at=document["updated_at"],
            use_case=document["use_case"],
            strategy=document["strategy"],
            budget=int(document["budget"]),
            seed=int(document["seed"]),
            epsilon=float(document["epsilon"]),
            ucb_c=float(document["ucb_c"]),
            prior_alpha=float(document["prior_alpha"]),
            prior_beta=float(document["prior_beta"]),
            repository_doc=document["repository"],
            manifest_doc=document["manifest"],
            zoo_doc=document.get("zoo"),
            weights=document.get("weights"),
            suggestions=list(document.get("suggestions", [])),
            report_doc=document.get("report"),
            error=document.get("error"),
            calls_spent=int(document.get("calls_spent", 0)),
        )


class RecordStore:
    """One JSON file per record, written atomically via replace."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, record_id: str) -> Path:
        return self.directory / f"{record_id}.json"

    def save(self, record: ExperimentRecord) -> None:
        path = self._path(record.id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(record.to_document(), indent=2, sort_keys=True))
        os.replace(tmp, path)

    def load(self, record_id: str) -> ExperimentRecord:
        path = self._path(record_id)
        if not path.exists():
            raise UnknownExperimentError(f"no experiment {record_id!r}")
        return ExperimentRecord.from_document(json.loads(path.read_text()))

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.json"))


def _weights_doc(profile: WeightProfile) -> dict:
    return {
        "weight_acc": profile.weight_acc,
        "weight_size": profile.weight_size,
        "weight_complexity": profile.weight_complexity,
        "justification": profile.justification,
        "tradeoffs": profile.tradeoffs,
    }


def _suggestion_doc(suggestion: WeightSuggestion) -> dict:
    return {
        "profile": _weights_doc(suggestion.profile),
        "source": suggestion.source,
        "raw_responses": [list(triple) for triple in suggestion.raw_responses],
    }


def _default_oracle_factory(record: ExperimentRecord):
    repo = load_repository(record.repository_doc)
    manifest = load_manifest(record.manifest_doc)
    if record.zoo_doc is not None:
        return make_synthetic_zoo(zoo_from_documents(repo, record.zoo_doc), manifest)
    return ExternalEvalOracle.from_env(repo.models, manifest)


class ExperimentService:
    """Owns the record store, per-record locking, and run threads."""

    def __init__(
        self,
        store_dir: str | Path,
        *,
        oracle_factory: Callable[[ExperimentRecord], object] | None = None,
        llm_client: LLMClient | None = None,
        reasoning_repeats: int = 3,
    ):
        self.store = RecordStore(store_dir)
        self._oracle_factory = oracle_factory or _default_oracle_factory
        self._llm_client = llm_client
        self._reasoning_repeats = reasoning_repeats
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._threads: dict[str, threading.Thread] = {}
        self._progress: dict[str, int] = {}
        self._recover()

    def _recover(self) -> None:
        # Runs do not survive a restart; resumability is out of scope.
        for record_id in self.store.list_ids():
            record = self.store.load(record_id)
            if record.state == "running":
                self._set_state(record, "failed", error="interrupted")
                self.store.save(record)

    def _lock(self, record_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(record_id, threading.Lock())

    @staticmethod
    def _set_state(record: ExperimentRecord, new_state: str, error: str | None = None) -> None:
        if new_state != record.state and new_state not in _ALLOWED_TRANSITIONS[record.state]:
            raise StateError(f"cannot move experiment from {record.state!r} to {new_state!r}")
        record.state = new_state
        record.error = error
        record.updated_at = _utcnow()

    # -- operations ---------------------------------------------------------

    def create(
        self,
        repository_doc: dict,
        manifest_doc: dict,
        use_case: str,
        strategy: str,
        budget: int,
        *,
        zoo_doc: dict | None = None,
        seed: int = 0,
        epsilon: float = 0.1,
        ucb_c: float = 1.0,
        prior_alpha: float = 1.0,
        prior_beta: float = 1.0,
    ) -> ExperimentRecord:
        repo = load_repository(repository_doc)
        load_manifest(manifest_doc)
        if zoo_doc is not None:
            zoo_from_documents(repo, zoo_doc)
        if not use_case or not use_case.strip():
            raise ValidationError("use case text must be non-empty")
        if strategy not in STRATEGIES:
            raise ValidationError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
        if budget < len(repo):
            raise ValidationError(
                f"budget {budget} is below the arm count {len(repo)}; "
                "every arm must be warm-started once"
            )
        if not 0.0 <= epsilon <= 1.0:
            raise ValidationError(f"epsilon must be in [0, 1], got {epsilon}")
        if ucb_c < 0:
            raise ValidationError(f"ucb_c must be >= 0, got {ucb_c}")
        if not (prior_alpha > 0 and prior_beta > 0):
            raise ValidationError("Beta prior parameters must be positive")
        if not 0 <= seed <= MASK64:
            raise ValidationError("seed must fit in an unsigned 64-bit integer")

        now = _utcnow()
        record = ExperimentRecord(
            id=uuid.uuid4().hex,
            state="draft",
            created_at=now,
            updated_at=now,
            use_case=use_case,
            strategy=strategy,
            budget=budget,
            seed=seed,
            epsilon=epsilon,
            ucb_c=ucb_c,
            prior_alpha=prior_alpha,
            prior_beta=prior_beta,
            repository_doc=copy.deepcopy(repository_doc),
            manifest_doc=copy.deepcopy(manifest_doc),
            zoo_doc=copy.deepcopy(zoo_doc) if zoo_doc is not None else None,
        )
        self.store.save(record)
        return record

    def stage(self, record_id: str) -> ExperimentRecord:
        """Ask the reasoning module for weights; draft/staged -> staged.

        Prior suggestions stay on the record; the sliders reset to the fresh
        suggestion. On reasoning failure the state is left untouched and the
        error is annotated on the record.
        """
        with self._lock(record_id):
            record = self.store.load(record_id)
            if record.state not in ("draft", "staged"):
                raise StateError(f"cannot stage an experiment in state {record.state!r}")
            client = self._llm_client or default_client()
            try:
                suggestion = suggest_weights(
                    record.use_case, repeats=self._reasoning_repeats, client=client
                )
            except ReasoningError as exc:
                record.error = str(exc)
                record.updated_at = _utcnow()
                self.store.save(record)
                raise
            record.suggestions.append(_suggestion_doc(suggestion))
            record.weights = _weights_doc(suggestion.profile)
            self._set_state(record, "staged")
            self.store.save(record)
            return record

    def update_weights(self, record_id: str, weights: WeightProfile) -> ExperimentRecord:
        """Replace the staged weights; the stored suggestions are untouched."""
        for name, value in zip(
            ("weight_acc", "weight_size", "weight_complexity"), weights.as_triple()
        ):
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must be in [0, 1], got {value}")
        with self._lock(record_id):
            record = self.store.load(record_id)
            if record.state != "staged":
                raise StateError(f"cannot edit weights in state {record.state!r}")
            record.weights = _weights_doc(weights)
            self._set_state(record, "staged")
            self.store.save(record)
            return record

    def _build_config(self, record: ExperimentRecord) -> ExperimentConfig:
        if record.weights is None:
            raise StateError("experiment has no weights; stage it first")
        weights = WeightProfile(
            weight_acc=record.weights["weight_acc"],
            weight_size=record.weights["weight_size"],
            weight_complexity=record.weights["weight_complexity"],
            justification=record.weights.get("justification", ""),
            tradeoffs=record.weights.get("tradeoffs", ""),
        )
        return ExperimentConfig(
            repository=load_repository(record.repository_doc),
            manifest=load_manifest(record.manifest_doc),
            weights=weights,
            strategy=record.strategy,
            budget=record.budget,
            seed=record.seed,
            epsilon=record.epsilon,
            ucb_c=record.ucb_c,
            prior_alpha=record.prior_alpha,
            prior_beta=record.prior_beta,
        )

    def run_async(self, record_id: str) -> ExperimentRecord:
        """staged -> running; the engine executes on a worker thread."""
        with self._lock(record_id):
            record = self.store.load(record_id)
            if record.state != "staged":
                raise StateError(f"cannot run an experiment in state {record.state!r}")
            config = self._build_config(record)
            self._set_state(record, "running")
            record.calls_spent = 0
            self.store.save(record)
            self._progress[record_id] = 0
            thread = threading.Thread(
                target=self._execute, args=(record_id, config), daemon=True
            )
            self._threads[record_id] = thread
            thread.start()
            return record

    def _execute(self, record_id: str, config: ExperimentConfig) -> None:
        def on_progress(calls: int) -> None:
            self._progress[record_id] = calls

        try:
            oracle = self._oracle_factory(self.store.load(record_id))
            report = run_experiment(config, oracle, progress=on_progress)
        except ExperimentAborted as exc:
            self._finish(record_id, error=str(exc), calls_spent=exc.calls_spent)
        except GreenRunnerError as exc:
            self._finish(record_id, error=str(exc), calls_spent=self._progress.get(record_id, 0))
        except Exception as exc:  # defensive: never leave a record running
            self._finish(record_id, error=f"internal error: {exc}", calls_spent=0)
        else:
            with self._lock(record_id):
                record = self.store.load(record_id)
                self._set_state(record, "complete")
                record.report_doc = report_to_document(report)
                record.calls_spent = report.eval_calls_used
                self.store.save(record)

    def _finish(self, record_id: str, *, error: str, calls_spent: int) -> None:
        with self._lock(record_id):
            record = self.store.load(record_id)
            self._set_state(record, "failed", error=error)
            record.calls_spent = calls_spent
            self.store.save(record)

    def wait(self, record_id: str, timeout: float | None = None) -> None:
        thread = self._threads.get(record_id)
        if thread is not None:
            thread.join(timeout)

    def get(self, record_id: str) -> ExperimentRecord:
        record = self.store.load(record_id)
        if record.state == "running":
            record.calls_spent = max(record.calls_spent, self._progress.get(record_id, 0))
        return record

    def get_results(self, record_id: str):
        record = self.store.load(record_id)
        if record.state == "failed":
            raise StateError(f"experiment failed: {record.error}")
        if record.state != "complete":
            raise StateError(f"experiment is {record.state!r}; results require 'complete'")
        assert record.report_doc is not None
        return report_from_document(record.report_doc)

    def list_records(self) -> list[ExperimentRecord]:
        return [self.get(record_id) for record_id in self.store.list_ids()]


# -- HTTP layer -------------------------------------------------------------


class CreateExperimentRequest(BaseModel):
    repository: dict
    manifest: dict
    zoo: dict | None = None
    use_case: str
    strategy: str = "thompson"
    budget: int
    seed: int = 0
    epsilon: float = 0.1
    ucb_c: float = 1.0
    prior_alpha: float = 1.0
    prior_beta: float = 1.0


class WeightsPatch(BaseModel):
    weight_acc: float
    weight_size: float
    weight_complexity: float


def _record_body(record: ExperimentRecord) -> dict:
    body = record.to_document()
    body["progress"] = {"calls_spent": record.calls_spent, "budget": record.budget}
    return body


def create_app(service: ExperimentService) -> FastAPI:
    app = FastAPI(title="greenrunner")
    # The browser client may be served from a different origin (no auth in scope).
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(GreenRunnerError)
    async def _handle(_request: Request, exc: GreenRunnerError) -> JSONResponse:
        if isinstance(exc, UnknownExperimentError):
            status = 404
        elif isinstance(exc, StateError):
            status = 409
        elif isinstance(exc, (ReasoningError, EvaluationUnavailableError)):
            status = 502
        elif isinstance(exc, (ValidationError, ConfigError)):
            status = 400
        else:
            status = 400
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/experiments", status_code=201)
    def create(body: CreateExperimentRequest) -> dict:
        record = service.create(
            body.repository,
            body.manifest,
            body.use_case,
            body.strategy,
            body.budget,
            zoo_doc=body.zoo,
            seed=body.seed,
            epsilon=body.epsilon,
            ucb_c=body.ucb_c,
            prior_alpha=body.prior_alpha,
            prior_beta=body.prior_beta,
        )
        return _record_body(record)

    @app.get("/experiments")
    def list_experiments() -> list[dict]:
        return [_record_body(record) for record in service.list_records()]

    @app.get("/experiments/{record_id}")
    def get_experiment(record_id: str) -> dict:
        return _record_body(service.get(record_id))

    @app.post("/experiments/{record_id}/stage")
    def stage(record_id: str) -> dict:
        return _record_body(service.stage(record_id))

    @app.patch("/experiments/{record_id}/weights")
    def patch_weights(record_id: str, body: WeightsPatch) -> dict:
        weights = WeightProfile(
            weight_acc=body.weight_acc,
            weight_size=body.weight_size,
            weight_complexity=body.weight_complexity,
        )
        return _record_body(service.update_weights(record_id, weights))

    @app.post("/experiments/{record_id}/run")
    def run(record_id: str) -> dict:
        return _record_body(service.run_async(record_id))

    @app.get("/experiments/{record_id}/report")
    def report(record_id: str) -> dict:
        return report_to_document(service.get_results(record_id))

    return app


def app_from_env() -> FastAPI:
    """App factory for `uvicorn greenrunner.service:app_from_env --factory`."""
    data_dir = os.environ.get(DATA_DIR_ENV, "./greenrunner-data")
    return create_app(ExperimentService(data_dir))
