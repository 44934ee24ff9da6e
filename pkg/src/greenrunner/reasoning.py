"""Weight suggestion from a plain-text use case.

A language-model client is asked `repeats` times for a machine-parseable
weight document; the parsed triples are averaged component-wise and clamped
to [0, 1] (never renormalized). Without a configured backend a deterministic
keyword-rule fallback produces the same document shape, so the parse and
averaging path is identical either way and CI never needs a live model.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Literal, Protocol

import httpx

from .errors import ReasoningError, ReasoningUnavailableError, ValidationError
from .rewards import WeightProfile

LLM_URL_ENV = "GREENRUNNER_LLM_URL"
LLM_TOKEN_ENV = "GREENRUNNER_LLM_TOKEN"

# Wording deliberately avoids the fallback rule keywords below, so rule
# matching sees only the use-case text.
PROMPT_TEMPLATE = """\
You select evaluation priorities for choosing an image model.
Use case: {use_case}

Respond with a single JSON object and nothing else, with exactly these keys:
  "weight_acc": number in [0, 1] - importance of accuracy
  "weight_size": number in [0, 1] - importance of a small on-disk footprint
  "weight_complexity": number in [0, 1] - importance of cheap inference
  "justification": short text explaining the choice
  "tradeoffs": short text on what the choice gives up
"""

# Deterministic fallback: additive keyword rules applied to a base profile,
# clamped to [0, 1]. Values are part of the documented behavior.
FALLBACK_BASE = (0.60, 0.15, 0.15)
FALLBACK_RULES: tuple[tuple[tuple[str, ...], tuple[float, float, float], str], ...] = (
    (
        ("drone", "mobile", "embedded", "edge", "battery", "iot", "wearable", "on-device"),
        (0.0, 0.10, 0.10),
        "constrained hardware favors small, cheap models",
    ),
    (
        ("medical", "safety", "critical", "diagnosis", "surveillance", "security"),
        (0.15, 0.0, 0.0),
        "mistakes are costly, so accuracy dominates",
    ),
    (
        ("real-time", "realtime", "latency", "interactive"),
        (0.0, 0.0, 0.10),
        "per-call compute bounds responsiveness",
    ),
    (
        ("cloud", "server", "datacenter", "batch"),
        (0.05, -0.05, -0.05),
        "ample serving hardware relaxes resource pressure",
    ),
)


def _clamp01(value: float) -> float:
    return min(1.0, max(0.0, value))


class LLMClient(Protocol):
    source: str

    def complete(self, prompt: str) -> str: ...


class FallbackClient:
    """Keyword-rule client; emits the same JSON document a live model would."""

    source = "fallback"

    def complete(self, prompt: str) -> str:
        text = prompt.lower()
        acc, size, complexity = FALLBACK_BASE
        reasons = []
        for keywords, (d_acc, d_size, d_complexity), reason in FALLBACK_RULES:
            if any(keyword in text for keyword in keywords):
                acc += d_acc
                size += d_size
                complexity += d_complexity
                reasons.append(reason)
        if not reasons:
            reasons.append("no usage signals found; balanced defaults")
        return json.dumps(
            {
                "weight_acc": _clamp01(acc),
                "weight_size": _clamp01(size),
                "weight_complexity": _clamp01(complexity),
                "justification": "; ".join(reasons),
                "tradeoffs": "higher accuracy weight tolerates larger, slower models; "
                "higher size/complexity weights may pass over the most accurate ones",
            }
        )


class HttpLLMClient:
    """Client for a language-model service: POST {prompt} -> {content}."""

    source = "llm"

    def __init__(
        self,
        base_url: str,
        token: str | None = None,
        *,
        timeout: float = 30.0,
        transport: httpx.BaseTransport | None = None,
    ):
        headers = {"Authorization": f"Bearer {token}"} if token else {}
        self._client = httpx.Client(
            base_url=base_url, headers=headers, timeout=timeout, transport=transport
        )

    def complete(self, prompt: str) -> str:
        try:
            response = self._client.post("/complete", json={"prompt": prompt})
        except httpx.HTTPError as exc:
            raise ReasoningUnavailableError(f"language-model service unreachable: {exc}") from exc
        if response.status_code >= 400:
            raise ReasoningUnavailableError(
                f"language-model service returned {response.status_code}"
            )
        body = response.json()
        if "content" not in body:
            raise ReasoningError("language-model response missing 'content'")
        return str(body["content"])

    def close(self) -> None:
        self._client.close()


def default_client() -> LLMClient:
    """HTTP client when GREENRUNNER_LLM_URL is set, fallback otherwise."""
    base_url = os.environ.get(LLM_URL_ENV)
    if base_url:
        return HttpLLMClient(base_url, os.environ.get(LLM_TOKEN_ENV))
    return FallbackClient()


@dataclass(frozen=True)
class WeightSuggestion:
    profile: WeightProfile
    source: Literal["llm", "fallback"]
    raw_responses: tuple[tuple[float, float, float], ...]


_REQUIRED_KEYS = ("weight_acc", "weight_size", "weight_complexity", "justification", "tradeoffs")


def parse_weight_response(raw: str) -> tuple[tuple[float, float, float], str, str]:
    """Extract (weights triple, justification, tradeoffs) from a response.

    Accepts a bare JSON object or one embedded in surrounding prose. Rejects
    missing keys and weights outside [0, 1]; the text fields may be empty.
    """
    document = _extract_json_object(raw)
    missing = [key for key in _REQUIRED_KEYS if key not in document]
    if missing:
        raise ValidationError(f"weight response missing field(s) {missing}")
    triple = []
    for key in ("weight_acc", "weight_size", "weight_complexity"):
        value = document[key]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ValidationError(f"weight response field {key!r} is not numeric")
        if not 0.0 <= value <= 1.0:
            raise ValidationError(f"weight response field {key!r} = {value} outside [0, 1]")
        triple.append(float(value))
    return (triple[0], triple[1], triple[2]), str(document["justification"]), str(
        document["tradeoffs"]
    )


def _extract_json_object(raw: str) -> dict:
    try:
        document = json.loads(raw)
        if isinstance(document, dict):
            return document
    except json.JSONDecodeError:
        pass
    decoder = json.JSONDecoder()
    start = raw.find("{")
    while start != -1:
        try:
            document, _ = decoder.raw_decode(raw, start)
        except json.JSONDecodeError:
            start = raw.find("{", start + 1)
            continue
        if isinstance(document, dict):
            return document
        start = raw.find("{", start + 1)
    raise ValidationError("weight response carries no JSON object")


def suggest_weights(
    use_case: str,
    repeats: int = 1,
    client: LLMClient | None = None,
    *,
    max_retries: int = 2,
) -> WeightSuggestion:
    """Query the client `repeats` times and average the parsed weight triples.

    Each repeat retries unparseable or failed responses up to `max_retries`
    times and is then skipped; the suggestion fails only if every repeat is
    skipped. Averaging is order-independent (exactly rounded sums).
    """
    if not use_case or not use_case.strip():
        raise ValidationError("use case text must be non-empty")
    if repeats < 1:
        raise ValidationError(f"repeats must be >= 1, got {repeats}")
    client = client or default_client()
    prompt = PROMPT_TEMPLATE.format(use_case=use_case.strip())

    triples: list[tuple[float, float, float]] = []
    justification = tradeoffs = ""
    last_error: Exception | None = None
    for _ in range(repeats):
        for _attempt in range(max_retries + 1):
            try:
                triple, just_text, trade_text = parse_weight_response(client.complete(prompt))
            except (ValidationError, ReasoningError) as exc:
                last_error = exc
                continue
            if not triples:
                justification, tradeoffs = just_text, trade_text
            triples.append(triple)
            break

    if not triples:
        if isinstance(last_error, ReasoningUnavailableError):
            raise last_error
        raise ReasoningError(f"no usable weight response in {repeats} repeat(s): {last_error}")

    n = len(triples)
    averaged = tuple(_clamp01(math.fsum(t[i] for t in triples) / n) for i in range(3))
    profile = WeightProfile(
        weight_acc=averaged[0],
        weight_size=averaged[1],
        weight_complexity=averaged[2],
        justification=justification,
        tradeoffs=tradeoffs,
    )
    return WeightSuggestion(profile=profile, source=client.source, raw_responses=tuple(triples))
