"""Budgeted bandit selection loop over candidate models.

Every arm keeps a Beta posterior over its target-dataset accuracy, updated by
conjugate Beta-Bernoulli rule from per-sample correctness. Reward estimates
plug the posterior-mean accuracy into the weighted reward; Thompson sampling
draws an accuracy from each posterior instead. Size and complexity penalties
are static per arm, so rewards may be negative while the sampled quantity
stays a bounded accuracy.

Determinism contract: the full pull trace is a pure function of (config,
seed). Strategy randomness, per-arm sample schedules, and oracle draws use
independent named substreams.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Literal, Protocol, Sequence

import numpy as np

from .errors import (
    ArmsExhaustedError,
    ConfigError,
    EvaluationUnavailableError,
    ExperimentAborted,
    ValidationError,
)
from .models import ModelCard, Repository, RewardExtents
from .oracle import DatasetManifest, EvaluationOutcome
from .reporting import ExperimentReport, RankedArm, compute_savings, config_digest
from .rewards import WeightProfile, compute_reward, log_normalize
from .seeding import MASK64, derive_seed

Strategy = Literal["epsilon_greedy", "ucb", "thompson"]

STRATEGIES: tuple[str, ...] = ("epsilon_greedy", "ucb", "thompson")


class OracleBackend(Protocol):
    def evaluate(self, model_id: str, sample_index: int) -> EvaluationOutcome: ...

    def meter_read(self) -> tuple[int, float]: ...


@dataclass
class ArmState:
    """Per-arm evaluation statistics."""

    model_id: str
    alpha: float
    beta: float
    pulls: int = 0
    successes: int = 0
    next_sample_cursor: int = 0

    @property
    def posterior_mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)


def update_arm(state: ArmState, outcome: EvaluationOutcome) -> ArmState:
    """Fold one evaluation into the arm's counts and Beta posterior."""
    if outcome.model_id != state.model_id:
        raise ValidationError(
            f"outcome for {outcome.model_id!r} applied to arm {state.model_id!r}"
        )
    state.pulls += 1
    state.next_sample_cursor += 1
    if outcome.correct:
        state.successes += 1
        state.alpha += 1.0
    else:
        state.beta += 1.0
    return state


class RewardBasis:
    """Static per-arm reward pieces shared by all strategies.

    Penalties depend only on the card, so they are normalized once; an arm's
    estimated reward at accuracy a is then
    a * weight_acc - size_norm * weight_size - complexity_norm * weight_complexity,
    the same expression compute_reward evaluates.
    """

    def __init__(self, repo: Repository, weights: WeightProfile, n_samples: int):
        self.repo = repo
        self.weights = weights
        self.n_samples = n_samples
        extents = repo.extents
        size_norms = [
            log_normalize(c.size_mb, extents.min_size, extents.max_size) for c in repo.models
        ]
        complexity_norms = [
            log_normalize(c.complexity_mmac, extents.min_complexity, extents.max_complexity)
            for c in repo.models
        ]
        self.size_norms = np.array(size_norms)
        self.complexity_norms = np.array(complexity_norms)
        self._size_norm_list = size_norms
        self._complexity_norm_list = complexity_norms

    def rewards_at(self, arm_indices: np.ndarray, accuracies: np.ndarray) -> np.ndarray:
        w = self.weights
        return (
            accuracies * w.weight_acc
            - self.size_norms[arm_indices] * w.weight_size
            - self.complexity_norms[arm_indices] * w.weight_complexity
        )

    def _rewards_full(self, accuracies: np.ndarray) -> np.ndarray:
        # All-arms fast path; same term order as rewards_at.
        w = self.weights
        return (
            accuracies * w.weight_acc
            - self.size_norms * w.weight_size
            - self.complexity_norms * w.weight_complexity
        )

    def _rewards_live(self, live: list[int], accuracies: np.ndarray) -> np.ndarray:
        if len(live) == len(self._size_norm_list):
            return self._rewards_full(accuracies)
        return self.rewards_at(np.asarray(live), accuracies)

    def reward_at(self, arm_index: int, accuracy: float) -> float:
        # Same term order as compute_reward, so values agree bit-for-bit.
        w = self.weights
        return (
            accuracy * w.weight_acc
            - self._size_norm_list[arm_index] * w.weight_size
            - self._complexity_norm_list[arm_index] * w.weight_complexity
        )

    def live_arms(self, states: Sequence[ArmState]) -> list[int]:
        return [i for i, s in enumerate(states) if s.next_sample_cursor < self.n_samples]


def _estimated_rewards(basis: RewardBasis, states: Sequence[ArmState], live: list[int]) -> np.ndarray:
    means = np.fromiter((states[i].posterior_mean for i in live), dtype=float, count=len(live))
    return basis._rewards_live(live, means)


def select_arm_epsilon_greedy(
    states: Sequence[ArmState],
    basis: RewardBasis,
    epsilon: float,
    rng: np.random.Generator,
) -> int:
    """Explore uniformly with probability epsilon, otherwise exploit.

    The RNG is consumed only when epsilon > 0 so that epsilon = 0 is
    trace-identical to pure greedy.
    """
    live = basis.live_arms(states)
    if not live:
        raise ArmsExhaustedError("all arms have consumed their sample sets")
    if epsilon > 0 and rng.random() < epsilon:
        return live[int(rng.integers(len(live)))]
    rewards = _estimated_rewards(basis, states, live)
    return live[int(np.argmax(rewards))]  # first max = lowest arm index


def select_arm_ucb(
    states: Sequence[ArmState],
    basis: RewardBasis,
    total_pulls: int,
    ucb_c: float,
) -> int:
    """UCB1: estimated reward plus ucb_c * sqrt(2 ln t / pulls)."""
    live = basis.live_arms(states)
    if not live:
        raise ArmsExhaustedError("all arms have consumed their sample sets")
    if total_pulls < 1:
        raise ValidationError("UCB requires at least one prior pull")
    pulls = np.fromiter((states[i].pulls for i in live), dtype=float, count=len(live))
    if np.any(pulls < 1):
        raise ValidationError("UCB requires every live arm to have been pulled once")
    scores = _estimated_rewards(basis, states, live) + ucb_c * np.sqrt(
        2.0 * np.log(total_pulls) / pulls
    )
    return live[int(np.argmax(scores))]


def select_arm_thompson(
    states: Sequence[ArmState],
    basis: RewardBasis,
    rng: np.random.Generator,
) -> int:
    """Draw an accuracy from each live arm's posterior, pick the best reward."""
    live = basis.live_arms(states)
    if not live:
        raise ArmsExhaustedError("all arms have consumed their sample sets")
    alphas = np.fromiter((states[i].alpha for i in live), dtype=float, count=len(live))
    betas = np.fromiter((states[i].beta for i in live), dtype=float, count=len(live))
    draws = rng.beta(alphas, betas)
    rewards = basis._rewards_live(live, draws)
    return live[int(np.argmax(rewards))]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a run (with the seed, fully)."""

    repository: Repository
    manifest: DatasetManifest
    weights: WeightProfile
    strategy: str
    budget: int
    seed: int
    epsilon: float = 0.1
    ucb_c: float = 1.0
    prior_alpha: float = 1.0
    prior_beta: float = 1.0

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.budget < 1:
            raise ConfigError(f"budget must be positive, got {self.budget}")
        if self.budget < len(self.repository):
            raise ConfigError(
                f"budget {self.budget} cannot warm-start {len(self.repository)} arms"
            )
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError(f"epsilon must be in [0, 1], got {self.epsilon}")
        # ucb_c = 0 is allowed: it degenerates to pure greedy.
        if self.ucb_c < 0:
            raise ConfigError(f"ucb_c must be >= 0, got {self.ucb_c}")
        if not (self.prior_alpha > 0 and self.prior_beta > 0):
            raise ConfigError("Beta prior parameters must be positive")
        if not 0 <= self.seed <= MASK64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")

    def digest(self) -> str:
        fields = {
            "strategy": self.strategy,
            "budget": self.budget,
            "epsilon": self.epsilon,
            "ucb_c": self.ucb_c,
            "prior_alpha": self.prior_alpha,
            "prior_beta": self.prior_beta,
            "weights": self.weights.as_triple(),
            "manifest": {"name": self.manifest.name, "n_samples": self.manifest.n_samples},
            "models": [
                (c.id, c.size_mb, c.complexity_mmac, c.benchmark_accuracy)
                for c in self.repository.models
            ],
        }
        return config_digest(fields, seeds=(self.seed, self.manifest.seed))


@dataclass(frozen=True)
class PullRecord:
    """One step of the trace: which arm, what came back, the reward basis."""

    step: int
    arm_index: int
    outcome: EvaluationOutcome
    reward: float  # posterior-mean accuracy after this update, through the reward


def _sample_schedules(config: ExperimentConfig) -> list[np.ndarray]:
    """Seed-derived permutation of sample indices per arm (no replacement)."""
    n = config.manifest.n_samples
    schedules = []
    for arm in range(len(config.repository)):
        rng = np.random.Generator(np.random.Philox(key=derive_seed(config.seed, "schedule", arm)))
        schedules.append(rng.permutation(n))
    return schedules


def _trace_line(record: PullRecord) -> str:
    return json.dumps(
        {
            "step": record.step,
            "arm_index": record.arm_index,
            "model_id": record.outcome.model_id,
            "sample_index": record.outcome.sample_index,
            "correct": record.outcome.correct,
            "mmac_spent": record.outcome.mmac_spent,
            "reward": record.reward,
        },
        sort_keys=True,
    )


def rank_arms(
    states: Sequence[ArmState],
    cards: Sequence[ModelCard],
    weights: WeightProfile,
    extents: RewardExtents,
) -> list[RankedArm]:
    """All arms, descending posterior-mean reward; ties by pulls, then index."""
    if not states:
        raise ValidationError("cannot rank an empty arm set")
    rows = []
    for index, (state, card) in enumerate(zip(states, cards)):
        mean = state.posterior_mean
        rows.append(
            (
                RankedArm(
                    model_id=state.model_id,
                    posterior_mean_reward=compute_reward(mean, card, weights, extents),
                    posterior_mean_accuracy=mean,
                    pulls=state.pulls,
                    size_mb=card.size_mb,
                    complexity_mmac=card.complexity_mmac,
                ),
                index,
            )
        )
    rows.sort(key=lambda item: (-item[0].posterior_mean_reward, -item[0].pulls, item[1]))
    return [row for row, _ in rows]


def run_experiment(
    config: ExperimentConfig,
    oracle: OracleBackend,
    *,
    trace_path: str | Path | None = None,
    progress: Callable[[int], None] | None = None,
) -> ExperimentReport:
    """Warm-start every arm once, then run the strategy loop to the budget.

    The budget counts distinct metered oracle calls (verified against the
    oracle's meter, offset by its value at entry). An oracle failure aborts
    with ExperimentAborted carrying the partial trace; if a trace path is
    configured, records already made are on disk.
    """
    repo = config.repository
    basis = RewardBasis(repo, config.weights, config.manifest.n_samples)
    states = [
        ArmState(model_id=card.id, alpha=config.prior_alpha, beta=config.prior_beta)
        for card in repo.models
    ]
    schedules = _sample_schedules(config)
    strategy_rng = np.random.Generator(
        np.random.Philox(key=derive_seed(config.seed, "strategy"))
    )
    calls_at_start, _ = oracle.meter_read()
    pulls: list[PullRecord] = []
    trace_file = open(trace_path, "w") if trace_path is not None else None

    def spent() -> int:
        return oracle.meter_read()[0] - calls_at_start

    def pull(arm: int) -> None:
        state = states[arm]
        sample_index = int(schedules[arm][state.next_sample_cursor])
        outcome = oracle.evaluate(state.model_id, sample_index)
        update_arm(state, outcome)
        reward = basis.reward_at(arm, state.posterior_mean)
        record = PullRecord(step=len(pulls), arm_index=arm, outcome=outcome, reward=reward)
        pulls.append(record)
        if trace_file is not None:
            trace_file.write(_trace_line(record) + "\n")
            trace_file.flush()
        if progress is not None:
            progress(len(pulls))

    try:
        for arm in range(len(repo)):
            pull(arm)
        total = len(pulls)
        # Fresh samples per pull mean len(pulls) tracks the meter exactly;
        # the meter is still cross-checked after the loop.
        while len(pulls) < config.budget:
            try:
                if config.strategy == "epsilon_greedy":
                    arm = select_arm_epsilon_greedy(states, basis, config.epsilon, strategy_rng)
                elif config.strategy == "ucb":
                    arm = select_arm_ucb(states, basis, total, config.ucb_c)
                else:
                    arm = select_arm_thompson(states, basis, strategy_rng)
            except ArmsExhaustedError:
                break
            pull(arm)
            total += 1
    except (EvaluationUnavailableError, ValidationError) as exc:
        raise ExperimentAborted(str(exc), pulls=tuple(pulls), calls_spent=spent()) from exc
    finally:
        if trace_file is not None:
            trace_file.close()

    eval_calls = spent()
    if eval_calls != len(pulls):
        raise RuntimeError(
            f"meter drift: {eval_calls} metered calls vs {len(pulls)} pulls recorded"
        )
    mmacs_used, brute_equivalent, savings = compute_savings(repo, config.manifest, pulls)
    return ExperimentReport(
        config_digest=config.digest(),
        ranking=tuple(rank_arms(states, repo.models, config.weights, repo.extents)),
        selection_counts={state.model_id: state.pulls for state in states},
        eval_calls_used=eval_calls,
        mmacs_used=mmacs_used,
        brute_force_equivalent_mmacs=brute_equivalent,
        mmac_savings=savings,
        trace_ref=str(trace_path) if trace_path is not None else None,
    )
