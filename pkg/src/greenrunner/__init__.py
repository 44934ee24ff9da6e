"""Resource-efficient model selection with a budgeted bandit engine."""

from .bandit import (
    ArmState,
    ExperimentConfig,
    PullRecord,
    rank_arms,
    run_experiment,
    select_arm_epsilon_greedy,
    select_arm_thompson,
    select_arm_ucb,
    update_arm,
)
from .baselines import BaselineReport, benchmark_select, brute_force_select
from .errors import (
    ArmsExhaustedError,
    ConfigError,
    EvaluationUnavailableError,
    ExperimentAborted,
    GreenRunnerError,
    ReasoningError,
    StateError,
    UnknownExperimentError,
    ValidationError,
)
from .models import (
    ModelCard,
    Repository,
    RewardExtents,
    compute_extents,
    load_repository,
    save_repository,
)
from .oracle import (
    DatasetManifest,
    EvaluationOutcome,
    ExternalEvalOracle,
    SyntheticModelSpec,
    load_manifest,
    make_synthetic_zoo,
)
from .reasoning import WeightSuggestion, parse_weight_response, suggest_weights
from .reporting import (
    ExperimentReport,
    RankedArm,
    aggregate_runs,
    compute_savings,
    export_report,
)
from .rewards import WeightProfile, compute_reward, log_normalize
from .service import ExperimentService, create_app

__version__ = "0.1.0"

__all__ = [
    "ArmState",
    "ArmsExhaustedError",
    "BaselineReport",
    "ConfigError",
    "DatasetManifest",
    "EvaluationOutcome",
    "EvaluationUnavailableError",
    "ExperimentAborted",
    "ExperimentConfig",
    "ExperimentReport",
    "ExperimentService",
    "ExternalEvalOracle",
    "GreenRunnerError",
    "ModelCard",
    "PullRecord",
    "RankedArm",
    "ReasoningError",
    "Repository",
    "RewardExtents",
    "StateError",
    "SyntheticModelSpec",
    "UnknownExperimentError",
    "ValidationError",
    "WeightProfile",
    "WeightSuggestion",
    "aggregate_runs",
    "benchmark_select",
    "brute_force_select",
    "compute_extents",
    "compute_reward",
    "compute_savings",
    "create_app",
    "export_report",
    "load_manifest",
    "load_repository",
    "log_normalize",
    "make_synthetic_zoo",
    "parse_weight_response",
    "rank_arms",
    "run_experiment",
    "save_repository",
    "select_arm_epsilon_greedy",
    "select_arm_thompson",
    "select_arm_ucb",
    "suggest_weights",
    "update_arm",
]
