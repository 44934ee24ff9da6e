"""Batch front door: generate synthetic zoos, run experiments, compare methods.

Exit codes: 0 success, 1 validation problem, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bandit import ExperimentConfig, run_experiment
from .baselines import benchmark_select, brute_force_select
from .errors import ConfigError, GreenRunnerError, ValidationError
from .models import ModelCard, Repository, load_repository, repository_to_document
from .oracle import (
    DatasetManifest,
    SyntheticModelSpec,
    load_manifest,
    make_synthetic_zoo,
    zoo_from_documents,
    zoo_to_document,
)
from .reasoning import default_client, suggest_weights
from .reporting import aggregate_runs, comparison_table, report_to_document, report_to_table
from .rewards import WeightProfile
from .seeding import derive_seed


def _parse_range(text: str, name: str) -> tuple[float, float]:
    try:
        low, high = (float(part) for part in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"--{name} expects 'low,high', got {text!r}") from exc
    if low > high:
        raise ValidationError(f"--{name}: low {low} exceeds high {high}")
    return low, high


def _parse_weights(text: str) -> WeightProfile:
    try:
        acc, size, complexity = (float(part) for part in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"--weights expects 'acc,size,complexity', got {text!r}") from exc
    return WeightProfile(weight_acc=acc, weight_size=size, weight_complexity=complexity)


def generate_zoo(
    n_models: int,
    accuracy_range: tuple[float, float],
    size_range: tuple[float, float],
    complexity_range: tuple[float, float],
    seed: int,
) -> tuple[Repository, list[SyntheticModelSpec]]:
    """Deterministic synthetic candidate set.

    Sizes and complexities are log-uniform over their ranges (they span
    orders of magnitude in practice); benchmark and target accuracies are
    drawn independently, mirroring the benchmark/target mismatch the
    baselines are meant to expose.
    """
    if n_models < 1:
        raise ValidationError(f"n_models must be >= 1, got {n_models}")
    lo, hi = accuracy_range
    if not (0 <= lo <= hi <= 1):
        raise ValidationError(f"accuracy range must lie in [0, 1], got {accuracy_range}")
    if size_range[0] <= 0 or complexity_range[0] <= 0:
        raise ValidationError("size and complexity ranges must be positive")

    rng = np.random.Generator(np.random.Philox(key=derive_seed(seed, "zoo")))
    specs = []
    for i in range(n_models):
        size = float(np.exp(rng.uniform(np.log(size_range[0]), np.log(size_range[1]))))
        complexity = float(
            np.exp(rng.uniform(np.log(complexity_range[0]), np.log(complexity_range[1])))
        )
        benchmark_accuracy = float(rng.uniform(lo, hi))
        target_accuracy = float(rng.uniform(lo, hi))
        card = ModelCard(
            id=f"model_{i:03d}",
            size_mb=round(size, 3),
            complexity_mmac=round(complexity, 3),
            benchmark_accuracy=round(benchmark_accuracy, 4),
        )
        specs.append(SyntheticModelSpec(card=card, true_target_accuracy=round(target_accuracy, 4)))
    repo = Repository.from_cards(spec.card for spec in specs)
    return repo, specs


def _write_json(document: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_zoo_generate(args: argparse.Namespace) -> int:
    repo, specs = generate_zoo(
        args.n_models,
        _parse_range(args.accuracy_range, "accuracy-range"),
        _parse_range(args.size_range, "size-range"),
        _parse_range(args.complexity_range, "complexity-range"),
        args.seed,
    )
    out_dir = Path(args.out)
    _write_json(repository_to_document(repo), out_dir / "repository.json")
    _write_json(zoo_to_document(specs), out_dir / "zoo.json")
    print(f"wrote {len(repo)} models to {out_dir}/repository.json and {out_dir}/zoo.json")
    return 0


def _load_oracle(args: argparse.Namespace, repo: Repository, manifest: DatasetManifest):
    if args.zoo:
        zoo_doc = json.loads(Path(args.zoo).read_text())
        return make_synthetic_zoo(zoo_from_documents(repo, zoo_doc), manifest)
    from .oracle import ExternalEvalOracle

    return ExternalEvalOracle.from_env(repo.models, manifest)


def _resolve_weights(args: argparse.Namespace) -> tuple[WeightProfile, str]:
    if bool(args.weights) == bool(args.use_case):
        raise ValidationError("exactly one of --weights or --use-case is required")
    if args.weights:
        return _parse_weights(args.weights), "explicit"
    client = default_client()
    suggestion = suggest_weights(args.use_case, repeats=args.repeats, client=client)
    return suggestion.profile, suggestion.source


def cmd_run(args: argparse.Namespace) -> int:
    repo = load_repository(args.repo)
    manifest = load_manifest(args.manifest)
    weights, weights_source = _resolve_weights(args)
    config = ExperimentConfig(
        repository=repo,
        manifest=manifest,
        weights=weights,
        strategy=args.strategy,
        budget=args.budget,
        seed=args.seed,
        epsilon=args.epsilon,
        ucb_c=args.ucb_c,
    )
    oracle = _load_oracle(args, repo, manifest)
    report = run_experiment(config, oracle, trace_path=args.trace)
    if args.format == "table":
        _emit(report_to_table(report, method=args.strategy), args.out)
    else:
        document = report_to_document(report)
        document["weights"] = {
            "weight_acc": weights.weight_acc,
            "weight_size": weights.weight_size,
            "weight_complexity": weights.weight_complexity,
        }
        document["weights_source"] = weights_source
        _emit(json.dumps(document, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    if args.iterations < 1:
        raise ValidationError(f"--iterations must be >= 1, got {args.iterations}")
    repo = load_repository(args.repo)
    base_manifest = load_manifest(args.manifest)
    weights = _parse_weights(args.weights)
    if not args.zoo:
        raise ValidationError("--zoo is required for comparisons (baselines replay every sample)")
    zoo_doc = json.loads(Path(args.zoo).read_text())

    def manifest_for(iteration: int) -> DatasetManifest:
        if not args.resample:
            return base_manifest
        return DatasetManifest(
            name=base_manifest.name,
            n_samples=base_manifest.n_samples,
            seed=derive_seed(base_manifest.seed, "resample", iteration),
        )

    def oracle_for(iteration: int):
        return make_synthetic_zoo(zoo_from_documents(repo, zoo_doc), manifest_for(iteration))

    # Baselines are deterministic given the sample set: one pass unless the
    # per-iteration subset is resampled.
    baseline_iterations = range(args.iterations) if args.resample else range(1)
    benchmark_reports = [
        benchmark_select(repo, weights, oracle_for(k), manifest_for(k))
        for k in baseline_iterations
    ]
    brute_reports = [
        brute_force_select(repo, weights, oracle_for(k), manifest_for(k))
        for k in baseline_iterations
    ]

    bandit_reports = []
    for k in range(args.iterations):
        config = ExperimentConfig(
            repository=repo,
            manifest=manifest_for(k),
            weights=weights,
            strategy=args.strategy,
            budget=args.budget,
            seed=derive_seed(args.seed, "iteration", k),
            epsilon=args.epsilon,
            ucb_c=args.ucb_c,
        )
        bandit_reports.append(run_experiment(config, oracle_for(k)))
    aggregate = aggregate_runs(bandit_reports)

    def baseline_row(reports) -> dict:
        # Identical across iterations unless resampling; average the accuracy.
        first = reports[0]
        card = repo.card(first.selected_model_id)
        mean_accuracy = sum(r.selected_model_target_accuracy for r in reports) / len(reports)
        return {
            "method": first.method,
            "model": first.selected_model_id,
            "accuracy": round(mean_accuracy, 6),
            "size_mb": card.size_mb,
            "complexity_mmac": card.complexity_mmac,
            "eval_calls": first.eval_calls,
        }

    rows = [baseline_row(benchmark_reports), baseline_row(brute_reports)]
    rows.append(
        {
            "method": f"bandit/{args.strategy}",
            "model": aggregate.modal_model_id,
            "accuracy": round(aggregate.mean_accuracy, 6),
            "size_mb": aggregate.mean_size_mb,
            "complexity_mmac": aggregate.mean_complexity_mmac,
            "eval_calls": aggregate.mean_eval_calls,
        }
    )

    if args.format == "table":
        _emit(comparison_table(rows), args.out)
    else:
        document = {
            "version": 1,
            "kind": "comparison",
            "iterations": args.iterations,
            "resample": bool(args.resample),
            "rows": rows,
            "bandit": {
                "modal_model_id": aggregate.modal_model_id,
                "modal_tied_with": list(aggregate.modal_tied_with),
                "selection_frequency": aggregate.selection_frequency,
                "mean_eval_calls": aggregate.mean_eval_calls,
            },
        }
        _emit(json.dumps(document, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ADDR_ENV, DATA_DIR_ENV, ExperimentService, create_app

    addr = args.addr or os.environ.get(ADDR_ENV, "127.0.0.1:8151")
    host, _, port = addr.partition(":")
    data_dir = args.data_dir or os.environ.get(DATA_DIR_ENV, "./greenrunner-data")
    app = create_app(ExperimentService(data_dir))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8151))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greenrunner")
    sub = parser.add_subparsers(dest="command", required=True)

    zoo = sub.add_parser("zoo-generate", help="write a synthetic repository + zoo spec")
    zoo.add_argument("--n-models", type=int, required=True)
    zoo.add_argument("--accuracy-range", default="0.1,0.9")
    zoo.add_argument("--size-range", default="22,2581")
    zoo.add_argument("--complexity-range", default="229,127750")
    zoo.add_argument("--seed", type=int, default=0)
    zoo.add_argument("--out", required=True, help="output directory")
    zoo.set_defaults(func=cmd_zoo_generate)

    def common_run_flags(cmd: argparse.ArgumentParser) -> None:
        cmd.add_argument("--repo", required=True)
        cmd.add_argument("--manifest", required=True)
        cmd.add_argument("--zoo", help="synthetic zoo spec (omit to use the external service)")
        cmd.add_argument(
            "--strategy",
            choices=("epsilon", "epsilon_greedy", "ucb", "thompson"),
            default="thompson",
            help="'epsilon' is shorthand for epsilon_greedy",
        )
        cmd.add_argument("--budget", type=int, required=True)
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--epsilon", type=float, default=0.1)
        cmd.add_argument("--ucb-c", type=float, default=1.0)
        cmd.add_argument("--format", choices=("doc", "table"), default="doc")
        cmd.add_argument("--out")

    run = sub.add_parser("run", help="run one budgeted experiment")
    common_run_flags(run)
    run.add_argument("--weights", help="explicit 'acc,size,complexity'")
    run.add_argument("--use-case", help="plain-text use case for weight suggestion")
    run.add_argument("--repeats", type=int, default=3, help="reasoning queries to average")
    run.add_argument("--trace", help="write the pull trace to this path (JSON lines)")
    run.set_defaults(func=cmd_run)

    compare = sub.add_parser("compare", help="benchmark vs brute force vs bandit")
    common_run_flags(compare)
    compare.add_argument("--weights", required=True)
    compare.add_argument("--iterations", type=int, default=1)
    compare.add_argument(
        "--resample", action="store_true", help="redraw the sample subset per iteration"
    )
    compare.set_defaults(func=cmd_compare)

    serve = sub.add_parser("serve", help="start the experiment HTTP service")
    serve.add_argument("--addr", help="host:port (default from GREENRUNNER_ADDR)")
    serve.add_argument("--data-dir", help="record store (default from GREENRUNNER_DATA_DIR)")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "strategy", None) == "epsilon":
        args.strategy = "epsilon_greedy"
    try:
        return args.func(args)
    except (ValidationError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GreenRunnerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
