"""Weighted reward: accuracy minus log-normalized size and complexity penalties.

    reward = accuracy * weight_acc
             - lognorm(size_mb)        * weight_size
             - lognorm(complexity_mmac) * weight_complexity

where lognorm(v) = (ln v - ln min) / (ln max - ln min) over the candidate
set's extents. Natural log is used throughout; the normalization is a ratio
of logs, so the base cannot change the value, but fixing one keeps tests
bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .models import ModelCard, RewardExtents


@dataclass(frozen=True)
class WeightProfile:
    """The three metric weights plus the suggestion text that produced them.

    Weights are not required to sum to 1 and are never renormalized.
    """

    weight_acc: float
    weight_size: float
    weight_complexity: float
    justification: str = ""
    tradeoffs: str = ""

    def __post_init__(self) -> None:
        for name in ("weight_acc", "weight_size", "weight_complexity"):
            value = getattr(self, name)
            if not value >= 0:
                raise ValidationError(f"{name} must be >= 0, got {value}")

    def as_triple(self) -> tuple[float, float, float]:
        return (self.weight_acc, self.weight_size, self.weight_complexity)


def log_normalize(value: float, min_value: float, max_value: float) -> float:
    """Position of `value` on a log scale between min and max, in [0, 1].

    Degenerate extents (min == max) yield 0: an axis on which all candidates
    agree cannot discriminate, so it contributes no penalty.
    """
    if not (min_value > 0 and max_value > 0 and value > 0):
        raise ValidationError(
            f"log_normalize requires positive inputs, got ({value}, {min_value}, {max_value})"
        )
    if min_value > max_value:
        raise ValidationError(f"min {min_value} exceeds max {max_value}")
    if not min_value <= value <= max_value:
        raise ValidationError(f"value {value} outside extents [{min_value}, {max_value}]")
    if min_value == max_value:
        return 0.0
    if value == min_value:
        return 0.0
    if value == max_value:
        return 1.0
    return (math.log(value) - math.log(min_value)) / (math.log(max_value) - math.log(min_value))


def compute_reward(
    accuracy: float,
    card: ModelCard,
    weights: WeightProfile,
    extents: RewardExtents,
) -> float:
    """Weighted reward of one model at a given accuracy.

    Bounds: -(weight_size + weight_complexity) <= reward <= weight_acc.
    The card must fall inside the extents; extents derived from the same
    candidate set always do, so no clamping is performed.
    """
    if not 0.0 <= accuracy <= 1.0:
        raise ValidationError(f"accuracy must be in [0, 1], got {accuracy}")
    size_norm = log_normalize(card.size_mb, extents.min_size, extents.max_size)
    complexity_norm = log_normalize(
        card.complexity_mmac, extents.min_complexity, extents.max_complexity
    )
    return (
        accuracy * weights.weight_acc
        - size_norm * weights.weight_size
        - complexity_norm * weights.weight_complexity
    )
