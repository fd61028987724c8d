"""
Evaluation Models
Per-record judgments, metric sets, reports and error profiles.
"""

from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Dict, List


class SwapMode(Enum):
    """How swap-equivalence picks its target."""
    PER_METRIC = "per_metric"
    WHOLE_RECORD = "whole_record"


class FullTimeRule(Enum):
    """Whether full-time correctness applies the minute tolerance."""
    TOLERANT = "tolerant"
    EXACT = "exact"


class ProfileMode(Enum):
    B = "B"
    S = "S"


@dataclass(frozen=True)
class Judgment:
    """Correctness flags and distances for one record under baseline (B) and swap-equivalence (S)."""
    hour_ok_B: bool
    minute_ok_B: bool
    full_ok_B: bool
    hour_ok_S: bool
    minute_ok_S: bool
    full_ok_S: bool
    dist_B: int
    dist_S: int
    hour_comp_B: int
    hour_comp_S: int
    minute_comp_B: int
    minute_comp_S: int


@dataclass
class MetricSet:
    """Accuracies (percent) and MAEs for one protocol."""
    hour_acc: float
    minute_acc: float
    full_acc: float
    mae_hour: float
    mae_minute: float
    mae_total: float

    def rounded(self) -> Dict[str, float]:
        return {
            'hour_acc': round(self.hour_acc, 2),
            'minute_acc': round(self.minute_acc, 2),
            'full_acc': round(self.full_acc, 2),
            'mae_hour': round(self.mae_hour, 4),
            'mae_minute': round(self.mae_minute, 4),
            'mae_total': round(self.mae_total, 4),
        }


@dataclass
class MetricsReport:
    """B and S metrics, hand-swap gaps and per-category breakdowns for one run."""
    B: MetricSet
    S: MetricSet
    n_records: int
    n_unparseable: int
    n_no_clock: int = 0
    n_missing: int = 0
    missing_ids: List[str] = field(default_factory=list)
    breakdowns: Dict[str, Dict[str, 'MetricsReport']] = field(default_factory=dict)

    @property
    def delta_full(self) -> float:
        return self.S.full_acc - self.B.full_acc

    @property
    def delta_hour(self) -> float:
        return self.S.hour_acc - self.B.hour_acc

    @property
    def delta_minute(self) -> float:
        return self.S.minute_acc - self.B.minute_acc

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary with percentages at two decimals."""
        data = {
            'B': self.B.rounded(),
            'S': self.S.rounded(),
            'delta_full': round(self.delta_full, 2),
            'delta_hour': round(self.delta_hour, 2),
            'delta_minute': round(self.delta_minute, 2),
            'n_records': self.n_records,
            'n_unparseable': self.n_unparseable,
            'n_no_clock': self.n_no_clock,
            'n_missing': self.n_missing,
            'missing_ids': list(self.missing_ids),
        }
        if self.breakdowns:
            data['breakdowns'] = {
                dimension: {label: sub.to_dict() for label, sub in sorted(labels.items())}
                for dimension, labels in sorted(self.breakdowns.items())
            }
        return data


@dataclass
class ErrorProfile:
    """Histogram and exact empirical CDF of per-record distances."""
    mode: ProfileMode
    bin_width: int
    bin_edges: List[int]
    counts: List[int]
    cdf: List[float]
    n: int

    def cdf_at(self, threshold: int) -> float:
        """Fraction of distances <= threshold."""
        if threshold < 0:
            return 0.0
        return self.cdf[min(threshold, len(self.cdf) - 1)]

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['mode'] = self.mode.value
        return data


@dataclass(frozen=True)
class EvaluationSettings:
    """Judging rules shared by every record of a run."""
    minute_tolerance: int = 2
    swap_mode: SwapMode = SwapMode.PER_METRIC
    full_time_rule: FullTimeRule = FullTimeRule.TOLERANT
    kernel: str = "circular"
