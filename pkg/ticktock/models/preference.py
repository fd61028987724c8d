"""
Preference Models
Preference pairs, drop reasons, retention reports and DPO loss inputs.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ticktock.models.clock import ClockTime
from ticktock.utils.errors import DataError, ErrorCode, ValidationError


class PairMode(Enum):
    """How the rejected time is chosen."""
    HYBRID = "hybrid"
    RANDOM = "random"
    PURE_SWAP = "pure_swap"


class PairCheck(Enum):
    """Pair validation checks, in the order they are applied."""
    FORMAT = "format"
    DISTINCTNESS = "distinctness"
    GEOMETRIC_PLAUSIBILITY = "geometric_plausibility"
    TEMPORAL_DISTANCE = "temporal_distance"


class DropReason(Enum):
    """Why a record produced no pair."""
    UNPARSEABLE = "unparseable"
    MISSING_PREDICTION = "missing_prediction"
    FORMAT = PairCheck.FORMAT.value
    DISTINCTNESS = PairCheck.DISTINCTNESS.value
    GEOMETRIC_PLAUSIBILITY = PairCheck.GEOMETRIC_PLAUSIBILITY.value
    TEMPORAL_DISTANCE = PairCheck.TEMPORAL_DISTANCE.value

    @classmethod
    def from_check(cls, check: PairCheck) -> 'DropReason':
        return cls(check.value)


@dataclass(frozen=True)
class PreferencePair:
    """(image, chosen, rejected) triple."""
    image_path: str
    chosen: ClockTime
    rejected: ClockTime

    def to_dict(self) -> Dict[str, str]:
        return {
            'image_path': self.image_path,
            'chosen': str(self.chosen),
            'rejected': str(self.rejected),
        }


@dataclass(frozen=True)
class Dropped:
    reason: DropReason
    candidate: Optional[ClockTime] = None


@dataclass
class RetentionReport:
    """Pairs kept versus records seen, with every drop listed."""
    n_in: int = 0
    n_out: int = 0
    drops_by_reason: Dict[str, int] = field(default_factory=dict)
    dropped: List[Dict[str, str]] = field(default_factory=list)

    @property
    def retention_rate(self) -> float:
        return 100.0 * self.n_out / self.n_in if self.n_in else 0.0

    def record_drop(self, record_id: str, reason: DropReason):
        self.drops_by_reason[reason.value] = self.drops_by_reason.get(reason.value, 0) + 1
        self.dropped.append({'id': record_id, 'reason': reason.value})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_in': self.n_in,
            'n_out': self.n_out,
            'retention_rate': round(self.retention_rate, 2),
            'drops_by_reason': dict(sorted(self.drops_by_reason.items())),
            'dropped': list(self.dropped),
        }


@dataclass(frozen=True)
class DpoInputs:
    """Policy and reference log-probabilities of the chosen and rejected answers."""
    logp_policy_chosen: float
    logp_policy_rejected: float
    logp_ref_chosen: float
    logp_ref_rejected: float
    beta: float = 0.3

    def __post_init__(self):
        for name in ('logp_policy_chosen', 'logp_policy_rejected', 'logp_ref_chosen',
                     'logp_ref_rejected', 'beta'):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DataError(f"{name} must be finite, got {value}", ErrorCode.NON_FINITE_VALUE,
                                {'field': name})
            if name != 'beta' and value > 0:
                raise ValidationError(f"{name} is a log-probability and must be <= 0, got {value}", name)
        if self.beta <= 0:
            raise ValidationError(f"beta must be positive, got {self.beta}", 'beta')

    @property
    def policy_margin(self) -> float:
        return self.logp_policy_chosen - self.logp_policy_rejected

    @property
    def reference_margin(self) -> float:
        return self.logp_ref_chosen - self.logp_ref_rejected


@dataclass(frozen=True)
class DpoResult:
    loss: float
    grad_wrt_policy_margin: float


@dataclass(frozen=True)
class PromptCorpus:
    """Three training prompt variants and one inference prompt, stored verbatim."""
    training_prompts: Tuple[str, str, str]
    inference_prompt: str

    def __post_init__(self):
        if len(self.training_prompts) != 3:
            raise ValueError(f"Exactly three training prompts required, got {len(self.training_prompts)}")
        if len(set(self.training_prompts)) != 3:
            raise ValueError("Training prompts must be pairwise distinct")
        if not all(text.strip() for text in self.training_prompts) or not self.inference_prompt.strip():
            raise ValueError("Prompt texts must be non-empty")
