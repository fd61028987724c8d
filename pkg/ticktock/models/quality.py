"""
Dataset Quality Models
Caption filter decisions, image fingerprints, dedup results and time distribution statistics.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np


class FilterResult(Enum):
    KEEP = "keep"
    DROP = "drop"


class FilterReason(Enum):
    KEYWORD = "keyword"
    EXCLUDED_INFLECTION = "excluded_inflection"
    NO_KEYWORD = "no_keyword"


@dataclass(frozen=True)
class FilterDecision:
    result: FilterResult
    reason: FilterReason
    token: Optional[str] = None

    @property
    def keep(self) -> bool:
        return self.result == FilterResult.KEEP


@dataclass(frozen=True)
class ImageFingerprint:
    """sha1 of the file bytes plus 64-bit perceptual hashes (row-major, most significant bit first)."""
    sha1: str
    phash: int
    whash: int

    @property
    def phash_hex(self) -> str:
        return f"{self.phash:016x}"

    @property
    def whash_hex(self) -> str:
        return f"{self.whash:016x}"

    def to_dict(self) -> Dict[str, str]:
        return {'sha1': self.sha1, 'phash': self.phash_hex, 'whash': self.whash_hex}


@dataclass(frozen=True)
class FingerprintedRecord:
    id: str
    fingerprint: ImageFingerprint
    source: str = ""


@dataclass
class DedupResult:
    """Kept ids plus every cluster, keyed by its keeper (the smallest id)."""
    kept_ids: List[str]
    clusters: Dict[str, List[str]]
    manifest: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def duplicate_clusters(self) -> Dict[str, List[str]]:
        return {keeper: members for keeper, members in self.clusters.items() if len(members) > 1}

    @property
    def n_removed(self) -> int:
        return sum(len(members) - 1 for members in self.clusters.values())


@dataclass
class DistributionStats:
    """12x60 time-cell counts with marginals, hour CV and log heat values."""
    cell_counts: np.ndarray
    hour_marginal: np.ndarray
    minute_marginal: np.ndarray
    hour_cv: float
    heat_values: np.ndarray
    argmin_hour: int
    argmin_count: int
    argmax_hour: int
    argmax_count: int

    @property
    def n(self) -> int:
        return int(self.cell_counts.sum())

    def to_dict(self) -> Dict[str, Any]:
        """Summary without the full matrices."""
        return {
            'n': self.n,
            'hour_marginal': {str(12 if hour == 0 else hour): int(count)
                              for hour, count in enumerate(self.hour_marginal)},
            'hour_cv': round(self.hour_cv, 4),
            'argmin_hour': self.argmin_hour,
            'argmin_count': self.argmin_count,
            'argmax_hour': self.argmax_hour,
            'argmax_count': self.argmax_count,
            'nonzero_cells': int(np.count_nonzero(self.cell_counts)),
        }
