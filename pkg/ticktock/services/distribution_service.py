"""
Time Distribution Service
Cell statistics, canonical-time rebalancing, split assignment and diversity tables.
"""

import csv
import logging
import math
from collections import Counter, defaultdict
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from ticktock.models.annotation import AnnotationRecord, ClockType, Split
from ticktock.models.quality import DistributionStats
from ticktock.utils import stable_hash
from ticktock.utils.errors import DataError, ErrorCode, SchemaError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_CAP_MULTIPLIER = 3.0
DEFAULT_TEST_SOURCES = frozenset({'coco', 'open_images', 'clock_movies'})
DIVERSITY_DIMENSIONS = ('environment', 'transformation', 'design')


def cell_counts(records: Iterable[AnnotationRecord]) -> np.ndarray:
    counts = np.zeros((12, 60), dtype=np.int64)
    for record in records:
        counts[record.truth.hour, record.truth.minute] += 1
    return counts


def stats_from_counts(counts: np.ndarray) -> DistributionStats:
    counts = np.asarray(counts, dtype=np.int64)
    if counts.shape != (12, 60):
        raise ValidationError(f"cell counts must be 12x60, got {counts.shape}", 'cell_counts')
    if counts.sum() == 0:
        raise DataError("Cannot compute statistics of an empty record set", ErrorCode.EMPTY_INPUT)

    hour_marginal = counts.sum(axis=1)
    minute_marginal = counts.sum(axis=0)
    hour_cv = 100.0 * float(np.std(hour_marginal)) / float(np.mean(hour_marginal))
    argmin, argmax = int(np.argmin(hour_marginal)), int(np.argmax(hour_marginal))

    return DistributionStats(
        cell_counts=counts,
        hour_marginal=hour_marginal,
        minute_marginal=minute_marginal,
        hour_cv=hour_cv,
        heat_values=np.log1p(counts.astype(np.float64)),
        argmin_hour=12 if argmin == 0 else argmin,
        argmin_count=int(hour_marginal[argmin]),
        argmax_hour=12 if argmax == 0 else argmax,
        argmax_count=int(hour_marginal[argmax]),
    )


def compute_stats(records: Sequence[AnnotationRecord]) -> DistributionStats:
    if not records:
        raise DataError("Cannot compute statistics of an empty record set", ErrorCode.EMPTY_INPUT)
    return stats_from_counts(cell_counts(records))


def rebalance_cap(counts: np.ndarray, multiplier: float = DEFAULT_CAP_MULTIPLIER) -> int:
    """max(floor(multiplier x median nonzero cell count), 1)."""
    nonzero = counts[counts > 0]
    if nonzero.size == 0:
        return 1
    return max(int(math.floor(multiplier * float(np.median(nonzero)))), 1)


def rebalance(records: Sequence[AnnotationRecord], cap_multiplier: float = DEFAULT_CAP_MULTIPLIER
              ) -> Tuple[List[AnnotationRecord], DistributionStats, DistributionStats]:
    """Cap every time cell; keepers are the records with the smallest sha1 of id.

    Returns kept records in input order plus before/after statistics.
    """
    if cap_multiplier <= 0:
        raise ValidationError(f"cap_multiplier must be positive, got {cap_multiplier}", 'cap_multiplier')
    before = compute_stats(records)
    cap = rebalance_cap(before.cell_counts, cap_multiplier)

    by_cell: Dict[Tuple[int, int], List[AnnotationRecord]] = defaultdict(list)
    for record in records:
        by_cell[(record.truth.hour, record.truth.minute)].append(record)

    keep_ids = set()
    for cell_records in by_cell.values():
        ranked = sorted(cell_records, key=lambda record: (stable_hash(record.id), record.id))
        keep_ids.update(record.id for record in ranked[:cap])

    kept = [record for record in records if record.id in keep_ids]
    after = compute_stats(kept)
    logger.info(f"Rebalance cap {cap} per cell kept {len(kept)} of {len(records)} records "
                f"(hour CV {before.hour_cv:.2f}% -> {after.hour_cv:.2f}%)")
    return kept, before, after


def assign_split(source: str, test_sources: Iterable[str] = DEFAULT_TEST_SOURCES) -> Split:
    return Split.TEST if source.lower() in {name.lower() for name in test_sources} else Split.TRAIN


def apply_splits(records: Iterable[AnnotationRecord],
                 test_sources: Iterable[str] = DEFAULT_TEST_SOURCES) -> List[AnnotationRecord]:
    test_sources = frozenset(test_sources)
    return [record.with_split(assign_split(record.source, test_sources)) for record in records]


def diversity_table(records: Sequence[AnnotationRecord]) -> List[Tuple[str, str, str, int]]:
    """(clock_type, dimension, label, count) rows including per-dimension totals."""
    counts: Counter = Counter()
    for record in records:
        clock_type = record.clock_type.value
        counts[(clock_type, 'environment', record.environment.value)] += 1
        counts[(clock_type, 'transformation', record.transformation.value)] += 1
        for label in record.design:
            counts[(clock_type, 'design', label.value)] += 1
        counts[(clock_type, 'total', 'all')] += 1

    rows = []
    for clock_type in [member.value for member in ClockType] + ['total']:
        for dimension in DIVERSITY_DIMENSIONS + ('total',):
            labels = sorted({label for (ct, dim, label) in counts if dim == dimension})
            for label in labels:
                if clock_type == 'total':
                    value = sum(count for (ct, dim, lab), count in counts.items()
                                if dim == dimension and lab == label)
                else:
                    value = counts.get((clock_type, dimension, label), 0)
                rows.append((clock_type, dimension, label, value))
    return rows


def source_table(records: Sequence[AnnotationRecord]) -> List[Tuple[str, str, int]]:
    """(source, split, count) rows sorted by source."""
    counts = Counter((record.source, record.split.value) for record in records)
    return [(source, split, count) for (source, split), count in sorted(counts.items())]


def matrix_rows(matrix: np.ndarray, fmt: str = '{}') -> List[List[str]]:
    """12x60 matrix as CSV rows labelled with display hours (12, 1, ..., 11)."""
    return [[str(12 if hour == 0 else hour)] + [fmt.format(value) for value in row]
            for hour, row in enumerate(matrix.tolist())]


MATRIX_HEADER = ['hour'] + [f'{minute:02d}' for minute in range(60)]


def read_cell_histogram(path: Path) -> np.ndarray:
    """Read 720 cell weights from a 12x60 CSV matrix (as written by qc stats) or a single column."""
    path = Path(path)
    if not path.is_file():
        raise SchemaError("Histogram file not found", str(path), error_code=ErrorCode.MISSING_INPUT)

    values: List[float] = []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        for line_number, row in enumerate(csv.reader(f), start=1):
            cells = [cell.strip() for cell in row if cell.strip()]
            if not cells or (line_number == 1 and cells[0].lower() == 'hour'):
                continue
            if len(cells) == len(MATRIX_HEADER):
                cells = cells[1:]
            try:
                values.extend(float(cell) for cell in cells)
            except ValueError:
                raise SchemaError("Histogram cells must be numeric", str(path), line_number)

    if len(values) != 12 * 60:
        raise SchemaError(f"Histogram must hold 720 cells, found {len(values)}", str(path))
    return np.array(values, dtype=np.float64)
