"""
Evaluation Service
Baseline and swap-equivalence judging, corpus aggregation and error profiles.
"""

import functools
import logging
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ticktock.models.annotation import AnnotationRecord, PredictionRecord
from ticktock.models.clock import AnswerKind, ClockTime, DistanceKernel, ParsedAnswer
from ticktock.models.evaluation import (
    ErrorProfile, EvaluationSettings, FullTimeRule, Judgment, MetricSet,
    MetricsReport, ProfileMode, SwapMode,
)
from ticktock.services.clock_service import TimeDistance, circular_minute_component, swap_hands
from ticktock.utils import log_execution_time, ordered_map
from ticktock.utils.errors import (
    DataError, ErrorCode, ValidationError, raise_duplicate_id, raise_unknown_id,
)

logger = logging.getLogger(__name__)

DEFAULT_MINUTE_TOLERANCE = 2
DEFAULT_BIN_WIDTH = 10
BREAKDOWN_DIMENSIONS = ('clock_type', 'environment', 'transformation', 'design')

# (truth, parsed prediction or None when missing)
JudgeItem = Tuple[ClockTime, Optional[ParsedAnswer]]


def _target_outcome(pred: ClockTime, target: ClockTime, settings: EvaluationSettings,
                    distance: TimeDistance) -> Tuple[bool, bool, bool, int, int, int]:
    hour_ok = pred.hour == target.hour
    minute_ok = circular_minute_component(pred, target) <= settings.minute_tolerance
    if settings.full_time_rule == FullTimeRule.TOLERANT:
        full_ok = hour_ok and minute_ok
    else:
        full_ok = hour_ok and pred.minute == target.minute
    return (hour_ok, minute_ok, full_ok,
            distance.total(pred, target), distance.hour(pred, target), distance.minute(pred, target))


def judge(item: JudgeItem, settings: EvaluationSettings) -> Judgment:
    """Judge one prediction against its truth under B and S."""
    truth, pred = item
    distance = TimeDistance(settings.kernel)

    if pred is None or pred.kind != AnswerKind.TIME:
        return Judgment(
            hour_ok_B=False, minute_ok_B=False, full_ok_B=False,
            hour_ok_S=False, minute_ok_S=False, full_ok_S=False,
            dist_B=distance.worst_total, dist_S=distance.worst_total,
            hour_comp_B=distance.worst_hour, hour_comp_S=distance.worst_hour,
            minute_comp_B=distance.worst_minute, minute_comp_S=distance.worst_minute,
        )

    base = _target_outcome(pred.time, truth, settings, distance)
    swapped = _target_outcome(pred.time, swap_hands(truth), settings, distance)

    if settings.swap_mode == SwapMode.PER_METRIC:
        best = (base[0] or swapped[0], base[1] or swapped[1], base[2] or swapped[2],
                min(base[3], swapped[3]), min(base[4], swapped[4]), min(base[5], swapped[5]))
    else:
        # One hypothesis per record decides the flags; the swap is taken only
        # when it loses no flag. Distances stay the per-field minimum.
        def rank(outcome):
            return (outcome[2], outcome[0] + outcome[1], -outcome[3])
        keeps_flags = all(s >= b for s, b in zip(swapped[:3], base[:3]))
        chosen = swapped if keeps_flags and rank(swapped) > rank(base) else base
        best = chosen[:3] + (min(base[3], swapped[3]), min(base[4], swapped[4]), min(base[5], swapped[5]))

    return Judgment(
        hour_ok_B=base[0], minute_ok_B=base[1], full_ok_B=base[2],
        hour_ok_S=best[0], minute_ok_S=best[1], full_ok_S=best[2],
        dist_B=base[3], dist_S=best[3],
        hour_comp_B=base[4], hour_comp_S=best[4],
        minute_comp_B=base[5], minute_comp_S=best[5],
    )


def summarize(judgments: Sequence[Judgment]) -> Tuple[MetricSet, MetricSet]:
    """Fold judgments into B and S metric sets. Integer sums keep the fold order-independent."""
    n = len(judgments)
    if n == 0:
        raise DataError("Cannot summarize an empty judgment list", ErrorCode.EMPTY_INPUT)

    def pct(flag: str) -> float:
        return 100.0 * sum(1 for j in judgments if getattr(j, flag)) / n

    def mean(field: str) -> float:
        return sum(getattr(j, field) for j in judgments) / n

    sets = []
    for protocol in ('B', 'S'):
        sets.append(MetricSet(
            hour_acc=pct(f'hour_ok_{protocol}'),
            minute_acc=pct(f'minute_ok_{protocol}'),
            full_acc=pct(f'full_ok_{protocol}'),
            mae_hour=mean(f'hour_comp_{protocol}'),
            mae_minute=mean(f'minute_comp_{protocol}'),
            mae_total=mean(f'dist_{protocol}'),
        ))
    return sets[0], sets[1]


class EvaluationService:
    """Joins predictions to annotations and scores them."""

    def __init__(self,
                 minute_tolerance: int = DEFAULT_MINUTE_TOLERANCE,
                 swap_mode: SwapMode = SwapMode.PER_METRIC,
                 full_time_rule: FullTimeRule = FullTimeRule.TOLERANT,
                 kernel: DistanceKernel = DistanceKernel.CIRCULAR):
        if minute_tolerance < 0 or minute_tolerance > 30:
            raise ValidationError(f"minute_tolerance must be in [0, 30], got {minute_tolerance}",
                                  'minute_tolerance')
        self.settings = EvaluationSettings(
            minute_tolerance=minute_tolerance,
            swap_mode=SwapMode(swap_mode),
            full_time_rule=FullTimeRule(full_time_rule),
            kernel=DistanceKernel(kernel).value,
        )
        self.distance = TimeDistance(self.settings.kernel)
        logger.info(f"Evaluation service initialized "
                    f"(tolerance=±{minute_tolerance}, swap_mode={self.settings.swap_mode.value}, "
                    f"kernel={self.settings.kernel})")

    def judge_record(self, truth: ClockTime, pred: Optional[ParsedAnswer]) -> Judgment:
        return judge((truth, pred), self.settings)

    def join(self, annotations: Iterable[AnnotationRecord],
             predictions: Iterable[PredictionRecord]) -> List[Tuple[AnnotationRecord, Optional[PredictionRecord]]]:
        """Join predictions to annotations by id, sorted by annotation id.

        Duplicate prediction ids and ids with no annotation are hard errors;
        annotations without a prediction are paired with None.
        """
        by_id: Dict[str, AnnotationRecord] = {}
        for record in annotations:
            if record.id in by_id:
                raise DataError(f"Duplicate annotation id: {record.id}", ErrorCode.DUPLICATE_ID,
                                {'id': record.id})
            by_id[record.id] = record

        matched: Dict[str, PredictionRecord] = {}
        for prediction in predictions:
            if prediction.id in matched:
                raise_duplicate_id(prediction.id)
            if prediction.id not in by_id:
                raise_unknown_id(prediction.id)
            matched[prediction.id] = prediction

        return [(by_id[record_id], matched.get(record_id)) for record_id in sorted(by_id)]

    @log_execution_time
    def judge_corpus(self, annotations: Iterable[AnnotationRecord],
                     predictions: Iterable[PredictionRecord],
                     jobs: int = 1) -> List[Tuple[AnnotationRecord, Optional[PredictionRecord], Judgment]]:
        joined = self.join(annotations, predictions)
        items = [(record.truth, prediction.parsed if prediction else None) for record, prediction in joined]
        judgments = ordered_map(functools.partial(judge, settings=self.settings), items, jobs=jobs)
        return [(record, prediction, judgment)
                for (record, prediction), judgment in zip(joined, judgments)]

    def aggregate(self, annotations: Iterable[AnnotationRecord],
                  predictions: Iterable[PredictionRecord], jobs: int = 1) -> MetricsReport:
        return self.build_report(self.judge_corpus(annotations, predictions, jobs=jobs))

    def build_report(self, judged: Sequence[Tuple[AnnotationRecord, Optional[PredictionRecord], Judgment]],
                     with_breakdowns: bool = True) -> MetricsReport:
        if not judged:
            raise DataError("No annotations to evaluate", ErrorCode.EMPTY_INPUT)

        judgments = [judgment for _, _, judgment in judged]
        baseline, swap_equivalent = summarize(judgments)
        missing_ids = [record.id for record, prediction, _ in judged if prediction is None]
        n_no_clock = sum(1 for _, prediction, _ in judged
                         if prediction is not None and prediction.parsed.kind == AnswerKind.NO_CLOCK)
        n_unparseable = sum(1 for _, prediction, _ in judged
                            if prediction is not None and prediction.parsed.kind == AnswerKind.UNPARSEABLE)

        report = MetricsReport(
            B=baseline, S=swap_equivalent,
            n_records=len(judged), n_unparseable=n_unparseable, n_no_clock=n_no_clock,
            n_missing=len(missing_ids), missing_ids=missing_ids,
        )
        if with_breakdowns:
            report.breakdowns = self._breakdowns(judged)

        if with_breakdowns and n_unparseable:
            logger.warning(f"{n_unparseable} of {len(judged)} predictions were unparseable and scored worst-case")
        if with_breakdowns and missing_ids:
            logger.warning(f"{len(missing_ids)} annotations have no prediction and were scored worst-case")
        return report

    def _breakdowns(self, judged) -> Dict[str, Dict[str, MetricsReport]]:
        groups: Dict[str, Dict[str, list]] = {dimension: defaultdict(list) for dimension in BREAKDOWN_DIMENSIONS}
        for entry in judged:
            record = entry[0]
            groups['clock_type'][record.clock_type.value].append(entry)
            groups['environment'][record.environment.value].append(entry)
            groups['transformation'][record.transformation.value].append(entry)
            for label in record.design:
                groups['design'][label.value].append(entry)

        return {
            dimension: {label: self.build_report(entries, with_breakdowns=False)
                        for label, entries in labels.items()}
            for dimension, labels in groups.items()
        }

    def emit_error_profile(self, judgments: Sequence[Judgment], bin_width: int = DEFAULT_BIN_WIDTH,
                           mode: ProfileMode = ProfileMode.B) -> ErrorProfile:
        """Histogram plus exact empirical CDF at every integer minute threshold."""
        if not judgments:
            raise DataError("Error profile needs at least one judgment", ErrorCode.EMPTY_INPUT)
        if bin_width < 1:
            raise ValidationError(f"bin_width must be >= 1, got {bin_width}", 'bin_width')

        mode = ProfileMode(mode)
        field = 'dist_B' if mode == ProfileMode.B else 'dist_S'
        distances = np.array([getattr(j, field) for j in judgments], dtype=np.int64)
        max_distance = self.distance.worst_total

        edges = np.arange(0, max_distance + bin_width, bin_width)
        counts, _ = np.histogram(distances, bins=edges)
        cumulative = np.cumsum(np.bincount(distances, minlength=max_distance + 1))
        cdf = cumulative / len(distances)

        return ErrorProfile(
            mode=mode,
            bin_width=bin_width,
            bin_edges=[int(edge) for edge in edges],
            counts=[int(count) for count in counts],
            cdf=[float(value) for value in cdf],
            n=len(distances),
        )
