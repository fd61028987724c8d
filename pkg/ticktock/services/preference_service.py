"""
Preference Service
Builds and validates chosen/rejected time pairs from model predictions.
"""

import functools
import logging
import posixpath
from typing import Iterable, List, Optional, Tuple, Union

from ticktock.models.annotation import AnnotationRecord, PredictionRecord
from ticktock.models.clock import MINUTES_PER_CYCLE, AnswerKind, ClockTime, ParsedAnswer
from ticktock.models.preference import (
    DropReason, Dropped, PairCheck, PairMode, PreferencePair, RetentionReport,
)
from ticktock.services.clock_service import (
    circular_distance_minutes, circular_minute_component, hands_from_time, swap_hands, time_from_hands,
)
from ticktock.services.evaluation_service import DEFAULT_MINUTE_TOLERANCE, EvaluationService
from ticktock.utils import keyed_generator, log_execution_time, ordered_map
from ticktock.utils.errors import ValidationError

logger = logging.getLogger(__name__)

MIN_TEMPORAL_DISTANCE = 5
DEFAULT_PAIR_SEED = 0


def is_correct(pred: Optional[ParsedAnswer], truth: ClockTime,
               minute_tolerance: int = DEFAULT_MINUTE_TOLERANCE) -> bool:
    """Exact hour and circular minute error within tolerance."""
    if pred is None or pred.kind != AnswerKind.TIME:
        return False
    return (pred.time.hour == truth.hour
            and circular_minute_component(pred.time, truth) <= minute_tolerance)


def validate_pair(chosen, rejected) -> Optional[PairCheck]:
    """Return the first failing check, or None when the pair passes."""
    if not isinstance(chosen, ClockTime) or not isinstance(rejected, ClockTime):
        return PairCheck.FORMAT
    if chosen == rejected:
        return PairCheck.DISTINCTNESS
    try:
        if time_from_hands(hands_from_time(rejected)) != rejected:
            return PairCheck.GEOMETRIC_PLAUSIBILITY
    except ValueError:
        return PairCheck.GEOMETRIC_PLAUSIBILITY
    if circular_distance_minutes(chosen, rejected) <= MIN_TEMPORAL_DISTANCE:
        return PairCheck.TEMPORAL_DISTANCE
    return None


def random_rejected(truth: ClockTime, image_path: str, rng_seed: int) -> ClockTime:
    """Uniform draw over the times more than five circular minutes from truth."""
    allowed = [total for total in range(MINUTES_PER_CYCLE)
               if circular_distance_minutes(truth, ClockTime.from_total_minutes(total)) > MIN_TEMPORAL_DISTANCE]
    index = int(keyed_generator(rng_seed, 'reject', image_path).integers(len(allowed)))
    return ClockTime.from_total_minutes(allowed[index])


def _check_image_path(image_path: str):
    if not isinstance(image_path, str) or not image_path.strip():
        raise ValidationError("image_path must be a non-empty relative path", 'image_path')
    if posixpath.isabs(image_path) or image_path.startswith('\\') or (len(image_path) > 1 and image_path[1] == ':'):
        raise ValidationError(f"image_path must be relative, got {image_path!r}", 'image_path')


def make_pair(truth: ClockTime, pred: Optional[ParsedAnswer], image_path: str,
              mode: Union[PairMode, str] = PairMode.HYBRID,
              rng_seed: Optional[int] = DEFAULT_PAIR_SEED,
              minute_tolerance: int = DEFAULT_MINUTE_TOLERANCE) -> Union[PreferencePair, Dropped]:
    """Build one preference pair; returns Dropped(reason) when no valid pair exists."""
    _check_image_path(image_path)
    mode = PairMode(mode)

    if mode == PairMode.HYBRID:
        if is_correct(pred, truth, minute_tolerance):
            rejected = swap_hands(truth)
        elif pred is None:
            return Dropped(DropReason.MISSING_PREDICTION)
        elif pred.kind != AnswerKind.TIME:
            return Dropped(DropReason.UNPARSEABLE)
        else:
            rejected = pred.time
    elif mode == PairMode.PURE_SWAP:
        rejected = swap_hands(truth)
    else:
        if rng_seed is None:
            raise ValidationError("random mode requires an rng_seed", 'rng_seed')
        rejected = random_rejected(truth, image_path, rng_seed)

    failed = validate_pair(truth, rejected)
    if failed is not None:
        return Dropped(DropReason.from_check(failed), candidate=rejected)
    return PreferencePair(image_path=image_path, chosen=truth, rejected=rejected)


def _make_pair_item(item: Tuple[ClockTime, Optional[ParsedAnswer], str], mode: PairMode,
                    rng_seed: int, minute_tolerance: int):
    truth, pred, image_path = item
    return make_pair(truth, pred, image_path, mode, rng_seed, minute_tolerance)


class PreferenceService:
    """Forges a preference dataset from annotations and predictions."""

    def __init__(self, mode: PairMode = PairMode.HYBRID, rng_seed: int = DEFAULT_PAIR_SEED,
                 minute_tolerance: int = DEFAULT_MINUTE_TOLERANCE):
        self.mode = PairMode(mode)
        self.rng_seed = rng_seed
        self.minute_tolerance = minute_tolerance
        self.evaluation_service = EvaluationService(minute_tolerance=minute_tolerance)
        logger.info(f"Preference service initialized (mode={self.mode.value}, seed={rng_seed})")

    @log_execution_time
    def forge_dataset(self, annotations: Iterable[AnnotationRecord],
                      predictions: Iterable[PredictionRecord],
                      jobs: int = 1) -> Tuple[List[PreferencePair], RetentionReport]:
        """Pairs in annotation input order plus a retention report.

        In pure_swap and random modes predictions are still joined (so join
        errors surface), but missing predictions do not drop a record.
        """
        annotations = list(annotations)
        joined = self.evaluation_service.join(annotations, predictions)
        prediction_by_id = {record.id: prediction for record, prediction in joined}

        items = []
        for record in annotations:
            prediction = prediction_by_id[record.id]
            items.append((record.truth, prediction.parsed if prediction else None, record.image_path))

        worker = functools.partial(_make_pair_item, mode=self.mode, rng_seed=self.rng_seed,
                                   minute_tolerance=self.minute_tolerance)
        outcomes = ordered_map(worker, items, jobs=jobs)

        pairs: List[PreferencePair] = []
        report = RetentionReport(n_in=len(annotations))
        for record, outcome in zip(annotations, outcomes):
            if isinstance(outcome, Dropped):
                report.record_drop(record.id, outcome.reason)
            else:
                pairs.append(outcome)
        report.n_out = len(pairs)

        logger.info(f"Forged {report.n_out} of {report.n_in} pairs ({report.retention_rate:.1f}% retained)")
        if report.drops_by_reason:
            logger.warning(f"Dropped records by reason: {report.drops_by_reason}")
        return pairs, report
