# Test configuration file
import json
import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from ticktock.models.annotation import (  # noqa: E402
    AnnotationRecord, ClockType, DesignLabel, Environment, Split, Transformation,
)
from ticktock.models.clock import ClockTime  # noqa: E402

# Pinned regression constants
DOUBLE_SWAP_BOUND_MINUTES = 64
SWAP_MINUTE_ANGLE_RESIDUAL_DEG = 3.0
SWAP_HOUR_ANGLE_RESIDUAL_DEG = 29.5

# Worked swap examples: (time, swapped)
SWAP_EXAMPLES = [
    ('03:30', '06:18'),
    ('12:00', '12:00'),
    ('01:05', '01:05'),
    ('09:55', '11:50'),
]

# Default style geometry
DEFAULT_IMAGE_SIZE = 241
DEFAULT_CENTER = 120

ALL_TIMES = [ClockTime.from_total_minutes(total) for total in range(720)]


def make_record(record_id, truth, clock_type=ClockType.WALL, environment=Environment.INDOOR,
                transformation=Transformation.NORMAL, source='coco', split=Split.TEST,
                design=(DesignLabel.ARABIC,), image_path=None):
    if isinstance(truth, str):
        hour, minute = truth.split(':')
        truth = ClockTime.from_display(int(hour), int(minute))
    return AnnotationRecord(
        id=record_id,
        image_path=image_path or f'images/{record_id}.png',
        truth=truth,
        clock_type=clock_type,
        environment=environment,
        transformation=transformation,
        source=source,
        split=split,
        design=frozenset(design),
    )


def write_jsonl(path, rows):
    with open(path, 'w', encoding='utf-8') as f:
        for row in rows:
            f.write(json.dumps(row) + '\n')
    return path


@pytest.fixture
def all_times():
    return list(ALL_TIMES)


@pytest.fixture
def self_test_records():
    """720-time fixture: one record per time on the 12-hour cycle."""
    return [make_record(f'clock-{total:03d}', t) for total, t in enumerate(ALL_TIMES)]


@pytest.fixture
def self_test_files(tmp_path, self_test_records):
    """Annotations plus predictions equal to the truths."""
    annotations = write_jsonl(tmp_path / 'annotations.jsonl', [r.to_dict() for r in self_test_records])
    predictions = write_jsonl(tmp_path / 'predictions.jsonl',
                              [{'id': r.id, 'raw_output': str(r.truth)} for r in self_test_records])
    return annotations, predictions


@pytest.fixture
def cli():
    from ticktock import create_app
    return create_app('testing')


@pytest.fixture
def runner():
    from click.testing import CliRunner
    return CliRunner(mix_stderr=False)
