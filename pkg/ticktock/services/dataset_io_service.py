"""
Dataset IO Service
Reads annotation, prediction and caption JSONL files with line-numbered schema errors.
"""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Type

from ticktock.models.annotation import (
    AmPm, AnnotationRecord, ClockType, DesignLabel, Environment, PredictionRecord,
    Split, Transformation,
)
from ticktock.models.clock import ParseMode
from ticktock.services.clock_service import parse_answer, parse_time
from ticktock.utils.errors import ErrorCode, SchemaError

logger = logging.getLogger(__name__)

ANNOTATION_REQUIRED_FIELDS = ['id', 'image_path', 'truth', 'clock_type', 'environment',
                              'transformation', 'source', 'split']
PREDICTION_REQUIRED_FIELDS = ['id', 'raw_output']
CAPTION_REQUIRED_FIELDS = ['id', 'caption']


def iter_jsonl(path: Path) -> Iterator[Tuple[int, Dict[str, Any]]]:
    """Yield (line_number, object) for each non-blank line."""
    path = Path(path)
    if not path.is_file():
        raise SchemaError("Input file not found", str(path), error_code=ErrorCode.MISSING_INPUT)
    with open(path, 'r', encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaError(f"Malformed JSON ({e.msg})", str(path), line_number,
                                  ErrorCode.MALFORMED_JSON)
            if not isinstance(data, dict):
                raise SchemaError("Each line must be a JSON object", str(path), line_number,
                                  ErrorCode.MALFORMED_JSON)
            yield line_number, data


def _require(data: Dict[str, Any], fields: List[str], path: Path, line_number: int):
    missing = [name for name in fields if name not in data]
    if missing:
        raise SchemaError(f"Missing required fields: {', '.join(missing)}", str(path), line_number,
                          ErrorCode.MISSING_REQUIRED_FIELD)


def _string(data: Dict[str, Any], name: str, path: Path, line_number: int) -> str:
    value = data[name]
    if not isinstance(value, str):
        raise SchemaError(f"Field '{name}' must be a string", str(path), line_number)
    return value


def _enum(enum_cls: Type[Enum], value: Any, name: str, path: Path, line_number: int):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ', '.join(member.value for member in enum_cls)
        raise SchemaError(f"Field '{name}' has invalid value {value!r} (allowed: {allowed})",
                          str(path), line_number)


def annotation_from_dict(data: Dict[str, Any], path: Path = Path('<memory>'),
                         line_number: int = 0) -> AnnotationRecord:
    """Validate one annotations JSONL object."""
    _require(data, ANNOTATION_REQUIRED_FIELDS, path, line_number)

    truth_text = _string(data, 'truth', path, line_number)
    try:
        truth = parse_time(truth_text)
    except ValueError:
        raise SchemaError(f"Field 'truth' must be canonical HH:MM, got {truth_text!r}", str(path), line_number)

    design_raw = data.get('design', [])
    if not isinstance(design_raw, list):
        raise SchemaError("Field 'design' must be a list", str(path), line_number)
    design = frozenset(_enum(DesignLabel, label, 'design', path, line_number) for label in design_raw)

    ampm_raw = data.get('ampm')
    ampm: Optional[AmPm] = None if ampm_raw is None else _enum(AmPm, ampm_raw, 'ampm', path, line_number)

    record_id = _string(data, 'id', path, line_number)
    if not record_id:
        raise SchemaError("Field 'id' must be non-empty", str(path), line_number)

    return AnnotationRecord(
        id=record_id,
        image_path=_string(data, 'image_path', path, line_number),
        truth=truth,
        clock_type=_enum(ClockType, data['clock_type'], 'clock_type', path, line_number),
        environment=_enum(Environment, data['environment'], 'environment', path, line_number),
        transformation=_enum(Transformation, data['transformation'], 'transformation', path, line_number),
        source=_string(data, 'source', path, line_number),
        split=_enum(Split, data['split'], 'split', path, line_number),
        design=design,
        ampm=ampm,
    )


def load_annotations(path: Path) -> List[AnnotationRecord]:
    records = [annotation_from_dict(data, path, line_number) for line_number, data in iter_jsonl(path)]
    logger.info(f"Loaded {len(records)} annotations from {path}")
    return records


def load_predictions(path: Path, parse_mode: ParseMode = ParseMode.STRICT) -> List[PredictionRecord]:
    predictions = []
    for line_number, data in iter_jsonl(path):
        _require(data, PREDICTION_REQUIRED_FIELDS, path, line_number)
        record_id = _string(data, 'id', path, line_number)
        raw_output = _string(data, 'raw_output', path, line_number)
        predictions.append(PredictionRecord(id=record_id, raw_output=raw_output,
                                            parsed=parse_answer(raw_output, parse_mode)))
    logger.info(f"Loaded {len(predictions)} predictions from {path}")
    return predictions


def load_captions(path: Path) -> List[Tuple[str, str]]:
    captions = []
    for line_number, data in iter_jsonl(path):
        _require(data, CAPTION_REQUIRED_FIELDS, path, line_number)
        captions.append((_string(data, 'id', path, line_number), _string(data, 'caption', path, line_number)))
    logger.info(f"Loaded {len(captions)} captions from {path}")
    return captions
