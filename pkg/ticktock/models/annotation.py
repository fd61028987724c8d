"""
Annotation Models
Dataset rows with ground-truth times and category labels, plus model predictions.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Optional

from ticktock.models.clock import ClockTime, ParsedAnswer


class AmPm(Enum):
    AM = "AM"
    PM = "PM"


class ClockType(Enum):
    """Clock categories."""
    WALL = "wall"
    TOWER = "tower"
    WRIST = "wrist"
    POST = "post"
    ALARM_DESK = "alarm_desk"
    GRAPHIC = "graphic"
    ETC = "etc"


class Environment(Enum):
    INDOOR = "indoor"
    OUTDOOR = "outdoor"
    UNKNOWN = "unknown"


class Transformation(Enum):
    NORMAL = "normal"
    FLIPPED = "flipped"
    PARTIAL = "partial"


class DesignLabel(Enum):
    """Dial design labels; a record may carry several."""
    ARABIC = "arabic"
    ROMAN = "roman"
    NO_NUMERALS = "no_numerals"


class Split(Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class AnnotationRecord:
    """One dataset row."""
    id: str
    image_path: str
    truth: ClockTime
    clock_type: ClockType
    environment: Environment
    transformation: Transformation
    source: str
    split: Split
    design: FrozenSet[DesignLabel] = field(default_factory=frozenset)
    ampm: Optional[AmPm] = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("id must be a non-empty string")
        if not isinstance(self.image_path, str):
            raise ValueError("image_path must be a string")
        if not isinstance(self.source, str):
            raise ValueError("source must be a string")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the annotations JSONL schema."""
        return {
            'id': self.id,
            'image_path': self.image_path,
            'truth': str(self.truth),
            'ampm': self.ampm.value if self.ampm else None,
            'clock_type': self.clock_type.value,
            'environment': self.environment.value,
            'transformation': self.transformation.value,
            'design': sorted(label.value for label in self.design),
            'source': self.source,
            'split': self.split.value,
        }

    def with_split(self, split: Split) -> 'AnnotationRecord':
        return AnnotationRecord(
            id=self.id, image_path=self.image_path, truth=self.truth,
            clock_type=self.clock_type, environment=self.environment,
            transformation=self.transformation, source=self.source, split=split,
            design=self.design, ampm=self.ampm,
        )


@dataclass(frozen=True)
class PredictionRecord:
    """A raw model output joined to an annotation by id."""
    id: str
    raw_output: str
    parsed: ParsedAnswer
