"""
Rendering Models
Clock styles, occluders and rendered samples for synthetic clock corpora.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from PIL import Image

from ticktock.models.clock import ClockTime
from ticktock.utils.errors import ValidationError

RGB = Tuple[int, int, int]

PADDING_PX = 8
MIN_FACE_RADIUS_PX = 32
MIN_NUMERAL_RADIUS_PX = 48


class NumeralStyle(Enum):
    ARABIC = "arabic"
    ROMAN = "roman"
    NONE = "none"


class TickStyle(Enum):
    ALL_60 = "all_60"
    HOURS_ONLY = "hours_only"
    NONE = "none"


class TimeDistribution(Enum):
    """How corpus labels are drawn."""
    UNIFORM = "uniform"
    STRATIFIED = "stratified"
    HISTOGRAM = "histogram"


@dataclass(frozen=True)
class HandSpec:
    length_fraction: float
    width_px: int

    def __post_init__(self):
        if not 0.0 < self.length_fraction < 1.0:
            raise ValidationError(f"length_fraction must be in (0, 1), got {self.length_fraction}",
                                  'length_fraction')
        if self.width_px < 1:
            raise ValidationError(f"width_px must be >= 1, got {self.width_px}", 'width_px')


@dataclass(frozen=True)
class Palette:
    face: RGB = (255, 255, 255)
    hands: RGB = (0, 0, 0)
    numerals: RGB = (47, 62, 70)
    background: RGB = (28, 40, 72)

    def __post_init__(self):
        for name in ('face', 'hands', 'numerals', 'background'):
            color = getattr(self, name)
            if len(color) != 3 or any(not 0 <= int(channel) <= 255 for channel in color):
                raise ValidationError(f"palette.{name} must be an RGB triple in [0, 255], got {color}",
                                      f'palette.{name}')
        if self.hands in (self.face, self.numerals, self.background):
            raise ValidationError("palette.hands must differ from every other palette color", 'palette.hands')


@dataclass(frozen=True)
class Occluder:
    """Solid rectangle (x0, y0, x1, y1) in upright image coordinates."""
    box: Tuple[int, int, int, int]
    color: RGB


@dataclass(frozen=True)
class ClockStyle:
    face_radius_px: int = 112
    numeral_style: NumeralStyle = NumeralStyle.ARABIC
    tick_style: TickStyle = TickStyle.ALL_60
    hour_hand: HandSpec = HandSpec(0.5, 10)
    minute_hand: HandSpec = HandSpec(0.8, 4)
    palette: Palette = field(default_factory=Palette)
    rotation_deg: float = 0.0
    mirror: bool = False
    occluder: Optional[Occluder] = None

    def __post_init__(self):
        if self.face_radius_px < MIN_FACE_RADIUS_PX:
            raise ValidationError(f"face_radius_px must be >= {MIN_FACE_RADIUS_PX}, got {self.face_radius_px}",
                                  'face_radius_px')
        if self.minute_hand.length_fraction <= self.hour_hand.length_fraction:
            raise ValidationError("minute hand must be longer than the hour hand", 'minute_hand')
        if self.hour_hand.width_px < self.minute_hand.width_px:
            raise ValidationError("hour hand must be at least as thick as the minute hand", 'hour_hand')
        if self.occluder is not None:
            x0, y0, x1, y1 = self.occluder.box
            c = self.center
            if x0 <= c <= x1 and y0 <= c <= y1:
                raise ValidationError("occluder must not cover the face center", 'occluder')
            if self.occluder.color == self.palette.hands:
                raise ValidationError("occluder color must differ from the hands color", 'occluder')

    @property
    def center(self) -> int:
        return self.face_radius_px + PADDING_PX

    @property
    def image_size(self) -> int:
        return 2 * self.face_radius_px + 2 * PADDING_PX + 1

    @property
    def hour_length_px(self) -> float:
        return self.hour_hand.length_fraction * self.face_radius_px

    @property
    def minute_length_px(self) -> float:
        return self.minute_hand.length_fraction * self.face_radius_px

    @property
    def hour_reach_px(self) -> float:
        """Farthest distance from center the hour hand's corners reach."""
        return math.hypot(self.hour_length_px, self.hour_hand.width_px / 2)

    @property
    def minute_reach_px(self) -> float:
        return math.hypot(self.minute_length_px, self.minute_hand.width_px / 2)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'face_radius_px': self.face_radius_px,
            'numeral_style': self.numeral_style.value,
            'tick_style': self.tick_style.value,
            'hour_hand': {'length_fraction': self.hour_hand.length_fraction, 'width_px': self.hour_hand.width_px},
            'minute_hand': {'length_fraction': self.minute_hand.length_fraction,
                            'width_px': self.minute_hand.width_px},
            'palette': {name: list(getattr(self.palette, name))
                        for name in ('face', 'hands', 'numerals', 'background')},
            'rotation_deg': self.rotation_deg,
            'mirror': self.mirror,
            'occluder': None if self.occluder is None else {
                'box': list(self.occluder.box), 'color': list(self.occluder.color)},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ClockStyle':
        occluder = data.get('occluder')
        return cls(
            face_radius_px=int(data['face_radius_px']),
            numeral_style=NumeralStyle(data['numeral_style']),
            tick_style=TickStyle(data['tick_style']),
            hour_hand=HandSpec(float(data['hour_hand']['length_fraction']), int(data['hour_hand']['width_px'])),
            minute_hand=HandSpec(float(data['minute_hand']['length_fraction']),
                                 int(data['minute_hand']['width_px'])),
            palette=Palette(**{name: tuple(int(v) for v in value) for name, value in data['palette'].items()}),
            rotation_deg=float(data.get('rotation_deg', 0.0)),
            mirror=bool(data.get('mirror', False)),
            occluder=None if occluder is None else Occluder(
                box=tuple(int(v) for v in occluder['box']), color=tuple(int(v) for v in occluder['color'])),
        )


DEFAULT_STYLE = ClockStyle()


@dataclass
class RenderedSample:
    image: Image.Image
    label: ClockTime
    style: ClockStyle
    seed: int

    def __post_init__(self):
        size = self.style.image_size
        if self.image.size != (size, size):
            raise ValidationError(f"image is {self.image.size}, style requires {size}x{size}", 'image')
