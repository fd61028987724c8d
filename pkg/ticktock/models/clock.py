"""
Clock Models
Canonical 12-hour times, hand angles and parsed model answers.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

MINUTES_PER_CYCLE = 720
NO_CLOCK_TEXT = "NO CLOCK"


class ParseMode(Enum):
    """Answer parsing grammars."""
    STRICT = "strict"
    LENIENT = "lenient"


class AnswerKind(Enum):
    """Variants of a parsed model answer."""
    TIME = "time"
    NO_CLOCK = "no_clock"
    UNPARSEABLE = "unparseable"


class DistanceKernel(Enum):
    """Distance kernels for time errors."""
    CIRCULAR = "circular"
    LINEAR = "linear"


@dataclass(frozen=True, order=True)
class ClockTime:
    """A 12-hour wall-clock time. Hour 0 displays as 12."""
    hour: int
    minute: int

    def __post_init__(self):
        if isinstance(self.hour, bool) or not isinstance(self.hour, int):
            raise ValueError(f"hour must be an integer, got {self.hour!r}")
        if isinstance(self.minute, bool) or not isinstance(self.minute, int):
            raise ValueError(f"minute must be an integer, got {self.minute!r}")
        if not 0 <= self.hour <= 11:
            raise ValueError(f"hour must be in [0, 11], got {self.hour}")
        if not 0 <= self.minute <= 59:
            raise ValueError(f"minute must be in [0, 59], got {self.minute}")

    @property
    def total_minutes(self) -> int:
        """Position on the 720-minute cycle."""
        return 60 * self.hour + self.minute

    @classmethod
    def from_total_minutes(cls, total: int) -> 'ClockTime':
        total %= MINUTES_PER_CYCLE
        return cls(total // 60, total % 60)

    @classmethod
    def from_display(cls, display_hour: int, minute: int) -> 'ClockTime':
        """Build from a 1-12 display hour (12 and 0 both map to internal 0)."""
        return cls(display_hour % 12, minute)

    @property
    def display_hour(self) -> int:
        return 12 if self.hour == 0 else self.hour

    def __str__(self) -> str:
        return f"{self.display_hour:02d}:{self.minute:02d}"


@dataclass(frozen=True)
class HandAngles:
    """Hand positions in degrees, clockwise from 12 o'clock."""
    theta_h: float
    theta_m: float

    def __post_init__(self):
        for name in ('theta_h', 'theta_m'):
            value = getattr(self, name)
            if not 0.0 <= value < 360.0:
                raise ValueError(f"{name} must be in [0, 360), got {value}")


@dataclass(frozen=True)
class ParsedAnswer:
    """Exactly one of Time(ClockTime), NoClock or Unparseable(raw)."""
    kind: AnswerKind
    time: Optional[ClockTime] = None
    raw: Optional[str] = None

    def __post_init__(self):
        if self.kind == AnswerKind.TIME and self.time is None:
            raise ValueError("Time answers must carry a ClockTime")
        if self.kind != AnswerKind.TIME and self.time is not None:
            raise ValueError(f"{self.kind.value} answers cannot carry a ClockTime")
        if self.kind == AnswerKind.UNPARSEABLE and self.raw is None:
            raise ValueError("Unparseable answers must preserve the raw text")

    @classmethod
    def of_time(cls, time: ClockTime) -> 'ParsedAnswer':
        return cls(AnswerKind.TIME, time=time)

    @classmethod
    def no_clock(cls) -> 'ParsedAnswer':
        return cls(AnswerKind.NO_CLOCK)

    @classmethod
    def unparseable(cls, raw: str) -> 'ParsedAnswer':
        return cls(AnswerKind.UNPARSEABLE, raw=raw)

    @property
    def is_time(self) -> bool:
        return self.kind == AnswerKind.TIME

    def __str__(self) -> str:
        if self.kind == AnswerKind.TIME:
            return str(self.time)
        if self.kind == AnswerKind.NO_CLOCK:
            return NO_CLOCK_TEXT
        return self.raw
