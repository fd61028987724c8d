"""
Clock Geometry Service
Hand angles, the hand-swap transform, time distances and the HH:MM codec.
"""

import re
from typing import Union

from ticktock.models.clock import (
    MINUTES_PER_CYCLE, NO_CLOCK_TEXT, ClockTime, DistanceKernel,
    HandAngles, ParseMode, ParsedAnswer,
)

_STRICT_TIME = re.compile(r'^(0[1-9]|1[0-2]):([0-5][0-9])$')
_LENIENT_TIME = re.compile(r'(?<!\d)(\d{1,2}):(\d{1,2})(?!\d)')
_LENIENT_NO_CLOCK = re.compile(r'\bno\s+clock\b', re.IGNORECASE)


def hands_from_time(t: ClockTime) -> HandAngles:
    """theta_h = 30h + m/2 and theta_m = 6m, both in [0, 360)."""
    theta_h = (30 * t.hour + t.minute / 2) % 360
    theta_m = float(6 * t.minute)
    return HandAngles(theta_h=float(theta_h), theta_m=theta_m)


def swap_angles(a: HandAngles) -> HandAngles:
    return HandAngles(theta_h=a.theta_m, theta_m=a.theta_h)


def time_from_hands(a: HandAngles) -> ClockTime:
    """Re-discretize hand angles: nearest minute mark, then the hour the hour hand has passed.

    The hour is taken from theta_h after removing the minute's contribution,
    so exact angles produced by hands_from_time always round-trip.
    """
    minute = _round_half_up(a.theta_m / 6) % 60
    hour = _round_half_up((a.theta_h - minute / 2) / 30) % 12
    return ClockTime(int(hour), int(minute))


def swap_hands(t: ClockTime) -> ClockTime:
    """Read the clock with hour and minute hands exchanging roles.

    h_new = floor(theta_m / 30) and m_new = round(theta_h / 6) mod 60 with
    halves rounded away from zero. Integer arithmetic keeps this exact:
    theta_h / 6 = (60h + m) / 12.
    """
    new_hour = (6 * t.minute) // 30
    new_minute = ((60 * t.hour + t.minute + 6) // 12) % 60
    return ClockTime(new_hour, new_minute)


def circular_distance_minutes(a: ClockTime, b: ClockTime) -> int:
    d = abs(a.total_minutes - b.total_minutes)
    return min(d, MINUTES_PER_CYCLE - d)


def circular_minute_component(a: ClockTime, b: ClockTime) -> int:
    d = abs(a.minute - b.minute)
    return min(d, 60 - d)


def circular_hour_component(a: ClockTime, b: ClockTime) -> int:
    d = abs(a.hour - b.hour)
    return min(d, 12 - d)


def linear_distance_minutes(a: ClockTime, b: ClockTime) -> int:
    return abs(a.total_minutes - b.total_minutes)


def linear_minute_component(a: ClockTime, b: ClockTime) -> int:
    return abs(a.minute - b.minute)


def linear_hour_component(a: ClockTime, b: ClockTime) -> int:
    return abs(a.hour - b.hour)


class TimeDistance:
    """Pluggable distance kernel: total, minute and hour components plus their worst cases."""

    def __init__(self, kernel: Union[DistanceKernel, str] = DistanceKernel.CIRCULAR):
        self.kernel = DistanceKernel(kernel)
        if self.kernel == DistanceKernel.CIRCULAR:
            self.total = circular_distance_minutes
            self.minute = circular_minute_component
            self.hour = circular_hour_component
            self.worst_total, self.worst_minute, self.worst_hour = 360, 30, 6
        else:
            self.total = linear_distance_minutes
            self.minute = linear_minute_component
            self.hour = linear_hour_component
            self.worst_total, self.worst_minute, self.worst_hour = 719, 59, 11


def format_time(t: ClockTime) -> str:
    return str(t)


def parse_time(text: str) -> ClockTime:
    """Strictly parse canonical HH:MM text; raises ValueError on anything else."""
    match = _STRICT_TIME.match(text.strip()) if isinstance(text, str) else None
    if not match:
        raise ValueError(f"Not a canonical HH:MM time (hour 01-12, minute 00-59): {text!r}")
    return ClockTime.from_display(int(match.group(1)), int(match.group(2)))


def parse_answer(raw: str, mode: Union[ParseMode, str] = ParseMode.STRICT) -> ParsedAnswer:
    """Parse a model answer into Time, NoClock or Unparseable. Total: never raises."""
    mode = ParseMode(mode)
    if raw is None:
        return ParsedAnswer.unparseable('')
    text = raw.strip()

    if mode == ParseMode.STRICT:
        if text == NO_CLOCK_TEXT:
            return ParsedAnswer.no_clock()
        match = _STRICT_TIME.match(text)
        if match:
            return ParsedAnswer.of_time(ClockTime.from_display(int(match.group(1)), int(match.group(2))))
        return ParsedAnswer.unparseable(raw)

    # Lenient: earliest valid time or "no clock" phrase wins
    time_match = None
    for candidate in _LENIENT_TIME.finditer(text):
        hour, minute = int(candidate.group(1)), int(candidate.group(2))
        if 0 <= hour <= 12 and 0 <= minute <= 59:
            time_match = (candidate.start(), ClockTime.from_display(hour, minute))
            break
    no_clock_match = _LENIENT_NO_CLOCK.search(text)

    if time_match and (not no_clock_match or time_match[0] < no_clock_match.start()):
        return ParsedAnswer.of_time(time_match[1])
    if no_clock_match:
        return ParsedAnswer.no_clock()
    return ParsedAnswer.unparseable(raw)


def _round_half_up(value: float) -> int:
    """Nearest integer, ties away from zero."""
    return int(value + 0.5) if value >= 0 else -int(-value + 0.5)
