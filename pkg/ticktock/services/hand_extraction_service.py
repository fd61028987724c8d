"""
Hand Extraction Service
Reads the time back from a rendered clock whose style is known.
"""

import logging
import math
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np
from PIL import Image

from ticktock.models.annotation import AnnotationRecord
from ticktock.models.clock import ClockTime, HandAngles
from ticktock.models.rendering import ClockStyle
from ticktock.services.clock_service import time_from_hands
from ticktock.utils import ordered_map

logger = logging.getLogger(__name__)

MIN_HOUR_PIXELS = 3


def _direction(dx: np.ndarray, dy: np.ndarray) -> float:
    """Clockwise-from-up angle of the summed offset vector, in degrees."""
    return _wrap(math.degrees(math.atan2(float(dx.sum()), float(-dy.sum()))))


def _wrap(angle: float) -> float:
    angle %= 360.0
    return 0.0 if angle >= 360.0 else angle


def hand_pixels(image: Image.Image, style: ClockStyle) -> Tuple[np.ndarray, np.ndarray]:
    """Offsets from the face center of every pixel painted in the hands color."""
    rgb = np.asarray(image.convert('RGB'))
    mask = np.all(rgb == np.array(style.palette.hands, dtype=rgb.dtype), axis=-1)
    ys, xs = np.nonzero(mask)
    c = style.center
    return xs.astype(np.float64) - c, ys.astype(np.float64) - c


def extract_screen_angles(image: Image.Image, style: ClockStyle) -> Tuple[float, float]:
    """Screen-space (hour, minute) hand angles.

    The minute angle comes from hand pixels beyond the hour hand's reach.
    The hour angle comes from hand pixels inside the hour hand's reach once
    the minute hand's stroke is removed; when nothing is left the hands
    overlap and the minute angle is used.
    """
    dx, dy = hand_pixels(image, style)
    r = np.hypot(dx, dy)

    minute_band = (r >= style.hour_reach_px + 2) & (r <= style.minute_reach_px + 2)
    if not np.any(minute_band):
        raise ValueError("No minute hand pixels found")
    theta_m = _direction(dx[minute_band], dy[minute_band])

    ux, uy = math.sin(math.radians(theta_m)), -math.cos(math.radians(theta_m))
    along = dx * ux + dy * uy
    across = np.abs(dx * uy - dy * ux)
    on_minute_stroke = (along >= -1) & (across <= style.minute_hand.width_px / 2 + 1.5)

    inner = max(style.hour_hand.width_px, style.minute_hand.width_px) + 2
    hour_band = (r >= inner) & (r <= style.hour_reach_px + 1.5) & ~on_minute_stroke
    if np.count_nonzero(hour_band) >= MIN_HOUR_PIXELS:
        theta_h = _direction(dx[hour_band], dy[hour_band])
    else:
        theta_h = theta_m
    return theta_h, theta_m


def extract_angles(image: Image.Image, style: ClockStyle) -> HandAngles:
    """Hand angles in upright clock coordinates (mirror and rotation undone)."""
    screen_h, screen_m = extract_screen_angles(image, style)

    def upright(angle: float) -> float:
        if style.mirror:
            angle = -angle
        return _wrap(angle + style.rotation_deg)

    return HandAngles(theta_h=upright(screen_h), theta_m=upright(screen_m))


def extract_label(image: Image.Image, style: ClockStyle) -> ClockTime:
    """Invert hand angles to the nearest minute mark and the matching hour."""
    return time_from_hands(extract_angles(image, style))


def _verify_item(task: Tuple[str, str, ClockStyle, ClockTime]) -> Dict[str, str]:
    record_id, image_path, style, truth = task
    with Image.open(image_path) as image:
        rgb = image.convert('RGB')
    try:
        extracted = str(extract_label(rgb, style))
    except ValueError:
        extracted = None
    if extracted == str(truth):
        return {}
    return {'id': record_id, 'truth': str(truth), 'extracted': extracted}


def verify_corpus(root: Path, records: Sequence[AnnotationRecord], styles: Sequence[ClockStyle],
                  jobs: int = 1) -> List[Dict[str, str]]:
    """Re-read every rendered label; returns the records whose label does not round-trip."""
    tasks = [(record.id, str(Path(root) / record.image_path), style, record.truth)
             for record, style in zip(records, styles)]
    failures = [row for row in ordered_map(_verify_item, tasks, jobs=jobs, chunksize=8) if row]
    if failures:
        logger.warning(f"{len(failures)} of {len(tasks)} rendered labels did not round-trip")
    else:
        logger.info(f"All {len(tasks)} rendered labels round-trip")
    return failures
