"""
Clock Render Service
Deterministic analog clock rendering, style sampling and synthetic corpus generation.
"""

import functools
import logging
import math
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from PIL import Image, ImageDraw, ImageFont, ImageOps

from ticktock.models.annotation import (
    AnnotationRecord, ClockType, DesignLabel, Environment, Split, Transformation,
)
from ticktock.models.clock import MINUTES_PER_CYCLE, ClockTime
from ticktock.models.rendering import (
    DEFAULT_STYLE, MIN_NUMERAL_RADIUS_PX, PADDING_PX, RGB, ClockStyle, HandSpec, NumeralStyle,
    Occluder, Palette, RenderedSample, TickStyle, TimeDistribution,
)
from ticktock.services.clock_service import hands_from_time
from ticktock.services.edge_service import DEFAULT_HIGH_THRESHOLD, DEFAULT_LOW_THRESHOLD, export_edge_map
from ticktock.services.export_service import png_bytes
from ticktock.services.prompt_service import compose_style_prompt
from ticktock.utils import keyed_generator, log_execution_time, ordered_map
from ticktock.utils.errors import ValidationError

logger = logging.getLogger(__name__)

ROMAN_NUMERALS = ['XII', 'I', 'II', 'III', 'IV', 'V', 'VI', 'VII', 'VIII', 'IX', 'X', 'XI']
ARABIC_NUMERALS = ['12'] + [str(hour) for hour in range(1, 12)]

SYNTHETIC_SOURCE = 'synclock'
MIN_HAND_CONTRAST = 0.3
MIN_NUMERAL_CONTRAST = 0.2

DESIGN_BY_NUMERALS = {
    NumeralStyle.ARABIC: DesignLabel.ARABIC,
    NumeralStyle.ROMAN: DesignLabel.ROMAN,
    NumeralStyle.NONE: DesignLabel.NO_NUMERALS,
}

# Sampling ranges
FACE_RADIUS_RANGE = (96, 160)
HOUR_LENGTH_RANGE = (0.35, 0.55)
MINUTE_LENGTH_RANGE = (0.65, 0.9)
MIN_LENGTH_GAP = 0.15
MINUTE_WIDTH_RANGE = (2, 5)
HOUR_EXTRA_WIDTH_RANGE = (2, 6)
ROTATION_PROBABILITY = 0.3
ROTATION_RANGE = (-30.0, 30.0)
MIRROR_PROBABILITY = 0.1
OCCLUDER_PROBABILITY = 0.1


def luminance(color: RGB) -> float:
    """Rec. 709 luma of an 8-bit RGB color, in [0, 1]."""
    r, g, b = color
    return (0.2126 * r + 0.7152 * g + 0.0722 * b) / 255.0


def _unit(theta_deg: float) -> Tuple[float, float]:
    """Screen-space unit vector for a clockwise-from-up angle (y grows downward)."""
    theta = math.radians(theta_deg)
    return math.sin(theta), -math.cos(theta)


def _hand_polygon(center: float, theta_deg: float, length: float, width: float) -> List[Tuple[float, float]]:
    ux, uy = _unit(theta_deg)
    px, py = -uy * width / 2, ux * width / 2
    tip_x, tip_y = center + ux * length, center + uy * length
    return [
        (center + px, center + py),
        (tip_x + px, tip_y + py),
        (tip_x - px, tip_y - py),
        (center - px, center - py),
    ]


def _numeral_font_px(style: ClockStyle) -> int:
    return max(10, int(round(style.face_radius_px * 0.16)))


def render(label: ClockTime, style: ClockStyle = DEFAULT_STYLE, seed: int = 0) -> RenderedSample:
    """Draw face, ticks, numerals, hour hand, then minute hand; 12 o'clock points up before rotation/mirror."""
    radius = style.face_radius_px
    if style.numeral_style != NumeralStyle.NONE and radius < MIN_NUMERAL_RADIUS_PX:
        raise ValidationError(
            f"face_radius_px {radius} is too small to place numerals (minimum {MIN_NUMERAL_RADIUS_PX})",
            'face_radius_px')

    size = style.image_size
    c = style.center
    palette = style.palette
    image = Image.new('RGB', (size, size), palette.background)
    draw = ImageDraw.Draw(image)
    draw.fontmode = '1'

    rim = max(2, radius // 40)
    draw.ellipse([c - radius, c - radius, c + radius, c + radius], fill=palette.face,
                 outline=palette.numerals, width=rim)

    tick_outer = radius - rim - 2
    if style.tick_style != TickStyle.NONE:
        step = 1 if style.tick_style == TickStyle.ALL_60 else 5
        for mark in range(0, 60, step):
            major = mark % 5 == 0
            length = radius * (0.08 if major else 0.04)
            width = max(2, radius // 40) if major else 1
            ux, uy = _unit(6 * mark)
            draw.line([(c + ux * (tick_outer - length), c + uy * (tick_outer - length)),
                       (c + ux * tick_outer, c + uy * tick_outer)], fill=palette.numerals, width=width)

    if style.numeral_style != NumeralStyle.NONE:
        font_px = _numeral_font_px(style)
        font = ImageFont.load_default(size=font_px)
        labels = ARABIC_NUMERALS if style.numeral_style == NumeralStyle.ARABIC else ROMAN_NUMERALS
        numeral_radius = tick_outer - radius * 0.08 - 2 - font_px * 0.75
        for hour, text in enumerate(labels):
            ux, uy = _unit(30 * hour)
            draw.text((c + ux * numeral_radius, c + uy * numeral_radius), text,
                      fill=palette.numerals, font=font, anchor='mm')

    angles = hands_from_time(label)
    draw.polygon(_hand_polygon(c, angles.theta_h, style.hour_length_px, style.hour_hand.width_px),
                 fill=palette.hands)
    draw.polygon(_hand_polygon(c, angles.theta_m, style.minute_length_px, style.minute_hand.width_px),
                 fill=palette.hands)
    cap = style.hour_hand.width_px * 0.6 + 1
    draw.ellipse([c - cap, c - cap, c + cap, c + cap], fill=palette.hands)

    if style.occluder is not None:
        draw.rectangle(list(style.occluder.box), fill=style.occluder.color)

    if style.rotation_deg:
        image = image.rotate(style.rotation_deg, resample=Image.Resampling.NEAREST,
                             fillcolor=palette.background)
    if style.mirror:
        image = ImageOps.mirror(image)

    return RenderedSample(image=image, label=label, style=style, seed=seed)


def _random_color(rng: np.random.Generator) -> RGB:
    return tuple(int(v) for v in rng.integers(0, 256, size=3))


def _sample_palette(rng: np.random.Generator) -> Palette:
    face = _random_color(rng)
    hands = None
    for _ in range(1000):
        candidate = _random_color(rng)
        if abs(luminance(candidate) - luminance(face)) >= MIN_HAND_CONTRAST:
            hands = candidate
            break
    if hands is None:
        hands = (0, 0, 0) if luminance(face) >= 0.5 else (255, 255, 255)

    numerals = None
    for _ in range(1000):
        candidate = _random_color(rng)
        if candidate != hands and abs(luminance(candidate) - luminance(face)) >= MIN_NUMERAL_CONTRAST:
            numerals = candidate
            break
    if numerals is None:
        numerals = (1, 1, 1) if hands != (1, 1, 1) else (254, 254, 254)

    background = _random_color(rng)
    while background in (hands, face):
        background = _random_color(rng)
    return Palette(face=face, hands=hands, numerals=numerals, background=background)


def _sample_occluder(rng: np.random.Generator, radius: int, minute_reach: float, palette: Palette) -> Occluder:
    """Corner rectangle whose nearest point is beyond the minute hand's reach."""
    c = radius + PADDING_PX
    size = 2 * c + 1
    inner = max(minute_reach + 4, 0.92 * radius) / math.sqrt(2)
    offset = int(math.ceil(inner))
    sx, sy = (int(v) for v in rng.choice([-1, 1], size=2))
    x_near, y_near = c + sx * offset, c + sy * offset
    x_far = size - 1 if sx > 0 else 0
    y_far = size - 1 if sy > 0 else 0
    color = _random_color(rng)
    while color == palette.hands:
        color = _random_color(rng)
    return Occluder(box=(min(x_near, x_far), min(y_near, y_far), max(x_near, x_far), max(y_near, y_far)),
                    color=color)


def sample_style(rng_seed: int, index: int = 0) -> ClockStyle:
    """Draw a style deterministically from (rng_seed, index)."""
    rng = keyed_generator(rng_seed, 'style', index)

    radius = int(rng.integers(FACE_RADIUS_RANGE[0], FACE_RADIUS_RANGE[1] + 1))
    numeral_style = list(NumeralStyle)[int(rng.integers(3))]
    tick_style = list(TickStyle)[int(rng.integers(3))]

    hour_length = float(rng.uniform(*HOUR_LENGTH_RANGE))
    minute_low = max(MINUTE_LENGTH_RANGE[0], hour_length + MIN_LENGTH_GAP)
    minute_length = float(rng.uniform(minute_low, MINUTE_LENGTH_RANGE[1]))
    minute_width = int(rng.integers(MINUTE_WIDTH_RANGE[0], MINUTE_WIDTH_RANGE[1] + 1))
    hour_width = minute_width + int(rng.integers(HOUR_EXTRA_WIDTH_RANGE[0], HOUR_EXTRA_WIDTH_RANGE[1] + 1))

    palette = _sample_palette(rng)

    rotation = 0.0
    if rng.random() < ROTATION_PROBABILITY:
        rotation = round(float(rng.uniform(*ROTATION_RANGE)), 1)
    mirror = bool(rng.random() < MIRROR_PROBABILITY)

    occluder = None
    if rng.random() < OCCLUDER_PROBABILITY:
        minute_reach = math.hypot(minute_length * radius, minute_width / 2)
        occluder = _sample_occluder(rng, radius, minute_reach, palette)

    return ClockStyle(
        face_radius_px=radius,
        numeral_style=numeral_style,
        tick_style=tick_style,
        hour_hand=HandSpec(round(hour_length, 4), hour_width),
        minute_hand=HandSpec(round(minute_length, 4), minute_width),
        palette=palette,
        rotation_deg=rotation,
        mirror=mirror,
        occluder=occluder,
    )


def sample_labels(n: int, distribution: TimeDistribution = TimeDistribution.UNIFORM, seed: int = 0,
                  histogram: Optional[Sequence[float]] = None) -> List[ClockTime]:
    """Per-index keyed label draws; stratified mode cycles through all 720 times in order."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}", 'n')
    distribution = TimeDistribution(distribution)

    if distribution == TimeDistribution.STRATIFIED:
        return [ClockTime.from_total_minutes(i % MINUTES_PER_CYCLE) for i in range(n)]

    if distribution == TimeDistribution.HISTOGRAM:
        if histogram is None:
            raise ValidationError("histogram distribution requires cell weights", 'histogram')
        weights = np.asarray(histogram, dtype=np.float64).reshape(-1)
        if weights.size != MINUTES_PER_CYCLE or np.any(weights < 0) or weights.sum() <= 0:
            raise ValidationError("histogram must hold 720 non-negative weights with a positive sum", 'histogram')
        cumulative = np.cumsum(weights / weights.sum())
        labels = []
        for i in range(n):
            u = keyed_generator(seed, 'label', i).random()
            cell = int(np.searchsorted(cumulative, u, side='right'))
            labels.append(ClockTime.from_total_minutes(min(cell, MINUTES_PER_CYCLE - 1)))
        return labels

    return [ClockTime.from_total_minutes(int(keyed_generator(seed, 'label', i).integers(MINUTES_PER_CYCLE)))
            for i in range(n)]


def transformation_for(style: ClockStyle) -> Transformation:
    if style.mirror:
        return Transformation.FLIPPED
    if style.occluder is not None:
        return Transformation.PARTIAL
    return Transformation.NORMAL


def design_for(style: ClockStyle) -> FrozenSet[DesignLabel]:
    return frozenset({DESIGN_BY_NUMERALS[style.numeral_style]})


def _render_index(task: Tuple[int, ClockTime, ClockStyle], style_seed: int, edge_maps: bool,
                  low_threshold: int, high_threshold: int) -> Tuple[bytes, Optional[bytes]]:
    index, label, style = task
    sample = render(label, style, style_seed)
    edges = None
    if edge_maps:
        edges = png_bytes(export_edge_map(sample, low_threshold, high_threshold))
    return png_bytes(sample.image), edges


class ClockRenderService:
    """Generates synthetic clock corpora with ground-truth labels."""

    def __init__(self, style_seed: int = 0, label_seed: Optional[int] = None,
                 sample_styles: bool = True):
        self.style_seed = style_seed
        self.label_seed = style_seed if label_seed is None else label_seed
        self.sample_styles = sample_styles
        logger.info(f"Clock render service initialized (style_seed={style_seed}, "
                    f"label_seed={self.label_seed}, sampled_styles={sample_styles})")

    def style_for(self, index: int) -> ClockStyle:
        return sample_style(self.style_seed, index) if self.sample_styles else DEFAULT_STYLE

    @log_execution_time
    def generate_corpus(self, n: int, session, distribution: TimeDistribution = TimeDistribution.UNIFORM,
                        histogram: Optional[Sequence[float]] = None, edge_maps: bool = False,
                        low_threshold: int = DEFAULT_LOW_THRESHOLD,
                        high_threshold: int = DEFAULT_HIGH_THRESHOLD,
                        jobs: int = 1) -> List[AnnotationRecord]:
        """Render n samples into the output session with labels and style sidecars."""
        distribution = TimeDistribution(distribution)
        labels = sample_labels(n, distribution, self.label_seed, histogram)
        width = max(6, len(str(n - 1)))
        tasks = [(index, label, self.style_for(index)) for index, label in enumerate(labels)]

        worker = functools.partial(_render_index, style_seed=self.style_seed, edge_maps=edge_maps,
                                   low_threshold=low_threshold, high_threshold=high_threshold)
        outputs = ordered_map(worker, tasks, jobs=jobs, chunksize=8)

        records: List[AnnotationRecord] = []
        styles: List[Dict] = []
        prompts: List[Dict] = []
        for (index, label, style), (image_bytes, edge_bytes) in zip(tasks, outputs):
            stem = f"{index:0{width}d}"
            record_id = f"{SYNTHETIC_SOURCE}-{stem}"
            image_path = f"images/{stem}.png"
            session.write_bytes(image_path, image_bytes)
            records.append(AnnotationRecord(
                id=record_id, image_path=image_path, truth=label,
                clock_type=ClockType.GRAPHIC, environment=Environment.UNKNOWN,
                transformation=transformation_for(style), source=SYNTHETIC_SOURCE,
                split=Split.TRAIN, design=design_for(style),
            ))
            styles.append({'id': record_id, 'index': index, 'seed': self.style_seed, 'style': style.to_dict()})
            if edge_bytes is not None:
                edge_path = f"edges/{stem}.png"
                session.write_bytes(edge_path, edge_bytes)
                prompts.append({'id': record_id, 'edge_path': edge_path,
                                'prompt': compose_style_prompt(self.style_seed, index)})

        session.write_jsonl('labels.jsonl', (record.to_dict() for record in records))
        session.write_jsonl('styles.jsonl', styles)
        if edge_maps:
            session.write_jsonl('style_prompts.jsonl', prompts)
        logger.info(f"Generated {len(records)} samples ({distribution.value} labels)")
        return records
