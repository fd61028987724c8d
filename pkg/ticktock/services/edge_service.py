"""
Edge Map Service
Canny edge maps of rendered clocks, used as structural conditions for external synthesis.
"""

import logging
from typing import Union

import cv2
import numpy as np
from PIL import Image

from ticktock.models.rendering import RenderedSample
from ticktock.utils.errors import ValidationError

logger = logging.getLogger(__name__)

DEFAULT_LOW_THRESHOLD = 50
DEFAULT_HIGH_THRESHOLD = 150
GAUSSIAN_SIGMA = 1.4


def validate_thresholds(low_threshold: int, high_threshold: int):
    if not 0 < low_threshold < high_threshold < 256:
        raise ValidationError(
            f"Canny thresholds must satisfy 0 < low < high < 256, got low={low_threshold}, high={high_threshold}",
            'thresholds')


def export_edge_map(sample: Union[RenderedSample, Image.Image],
                    low_threshold: int = DEFAULT_LOW_THRESHOLD,
                    high_threshold: int = DEFAULT_HIGH_THRESHOLD) -> Image.Image:
    """Gaussian smoothing (sigma 1.4) then Canny with hysteresis; single-channel, same size as input."""
    validate_thresholds(low_threshold, high_threshold)
    image = sample.image if isinstance(sample, RenderedSample) else sample

    rgb = np.asarray(image.convert('RGB'))
    gray = cv2.cvtColor(rgb, cv2.COLOR_RGB2GRAY)
    blurred = cv2.GaussianBlur(gray, (0, 0), sigmaX=GAUSSIAN_SIGMA, sigmaY=GAUSSIAN_SIGMA)
    edges = cv2.Canny(blurred, low_threshold, high_threshold, L2gradient=True)
    return Image.fromarray(edges)


def edge_fraction(edge_map: Image.Image) -> float:
    edges = np.asarray(edge_map)
    return float(np.count_nonzero(edges)) / edges.size
