import os
import sys
from dataclasses import replace

import cv2
import numpy as np
import pytest
from PIL import Image, ImageOps

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from ticktock.models.clock import ClockTime
from ticktock.models.rendering import DEFAULT_STYLE
from ticktock.services.edge_service import edge_fraction, export_edge_map, validate_thresholds
from ticktock.services.render_service import render
from ticktock.utils.errors import ValidationError

pytestmark = [pytest.mark.unit, pytest.mark.render]


class TestExportEdgeMap:
    """Test Canny edge map export"""

    def test_single_channel_binary_same_size(self):
        sample = render(ClockTime(10, 10))
        edges = export_edge_map(sample)
        assert edges.mode == 'L'
        assert edges.size == sample.image.size
        assert set(np.unique(np.asarray(edges)).tolist()) <= {0, 255}
        assert 0.0 < edge_fraction(edges) < 0.3

    def test_blank_image_has_no_edges(self):
        blank = Image.new('RGB', (64, 64), (120, 80, 40))
        assert edge_fraction(export_edge_map(blank)) == 0.0

    def test_deterministic(self):
        sample = render(ClockTime(4, 44))
        assert np.array_equal(np.asarray(export_edge_map(sample)), np.asarray(export_edge_map(sample)))

    def test_higher_thresholds_keep_fewer_edges(self):
        sample = render(ClockTime(8, 20))
        assert edge_fraction(export_edge_map(sample, 200, 250)) <= edge_fraction(export_edge_map(sample, 20, 60))

    def test_mirror_symmetry(self):
        """Edges of a mirrored clock lie within two pixels of the mirrored edges"""
        t = ClockTime(2, 37)
        mirrored = np.asarray(export_edge_map(render(t, replace(DEFAULT_STYLE, mirror=True)))) > 0
        reflected = np.asarray(ImageOps.mirror(export_edge_map(render(t)))) > 0
        near = cv2.dilate(reflected.astype(np.uint8), np.ones((5, 5), np.uint8)) > 0
        assert np.mean(near[mirrored]) >= 0.98

    @pytest.mark.parametrize('low,high', [(0, 150), (150, 50), (100, 100), (50, 256)])
    def test_invalid_thresholds(self, low, high):
        with pytest.raises(ValidationError):
            validate_thresholds(low, high)
