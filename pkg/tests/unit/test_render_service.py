import json
import os
from dataclasses import replace
import sys
from collections import Counter

import numpy as np
import pytest
from PIL import ImageOps

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from ticktock.models.annotation import DesignLabel, Transformation
from ticktock.models.clock import ClockTime
from ticktock.models.rendering import (
    DEFAULT_STYLE, ClockStyle, HandSpec, NumeralStyle, Occluder, Palette, TimeDistribution,
)
from ticktock.services.export_service import OutputSession, RunMetadata, png_bytes
from ticktock.services.hand_extraction_service import extract_label, verify_corpus
from ticktock.services.render_service import (
    ClockRenderService, design_for, render, sample_labels, sample_style, transformation_for,
)
from ticktock.utils.errors import ValidationError
from tests.conftest import ALL_TIMES, DEFAULT_CENTER, DEFAULT_IMAGE_SIZE

pytestmark = [pytest.mark.unit, pytest.mark.render]

WHITE, BLACK, NAVY = (255, 255, 255), (0, 0, 0), (28, 40, 72)


def _session(path):
    return OutputSession(path, RunMetadata(tool_version='test', command='render', reproducible=True))


class TestRender:
    """Test deterministic clock rendering"""

    def test_three_oclock_pixels(self):
        image = render(ClockTime(3, 0)).image
        c = DEFAULT_CENTER
        assert image.size == (DEFAULT_IMAGE_SIZE, DEFAULT_IMAGE_SIZE)
        assert image.getpixel((c, c)) == BLACK
        assert image.getpixel((c + 50, c)) == BLACK      # hour hand points right
        assert image.getpixel((c, c - 80)) == BLACK      # minute hand points up
        assert image.getpixel((c - 50, c)) == WHITE
        assert image.getpixel((c, c + 50)) == WHITE
        assert image.getpixel((0, 0)) == NAVY

    def test_byte_identical_reruns(self):
        first = png_bytes(render(ClockTime(7, 41)).image)
        second = png_bytes(render(ClockTime(7, 41)).image)
        assert first == second

    def test_mirror_is_exact_reflection(self):
        style = sample_style(3, 0)
        plain = replace(style, mirror=False)
        mirrored = replace(style, mirror=True)
        t = ClockTime(2, 10)
        expected = np.asarray(ImageOps.mirror(render(t, plain).image))
        assert np.array_equal(np.asarray(render(t, mirrored).image), expected)

    def test_numerals_need_room(self):
        style = ClockStyle(face_radius_px=40, numeral_style=NumeralStyle.ARABIC)
        with pytest.raises(ValidationError):
            render(ClockTime(1, 0), style)
        small = ClockStyle(face_radius_px=40, numeral_style=NumeralStyle.NONE)
        assert render(ClockTime(1, 0), small).image.size == (97, 97)


@pytest.mark.slow
class TestRenderFidelity:
    """Test that labels can be read back from pixels"""

    def test_default_style_all_times(self):
        for t in ALL_TIMES:
            assert extract_label(render(t).image, DEFAULT_STYLE) == t, str(t)

    def test_sampled_styles(self):
        labels = sample_labels(400, seed=5)
        hits = 0
        for index, label in enumerate(labels):
            style = sample_style(5, index)
            try:
                hits += extract_label(render(label, style).image, style) == label
            except ValueError:
                pass
        assert hits / len(labels) >= 0.99


class TestClockStyle:
    """Test style invariants"""

    def test_default_geometry(self):
        assert DEFAULT_STYLE.image_size == DEFAULT_IMAGE_SIZE
        assert DEFAULT_STYLE.center == DEFAULT_CENTER
        assert DEFAULT_STYLE.hour_length_px == pytest.approx(56.0)
        assert DEFAULT_STYLE.minute_length_px == pytest.approx(89.6)

    def test_minute_hand_must_be_longer(self):
        with pytest.raises(ValidationError):
            ClockStyle(hour_hand=HandSpec(0.6, 10), minute_hand=HandSpec(0.5, 4))

    def test_hour_hand_must_be_thicker(self):
        with pytest.raises(ValidationError):
            ClockStyle(hour_hand=HandSpec(0.5, 3), minute_hand=HandSpec(0.8, 4))

    def test_hands_color_must_be_distinct(self):
        with pytest.raises(ValidationError):
            Palette(face=(0, 0, 0), hands=(0, 0, 0))

    def test_occluder_cannot_cover_center(self):
        with pytest.raises(ValidationError):
            ClockStyle(occluder=Occluder(box=(100, 100, 140, 140), color=(200, 0, 0)))

    def test_dict_round_trip(self):
        style = sample_style(11, 4)
        assert ClockStyle.from_dict(json.loads(json.dumps(style.to_dict()))) == style


class TestSampleStyle:
    """Test style sampling"""

    def test_deterministic(self):
        assert sample_style(1, 7) == sample_style(1, 7)
        assert sample_style(1, 7) != sample_style(1, 8)

    def test_sampled_ranges(self):
        for index in range(300):
            style = sample_style(2, index)
            assert 96 <= style.face_radius_px <= 160
            assert style.minute_hand.length_fraction >= style.hour_hand.length_fraction + 0.15 - 1e-3
            assert 2 <= style.minute_hand.width_px <= 5
            assert 2 <= style.hour_hand.width_px - style.minute_hand.width_px <= 6
            assert -30.0 <= style.rotation_deg <= 30.0

    def test_numeral_style_frequencies(self):
        counts = Counter(sample_style(0, index).numeral_style for index in range(3000))
        for numeral_style in NumeralStyle:
            assert counts[numeral_style] / 3000 == pytest.approx(1 / 3, abs=0.03)

    def test_transformation_and_design_labels(self):
        mirrored = ClockStyle(mirror=True)
        assert transformation_for(mirrored) == Transformation.FLIPPED
        assert transformation_for(DEFAULT_STYLE) == Transformation.NORMAL
        occluded = ClockStyle(occluder=Occluder(box=(0, 0, 20, 20), color=(200, 0, 0)))
        assert transformation_for(occluded) == Transformation.PARTIAL
        assert design_for(ClockStyle(numeral_style=NumeralStyle.ROMAN)) == frozenset({DesignLabel.ROMAN})


class TestSampleLabels:
    """Test label distributions"""

    def test_uniform_is_keyed(self):
        assert sample_labels(50, seed=3) == sample_labels(50, seed=3)
        assert sample_labels(50, seed=3)[:10] == sample_labels(10, seed=3)

    def test_uniform_hour_marginal_is_flat(self):
        labels = sample_labels(12_000, seed=1)
        counts = np.bincount([t.hour for t in labels], minlength=12)
        assert 100 * counts.std() / counts.mean() < 6.0

    def test_stratified_covers_cycle(self):
        assert sample_labels(720, TimeDistribution.STRATIFIED) == ALL_TIMES

    def test_histogram_single_cell(self):
        weights = np.zeros(720)
        weights[ClockTime(10, 10).total_minutes] = 1.0
        labels = sample_labels(20, TimeDistribution.HISTOGRAM, seed=0, histogram=weights)
        assert set(labels) == {ClockTime(10, 10)}

    def test_histogram_validation(self):
        with pytest.raises(ValidationError):
            sample_labels(5, TimeDistribution.HISTOGRAM)
        with pytest.raises(ValidationError):
            sample_labels(5, TimeDistribution.HISTOGRAM, histogram=np.ones(719))
        with pytest.raises(ValidationError):
            sample_labels(0)


class TestGenerateCorpus:
    """Test corpus generation"""

    def test_outputs(self, tmp_path):
        service = ClockRenderService(style_seed=4, sample_styles=False)
        with _session(tmp_path / 'corpus') as session:
            records = service.generate_corpus(12, session, edge_maps=True)

        out = tmp_path / 'corpus'
        assert [r.id for r in records][:2] == ['synclock-000000', 'synclock-000001']
        assert (out / 'images' / '000011.png').exists()
        assert (out / 'edges' / '000011.png').exists()
        labels = [json.loads(line) for line in (out / 'labels.jsonl').read_text().splitlines()]
        assert [row['truth'] for row in labels] == [str(r.truth) for r in records]
        assert len((out / 'style_prompts.jsonl').read_text().splitlines()) == 12
        assert verify_corpus(out, records, [service.style_for(i) for i in range(12)]) == []

    def test_regeneration_is_byte_identical(self, tmp_path):
        for name in ('a', 'b'):
            with _session(tmp_path / name) as session:
                ClockRenderService(style_seed=8).generate_corpus(6, session)
        for relative in ['labels.jsonl', 'styles.jsonl', 'metadata.json'] + [f'images/00000{i}.png' for i in range(6)]:
            assert (tmp_path / 'a' / relative).read_bytes() == (tmp_path / 'b' / relative).read_bytes()
