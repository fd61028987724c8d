import io
import os
import sys

import numpy as np
import pytest
from PIL import Image, ImageDraw

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from ticktock.models.quality import FingerprintedRecord, ImageFingerprint
from ticktock.services.dedup_service import UnionFind, dedup
from ticktock.services.export_service import png_bytes
from ticktock.services.fingerprint_service import fingerprint
from ticktock.services.render_service import render, sample_labels, sample_style
from ticktock.utils.errors import DataError, ValidationError

pytestmark = [pytest.mark.unit, pytest.mark.qc]

FAR = 0xFFFFFFFFFFFFFFFF


def _record(record_id, sha1='0' * 40, phash=0, whash=0, source='coco'):
    return FingerprintedRecord(id=record_id, fingerprint=ImageFingerprint(sha1, phash, whash), source=source)


def _bits(n):
    """Integer with the n lowest bits set."""
    return (1 << n) - 1


class TestUnionFind:
    def test_root_is_smallest_index(self):
        forest = UnionFind(5)
        forest.union(4, 2)
        forest.union(2, 3)
        forest.union(3, 1)
        assert {forest.find(i) for i in (1, 2, 3, 4)} == {1}
        assert forest.find(0) == 0


class TestDedup:
    """Test duplicate clustering"""

    def test_exact_duplicates_merge_regardless_of_hashes(self):
        records = [_record('b', sha1='a' * 40, phash=0, whash=0),
                   _record('a', sha1='a' * 40, phash=FAR, whash=FAR)]
        result = dedup(records)
        assert result.kept_ids == ['a']
        assert result.clusters == {'a': ['a', 'b']}

    def test_threshold_is_inclusive(self):
        records = [_record('a', sha1='1' * 40, phash=0, whash=FAR),
                   _record('b', sha1='2' * 40, phash=_bits(8), whash=0),
                   _record('c', sha1='3' * 40, phash=_bits(9) << 20, whash=_bits(20))]
        result = dedup(records)
        assert result.kept_ids == ['a', 'c']
        assert result.duplicate_clusters == {'a': ['a', 'b']}

    def test_whash_alone_can_merge(self):
        records = [_record('a', sha1='1' * 40, phash=0, whash=0),
                   _record('b', sha1='2' * 40, phash=FAR, whash=_bits(3))]
        assert dedup(records).kept_ids == ['a']

    def test_transitive_clusters(self):
        records = [_record('a', sha1='1' * 40, phash=0, whash=FAR),
                   _record('b', sha1='2' * 40, phash=_bits(6), whash=0),
                   _record('c', sha1='3' * 40, phash=_bits(12), whash=_bits(40) << 24)]
        result = dedup(records)
        assert result.kept_ids == ['a']
        assert result.n_removed == 2

    def test_manifest_rows(self):
        records = [_record('z', sha1='f' * 40, phash=1, whash=2), _record('y', sha1='f' * 40, phash=1, whash=2)]
        manifest = dedup(records).manifest
        assert manifest == [
            {'id': 'y', 'sha1': 'f' * 40, 'phash': '0000000000000001', 'whash': '0000000000000002',
             'cluster_id': 'y', 'kept': True},
            {'id': 'z', 'sha1': 'f' * 40, 'phash': '0000000000000001', 'whash': '0000000000000002',
             'cluster_id': 'y', 'kept': False},
        ]

    def test_source_pair_restriction(self):
        records = [_record('a', sha1='1' * 40, source='vg'),
                   _record('b', sha1='2' * 40, source='vg'),
                   _record('c', sha1='3' * 40, source='coco'),
                   _record('d', sha1='4' * 40, source='open_images')]
        result = dedup(records, source_pair=('vg', 'coco'))
        # vg-vg pairs are never compared; both vg records reach c
        assert result.clusters == {'a': ['a', 'b', 'c'], 'd': ['d']}
        assert result.kept_ids == ['a', 'd']

        same_source = [_record('a', sha1='1' * 40, source='vg'), _record('b', sha1='2' * 40, source='vg')]
        assert dedup(same_source).kept_ids == ['a']
        assert dedup(same_source, source_pair=('vg', 'coco')).kept_ids == ['a', 'b']

    def test_dedup_of_kept_set_is_stable(self):
        """Running dedup again on the survivors removes nothing"""
        rng = np.random.default_rng(13)
        records = []
        for i in range(300):
            phash, whash = (int(v) for v in rng.integers(0, 1 << 62, 2))
            if i and rng.random() < 0.4:
                # a near copy of an earlier record, drifting a few bits
                source = records[int(rng.integers(0, len(records)))].fingerprint
                phash = source.phash ^ (1 << int(rng.integers(0, 64)))
                whash = source.whash ^ _bits(int(rng.integers(0, 12)))
            records.append(_record(f'r{i:03d}', sha1=f'{i:040x}', phash=phash, whash=whash))

        first = dedup(records)
        assert first.n_removed > 0
        kept = [record for record in records if record.id in set(first.kept_ids)]
        second = dedup(kept)
        assert second.kept_ids == first.kept_ids
        assert second.duplicate_clusters == {}

    def test_duplicate_ids_rejected(self):
        with pytest.raises(DataError):
            dedup([_record('a'), _record('a', sha1='1' * 40)])

    def test_threshold_validation(self):
        with pytest.raises(ValidationError):
            dedup([_record('a')], phash_threshold=65)


def _planted_base(index, rng):
    """A clock pasted at a random place and scale on a cluttered canvas."""
    canvas = Image.new('RGB', (320, 320), tuple(int(v) for v in rng.integers(0, 256, 3)))
    draw = ImageDraw.Draw(canvas)
    for _ in range(6):
        x0, y0 = (int(v) for v in rng.integers(0, 300, 2))
        w, h = (int(v) for v in rng.integers(20, 160, 2))
        draw.rectangle([x0, y0, x0 + w, y0 + h], fill=tuple(int(v) for v in rng.integers(0, 256, 3)))
    label = sample_labels(1, seed=index)[0]
    clock = render(label, sample_style(17, index)).image
    side = int(rng.integers(90, 200))
    clock = clock.resize((side, side), Image.Resampling.BILINEAR)
    canvas.paste(clock, tuple(int(v) for v in rng.integers(0, 320 - side, 2)))
    return canvas


def _planted_copy(image, rng):
    scale = float(rng.uniform(0.5, 0.75))
    resized = image.resize((int(image.width * scale), int(image.height * scale)), Image.Resampling.BILINEAR)
    buffer = io.BytesIO()
    resized.save(buffer, format='JPEG', quality=int(rng.integers(75, 95)))
    return buffer.getvalue()


@pytest.mark.slow
class TestPlantedCorpus:
    """Test recall and false merges on a planted duplicate corpus"""

    def test_recall_and_false_merges(self):
        rng = np.random.default_rng(123)
        records = []
        bases = []
        for index in range(500):
            image = _planted_base(index, rng)
            bases.append(image)
            records.append(FingerprintedRecord(f'base-{index:03d}', fingerprint(png_bytes(image))))
        for index in range(100):
            records.append(FingerprintedRecord(f'copy-{index:03d}', fingerprint(_planted_copy(bases[index], rng))))

        result = dedup(records)
        keeper = {row['id']: row['cluster_id'] for row in result.manifest}

        recalled = sum(keeper[f'copy-{i:03d}'] == keeper[f'base-{i:03d}'] for i in range(100))
        assert recalled / 100 >= 0.95

        merged_bases = sum(keeper[f'base-{i:03d}'] != f'base-{i:03d}' for i in range(500))
        assert merged_bases / 500 <= 0.01
