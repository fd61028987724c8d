import csv
import math
import os
import random
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from ticktock.models.annotation import ClockType, DesignLabel, Environment, Split, Transformation
from ticktock.services.distribution_service import (
    MATRIX_HEADER, apply_splits, assign_split, compute_stats, diversity_table, matrix_rows,
    read_cell_histogram, rebalance, rebalance_cap, source_table,
)
from ticktock.utils import stable_hash
from ticktock.utils.errors import DataError, SchemaError, ValidationError
from tests.conftest import ALL_TIMES, make_record

pytestmark = [pytest.mark.unit, pytest.mark.qc]


class TestComputeStats:
    """Test time-cell statistics"""

    def test_uniform_corpus_has_zero_cv(self, self_test_records):
        stats = compute_stats(self_test_records)
        assert stats.hour_cv == pytest.approx(0.0)
        assert stats.hour_marginal.tolist() == [60] * 12
        assert stats.minute_marginal.tolist() == [12] * 60
        assert stats.n == 720

    def test_single_cell(self):
        stats = compute_stats([make_record('only', '10:10')])
        assert stats.heat_values[10, 10] == pytest.approx(math.log(2))
        assert stats.heat_values.sum() == pytest.approx(math.log(2))
        assert stats.hour_cv == pytest.approx(100 * math.sqrt(11))
        assert (stats.argmax_hour, stats.argmax_count) == (10, 1)
        assert (stats.argmin_hour, stats.argmin_count) == (12, 0)

    def test_to_dict_uses_display_hours(self):
        data = compute_stats([make_record('a', '12:30'), make_record('b', '12:45')]).to_dict()
        assert data['hour_marginal']['12'] == 2
        assert data['nonzero_cells'] == 2

    def test_empty(self):
        with pytest.raises(DataError):
            compute_stats([])


class TestRebalance:
    """Test canonical-time rebalancing"""

    def _skewed(self):
        records = [make_record(f'u-{t.total_minutes:03d}', t) for t in ALL_TIMES]
        records += [make_record(f'canon-{i:02d}', '10:10') for i in range(50)]
        return records

    def test_cap_rule(self):
        counts = np.zeros((12, 60), dtype=np.int64)
        assert rebalance_cap(counts) == 1
        counts[0, :4] = [1, 2, 2, 40]
        assert rebalance_cap(counts) == 6
        assert rebalance_cap(counts, 0.1) == 1

    def test_caps_overrepresented_cell(self):
        records = self._skewed()
        kept, before, after = rebalance(records)
        assert before.cell_counts[10, 10] == 51
        assert after.cell_counts[10, 10] == 3
        assert len(kept) == 720 + 2
        assert after.hour_cv < before.hour_cv

        cell_ids = [r.id for r in records if str(r.truth) == '10:10']
        expected = sorted(cell_ids, key=lambda record_id: (stable_hash(record_id), record_id))[:3]
        assert sorted(r.id for r in kept if str(r.truth) == '10:10') == sorted(expected)

    def test_kept_in_input_order_and_permutation_stable(self):
        records = self._skewed()
        kept, _, _ = rebalance(records)
        positions = [records.index(r) for r in kept]
        assert positions == sorted(positions)

        shuffled = list(records)
        random.Random(4).shuffle(shuffled)
        kept_shuffled, _, _ = rebalance(shuffled)
        assert {r.id for r in kept_shuffled} == {r.id for r in kept}

    def test_invalid_multiplier(self):
        with pytest.raises(ValidationError):
            rebalance([make_record('a', '01:00')], cap_multiplier=0)


class TestSplitsAndTables:
    """Test split assignment and diversity tables"""

    @pytest.mark.parametrize('source,split', [
        ('coco', Split.TEST), ('open_images', Split.TEST), ('clock_movies', Split.TEST),
        ('COCO', Split.TEST), ('vg', Split.TRAIN), ('synclock', Split.TRAIN),
    ])
    def test_assign_split(self, source, split):
        assert assign_split(source) == split

    def test_apply_splits_custom_sources(self):
        records = [make_record('a', '01:00', source='vg', split=Split.TEST),
                   make_record('b', '02:00', source='coco', split=Split.TRAIN)]
        updated = apply_splits(records, test_sources={'vg'})
        assert [r.split for r in updated] == [Split.TEST, Split.TRAIN]
        assert updated[0].truth == records[0].truth

    def test_diversity_table_totals(self):
        records = [
            make_record('a', '01:00', clock_type=ClockType.WALL, environment=Environment.INDOOR),
            make_record('b', '02:00', clock_type=ClockType.WALL, environment=Environment.OUTDOOR,
                        design=(DesignLabel.ROMAN, DesignLabel.NO_NUMERALS)),
            make_record('c', '03:00', clock_type=ClockType.TOWER, environment=Environment.OUTDOOR,
                        transformation=Transformation.PARTIAL),
        ]
        table = {(ct, dim, label): count for ct, dim, label, count in diversity_table(records)}
        assert table[('wall', 'environment', 'outdoor')] == 1
        assert table[('total', 'environment', 'outdoor')] == 2
        assert table[('wall', 'total', 'all')] == 2
        assert table[('total', 'total', 'all')] == 3
        assert table[('tower', 'transformation', 'partial')] == 1
        assert table[('wall', 'design', 'roman')] == 1
        assert table[('wrist', 'total', 'all')] == 0

    def test_source_table(self):
        records = [make_record('a', '01:00', source='vg', split=Split.TRAIN),
                   make_record('b', '02:00', source='vg', split=Split.TRAIN),
                   make_record('c', '03:00', source='coco', split=Split.TEST)]
        assert source_table(records) == [('coco', 'test', 1), ('vg', 'train', 2)]


class TestHistogramFiles:
    """Test reading cell-weight matrices"""

    def test_reads_stats_matrix(self, tmp_path, self_test_records):
        counts = compute_stats(self_test_records[:100]).cell_counts
        path = tmp_path / 'cell_counts.csv'
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(MATRIX_HEADER)
            writer.writerows(matrix_rows(counts))
        assert read_cell_histogram(path).tolist() == counts.reshape(-1).astype(float).tolist()

    def test_wrong_size(self, tmp_path):
        path = tmp_path / 'short.csv'
        path.write_text('1,2,3\n')
        with pytest.raises(SchemaError):
            read_cell_histogram(path)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / 'bad.csv'
        path.write_text('1,x\n')
        with pytest.raises(SchemaError):
            read_cell_histogram(path)
