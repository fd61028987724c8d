"""
Deduplication Service
Exact (SHA-1) and perceptual (pHash / wHash Hamming) duplicate clustering.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ticktock.models.quality import DedupResult, FingerprintedRecord
from ticktock.utils import log_execution_time
from ticktock.utils.errors import DataError, ErrorCode, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_PHASH_THRESHOLD = 8
DEFAULT_WHASH_THRESHOLD = 8


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a: int, b: int):
        root_a, root_b = self.find(a), self.find(b)
        if root_a != root_b:
            # Smaller index as root keeps clusters rooted at their smallest id.
            if root_a < root_b:
                self.parent[root_b] = root_a
            else:
                self.parent[root_a] = root_b


def _popcount(values: np.ndarray) -> np.ndarray:
    return np.unpackbits(values.astype('>u8').view(np.uint8).reshape(-1, 8), axis=1).sum(axis=1)


def _check_threshold(name: str, value: int):
    if not 0 <= value <= 64:
        raise ValidationError(f"{name} must be in [0, 64], got {value}", name)


@log_execution_time
def dedup(records: Sequence[FingerprintedRecord],
          phash_threshold: int = DEFAULT_PHASH_THRESHOLD,
          whash_threshold: int = DEFAULT_WHASH_THRESHOLD,
          source_pair: Optional[Tuple[str, str]] = None) -> DedupResult:
    """Cluster exact and near duplicates by union-find; keep the smallest id per cluster.

    Exact duplicates are merged corpus-wide. With source_pair set, near
    duplicates are only considered between records of those two sources.
    """
    _check_threshold('phash_threshold', phash_threshold)
    _check_threshold('whash_threshold', whash_threshold)

    ordered = sorted(records, key=lambda record: record.id)
    for previous, current in zip(ordered, ordered[1:]):
        if previous.id == current.id:
            raise DataError(f"Duplicate record id: {current.id}", ErrorCode.DUPLICATE_ID, {'id': current.id})

    n = len(ordered)
    forest = UnionFind(n)

    by_sha1: Dict[str, List[int]] = defaultdict(list)
    for index, record in enumerate(ordered):
        by_sha1[record.fingerprint.sha1].append(index)
    for indices in by_sha1.values():
        for index in indices[1:]:
            forest.union(indices[0], index)

    if n > 1:
        phashes = np.array([record.fingerprint.phash for record in ordered], dtype=np.uint64)
        whashes = np.array([record.fingerprint.whash for record in ordered], dtype=np.uint64)
        sources = np.array([record.source for record in ordered], dtype=object)
        allowed_sources = set(source_pair) if source_pair else None

        for i in range(n - 1):
            near = ((_popcount(phashes[i + 1:] ^ phashes[i]) <= phash_threshold)
                    | (_popcount(whashes[i + 1:] ^ whashes[i]) <= whash_threshold))
            if allowed_sources is not None:
                if sources[i] not in allowed_sources:
                    continue
                partner_ok = np.array([source in allowed_sources and {sources[i], source} == allowed_sources
                                       for source in sources[i + 1:]], dtype=bool)
                near &= partner_ok
            for offset in np.nonzero(near)[0]:
                forest.union(i, i + 1 + int(offset))

    clusters: Dict[str, List[str]] = defaultdict(list)
    for index, record in enumerate(ordered):
        clusters[ordered[forest.find(index)].id].append(record.id)

    kept_ids = sorted(clusters)
    manifest = []
    for index, record in enumerate(ordered):
        keeper = ordered[forest.find(index)].id
        row = {'id': record.id}
        row.update(record.fingerprint.to_dict())
        row['cluster_id'] = keeper
        row['kept'] = keeper == record.id
        manifest.append(row)

    result = DedupResult(kept_ids=kept_ids, clusters=dict(clusters), manifest=manifest)
    logger.info(f"Dedup kept {len(kept_ids)} of {n} records "
                f"({len(result.duplicate_clusters)} duplicate clusters)")
    return result
