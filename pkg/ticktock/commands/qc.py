import logging
from pathlib import Path

import click

from ticktock.commands import jobs_option, open_session, out_dir_option, reproducible_option
from ticktock.models.annotation import Split
from ticktock.services.caption_filter import DEFAULT_ALLOWLIST, CaptionFilter
from ticktock.services.dataset_io_service import load_annotations, load_captions
from ticktock.services.dedup_service import DEFAULT_PHASH_THRESHOLD, DEFAULT_WHASH_THRESHOLD, dedup
from ticktock.services.distribution_service import (
    DEFAULT_CAP_MULTIPLIER, DEFAULT_TEST_SOURCES, MATRIX_HEADER, apply_splits, compute_stats,
    diversity_table, matrix_rows, rebalance, source_table,
)
from ticktock.services.fingerprint_service import FingerprintService

logger = logging.getLogger(__name__)

annotations_argument = click.argument('annotations', type=click.Path(exists=True, dir_okay=False))


def write_stats_tables(session, stats, prefix: str = ''):
    session.write_csv(f'{prefix}cell_counts.csv', MATRIX_HEADER, matrix_rows(stats.cell_counts))
    session.write_csv(f'{prefix}heat.csv', MATRIX_HEADER, matrix_rows(stats.heat_values, '{:.6f}'))
    session.write_csv(f'{prefix}hour_marginal.csv', ['hour', 'count'],
                      ([12 if hour == 0 else hour, int(count)] for hour, count in enumerate(stats.hour_marginal)))
    session.write_csv(f'{prefix}minute_marginal.csv', ['minute', 'count'],
                      ([minute, int(count)] for minute, count in enumerate(stats.minute_marginal)))


@click.group('qc')
def qc_group():
    """Dataset quality control: caption filter, dedup, statistics, rebalancing and splits."""


@qc_group.command('filter')
@click.argument('captions', type=click.Path(exists=True, dir_okay=False))
@click.option('--allow', 'allowlist', multiple=True, default=sorted(DEFAULT_ALLOWLIST), show_default=True,
              help='Whole-word keyword kept by the filter; repeat for several.')
@out_dir_option
@reproducible_option
@click.pass_context
def filter_command(ctx, captions, allowlist, out_dir, reproducible):
    """Keep images whose caption names a clock or watch as a whole word."""
    caption_filter = CaptionFilter(allowlist)
    decisions = caption_filter.filter_captions(load_captions(captions))

    with open_session(ctx, out_dir, reproducible, {'captions': captions}) as session:
        session.write_jsonl('filter_manifest.jsonl', (
            {'id': record_id, 'keep': decision.keep, 'reason': decision.reason.value, 'token': decision.token}
            for record_id, decision in decisions))
        session.write_text('kept_ids.txt', ''.join(f'{record_id}\n' for record_id, decision in decisions
                                                    if decision.keep))

    kept = sum(1 for _, decision in decisions if decision.keep)
    click.echo(f"kept {kept} of {len(decisions)} captions")


@qc_group.command('dedup')
@annotations_argument
@click.option('--image-root', type=click.Path(exists=True, file_okay=False),
              help='Directory image paths are relative to; defaults to the annotations directory.')
@click.option('--phash-threshold', type=click.IntRange(0, 64), default=DEFAULT_PHASH_THRESHOLD, show_default=True)
@click.option('--whash-threshold', type=click.IntRange(0, 64), default=DEFAULT_WHASH_THRESHOLD, show_default=True)
@click.option('--source-pair', nargs=2, type=str, default=None,
              help='Only merge near duplicates across these two sources.')
@jobs_option
@out_dir_option
@reproducible_option
@click.pass_context
def dedup_command(ctx, annotations, image_root, phash_threshold, whash_threshold, source_pair,
                  jobs, out_dir, reproducible):
    """Cluster exact and perceptual duplicates; keep the smallest id per cluster."""
    records = load_annotations(annotations)
    root = Path(image_root) if image_root else Path(annotations).parent

    fingerprinted = FingerprintService(root).fingerprint_records(
        ((record.id, record.image_path, record.source) for record in records), jobs=jobs)
    result = dedup(fingerprinted, phash_threshold=phash_threshold, whash_threshold=whash_threshold,
                   source_pair=tuple(source_pair) if source_pair else None)

    kept = set(result.kept_ids)
    with open_session(ctx, out_dir, reproducible, {'annotations': annotations}) as session:
        session.write_jsonl('dedup_manifest.jsonl', result.manifest)
        session.write_report('clusters.json', {
            'n_records': len(records),
            'n_kept': len(result.kept_ids),
            'n_removed': result.n_removed,
            'clusters': result.duplicate_clusters,
        })
        session.write_jsonl('annotations.dedup.jsonl',
                            (record.to_dict() for record in records if record.id in kept))

    click.echo(f"kept {len(result.kept_ids)} of {len(records)} images "
               f"({len(result.duplicate_clusters)} duplicate clusters)")


@qc_group.command('stats')
@annotations_argument
@out_dir_option
@reproducible_option
@click.pass_context
def stats_command(ctx, annotations, out_dir, reproducible):
    """Time-cell heat map, marginals, hour CV and diversity tables."""
    records = load_annotations(annotations)
    stats = compute_stats(records)

    with open_session(ctx, out_dir, reproducible, {'annotations': annotations}) as session:
        session.write_report('stats.json', stats.to_dict())
        write_stats_tables(session, stats)
        session.write_csv('diversity.csv', ['clock_type', 'dimension', 'label', 'count'], diversity_table(records))
        session.write_csv('sources.csv', ['source', 'split', 'count'], source_table(records))

    click.echo(f"hour CV {stats.hour_cv:.2f}%  min {stats.argmin_count} (hour {stats.argmin_hour})  "
               f"max {stats.argmax_count} (hour {stats.argmax_hour})")


@qc_group.command('rebalance')
@annotations_argument
@click.option('--cap-multiplier', type=click.FloatRange(min=0, min_open=True), default=DEFAULT_CAP_MULTIPLIER,
              show_default=True, help='Per-cell cap as a multiple of the median nonzero cell count.')
@out_dir_option
@reproducible_option
@click.pass_context
def rebalance_command(ctx, annotations, cap_multiplier, out_dir, reproducible):
    """Cap over-represented time cells such as 10:10."""
    records = load_annotations(annotations)
    kept, before, after = rebalance(records, cap_multiplier)

    with open_session(ctx, out_dir, reproducible, {'annotations': annotations}) as session:
        session.write_jsonl('annotations.rebalanced.jsonl', (record.to_dict() for record in kept))
        session.write_report('rebalance.json', {
            'n_in': len(records),
            'n_out': len(kept),
            'before': before.to_dict(),
            'after': after.to_dict(),
        })
        write_stats_tables(session, after, prefix='after_')

    click.echo(f"kept {len(kept)} of {len(records)} records; "
               f"hour CV {before.hour_cv:.2f}% -> {after.hour_cv:.2f}%")


@qc_group.command('split')
@annotations_argument
@click.option('--test-source', 'test_sources', multiple=True, default=sorted(DEFAULT_TEST_SOURCES),
              show_default=True, help='Source assigned to the test split; repeat for several.')
@out_dir_option
@reproducible_option
@click.pass_context
def split_command(ctx, annotations, test_sources, out_dir, reproducible):
    """Assign train/test splits by image source."""
    records = apply_splits(load_annotations(annotations), test_sources)

    with open_session(ctx, out_dir, reproducible, {'annotations': annotations}) as session:
        session.write_jsonl('annotations.split.jsonl', (record.to_dict() for record in records))
        session.write_csv('sources.csv', ['source', 'split', 'count'], source_table(records))

    n_test = sum(1 for record in records if record.split == Split.TEST)
    click.echo(f"{n_test} test and {len(records) - n_test} train records")
