import logging

import click

from ticktock.commands import jobs_option, open_session, out_dir_option, reproducible_option
from ticktock.models.clock import DistanceKernel, ParseMode
from ticktock.models.evaluation import FullTimeRule, ProfileMode, SwapMode
from ticktock.services.dataset_io_service import load_annotations, load_predictions
from ticktock.services.evaluation_service import (
    DEFAULT_BIN_WIDTH, DEFAULT_MINUTE_TOLERANCE, EvaluationService,
)

logger = logging.getLogger(__name__)

METRIC_FIELDS = ('hour_acc', 'minute_acc', 'full_acc', 'mae_hour', 'mae_minute', 'mae_total')


def _choices(enum_cls):
    return click.Choice([member.value for member in enum_cls])


def breakdown_rows(report):
    for dimension, labels in sorted(report.breakdowns.items()):
        for label, sub in sorted(labels.items()):
            for protocol, metrics in (('B', sub.B.rounded()), ('S', sub.S.rounded())):
                yield [dimension, label, protocol, sub.n_records] + [metrics[name] for name in METRIC_FIELDS]


def judgment_row(record, prediction, judgment):
    row = {
        'id': record.id,
        'truth': str(record.truth),
        'raw_output': prediction.raw_output if prediction else None,
        'parsed': str(prediction.parsed) if prediction else None,
    }
    row.update({key: value for key, value in vars(judgment).items()})
    return row


@click.command('evaluate')
@click.argument('annotations', type=click.Path(exists=True, dir_okay=False))
@click.argument('predictions', type=click.Path(exists=True, dir_okay=False))
@click.option('--parse-mode', type=_choices(ParseMode), default=ParseMode.STRICT.value, show_default=True)
@click.option('--minute-tolerance', type=click.IntRange(0, 30), default=DEFAULT_MINUTE_TOLERANCE,
              show_default=True, help='Minute accuracy window in minutes.')
@click.option('--swap-mode', type=_choices(SwapMode), default=SwapMode.PER_METRIC.value, show_default=True,
              help='per_metric ORs flags over truth and swap; '
                   'whole_record takes the swap only when it keeps every flag.')
@click.option('--full-time-rule', type=_choices(FullTimeRule), default=FullTimeRule.TOLERANT.value,
              show_default=True)
@click.option('--kernel', type=_choices(DistanceKernel), default=DistanceKernel.CIRCULAR.value,
              show_default=True, help='Distance kernel for MAEs and error profiles.')
@click.option('--bin-width', type=click.IntRange(min=1), default=DEFAULT_BIN_WIDTH, show_default=True,
              help='Error histogram bin width in minutes.')
@jobs_option
@out_dir_option
@reproducible_option
@click.pass_context
def evaluate_command(ctx, annotations, predictions, parse_mode, minute_tolerance, swap_mode,
                     full_time_rule, kernel, bin_width, jobs, out_dir, reproducible):
    """Score predictions against annotations under baseline and swap-equivalence protocols."""
    records = load_annotations(annotations)
    parsed = load_predictions(predictions, ParseMode(parse_mode))

    service = EvaluationService(minute_tolerance=minute_tolerance, swap_mode=SwapMode(swap_mode),
                                full_time_rule=FullTimeRule(full_time_rule), kernel=DistanceKernel(kernel))
    judged = service.judge_corpus(records, parsed, jobs=jobs)
    report = service.build_report(judged)
    judgments = [judgment for _, _, judgment in judged]

    session = open_session(ctx, out_dir, reproducible,
                           {'annotations': annotations, 'predictions': predictions})
    with session:
        session.write_report('report.json', report.to_dict())
        for mode in ProfileMode:
            profile = service.emit_error_profile(judgments, bin_width=bin_width, mode=mode)
            session.write_csv(f'histogram_{mode.value}.csv', ['bin_start', 'bin_end', 'count'],
                              ([start, end, count] for start, end, count
                               in zip(profile.bin_edges, profile.bin_edges[1:], profile.counts)))
            session.write_csv(f'cdf_{mode.value}.csv', ['minutes', 'cdf'],
                              ([threshold, f'{value:.6f}'] for threshold, value in enumerate(profile.cdf)))
        session.write_csv('breakdowns.csv', ['dimension', 'label', 'protocol', 'n_records'] + list(METRIC_FIELDS),
                          breakdown_rows(report))
        session.write_jsonl('judgments.jsonl', (judgment_row(*entry) for entry in judged))

    click.echo(f"B: hour {report.B.hour_acc:.2f}%  minute {report.B.minute_acc:.2f}%  "
               f"full {report.B.full_acc:.2f}%  MAE {report.B.mae_total:.2f} min")
    click.echo(f"S: hour {report.S.hour_acc:.2f}%  minute {report.S.minute_acc:.2f}%  "
               f"full {report.S.full_acc:.2f}%  MAE {report.S.mae_total:.2f} min")
    click.echo(f"hand-swap gap (full): {report.delta_full:+.2f}")
