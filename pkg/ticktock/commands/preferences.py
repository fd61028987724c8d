import logging

import click

from ticktock.commands import jobs_option, open_session, out_dir_option, reproducible_option
from ticktock.config import Config
from ticktock.models.clock import ParseMode
from ticktock.models.preference import PairMode
from ticktock.services.dataset_io_service import load_annotations, load_predictions
from ticktock.services.evaluation_service import DEFAULT_MINUTE_TOLERANCE
from ticktock.services.preference_service import PreferenceService

logger = logging.getLogger(__name__)


@click.command('gen-prefs')
@click.argument('annotations', type=click.Path(exists=True, dir_okay=False))
@click.option('--predictions', type=click.Path(exists=True, dir_okay=False),
              help='Model predictions JSONL; required in hybrid mode.')
@click.option('--mode', type=click.Choice([mode.value for mode in PairMode]), default=PairMode.HYBRID.value,
              show_default=True, help='How the rejected time is chosen.')
@click.option('--seed', type=int, default=Config.DEFAULT_SEED, show_default=True,
              help='Seed for random-mode rejected times.')
@click.option('--minute-tolerance', type=click.IntRange(0, 30), default=DEFAULT_MINUTE_TOLERANCE,
              show_default=True)
@click.option('--parse-mode', type=click.Choice([mode.value for mode in ParseMode]),
              default=ParseMode.STRICT.value, show_default=True)
@jobs_option
@out_dir_option
@reproducible_option
@click.pass_context
def gen_prefs_command(ctx, annotations, predictions, mode, seed, minute_tolerance, parse_mode,
                      jobs, out_dir, reproducible):
    """Build a chosen/rejected preference dataset with a retention report."""
    mode = PairMode(mode)
    if mode == PairMode.HYBRID and not predictions:
        raise click.UsageError("--predictions is required in hybrid mode")

    records = load_annotations(annotations)
    parsed = load_predictions(predictions, ParseMode(parse_mode)) if predictions else []

    service = PreferenceService(mode=mode, rng_seed=seed, minute_tolerance=minute_tolerance)
    pairs, retention = service.forge_dataset(records, parsed, jobs=jobs)

    session = open_session(ctx, out_dir, reproducible,
                           {'annotations': annotations, 'predictions': predictions})
    with session:
        session.write_jsonl('pairs.jsonl', (pair.to_dict() for pair in pairs))
        session.write_report('retention.json', retention.to_dict())

    click.echo(f"{retention.n_out} of {retention.n_in} pairs kept ({retention.retention_rate:.2f}%)")
