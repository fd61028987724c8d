import logging

import click

from ticktock.commands import jobs_option, open_session, out_dir_option, reproducible_option
from ticktock.config import Config
from ticktock.models.rendering import TimeDistribution
from ticktock.services.distribution_service import read_cell_histogram
from ticktock.services.edge_service import DEFAULT_HIGH_THRESHOLD, DEFAULT_LOW_THRESHOLD, validate_thresholds
from ticktock.services.hand_extraction_service import verify_corpus
from ticktock.services.render_service import ClockRenderService

logger = logging.getLogger(__name__)


@click.command('render')
@click.option('--n', 'n', type=click.IntRange(min=1), default=720, show_default=True,
              help='Number of clocks to render.')
@click.option('--distribution', type=click.Choice([d.value for d in TimeDistribution]),
              default=TimeDistribution.UNIFORM.value, show_default=True, help='Label distribution.')
@click.option('--histogram', type=click.Path(exists=True, dir_okay=False),
              help='12x60 cell-weight CSV for the histogram distribution.')
@click.option('--style-seed', type=int, default=Config.DEFAULT_SEED, show_default=True)
@click.option('--label-seed', type=int, default=None, help='Defaults to the style seed.')
@click.option('--default-style', is_flag=True, help='Render every clock in the default style.')
@click.option('--edge-maps', is_flag=True, help='Also export Canny edge maps and style prompts.')
@click.option('--low-threshold', type=click.IntRange(0, 255), default=DEFAULT_LOW_THRESHOLD, show_default=True)
@click.option('--high-threshold', type=click.IntRange(0, 255), default=DEFAULT_HIGH_THRESHOLD, show_default=True)
@click.option('--verify', is_flag=True, help='Re-read every label from its image and report mismatches.')
@jobs_option
@out_dir_option
@reproducible_option
@click.pass_context
def render_command(ctx, n, distribution, histogram, style_seed, label_seed, default_style, edge_maps,
                   low_threshold, high_threshold, verify, jobs, out_dir, reproducible):
    """Render a synthetic clock corpus with exact labels."""
    distribution = TimeDistribution(distribution)
    if distribution == TimeDistribution.HISTOGRAM and not histogram:
        raise click.UsageError("--histogram is required with --distribution histogram")
    if edge_maps:
        validate_thresholds(low_threshold, high_threshold)
    weights = read_cell_histogram(histogram) if histogram else None

    service = ClockRenderService(style_seed=style_seed, label_seed=label_seed, sample_styles=not default_style)
    with open_session(ctx, out_dir, reproducible, {'histogram': histogram}) as session:
        records = service.generate_corpus(n, session, distribution=distribution, histogram=weights,
                                          edge_maps=edge_maps, low_threshold=low_threshold,
                                          high_threshold=high_threshold, jobs=jobs)
        if verify:
            styles = [service.style_for(index) for index in range(len(records))]
            failures = verify_corpus(session.out_dir, records, styles, jobs=jobs)
            session.write_report('verify.json', {
                'n_checked': len(records),
                'n_failed': len(failures),
                'style_seed': style_seed,
                'failures': failures,
            })
            click.echo(f"verified {len(records) - len(failures)} of {len(records)} labels")

    click.echo(f"rendered {len(records)} clocks into {out_dir}")
