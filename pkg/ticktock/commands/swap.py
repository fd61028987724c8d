import logging

import click

from ticktock.services.clock_service import (
    format_time, hands_from_time, parse_time, swap_angles, swap_hands,
)

logger = logging.getLogger(__name__)


@click.command('swap')
@click.argument('time_text', metavar='HH:MM')
def swap_command(time_text):
    """Print the time read when the hour and minute hands exchange roles."""
    try:
        t = parse_time(time_text)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="'HH:MM'")

    swapped = swap_hands(t)
    angles = hands_from_time(t)
    exchanged = swap_angles(angles)
    logger.debug(f"swap {t} -> {swapped}")

    click.echo(format_time(swapped))
    click.echo(f"hands:   hour {angles.theta_h:6.2f} deg  minute {angles.theta_m:6.2f} deg")
    click.echo(f"swapped: hour {exchanged.theta_h:6.2f} deg  minute {exchanged.theta_m:6.2f} deg")
