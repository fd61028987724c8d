import logging
import sys

import click

from ticktock.config import ENVVAR_PREFIX, get_config, load_config_file
from ticktock.utils.error_handlers import ErrorHandlingGroup, report_error
from ticktock.utils.errors import ConfigError

__version__ = '1.0.0'

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']


class StderrHandler(logging.StreamHandler):
    """Stream handler bound to the current sys.stderr at emit time."""

    def __init__(self):
        super().__init__(sys.stderr)

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def create_app(config_name=None) -> click.Group:
    """Application factory: builds the ticktock command-line group."""
    app_config = get_config(config_name)

    @click.group(cls=ErrorHandlingGroup, context_settings={'auto_envvar_prefix': ENVVAR_PREFIX})
    @click.option('--config', 'config_path', type=click.Path(dir_okay=False), is_eager=True,
                  expose_value=False, callback=apply_config_file,
                  help='Flat key=value file of option defaults.')
    @click.option('--log-level', type=click.Choice(LOG_LEVELS, case_sensitive=False),
                  default=app_config.LOG_LEVEL, show_default=True, help='Logging verbosity (stderr).')
    @click.version_option(__version__, prog_name='ticktock')
    @click.pass_context
    def cli(ctx, log_level):
        """Analog clock reading toolkit: evaluation, preference data, rendering and dataset QC."""
        setup_logging(log_level)
        ctx.obj = app_config

    register_commands(cli)
    return cli


def apply_config_file(ctx: click.Context, param: click.Parameter, value):
    if not value:
        return
    try:
        ctx.default_map = load_config_file(value, ctx.command)
    except ConfigError as error:
        report_error(error)
        ctx.exit(error.exit_code)


def setup_logging(level: str = 'INFO'):
    """Setup application logging."""
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format=LOG_FORMAT,
        handlers=[StderrHandler()],
        force=True,
    )
    logging.getLogger('PIL').setLevel(logging.WARNING)


def register_commands(cli: click.Group):
    """Register all commands."""
    from ticktock.commands.swap import swap_command
    from ticktock.commands.evaluate import evaluate_command
    from ticktock.commands.preferences import gen_prefs_command
    from ticktock.commands.render import render_command
    from ticktock.commands.qc import qc_group
    from ticktock.commands.prompts import prompts_group

    cli.add_command(swap_command)
    cli.add_command(evaluate_command)
    cli.add_command(gen_prefs_command)
    cli.add_command(render_command)
    cli.add_command(qc_group)
    cli.add_command(prompts_group)
