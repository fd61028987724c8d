import logging

import click

from ticktock.utils.errors import EXIT_DATA_ERROR, ErrorCode, ToolkitError

logger = logging.getLogger(__name__)


def report_error(error: ToolkitError):
    """Log a toolkit error and print its one-line summary to stderr."""
    if error.exit_code == EXIT_DATA_ERROR:
        logger.error(f"{type(error).__name__} [{error.error_code}]: {error.message}")
    else:
        logger.warning(f"{type(error).__name__} [{error.error_code}]: {error.message}")
    click.echo(f"error [{error.error_code}]: {error.message}", err=True)


class ErrorHandlingGroup(click.Group):
    """Click group that maps toolkit errors to their exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except (click.exceptions.ClickException, click.exceptions.Exit, click.exceptions.Abort):
            raise
        except ToolkitError as error:
            report_error(error)
            ctx.exit(error.exit_code)
        except Exception as error:
            logger.exception(f"Unexpected error: {error}")
            click.echo(f"error [{ErrorCode.INTERNAL_ERROR}]: {error}", err=True)
            ctx.exit(EXIT_DATA_ERROR)
