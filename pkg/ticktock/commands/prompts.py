import click

from ticktock.commands import open_session, out_dir_option, reproducible_option
from ticktock.services.prompt_service import PromptService


@click.group('prompts')
def prompts_group():
    """Prompt asset commands."""


@prompts_group.command('emit')
@out_dir_option
@reproducible_option
@click.pass_context
def emit_command(ctx, out_dir, reproducible):
    """Write the training and inference prompts as verbatim text files."""
    service = PromptService()
    with open_session(ctx, out_dir, reproducible) as session:
        written = service.emit(session)
    for path in written:
        click.echo(str(path))
