"""
Shared command plumbing: common options and output sessions carrying run metadata.
"""

from pathlib import Path
from typing import Dict, Optional

import click

from ticktock.config import Config, effective_config
from ticktock.services.export_service import OutputSession, RunMetadata

jobs_option = click.option('--jobs', type=click.IntRange(min=1), default=Config.JOBS, show_default=True,
                           help='Worker processes for per-record stages; outputs do not depend on it.')
out_dir_option = click.option('--out-dir', type=click.Path(file_okay=False), required=True,
                              help='Directory receiving every output of the run.')
reproducible_option = click.option('--reproducible', is_flag=True, default=Config.REPRODUCIBLE,
                                   help='Omit timestamps so reruns are byte-identical.')


def command_name(ctx: click.Context) -> str:
    """Command path without the program name, e.g. 'qc dedup'."""
    return ' '.join(ctx.command_path.split()[1:])


def open_session(ctx: click.Context, out_dir: str, reproducible: bool,
                 inputs: Optional[Dict[str, Optional[str]]] = None) -> OutputSession:
    from ticktock import __version__

    metadata = RunMetadata(
        tool_version=__version__,
        command=command_name(ctx),
        effective_config=effective_config(ctx),
        reproducible=reproducible,
    )
    for label, path in (inputs or {}).items():
        metadata.add_input(label, Path(path) if path else None)
    return OutputSession(Path(out_dir), metadata)
