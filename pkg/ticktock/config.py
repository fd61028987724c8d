import logging
import os
import re
from typing import Any, Dict, Iterator, Optional, Tuple

import click
from dotenv import dotenv_values, load_dotenv

from ticktock.utils.errors import ConfigError, ErrorCode

load_dotenv()

logger = logging.getLogger(__name__)

ENVVAR_PREFIX = 'TICKTOCK'


class Config:
    """Base configuration class."""
    # Logging
    LOG_LEVEL = (os.environ.get('TICKTOCK_LOG_LEVEL') or os.environ.get('LOG_LEVEL') or 'INFO').upper()

    # Randomness and parallelism defaults shared by every command
    DEFAULT_SEED = int(os.environ.get('TICKTOCK_DEFAULT_SEED', '0'))
    JOBS = int(os.environ.get('TICKTOCK_JOBS', '1'))

    # Outputs
    REPRODUCIBLE = os.environ.get('TICKTOCK_REPRODUCIBLE', 'false').lower() == 'true'


class DevelopmentConfig(Config):
    """Development configuration."""
    DEBUG = True
    ENV = 'development'


class ProductionConfig(Config):
    """Production configuration."""
    DEBUG = False
    ENV = 'production'


class TestingConfig(Config):
    """Testing configuration."""
    ENV = 'testing'
    LOG_LEVEL = 'WARNING'
    REPRODUCIBLE = True


# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}

_SPLIT_VALUES = re.compile(r'[,\s]+')


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace('-', '_')


def _walk_commands(group: click.Group, path: Tuple[str, ...] = ()) -> Iterator[Tuple[Tuple[str, ...], click.Command]]:
    for name, command in group.commands.items():
        if isinstance(command, click.Group):
            yield from _walk_commands(command, path + (name,))
        else:
            yield path + (name,), command


def _coerce(param: click.Parameter, value: str) -> Any:
    if getattr(param, 'multiple', False) or param.nargs != 1:
        return [part for part in _SPLIT_VALUES.split(value.strip()) if part]
    return value


def load_config_file(path: str, cli: click.Group) -> Dict[str, Any]:
    """Parse a flat key=value file into a click default_map.

    Each key applies to the root group and every subcommand declaring an
    option of that name.
    """
    if not os.path.isfile(path):
        raise ConfigError(f"Config file not found: {path}", ErrorCode.INVALID_CONFIG_FILE)
    try:
        values = dotenv_values(path)
    except Exception as e:
        raise ConfigError(f"Could not parse config file {path}: {str(e)}", ErrorCode.INVALID_CONFIG_FILE)

    default_map: Dict[str, Any] = {}
    for raw_key, value in values.items():
        key = _normalize_key(raw_key)
        if value is None:
            raise ConfigError(f"Config key has no value: {raw_key}", ErrorCode.INVALID_CONFIG_FILE)

        matched = False
        root_param = next((p for p in cli.params if p.name == key and p.expose_value), None)
        if root_param is not None:
            matched = True
            default_map[key] = _coerce(root_param, value)

        for command_path, command in _walk_commands(cli):
            param = next((p for p in command.params if p.name == key), None)
            if param is None:
                continue
            matched = True
            node = default_map
            for name in command_path:
                node = node.setdefault(name, {})
            node[key] = _coerce(param, value)

        if not matched:
            raise ConfigError(f"Unknown config key: {raw_key}", ErrorCode.UNKNOWN_CONFIG_KEY,
                              details={'path': path, 'key': raw_key})

    logger.info(f"Loaded {len(values)} settings from config file {path}")
    return default_map


def effective_config(ctx: click.Context) -> Dict[str, Dict[str, Any]]:
    """Value and source of every parameter of the invoked command."""
    result = {}
    for name, value in sorted(ctx.params.items()):
        source = ctx.get_parameter_source(name)
        if isinstance(value, tuple):
            value = list(value)
        result[name] = {
            'value': value,
            'source': source.name.lower() if source is not None else 'default',
        }
    return result


def get_config(config_name: Optional[str] = None):
    return config[config_name or os.environ.get('TICKTOCK_ENV', 'default')]
