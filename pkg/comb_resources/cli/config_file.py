import logging

from comb_resources.cli.matrix_file import read_json
from comb_resources.optimizer.config import OptimizerConfig

logger = logging.getLogger(__package__)


def read_config(path):
    """Optimizer settings stored in a JSON config file, as a dict of OptimizerConfig fields."""
    return read_json(path, 'optimizer_config')


def merge_config(flags, config_file=None):
    """OptimizerConfig with command-line flags taking precedence over the config file and the file over the defaults.

    :param flags: dict of OptimizerConfig fields; None values mean the flag was not given
    :param config_file: optional path to a JSON config file
    """
    settings = read_config(config_file) if config_file else {}
    overridden = {field: value for field, value in flags.items() if value is not None}
    for field in sorted(set(settings) & set(overridden)):
        logger.debug(f'Flag overrides {field} = {settings[field]!r} from {config_file}')
    settings.update(overridden)
    return OptimizerConfig(**settings)
