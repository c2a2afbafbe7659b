# -*- coding: utf-8 -*-
"""crystalwalk Logging Utilities

This module provides the default logging configuration used by the command line
front end and a helper for applying a custom one.

Example:
    To use this just call ``configure_logging`` before starting a computation:

    .. code-block:: python

        from crystalwalk.log import configure_logging, default_config

        configure_logging(default_config("DEBUG"), command="exact-sigma")
"""

import copy
import json
import logging.config
import os
import re

DEFAULT_LOGGERS = {
    "yapconf": {"level": "WARN"},
}

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_FORMATTERS = {"default": {"format": DEFAULT_FORMAT}}

# Artifacts go to stdout, so logs go to stderr
DEFAULT_HANDLERS = {
    "default": {
        "class": "logging.StreamHandler",
        "formatter": "default",
        "stream": "ext://sys.stderr",
    }
}

DEFAULT_ROOT = {"level": "INFO", "handlers": ["default"]}

DEFAULT_LOGGING_TEMPLATE = {
    "version": 1,
    "disable_existing_loggers": False,
    "loggers": DEFAULT_LOGGERS,
    "formatters": DEFAULT_FORMATTERS,
    "handlers": DEFAULT_HANDLERS,
    "root": DEFAULT_ROOT,
}

# Fields of a logging configuration filled in by configure_logging
TEMPLATE_FIELDS = re.compile(r"%\((command|seed)\)s")


def default_config(level="INFO"):
    """Get a basic logging configuration with the given level"""
    config = copy.deepcopy(DEFAULT_LOGGING_TEMPLATE)
    config["root"]["level"] = level

    return config


def load_logging_config(path):
    """Read a JSON logging configuration from disk"""
    with open(path) as config_file:
        return json.load(config_file)


def configure_logging(raw_config, command=None, seed=None):
    """Load and enable a logging configuration

    WARNING: This method will modify the current logging configuration.

    ``%(command)s`` and ``%(seed)s`` in the configuration are replaced by the
    keyword arguments passed to this function. For example, a handler like this:

    .. code-block:: json

        {"class": "logging.FileHandler", "filename": "logs/%(command)s-%(seed)s.log"}

    Will result in one log file per command and seed. Other ``%(...)s`` fields are
    left for the logging formatters.

    This will also ensure that directories exist for any file-based handlers.

    Args:
        raw_config: Configuration to apply
        command: Used for configuration templating
        seed: Used for configuration templating

    Returns:
        None
    """
    values = {"command": command, "seed": seed}
    templated = TEMPLATE_FIELDS.sub(
        lambda match: str(values[match.group(1)]), json.dumps(raw_config)
    )
    logging_config = json.loads(templated)

    # Now make sure that directories for all file handlers exist
    for handler in logging_config.get("handlers", {}).values():
        if "filename" in handler:
            dir_name = os.path.dirname(os.path.abspath(handler["filename"]))
            if not os.path.exists(dir_name):
                os.makedirs(dir_name)

    logging.config.dictConfig(logging_config)
