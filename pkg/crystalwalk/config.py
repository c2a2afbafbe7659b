# -*- coding: utf-8 -*-
import logging
from argparse import ArgumentParser
from fractions import Fraction

from yapconf import YapconfSpec

from crystalwalk.errors import ParameterError
from crystalwalk.specification import SPECIFICATION

logger = logging.getLogger(__name__)


def get_argument_parser(parser=None):
    """Get an ArgumentParser pre-populated with crystalwalk arguments

    Args:
        parser (ArgumentParser, optional): Existing parser (for example a subcommand
            parser) to populate. A new one is created when omitted.

    Returns:
        ArgumentParser: Argument parser with crystalwalk arguments loaded
    """
    parser = parser or ArgumentParser()

    YapconfSpec(SPECIFICATION).add_arguments(parser)

    return parser


def load_config(cli_args=True, environment=True, argument_parser=None, **kwargs):
    """Load configuration using Yapconf

    Configuration will be loaded from these sources, with earlier sources having
    higher priority:

        1. ``**kwargs`` passed to this method
        2. Command line arguments (if ``cli_args`` argument is not False)
        3. Environment variables using the ``CW_`` prefix (if ``environment`` argument
            is not False)
        4. Default values in the crystalwalk specification

    Args:
        cli_args (Union[bool, list], optional): Specifies whether command line should be
            used as a configuration source
            - True: Argparse will use the standard sys.argv[1:]
            - False: Command line arguments will be ignored when loading configuration
            - List of strings: Will be parsed as CLI args (instead of using sys.argv)
        environment (bool): Specifies whether environment variables (with the ``CW_``
            prefix) should be used when loading configuration
        argument_parser (ArgumentParser, optional): Argument parser to use when parsing
            cli_args. Supplying this allows subcommands and additional arguments.
        **kwargs: Additional configuration overrides

    Returns:
        box.Box: The resolved configuration object
    """
    spec = YapconfSpec(SPECIFICATION, env_prefix="CW_")

    sources = []

    overrides = _known_values(kwargs)
    if overrides:
        sources.append(("kwargs", overrides))

    if cli_args:
        if cli_args is True:
            sources.append("CLI")
        else:
            if not argument_parser:
                argument_parser = get_argument_parser()

            parsed_args, unknown = argument_parser.parse_known_args(cli_args)
            if unknown:
                logger.debug("Ignoring unknown arguments %s", unknown)

            sources.append(("cli_args", _known_values(vars(parsed_args))))

    if environment:
        sources.append("ENVIRONMENT")

    return spec.load_config(*sources)


def _known_values(values):
    """Keep only specification items that were actually given"""
    return {
        key: value
        for key, value in values.items()
        if key in SPECIFICATION and value is not None
    }


def parse_pair(raw, name="pair"):
    """Parse a pair of positive integers written as 'a,b'

    Args:
        raw: The raw string (a tuple or list is passed through)
        name: Used in error messages

    Returns:
        tuple: The two integers

    Raises:
        ParameterError: The value is not two comma separated integers
    """
    if isinstance(raw, (tuple, list)):
        parts = list(raw)
    else:
        parts = str(raw).replace(" ", "").split(",")

    try:
        pair = tuple(int(part) for part in parts)
    except ValueError:
        raise ParameterError("%s must be two comma separated integers, got %r" % (name, raw))

    if len(pair) != 2:
        raise ParameterError("%s must have exactly two components, got %r" % (name, raw))

    return pair


def parse_pair_list(raw, name="p_list"):
    """Parse a semicolon separated list of pairs such as '2,2;3,3'"""
    entries = [entry for entry in str(raw).replace(" ", "").split(";") if entry]
    if not entries:
        raise ParameterError("%s must contain at least one pair" % name)

    return [parse_pair(entry, name=name) for entry in entries]


def parse_rationals(raw, name="eps"):
    """Parse comma separated rationals ('0.25,1/3') into Fractions"""
    values = []
    for entry in str(raw).replace(" ", "").split(","):
        if not entry:
            continue
        try:
            values.append(Fraction(entry))
        except (ValueError, ZeroDivisionError):
            raise ParameterError("%s entry %r is not a rational number" % (name, entry))

    if not values:
        raise ParameterError("%s must contain at least one value" % name)

    return values
