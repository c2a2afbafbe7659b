# -*- coding: utf-8 -*-
"""Command line front end

Every command except ``render`` writes a JSON artifact envelope (or CSV rows when
``--format csv`` is given and the command has a tabular form). Exit codes:
0 on success, 2 on parameter errors, 3 when an enumeration exceeds the budget,
4 when a verification suite fails, 1 on any other error.
"""

import csv
import io
import logging
import sys
import time
from argparse import ArgumentParser
from collections import OrderedDict

import numpy as np

from crystalwalk.__version__ import __version__
from crystalwalk.chain import build_shape_graph, exact_diffusivity, gap_trend
from crystalwalk.config import (
    get_argument_parser,
    load_config,
    parse_pair,
    parse_pair_list,
    parse_rationals,
)
from crystalwalk.errors import (
    BudgetExceededError,
    CrystalWalkException,
    ParameterError,
    parse_exception_as_json,
)
from crystalwalk.lattice import make_params
from crystalwalk.log import configure_logging, default_config, load_logging_config
from crystalwalk.loops import loop_space_size, random_shape
from crystalwalk.models import Artifact, GraphSummary
from crystalwalk.montecarlo import (
    SimConfig,
    counting_constant_check,
    estimate_diffusivity,
    gate_concentration_check,
    simplex_integral_check,
    strip_statistics,
)
from crystalwalk.render import render_svg
from crystalwalk.schema_parser import SchemaParser
from crystalwalk.shapes import enumerate_shapes
from crystalwalk.verify import raise_for_failure, run_verification

logger = logging.getLogger(__name__)

SWEEP_HEADER = [
    "p1",
    "p2",
    "n1",
    "n2",
    "shapes",
    "edges",
    "sigma2",
    "gap",
    "p_same",
    "p_outside",
]


def _params(config):
    return make_params(parse_pair(config.p, name="p"), parse_pair(config.n, name="n"))


def _graph(params, config):
    return build_shape_graph(
        params,
        budget=config.shape_budget,
        strategy=config.graph_strategy,
        workers=config.workers,
    )


def _csv(rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def _require_json(config, command):
    if config.format != "json":
        raise ParameterError("%s has no %s form" % (command, config.format))


def params_command(config):
    _require_json(config, "params")
    params = _params(config)
    return {
        "p": list(params.p),
        "n": list(params.n),
        "t": list(params.t),
        "q": [str(q) for q in params.q],
        "g": params.g,
        "d": list(params.d),
        "volume": params.volume,
        "loop_length": params.loop_length,
        "period": str(params.period),
        "slope": str(params.slope),
        "loop_space_size": loop_space_size(params),
    }


def enumerate_command(config):
    params = _params(config)
    shapes = enumerate_shapes(params, budget=config.shape_budget, workers=config.workers)
    if config.format == "csv":
        return _csv([["index", "shape"]] + [[k, s.hex] for k, s in enumerate(shapes)])
    return {"count": len(shapes), "shapes": shapes}


def graph_command(config):
    _require_json(config, "graph")
    params = _params(config)
    graph = _graph(params, config)
    degrees = [graph.degree(a) for a in range(graph.shape_count)]
    return GraphSummary(
        p=list(params.p),
        n=list(params.n),
        shape_count=graph.shape_count,
        edge_count=graph.edge_count,
        connected=graph.is_connected(),
        min_degree=min(degrees) if degrees else None,
        max_degree=max(degrees) if degrees else None,
        strategy=graph.strategy,
    )


def _diffusivity(params, config):
    return exact_diffusivity(
        _graph(params, config),
        threshold=config.exact_threshold,
        tolerance=config.solver_tolerance,
    )


def exact_sigma_command(config):
    report = _diffusivity(_params(config), config)
    if config.format == "csv":
        return _csv([SWEEP_HEADER, report.csv_row()])
    return report


def sweep_command(config):
    n = parse_pair(config.n, name="n")
    reports = [_diffusivity(make_params(p, n), config) for p in parse_pair_list(config.p_list)]

    shrinking, steady = gap_trend(reports)
    if shrinking and steady:
        logger.info("Gap to the limit shrinks across the sweep")
    else:
        logger.warning(
            "Gap to the limit does not shrink across the sweep (last below first: %s, "
            "non-increasing after the first: %s); see the p_same and p_outside columns",
            shrinking,
            steady,
        )

    if config.format == "csv":
        return _csv([SWEEP_HEADER] + [report.csv_row() for report in reports])
    return reports


def simulate_command(config):
    _require_json(config, "simulate")
    params = _params(config)
    try:
        graph = _graph(params, config)
    except BudgetExceededError as ex:
        logger.info("Simulating without a shape graph: %s", ex)
        graph = None

    return estimate_diffusivity(
        params, SimConfig.from_config(config), graph=graph, workers=config.workers
    )


def sample_loops_command(config):
    _require_json(config, "sample-loops")
    params = _params(config)
    strips_seed, counting_seed, gate_seed = np.random.SeedSequence(config.seed).spawn(3)

    result = OrderedDict()
    result["strips"] = strip_statistics(
        params, config.samples, parse_rationals(config.eps), np.random.default_rng(strips_seed)
    )
    result["counting"] = counting_constant_check(
        params, config.samples, np.random.default_rng(counting_seed)
    )
    if config.x > 0 and config.y > 0:
        result["gate"] = [
            gate_concentration_check(
                config.x, config.y, eps, config.samples, np.random.default_rng(gate_seed)
            )
            for eps in parse_rationals(config.eps)
        ]
    return result


def integral_check_command(config):
    _require_json(config, "integral-check")
    return simplex_integral_check(config.g, config.samples, np.random.default_rng(config.seed))


def verify_command(config):
    _require_json(config, "verify")
    return run_verification(
        _params(config),
        suite=config.suite,
        budget=config.shape_budget,
        workers=config.workers,
        seed=config.seed,
    )


def select_shape(params, config):
    """Resolve ``--shape``: ``index:<k>``, ``random`` or a path to a JSON shape"""
    choice = config.shape
    if choice == "random":
        return random_shape(params, np.random.default_rng(config.seed))

    if choice.startswith("index:"):
        try:
            index = int(choice.split(":", 1)[1])
        except ValueError:
            raise ParameterError("Shape index must be an integer, got %r" % choice)
        shapes = enumerate_shapes(params, budget=config.shape_budget, workers=config.workers)
        if not 0 <= index < len(shapes):
            raise ParameterError("Shape index %d outside 0..%d" % (index, len(shapes) - 1))
        return shapes[index]

    try:
        with open(choice) as shape_file:
            return SchemaParser.parse_shape(shape_file.read(), from_string=True)
    except IOError as ex:
        raise ParameterError("Unable to read shape file %s: %s" % (choice, ex))


def render_command(config):
    return render_svg(select_shape(_params(config), config))


COMMANDS = OrderedDict(
    [
        ("params", (params_command, "Show derived torus parameters")),
        ("enumerate", (enumerate_command, "List every shape")),
        ("graph", (graph_command, "Summarize the shape graph")),
        ("exact-sigma", (exact_sigma_command, "Exact diffusivity from the corrector")),
        ("sweep", (sweep_command, "Exact diffusivity across a list of p")),
        ("simulate", (simulate_command, "Monte Carlo diffusivity estimate")),
        ("sample-loops", (sample_loops_command, "Strip statistics of uniform loops")),
        ("verify", (verify_command, "Run identity verification suites")),
        ("integral-check", (integral_check_command, "Monte Carlo simplex integral")),
        ("render", (render_command, "SVG picture of a shape and its loops")),
    ]
)

# Commands whose result is written as is, never wrapped in an envelope
RAW_COMMANDS = ("render",)


def get_parser():
    """ArgumentParser with one subcommand per command, each taking every option"""
    parser = ArgumentParser(prog="crystalwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        get_argument_parser(commands.add_parser(name, help=help_text))
    return parser


def run(command, config):
    """Execute ``command`` and return the text to write

    Raises:
        CrystalWalkException: Any failure of the command; a failing verification
            suite raises after its report has been written
    """
    handler, _ = COMMANDS[command]

    started = time.perf_counter()
    result = handler(config)
    duration = time.perf_counter() - started

    if command in RAW_COMMANDS or isinstance(result, str):
        text = result
    else:
        artifact = Artifact(
            command=command,
            version=__version__,
            config=config.to_dict(),
            seed=config.seed,
            result=result,
            duration=duration if config.include_timing else None,
        )
        text = SchemaParser.serialize_artifact(artifact) + "\n"

    _write(text, config.out)

    if command == "verify":
        raise_for_failure(result)

    return text


def _write(text, path):
    if not path:
        sys.stdout.write(text)
        return
    with open(path, "w") as out_file:
        out_file.write(text)
    logger.info("Wrote %s", path)


def main(argv=None):
    """Console entry point

    Args:
        argv (list, optional): Arguments without the program name

    Returns:
        int: Exit code
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = get_parser()
    parsed = parser.parse_args(argv)
    if not parsed.command:
        parser.print_usage(sys.stderr)
        return ParameterError.exit_code

    try:
        config = load_config(cli_args=argv, argument_parser=parser)
        if config.log_config:
            logging_config = load_logging_config(config.log_config)
        else:
            logging_config = default_config(config.log_level)
        configure_logging(logging_config, command=parsed.command, seed=config.seed)

        run(parsed.command, config)
    except CrystalWalkException as ex:
        logger.log(
            getattr(ex, "_cw_error_log_level", logging.ERROR),
            "%s failed: %s",
            parsed.command,
            ex,
            exc_info=not getattr(ex, "_cw_suppress_stacktrace", False),
        )
        sys.stderr.write(parse_exception_as_json(ex) + "\n")
        return ex.exit_code
    except Exception as ex:
        logger.exception("%s failed unexpectedly: %s", parsed.command, ex)
        sys.stderr.write(parse_exception_as_json(ex) + "\n")
        return CrystalWalkException.exit_code

    return 0


if __name__ == "__main__":
    sys.exit(main())
