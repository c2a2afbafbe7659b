# -*- coding: utf-8 -*-
from crystalwalk.__version__ import __version__
from crystalwalk.chain import build_shape_graph, exact_diffusivity, solve_corrector
from crystalwalk.config import get_argument_parser, load_config
from crystalwalk.lattice import HeightFunction, make_params
from crystalwalk.log import configure_logging
from crystalwalk.loops import Loop, from_loops, to_loops
from crystalwalk.montecarlo import SimConfig, estimate_diffusivity
from crystalwalk.schema_parser import SchemaParser
from crystalwalk.shapes import Shape, enumerate_shapes, nu, reconstruct_from_shape
from crystalwalk.verify import run_verification

__all__ = [
    "__version__",
    "make_params",
    "HeightFunction",
    "Shape",
    "Loop",
    "SimConfig",
    "SchemaParser",
    "nu",
    "reconstruct_from_shape",
    "enumerate_shapes",
    "to_loops",
    "from_loops",
    "build_shape_graph",
    "solve_corrector",
    "exact_diffusivity",
    "estimate_diffusivity",
    "run_verification",
    "get_argument_parser",
    "load_config",
    "configure_logging",
]
