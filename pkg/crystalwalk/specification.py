# -*- coding: utf-8 -*-

_MODEL_SPEC = {
    "p": {
        "type": "str",
        "description": "Up-step counts per line, written as 'a,b'",
        "default": "3,3",
    },
    "n": {
        "type": "str",
        "description": "Down-step counts per line, written as 'a,b'",
        "default": "1,1",
    },
}

_RUN_SPEC = {
    "seed": {
        "type": "int",
        "description": "Root seed for every random stream",
        "default": 0,
    },
    "out": {
        "type": "str",
        "description": "Artifact path (standard output when empty)",
        "default": "",
    },
    "format": {
        "type": "str",
        "description": "Artifact format",
        "default": "json",
        "choices": ["json", "csv"],
    },
    "workers": {
        "type": "int",
        "description": "Number of parallel workers",
        "default": 1,
        "env_name": "WORKERS",
    },
    "include_timing": {
        "type": "bool",
        "description": "Embed wall-clock duration in artifacts",
        "long_description": "Off by default so that identical seeds and "
        "configurations produce byte-identical artifacts.",
        "default": False,
    },
}

_LOGGING_SPEC = {
    "log_level": {
        "type": "str",
        "description": "Root logging level",
        "default": "INFO",
        "choices": ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    },
    "log_config": {
        "type": "str",
        "description": "Path to a JSON logging configuration",
        "required": False,
    },
}

_SOLVER_SPEC = {
    "shape_budget": {
        "type": "int",
        "description": "Largest loop-count bound accepted for enumeration",
        "default": 2000000,
    },
    "exact_threshold": {
        "type": "int",
        "description": "Largest shape count solved in exact rational arithmetic",
        "default": 400,
    },
    "solver_tolerance": {
        "type": "float",
        "description": "Residual tolerance of the iterative corrector solve",
        "default": 1e-10,
    },
    "graph_strategy": {
        "type": "str",
        "description": "How shape adjacency is computed",
        "default": "closure",
        "choices": ["closure", "pairwise"],
    },
}

_SIMULATION_SPEC = {
    "steps": {
        "type": "int",
        "description": "Steps per Monte Carlo run",
        "default": 200000,
    },
    "runs": {
        "type": "int",
        "description": "Number of independent Monte Carlo runs",
        "default": 4,
    },
    "burn_in": {
        "type": "int",
        "description": "Discarded steps per run (negative means automatic)",
        "default": -1,
    },
    "batch_window": {
        "type": "int",
        "description": "Batch-means window (non-positive means sqrt(steps))",
        "default": 0,
    },
    "samples": {
        "type": "int",
        "description": "Sample count for sampling experiments",
        "default": 100000,
    },
    "eps": {
        "type": "str",
        "description": "Comma separated thresholds for normalized strip widths",
        "default": "0.25",
    },
    "p_list": {
        "type": "str",
        "description": "Semicolon separated list of p pairs for sweeps",
        "default": "2,2;3,3;4,4",
    },
    "g": {
        "type": "int",
        "description": "Number of loop pairs for the integral check",
        "default": 1,
    },
    "x": {
        "type": "int",
        "description": "Up-step count of the gate concentration walks (0 skips)",
        "default": 0,
    },
    "y": {
        "type": "int",
        "description": "Down-step count of the gate concentration walks (0 skips)",
        "default": 0,
    },
}

_OUTPUT_SPEC = {
    "suite": {
        "type": "str",
        "description": "Verification suite to run",
        "default": "all",
        "choices": [
            "neighbour-criterion",
            "volume-formula",
            "closed-form",
            "tau-involution",
            "corrector",
            "bijection",
            "counts",
            "lemma8",
            "lemma9",
            "lemma20",
            "lemma21",
            "all",
        ],
    },
    "shape": {
        "type": "str",
        "description": "Shape selection: 'index:<k>', 'random' or a JSON file path",
        "default": "index:0",
    },
}

SPECIFICATION = {}
SPECIFICATION.update(_MODEL_SPEC)
SPECIFICATION.update(_RUN_SPEC)
SPECIFICATION.update(_LOGGING_SPEC)
SPECIFICATION.update(_SOLVER_SPEC)
SPECIFICATION.update(_SIMULATION_SPEC)
SPECIFICATION.update(_OUTPUT_SPEC)
