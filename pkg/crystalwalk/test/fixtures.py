# -*- coding: utf-8 -*-
"""Pytest fixtures around the (3,3)(1,1) worked example and a few small tori"""

from fractions import Fraction

import numpy as np
import pytest

from crystalwalk.chain import build_shape_graph
from crystalwalk.lattice import Edge, HeightFunction, make_params
from crystalwalk.loops import Loop
from crystalwalk.models import (
    Artifact,
    DiffusivityEstimate,
    DiffusivityReport,
    GraphSummary,
    SuiteResult,
    VerificationReport,
)
from crystalwalk.shapes import Shape

WORKED_EDGES = [
    (2, 0, 1),
    (2, 1, 1),
    (1, 2, 1),
    (2, 3, 1),
    (0, 2, 2),
    (1, 2, 2),
    (2, 1, 2),
    (3, 2, 2),
]

WORKED_TABLE = [
    ["3", "7/2", "4", "5/2"],
    ["7/2", "4", "9/2", "3"],
    ["4", "9/2", "3", "7/2"],
    ["5/2", "3", "7/2", "2"],
]


@pytest.fixture
def worked_params():
    """t = (4, 4), q = (1/2, 1/2), a single fracture loop of length 8"""
    return make_params((3, 3), (1, 1))


@pytest.fixture
def worked_edges():
    return [Edge(*edge) for edge in WORKED_EDGES]


@pytest.fixture
def worked_shape(worked_params, worked_edges):
    return Shape.from_edges(worked_params, worked_edges)


@pytest.fixture
def worked_rows():
    """rows[y][x] of the worked example, with f(0, 0) = 3"""
    return [[Fraction(value) for value in row] for row in WORKED_TABLE]


@pytest.fixture
def worked_height_function(worked_params, worked_rows):
    return HeightFunction(worked_params, worked_rows)


@pytest.fixture
def worked_loop(worked_params):
    return Loop(worked_params, (1, 2), "LLLUUULU")


@pytest.fixture
def worked_shape_dict(worked_shape):
    return {
        "p": [3, 3],
        "n": [1, 1],
        "edges": worked_shape.edge_indices,
        "a": [1, 1],
    }


@pytest.fixture
def worked_loop_dict():
    return {"p": [3, 3], "n": [1, 1], "start": [3, 5], "moves": "LLLUUULU"}


@pytest.fixture
def worked_height_function_dict(worked_shape):
    return {"p": [3, 3], "n": [1, 1], "base": 3, "shape": worked_shape.edge_indices}


@pytest.fixture(scope="session")
def worked_graph():
    return build_shape_graph(make_params((3, 3), (1, 1)))


@pytest.fixture
def tiny_params():
    """The smallest torus, t = (2, 2)"""
    return make_params((1, 1), (1, 1))


@pytest.fixture
def small_params():
    return make_params((2, 2), (1, 1))


@pytest.fixture
def double_params():
    """gcd(n) = 2 on t = (3, 3)"""
    return make_params((1, 1), (2, 2))


@pytest.fixture(scope="session")
def small_graph():
    return build_shape_graph(make_params((2, 2), (1, 1)))


@pytest.fixture(scope="session")
def double_graph():
    return build_shape_graph(make_params((1, 1), (2, 2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def graph_summary():
    return GraphSummary(
        p=[3, 3],
        n=[1, 1],
        shape_count=10,
        edge_count=30,
        connected=True,
        min_degree=2,
        max_degree=4,
        strategy="closure",
    )


@pytest.fixture
def diffusivity_report():
    return DiffusivityReport(
        p=[2, 2],
        n=[1, 1],
        shape_count=5,
        edge_count=12,
        sigma2_Y=Fraction(1, 17),
        p_same_shape=Fraction(10, 17),
        p_outside_P=Fraction(14, 17),
        sigma2_Xhat=Fraction(11, 17),
        limit_value=Fraction(1, 3),
        gap=Fraction(16, 51),
        solver_mode="exact",
        residual=0,
    )


@pytest.fixture
def diffusivity_report_dict():
    return {
        "p": [2, 2],
        "n": [1, 1],
        "shape_count": 5,
        "edge_count": 12,
        "sigma2_Y": "1/17",
        "p_same_shape": "10/17",
        "p_outside_P": "14/17",
        "sigma2_Xhat": "11/17",
        "limit_value": "1/3",
        "gap": "16/51",
        "solver_mode": "exact",
        "residual": 0.0,
        "sigma2_Xhat_float": 11 / 17,
        "gap_float": 16 / 51,
    }


@pytest.fixture
def diffusivity_estimate():
    return DiffusivityEstimate(
        p=[2, 2],
        n=[1, 1],
        estimate=0.28,
        standard_error=0.01,
        runs=2,
        steps=5000,
        burn_in=500,
        batch_window=50,
        batch_count=90,
        same_shape_frequency=0.59,
        run_estimates=[0.27, 0.29],
    )


@pytest.fixture
def verification_report():
    return VerificationReport(
        p=[3, 3],
        n=[1, 1],
        suites=[
            SuiteResult(name="counts", passed=True, checked=3, details={"shapes": 10}),
            SuiteResult(
                name="volume-formula",
                passed=False,
                checked=1,
                details={},
                locus={"shape": "ff"},
            ),
        ],
    )


@pytest.fixture
def artifact(graph_summary):
    return Artifact(
        command="graph",
        version="0.1.0",
        config={"p": "3,3", "n": "1,1", "seed": 0},
        seed=0,
        result=graph_summary,
    )
