# -*- coding: utf-8 -*-
import logging
from fractions import Fraction

import pytest

from crystalwalk.chain import (
    EdgeFunctional,
    Intertwining,
    ShapeGraph,
    _exact_solve,
    build_shape_graph,
    drift_residuals,
    exact_diffusivity,
    gap_trend,
    intertwine_neighbor_test,
    outside_fraction,
    shape_neighbours,
    solve_corrector,
    stationary_distribution,
    stationary_second_moment,
    variance_objective,
    y_direct,
    y_volume,
)
from crystalwalk.errors import BudgetExceededError, DomainError, ParameterError
from crystalwalk.lattice import make_params, neighbor_delta
from crystalwalk.models import DiffusivityReport


@pytest.fixture(params=["small_graph", "double_graph", "worked_graph"])
def graph(request):
    return request.getfixturevalue(request.param)


class TestShapeGraph(object):
    def test_symmetric(self, graph):
        for a, b in graph.pairs():
            assert a in graph.adjacency[b]
            assert graph.increments[(b, a)] == -graph.increments[(a, b)]
            assert graph.origins[(b, a)] == -graph.origins[(a, b)]

    def test_connected(self, graph):
        assert graph.is_connected()

    def test_counts(self, graph):
        assert graph.edge_count == sum(graph.degree(a) for a in range(len(graph))) + len(graph)
        assert graph.total_weight == graph.edge_count + graph.shape_count

    def test_shapes_sorted(self, graph):
        assert graph.shapes == sorted(graph.shapes)
        for k, shape in enumerate(graph.shapes):
            assert graph.position(shape) == k

    def test_neighbours_are_neighbours(self, small_graph):
        for shape in small_graph.shapes:
            for other in shape_neighbours(small_graph, shape):
                assert neighbor_delta(shape, other)

    def test_position_unknown(self, small_graph, worked_shape):
        with pytest.raises(DomainError):
            small_graph.position(worked_shape)

    @pytest.mark.parametrize("p,n", [((1, 1), (1, 1)), ((2, 2), (1, 1)), ((1, 1), (2, 2))])
    def test_pairwise_agrees(self, p, n):
        params = make_params(p, n)
        closure = build_shape_graph(params)
        pairwise = build_shape_graph(params, strategy="pairwise")
        assert pairwise.strategy == "pairwise"
        assert pairwise.adjacency == closure.adjacency
        assert pairwise.increments == closure.increments
        assert pairwise.origins == closure.origins

    def test_workers(self, double_params, double_graph):
        threaded = build_shape_graph(double_params, workers=4)
        assert threaded.adjacency == double_graph.adjacency

    def test_unknown_strategy(self, small_params):
        with pytest.raises(ParameterError):
            build_shape_graph(small_params, strategy="guess")

    def test_budget(self, worked_params):
        with pytest.raises(BudgetExceededError):
            build_shape_graph(worked_params, budget=100)


class TestY(object):
    def test_direct(self, small_graph):
        for a, b in small_graph.pairs():
            shape_a, shape_b = small_graph.shapes[a], small_graph.shapes[b]
            assert y_direct(shape_a, shape_b) == small_graph.increments[(a, b)]

    def test_direct_same_shape(self, worked_shape):
        with pytest.raises(DomainError):
            y_direct(worked_shape, worked_shape)

    def test_volume_formula(self, graph):
        for a, b in graph.pairs():
            shape_a, shape_b = graph.shapes[a], graph.shapes[b]
            if shape_a.isdisjoint(shape_b):
                assert y_volume(shape_a, shape_b) == graph.increments[(a, b)]

    def test_volume_overlap(self, worked_shape, worked_graph):
        other = next(
            s for s in worked_graph.shapes if s != worked_shape and s.bits & worked_shape.bits
        )
        with pytest.raises(DomainError):
            y_volume(worked_shape, other)

    def test_functional_antisymmetry(self, small_graph):
        a, b = next(small_graph.pairs())
        with pytest.raises(DomainError):
            EdgeFunctional(small_graph, {(a, b): Fraction(1)})
        with pytest.raises(DomainError):
            EdgeFunctional(small_graph, {(a, a): Fraction(1)})

    def test_functional_difference(self, small_graph):
        y = small_graph.y_functional()
        zero = y - y
        assert all(zero(a, b) == 0 for a, b in small_graph.pairs())


class TestIntertwining(object):
    def test_same_shape(self, worked_shape):
        assert intertwine_neighbor_test(worked_shape, worked_shape) is Intertwining.INAPPLICABLE

    def test_agrees_with_propagation(self, graph):
        for a in range(graph.shape_count):
            for b in range(a + 1, graph.shape_count):
                verdict = intertwine_neighbor_test(graph.shapes[a], graph.shapes[b])
                if verdict is Intertwining.INAPPLICABLE:
                    continue
                assert (verdict is Intertwining.YES) == (b in graph.adjacency[a])


class TestCorrector(object):
    def test_zero_drift(self, graph):
        kappa = solve_corrector(graph, mode="exact")
        assert kappa.exact
        assert kappa[0] == 0
        assert all(r == 0 for r in drift_residuals(graph, kappa))

    def test_gauge(self, graph):
        kappa = solve_corrector(graph, mode="exact")
        assert variance_objective(graph, kappa.shifted(7)) == variance_objective(graph, kappa)
        assert all(r == 0 for r in drift_residuals(graph, kappa.shifted(-3)))

    def test_zero_functional(self, small_graph):
        kappa = solve_corrector(small_graph, y=EdgeFunctional(small_graph, {}), mode="exact")
        assert all(v == 0 for v in kappa.values)

    def test_iterative(self, double_graph):
        exact = solve_corrector(double_graph, mode="exact")
        approx = solve_corrector(double_graph, mode="iterative", tolerance=1e-10)
        assert not approx.exact
        assert approx.residual <= 1e-10
        for e, v in zip(exact.values, approx.values):
            assert v == pytest.approx(float(e), abs=1e-6)

    def test_auto_threshold(self, small_graph):
        assert solve_corrector(small_graph, threshold=0).exact is False
        assert solve_corrector(small_graph).exact is True

    def test_auto_fallback_warns(self, caplog, small_graph):
        with caplog.at_level(logging.WARNING):
            kappa = solve_corrector(small_graph, threshold=1)

        assert kappa.exact is False
        warnings = [r for r in caplog.records if r.levelno == logging.WARNING]
        assert any("exact threshold" in r.getMessage() for r in warnings)

    def test_exact_matches_iterative(self, graph):
        exact = solve_corrector(graph, mode="exact")
        approx = solve_corrector(graph, mode="iterative")
        for e, v in zip(exact.values, approx.values):
            assert v == pytest.approx(float(e), abs=1e-6)

    @pytest.mark.parametrize(
        "entries,rhs,expected",
        [
            (
                {(0, 0): 2, (0, 1): -1, (1, 0): -1, (1, 1): 2},
                [Fraction(1, 2), Fraction(1, 3)],
                [Fraction(4, 9), Fraction(7, 18)],
            ),
            (
                {(0, 0): 2, (0, 1): -1, (1, 0): -1, (1, 1): 2, (1, 2): -1, (2, 1): -1, (2, 2): 2},
                [Fraction(1), Fraction(0), Fraction(0)],
                [Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)],
            ),
            ({(0, 0): 3}, [Fraction(0)], [Fraction(0)]),
        ],
    )
    def test_sparse_elimination(self, entries, rhs, expected):
        assert _exact_solve(entries, rhs) == expected

    def test_unknown_mode(self, small_graph):
        with pytest.raises(ParameterError):
            solve_corrector(small_graph, mode="guess")

    def test_disconnected(self, small_params, small_graph):
        shapes = small_graph.shapes[:2]
        graph = ShapeGraph(small_params, shapes, [[], []], {}, {})
        with pytest.raises(DomainError):
            solve_corrector(graph)

    def test_single_shape(self, small_params, small_graph):
        graph = ShapeGraph(small_params, small_graph.shapes[:1], [[]], {}, {})
        kappa = solve_corrector(graph)
        assert kappa.values == [0]


class TestDiffusivity(object):
    def test_stationary_law(self, graph):
        law = stationary_distribution(graph)
        assert sum(law) == 1
        assert all(value > 0 for value in law)

    def test_decomposition(self, graph):
        report = exact_diffusivity(graph)
        assert report.exact
        assert report.solver_mode == "exact"
        assert report.sigma2_Xhat == report.sigma2_Y + report.p_same_shape
        assert report.p_same_shape == Fraction(2 * graph.shape_count, graph.total_weight)
        assert report.limit_value == Fraction(1, 1 + 2 * graph.params.g)
        assert report.gap == abs(report.sigma2_Xhat - report.limit_value)
        assert report.shape_count == graph.shape_count

    def test_second_moment(self, graph):
        kappa = solve_corrector(graph, mode="exact")
        report = exact_diffusivity(graph, kappa=kappa)
        assert stationary_second_moment(graph, kappa) == report.sigma2_Xhat

    def test_minimal_variance(self, small_graph):
        kappa = solve_corrector(small_graph, mode="exact")
        best = variance_objective(small_graph, kappa)
        for a in range(1, small_graph.shape_count):
            values = list(kappa.values)
            values[a] += Fraction(1, 10)
            assert variance_objective(small_graph, values) > best

    def test_iterative_report(self, double_graph):
        exact = exact_diffusivity(double_graph)
        approx = exact_diffusivity(double_graph, threshold=0)
        assert approx.solver_mode == "iterative"
        assert not approx.exact
        assert approx.sigma2_Xhat == pytest.approx(float(exact.sigma2_Xhat), abs=1e-6)

    def test_csv_row(self, small_graph):
        row = exact_diffusivity(small_graph).csv_row()
        assert row[:4] == [2, 2, 1, 1]
        assert row[4] == small_graph.shape_count
        assert row[-2:] == [
            Fraction(2 * small_graph.shape_count, small_graph.total_weight),
            outside_fraction(small_graph),
        ]

    def test_outside_fraction(self, graph):
        report = exact_diffusivity(graph)
        assert report.p_outside_P == outside_fraction(graph)
        assert report.p_same_shape <= report.p_outside_P <= 1


class TestGapTrend(object):
    @pytest.mark.parametrize(
        "gaps,expected",
        [
            ([0.3, 0.2, 0.1], (True, True)),
            ([0.2, 0.3, 0.1], (True, True)),
            ([0.3, 0.1, 0.2], (True, False)),
            ([0.1, 0.05, 0.2], (False, False)),
            ([0.1], (False, True)),
        ],
    )
    def test_trend(self, gaps, expected):
        assert gap_trend([DiffusivityReport(gap=gap) for gap in gaps]) == expected

    def test_small_tori(self, tiny_params, small_graph, worked_graph):
        reports = [
            exact_diffusivity(build_shape_graph(tiny_params)),
            exact_diffusivity(small_graph),
            exact_diffusivity(worked_graph),
        ]

        sigma2 = [float(report.sigma2_Xhat) for report in reports]
        assert sigma2 == pytest.approx([0.4210526, 0.2779085, 0.219232], abs=1e-5)
        assert all(report.exact for report in reports)

        # below the limit and still falling at p = (3, 3)
        assert gap_trend(reports) == (False, False)


@pytest.mark.slow
class TestLargerTorus(object):
    @pytest.fixture(scope="class")
    def four_graph(self):
        return build_shape_graph(make_params((4, 4), (1, 1)))

    def test_falls_back_to_iterative(self, four_graph):
        report = exact_diffusivity(four_graph)
        assert four_graph.shape_count == 630
        assert report.solver_mode == "iterative"
        assert float(report.sigma2_Xhat) == pytest.approx(0.18934, abs=5e-5)

    def test_exact_drift(self, four_graph):
        kappa = solve_corrector(four_graph, mode="exact")
        assert all(r == 0 for r in drift_residuals(four_graph, kappa))
