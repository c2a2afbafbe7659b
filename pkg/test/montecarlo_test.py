# -*- coding: utf-8 -*-
from fractions import Fraction

import numpy as np
import pytest
from box import Box

from crystalwalk.chain import build_shape_graph, exact_diffusivity, stationary_distribution
from crystalwalk.errors import EstimationError, ParameterError
from crystalwalk.lattice import average_height, make_params
from crystalwalk.montecarlo import (
    MoveTable,
    SimConfig,
    WalkState,
    counting_constant_check,
    estimate_diffusivity,
    exhaustive_gate_fraction,
    gate_concentration_check,
    gate_probabilities,
    sample_strips,
    simplex_integral_check,
    simplex_integral_exact,
    simulate_run,
    step_walk,
    strip_statistics,
)
from crystalwalk.shapes import reconstruct_from_shape


class TestSimConfig(object):
    def test_defaults(self):
        cfg = SimConfig()
        assert cfg.steps == 200000
        assert cfg.runs == 4
        assert cfg.window == 447
        assert cfg.burn_in_for(10) == 500
        assert cfg.burn_in_for() == 100000

    def test_explicit(self):
        cfg = SimConfig(steps=100, burn_in=7, batch_window=5)
        assert cfg.window == 5
        assert cfg.burn_in_for(10) == 7

    @pytest.mark.parametrize(
        "kwargs", [{"steps": 0}, {"runs": 0}, {"seed": -1}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ParameterError):
            SimConfig(**kwargs)

    def test_from_config(self):
        config = Box(steps=10, runs=2, burn_in=0, seed=5, batch_window=2)
        cfg = SimConfig.from_config(config)
        assert (cfg.steps, cfg.runs, cfg.burn_in, cfg.seed, cfg.window) == (10, 2, 0, 5, 2)


class TestMoveTable(object):
    def test_graph_matches_lazy(self, small_params, small_graph):
        filled = MoveTable(small_params, small_graph)
        lazy = MoveTable(small_params)
        assert len(filled) == small_graph.shape_count
        assert len(lazy) == 0
        for shape in small_graph.shapes:
            assert sorted(filled.moves(shape.bits)) == sorted(lazy.moves(shape.bits))
            assert filled.offset(shape.bits) == pytest.approx(lazy.offset(shape.bits))

    def test_offset(self, worked_params, worked_shape):
        table = MoveTable(worked_params)
        expected = float(average_height(reconstruct_from_shape(worked_shape)))
        assert table.offset(worked_shape.bits) == expected
        assert table.offset(worked_shape.bits) == 3 / 8

    def test_step_walk(self, worked_params, worked_shape, worked_graph, rng):
        state = WalkState(MoveTable(worked_params), worked_shape.bits, anchor=3)
        assert state.height == pytest.approx(27 / 8)
        for _ in range(50):
            state = step_walk(state, rng)
            assert state.bits in worked_graph.index
        assert state.shape.params == worked_params


class TestSimulation(object):
    def test_run(self, small_params, small_graph, rng):
        table = MoveTable(small_params, small_graph)
        result = simulate_run(table, small_graph.shapes[0].bits, 100, 10, 10, rng)
        assert len(result.batches) == 10
        assert result.recorded == 100
        assert sum(result.visits.values()) == 100
        assert 0 <= result.same_shape <= 100

    def test_deterministic(self, small_params, small_graph):
        cfg = SimConfig(steps=400, runs=2, burn_in=10, seed=3)
        first = estimate_diffusivity(small_params, cfg, graph=small_graph)
        second = estimate_diffusivity(small_params, cfg, graph=small_graph, workers=2)
        assert first.estimate == second.estimate
        assert first.run_estimates == second.run_estimates

    def test_seed_matters(self, small_params, small_graph):
        first = estimate_diffusivity(small_params, SimConfig(steps=400, seed=1), small_graph)
        second = estimate_diffusivity(small_params, SimConfig(steps=400, seed=2), small_graph)
        assert first.run_estimates != second.run_estimates

    def test_report(self, small_params, small_graph):
        cfg = SimConfig(steps=400, runs=3, burn_in=0, batch_window=20)
        report = estimate_diffusivity(small_params, cfg, graph=small_graph)
        assert report.batch_count == 60
        assert report.batch_window == 20
        assert report.burn_in == 0
        assert len(report.run_estimates) == 3
        assert report.standard_error >= 0

    def test_same_shape_frequency(self, small_params, small_graph):
        cfg = SimConfig(steps=20000, runs=2, burn_in=0, seed=11)
        report = estimate_diffusivity(small_params, cfg, graph=small_graph)
        expected = float(exact_diffusivity(small_graph).p_same_shape)
        assert abs(report.same_shape_frequency - expected) < 0.03

    def test_without_graph(self, tiny_params):
        cfg = SimConfig(steps=200, runs=1, burn_in=20, seed=4)
        report = estimate_diffusivity(tiny_params, cfg)
        assert report.burn_in == 20
        assert report.batch_count == 14

    def test_too_few_batches(self, small_params, small_graph):
        cfg = SimConfig(steps=1, runs=1, burn_in=0)
        with pytest.raises(EstimationError):
            estimate_diffusivity(small_params, cfg, graph=small_graph)


class TestAgreement(object):
    @pytest.mark.parametrize("params", ["tiny_params", "small_params"])
    def test_matches_exact(self, request, params):
        params = request.getfixturevalue(params)
        graph = build_shape_graph(params)
        cfg = SimConfig(steps=100000, runs=4, seed=17)

        report = estimate_diffusivity(params, cfg, graph=graph)
        exact = float(exact_diffusivity(graph).sigma2_Xhat)
        assert abs(report.estimate - exact) < 3 * report.standard_error

    def test_visit_frequencies(self, tiny_params):
        graph = build_shape_graph(tiny_params)
        table = MoveTable(tiny_params, graph)
        law = np.array([float(value) for value in stationary_distribution(graph)])

        frequencies = []
        for seed_sequence in np.random.SeedSequence(23).spawn(16):
            rng = np.random.default_rng(seed_sequence)
            result = simulate_run(table, graph.shapes[0].bits, 5000, 200, 50, rng)
            frequencies.append([result.visits[s.bits] / result.recorded for s in graph.shapes])

        frequencies = np.array(frequencies)
        sigma = frequencies.std(axis=0, ddof=1) / np.sqrt(len(frequencies))
        assert np.all(np.abs(frequencies.mean(axis=0) - law) <= 4 * sigma + 1e-3)


class TestStrips(object):
    def test_sample(self, worked_params, rng):
        centres, widths = sample_strips(worked_params, 500, rng)
        assert centres.shape == widths.shape == (500,)
        assert np.all(widths >= 0)
        assert np.all(widths <= 16)
        assert np.all((centres >= 0) & (centres < 32))

    def test_statistics(self, worked_params, rng):
        report = strip_statistics(worked_params, 2000, ["1/4", "1/2", "1"], rng)
        assert report.samples == 2000
        assert report.eps == [Fraction(1, 4), Fraction(1, 2), Fraction(1)]
        assert report.narrow_fractions == sorted(report.narrow_fractions)
        assert report.narrow_fractions[-1] == 1.0
        assert 0 <= report.ks_statistic <= 1
        assert 0 <= report.ks_pvalue <= 1
        assert 0 <= report.disjoint_fraction <= 1

    def test_counting_single_loop(self, worked_params, rng):
        report = counting_constant_check(worked_params, 2000, rng)
        assert report.expected == 1
        assert report.disjoint_samples > 0
        assert report.alternating_fraction == 1.0

    def test_counting_overlapping(self, double_params, rng):
        report = counting_constant_check(double_params, 500, rng)
        assert report.expected == Fraction(1, 3)
        assert report.disjoint_samples == 0
        assert report.alternating_fraction is None

    def test_counting_two_loops(self, rng):
        report = counting_constant_check(make_params((198, 198), (2, 2)), 2000, rng)
        assert report.expected == Fraction(1, 3)
        assert report.disjoint_samples > 100
        assert abs(report.alternating_fraction - 1 / 3) < 3 * report.standard_error

    def test_trend_in_p(self):
        reports = [
            strip_statistics(make_params(p, (1, 1)), 4000, ["1/2"], np.random.default_rng(31))
            for p in [(2, 2), (7, 7), (23, 23)]
        ]
        narrow = [report.narrow_fractions[0] for report in reports]
        disjoint = [report.disjoint_fraction for report in reports]
        ks = [report.ks_statistic for report in reports]

        assert narrow == sorted(narrow)
        assert disjoint == sorted(disjoint)
        assert disjoint[-1] > disjoint[0]
        assert ks[-1] < ks[0]


class TestGate(object):
    @pytest.mark.parametrize(
        "eps,expected", [(1, Fraction(2, 3)), (2, Fraction(1)), (Fraction(1, 2), Fraction(0))]
    )
    def test_exhaustive(self, eps, expected):
        assert exhaustive_gate_fraction(2, 2, eps) == expected

    def test_probabilities(self):
        rows = gate_probabilities(3, 5, 2)
        assert [row[0] for row in rows] == list(range(9))
        assert rows[0][1] == pytest.approx(1.0)
        assert rows[-1][1] == pytest.approx(1.0)
        for _, probability, chebyshev in rows:
            assert 0 <= chebyshev <= probability + 1e-12

    def test_monte_carlo(self, rng):
        report = gate_concentration_check(2, 2, 1, 20000, rng)
        assert report.bound == 1
        assert abs(report.fraction - 2 / 3) < 5 * report.standard_error + 1e-3
        assert len(report.step_probabilities) == 5

    @pytest.mark.parametrize("x,y", [(0, 2), (2, 0)])
    def test_invalid(self, x, y, rng):
        with pytest.raises(ParameterError):
            gate_concentration_check(x, y, 1, 10, rng)


class TestSimplex(object):
    @pytest.mark.parametrize(
        "g,expected",
        [
            (1, (Fraction(1, 6), Fraction(1, 2), Fraction(1, 3))),
            (2, (Fraction(1, 120), Fraction(1, 24), Fraction(1, 5))),
        ],
    )
    def test_exact(self, g, expected):
        assert simplex_integral_exact(g) == expected

    def test_check(self, rng):
        report = simplex_integral_check(1, 200000, rng)
        assert abs(report.integral - 1 / 6) < 5 * report.integral_standard_error
        assert abs(report.ordering_probability - 1 / 2) < 5 * report.ordering_standard_error
        assert abs(report.conditional - 1 / 3) < 5 * report.conditional_standard_error
        assert report.conditional_exact == Fraction(1, 3)

    @pytest.mark.parametrize("g,samples", [(2, 200000), (3, 1000000)])
    def test_conditional(self, g, samples):
        report = simplex_integral_check(g, samples, np.random.default_rng(g))
        assert report.conditional_exact == Fraction(1, 2 * g + 1)
        assert abs(report.conditional - 1 / (2 * g + 1)) < 3 * report.conditional_standard_error
        assert (
            abs(report.ordering_probability - float(report.ordering_exact))
            < 3 * report.ordering_standard_error
        )

    def test_invalid(self, rng):
        with pytest.raises(ParameterError):
            simplex_integral_check(0, 10, rng)


@pytest.mark.slow
class TestSixLoops(object):
    def test_counting_constant(self):
        params = make_params((997, 997), (3, 3))
        report = counting_constant_check(params, 4000, np.random.default_rng(41))
        assert report.expected == Fraction(1, 10)
        assert report.disjoint_samples > 100
        assert abs(report.alternating_fraction - 0.1) < 3 * report.standard_error
