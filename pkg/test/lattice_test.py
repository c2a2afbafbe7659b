# -*- coding: utf-8 -*-
from fractions import Fraction

import pytest

from crystalwalk.errors import DomainError, ParameterError
from crystalwalk.lattice import (
    Edge,
    HeightFunction,
    Vertex,
    average_height,
    chi,
    line,
    make_params,
    neighbor_delta,
    neighbour_deltas,
    sgn,
)
from crystalwalk.shapes import Shape


class TestTorusParams(object):
    def test_worked_example(self, worked_params):
        assert worked_params.t == (4, 4)
        assert worked_params.q == (Fraction(1, 2), Fraction(1, 2))
        assert worked_params.g == 1
        assert worked_params.d == (1, 1)
        assert worked_params.volume == 16
        assert worked_params.edge_count == 32
        assert worked_params.loop_length == 8
        assert worked_params.period == 4
        assert worked_params.slope == 1

    def test_common_divisor(self, double_params):
        assert double_params.t == (3, 3)
        assert double_params.g == 2
        assert double_params.d == (1, 1)
        assert double_params.q == (Fraction(-1, 3), Fraction(-1, 3))

    def test_moves(self):
        params = make_params((1, 2), (2, 1))
        assert params.t == (3, 3)
        assert params.d == (2, 1)
        assert params.up_moves == 6
        assert params.left_moves == 3
        assert params.slope == Fraction(1, 2)
        assert params.period == Fraction(3, 2)

    @pytest.mark.parametrize(
        "p,n",
        [((0, 1), (1, 1)), ((1, 1), (1, -1)), ((1, 1, 1), (1, 1)), ((1,), (1, 1))],
    )
    def test_invalid(self, p, n):
        with pytest.raises(ParameterError):
            make_params(p, n)

    def test_equality(self, worked_params):
        assert worked_params == make_params((3, 3), (1, 1))
        assert worked_params != make_params((3, 3), (1, 2))
        assert hash(worked_params) == hash(make_params([3, 3], [1, 1]))

    def test_wrapping(self, worked_params):
        assert worked_params.vertex(5, -1) == Vertex(1, 3)
        assert worked_params.step(Vertex(3, 0), 1) == Vertex(0, 0)
        assert worked_params.step(Vertex(0, 0), 2, -1) == Vertex(0, 3)
        assert worked_params.edge(-1, 4, 2) == Edge(3, 0, 2)

    def test_bad_edge_direction(self, worked_params):
        with pytest.raises(ParameterError):
            worked_params.edge(0, 0, 3)

    def test_edge_index(self, worked_params):
        assert worked_params.edge_index(Edge(2, 0, 1)) == 2
        assert worked_params.edge_index(Edge(0, 2, 2)) == 24
        for k in range(worked_params.edge_count):
            assert worked_params.edge_index(worked_params.edge_from_index(k)) == k


class TestHeightFunction(object):
    def test_lookup(self, worked_height_function):
        assert worked_height_function.base == 3
        assert worked_height_function[Vertex(3, 0)] == Fraction(5, 2)
        assert worked_height_function[Vertex(7, 4)] == Fraction(5, 2)

    def test_from_values(self, worked_params, worked_height_function):
        values = {v: worked_height_function[v] for v in worked_params.vertices()}
        assert HeightFunction.from_values(worked_params, values) == worked_height_function

    def test_shifted(self, worked_height_function):
        shifted = worked_height_function.shifted(-3)
        assert shifted.base == 0
        assert average_height(shifted) == Fraction(3, 8)

    def test_bad_table_shape(self, worked_params, worked_rows):
        with pytest.raises(ParameterError):
            HeightFunction(worked_params, worked_rows[:3])

    def test_fractional_origin(self, worked_params, worked_rows):
        rows = [[v + Fraction(1, 2) for v in row] for row in worked_rows]
        with pytest.raises(ParameterError):
            HeightFunction(worked_params, rows)

    def test_bad_step(self, worked_params, worked_rows):
        worked_rows[1][1] += 1
        with pytest.raises(ParameterError):
            HeightFunction(worked_params, worked_rows)


class TestSgn(object):
    @pytest.mark.parametrize("edge", [Edge(2, 0, 1), Edge(0, 2, 2), Edge(3, 2, 2)])
    def test_down(self, worked_height_function, edge):
        assert sgn(worked_height_function, edge) == -1

    @pytest.mark.parametrize("edge", [Edge(0, 0, 1), Edge(0, 0, 2), Edge(3, 3, 1)])
    def test_up(self, worked_height_function, edge):
        assert sgn(worked_height_function, edge) == 1

    def test_down_count_per_line(self, worked_params, worked_height_function):
        for edge in worked_params.edges():
            steps = [sgn(worked_height_function, e) for e in line(worked_params, edge)]
            assert steps.count(-1) == worked_params.n[edge.i - 1]


def test_line(worked_params):
    assert line(worked_params, Edge(1, 2, 1)) == frozenset(Edge(x, 2, 1) for x in range(4))
    assert len(line(worked_params, Edge(1, 2, 2))) == 4


def test_average_height(worked_height_function):
    assert average_height(worked_height_function) == Fraction(27, 8)


def test_chi(worked_height_function):
    assert chi(worked_height_function) == 54 - 16 * 3


class TestNeighborDelta(object):
    def test_self(self, worked_shape):
        deltas = neighbor_delta(worked_shape, worked_shape)
        assert len(deltas) == 2
        assert {frozenset(d.values()) for d in deltas} == {frozenset([1]), frozenset([-1])}

    def test_different_tori(self, worked_shape, small_params):
        other = Shape(small_params, 0, validate=False)
        with pytest.raises(DomainError):
            neighbor_delta(worked_shape, other)


class TestNeighbourDeltas(object):
    def test_constants_first(self, worked_shape):
        deltas = neighbour_deltas(worked_shape)
        assert deltas[0].bits == worked_shape.bits
        assert deltas[0].increment == 1
        assert deltas[0].origin == 1
        assert deltas[1].bits == worked_shape.bits
        assert deltas[1].increment == -1
        assert deltas[1].origin == -1

    def test_agrees_with_propagation(self, worked_shape, worked_graph):
        for delta in neighbour_deltas(worked_shape):
            other = worked_graph.shapes[worked_graph.index[delta.bits]]
            found = neighbor_delta(worked_shape, other)
            plus = [{v for v, value in d.items() if value == 1} for d in found]
            mine = {
                v
                for v in worked_shape.params.vertices()
                if delta.plus >> worked_shape.params.vertex_index(v) & 1
            }
            assert mine in plus

    def test_increment(self, worked_shape):
        for delta in neighbour_deltas(worked_shape):
            assert delta.increment == Fraction(2 * delta.plus_count - 16, 16)
