# -*- coding: utf-8 -*-
from fractions import Fraction

import pytest

from crystalwalk.errors import DomainError
from crystalwalk.strip_corrector import (
    StripSystem,
    decompose,
    in_P,
    kappa_strip,
    kappa_strip_raster,
    tau,
    verify_tau_involution,
    z_closed_form,
)


@pytest.fixture(params=["small_graph", "double_graph", "worked_graph"])
def graph(request):
    return request.getfixturevalue(request.param)


class TestStripSystem(object):
    def test_worked(self, worked_shape):
        system = StripSystem(worked_shape)
        assert len(system.loops) == 1
        assert not system.whole
        assert system.strips[0].r == 3

    def test_two_loops(self, double_graph):
        for shape in double_graph.shapes:
            assert len(StripSystem(shape).strips) == 2


class TestKappaStrip(object):
    def test_bound(self, graph):
        for shape in graph.shapes:
            value = kappa_strip(shape)
            assert isinstance(value, Fraction)
            assert abs(value) <= 1

    def test_translation_invariant(self, worked_shape):
        assert kappa_strip(worked_shape.translate(1, 0)) == kappa_strip(worked_shape)

    def test_raster_agrees(self, worked_shape):
        estimate, tolerance = kappa_strip_raster(worked_shape, step=Fraction(1, 16))
        assert abs(estimate - kappa_strip(worked_shape)) <= tolerance

    def test_raster_agrees_two_loops(self, double_graph):
        for shape in double_graph.shapes[:3]:
            estimate, tolerance = kappa_strip_raster(shape, step=Fraction(1, 12))
            assert abs(estimate - kappa_strip(shape)) <= tolerance

    def test_raster_step(self, worked_shape):
        with pytest.raises(DomainError):
            kappa_strip_raster(worked_shape, step=Fraction(3, 7))


class TestClosedForm(object):
    def test_not_in_P(self, worked_shape):
        assert not in_P(worked_shape, worked_shape)
        with pytest.raises(DomainError):
            z_closed_form(worked_shape, worked_shape)
        with pytest.raises(DomainError):
            tau(worked_shape, worked_shape)

    def test_in_P_symmetric(self, graph):
        for a, b in graph.pairs():
            assert in_P(graph.shapes[a], graph.shapes[b]) == in_P(graph.shapes[b], graph.shapes[a])

    def test_decompose(self, graph):
        kappa = [kappa_strip(shape) for shape in graph.shapes]
        y, z, d = decompose(graph, kappa)
        for a, b in graph.pairs():
            assert y(a, b) == z(a, b) + d(a, b)
            assert z(a, b) == -z(b, a)
            if in_P(graph.shapes[a], graph.shapes[b]):
                assert d(a, b) == 0
                closed = z_closed_form(graph.shapes[a], graph.shapes[b])
                assert closed == y(a, b) + kappa[b] - kappa[a]
            else:
                assert z(a, b) == kappa[a] - kappa[b]

    def test_d_bounded(self, graph):
        _, _, d = decompose(graph)
        assert all(abs(d(a, b)) <= 3 for a, b in graph.pairs())


class TestTau(object):
    def test_involution(self, graph):
        for shape in graph.shapes:
            report = verify_tau_involution(shape)
            assert report.passed, report.failures
            assert report.total == 0
            assert report.shape == shape

    def test_pairs_counted(self, worked_graph):
        pairs = sum(verify_tau_involution(shape).pairs for shape in worked_graph.shapes)
        in_p = sum(
            in_P(worked_graph.shapes[a], worked_graph.shapes[b]) for a, b in worked_graph.pairs()
        )
        assert pairs == in_p
