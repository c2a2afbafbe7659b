# -*- coding: utf-8 -*-
"""Exhaustive identity checks over every shape of a small torus

Each suite walks the enumerated shapes (or pairs of shapes), counts the identities
it checked and stops at the first failure, whose description becomes the locus of
the :class:`~crystalwalk.errors.VerificationFailure` raised by :func:`raise_for_failure`.
"""

import itertools
import logging
from collections import OrderedDict
from fractions import Fraction
from math import comb

import numpy as np

from crystalwalk.chain import (
    Intertwining,
    build_shape_graph,
    drift_residuals,
    exact_diffusivity,
    intertwine_neighbor_test,
    solve_corrector,
    stationary_second_moment,
    variance_objective,
    y_volume,
)
from crystalwalk.errors import ParameterError, VerificationFailure
from crystalwalk.lattice import neighbor_delta
from crystalwalk.loops import (
    enumerate_loop_space,
    enumerate_loop_space_bruteforce,
    from_loops,
    loop_space_size,
    to_loops,
)
from crystalwalk.models import SuiteResult, VerificationReport
from crystalwalk.shapes import (
    enumerate_shapes,
    enumerate_shapes_bruteforce,
    nu,
    reconstruct_from_shape,
)
from crystalwalk.strip_corrector import (
    decompose,
    in_P,
    kappa_strip,
    verify_tau_involution,
    z_closed_form,
)

logger = logging.getLogger(__name__)

__all__ = [
    "SUITES",
    "SUITE_ALIASES",
    "VerificationContext",
    "run_verification",
    "raise_for_failure",
]

# Largest brute-force search spaces run by the counting suite
BRUTEFORCE_LIMIT = 1000000
PERTURBATIONS = 100


class VerificationContext(object):
    """Shapes, graph and correctors shared between suites, computed on demand

    Args:
        params (TorusParams): Torus parameters
        budget (int): Enumeration budget
        workers (int): Parallel workers
        seed (int): Seed of the random corrector perturbations
    """

    def __init__(self, params, budget=2000000, workers=1, seed=0):
        self.params = params
        self.budget = budget
        self.workers = workers
        self.seed = seed
        self._shapes = None
        self._graph = None
        self._kappa = None

    @property
    def shapes(self):
        if self._shapes is None:
            self._shapes = enumerate_shapes(self.params, budget=self.budget, workers=self.workers)
        return self._shapes

    @property
    def graph(self):
        if self._graph is None:
            self._graph = build_shape_graph(
                self.params, budget=self.budget, workers=self.workers, shapes=self.shapes
            )
        return self._graph

    @property
    def kappa_strip(self):
        if self._kappa is None:
            self._kappa = [kappa_strip(shape) for shape in self.graph.shapes]
        return self._kappa


def _shape_locus(shape, **extra):
    locus = {"p": list(shape.params.p), "n": list(shape.params.n), "shape": shape.hex}
    locus.update(extra)
    return locus


def _result(name, checked, details, locus=None):
    return SuiteResult(
        name=name, passed=locus is None, checked=checked, details=details, locus=locus
    )


def check_bijection(context):
    """nu inverts the reconstruction, and loops rebuild every shape"""
    checked = 0
    for shape in context.shapes:
        if nu(reconstruct_from_shape(shape)) != shape:
            return _result("bijection", checked, {}, _shape_locus(shape, check="nu"))
        checked += 1

        if from_loops(shape.params, to_loops(shape)) != shape:
            return _result("bijection", checked, {}, _shape_locus(shape, check="loops"))
        checked += 1

    return _result("bijection", checked, {"shapes": len(context.shapes)})


def _bruteforce_size(params):
    t1, t2 = params.t
    n1, n2 = params.n
    return comb(t1, n1) ** t2 * comb(t2, n2) ** t1


def check_counts(context):
    """Constructive counts against the n-to-1 formula and brute-force searches"""
    params = context.params
    details = {"shapes": len(context.shapes), "loops": loop_space_size(params)}
    checked = 0

    loops = enumerate_loop_space(params)
    checked += 1
    if len(loops) != details["loops"]:
        return _result(
            "counts", checked, details, {"check": "loop-space", "enumerated": len(loops)}
        )

    if details["loops"] * params.volume <= BRUTEFORCE_LIMIT:
        checked += 1
        if enumerate_loop_space_bruteforce(params) != loops:
            return _result("counts", checked, details, {"check": "loop-space-bruteforce"})

    details["bruteforce"] = _bruteforce_size(params) <= BRUTEFORCE_LIMIT
    if details["bruteforce"]:
        checked += 1
        found = enumerate_shapes_bruteforce(params)
        if found != list(context.shapes):
            return _result(
                "counts",
                checked,
                details,
                {"check": "shapes-bruteforce", "bruteforce": len(found)},
            )

    return _result("counts", checked, details)


def check_neighbour_criterion(context):
    """Graph adjacency, propagation and the intertwining criterion agree on all pairs"""
    graph = context.graph
    neighbours = [set(adjacent) for adjacent in graph.adjacency]
    checked = qualifying = 0

    for a, b in itertools.combinations(range(graph.shape_count), 2):
        shape_a, shape_b = graph.shapes[a], graph.shapes[b]
        linked = bool(neighbor_delta(shape_a, shape_b))
        checked += 1
        if linked != (b in neighbours[a]):
            locus = _shape_locus(shape_a, partner=shape_b.hex, check="adjacency")
            return _result("neighbour-criterion", checked, {}, locus)

        verdict = intertwine_neighbor_test(shape_a, shape_b)
        if verdict is Intertwining.INAPPLICABLE:
            continue
        qualifying += 1
        if (verdict is Intertwining.YES) != linked:
            locus = _shape_locus(
                shape_a, partner=shape_b.hex, check="intertwining", neighbours=linked
            )
            return _result("neighbour-criterion", checked, {"qualifying": qualifying}, locus)

    details = {"pairs": checked, "qualifying": qualifying, "edges": graph.edge_count}
    return _result("neighbour-criterion", checked, details)


def check_volume_formula(context):
    """The volume formula matches the propagated increment on disjoint neighbours"""
    graph = context.graph
    checked = 0
    for a, b in graph.pairs():
        shape_a, shape_b = graph.shapes[a], graph.shapes[b]
        if shape_a.bits & shape_b.bits:
            continue

        value = y_volume(shape_a, shape_b)
        checked += 1
        if value != graph.increments[(a, b)]:
            locus = _shape_locus(
                shape_a,
                partner=shape_b.hex,
                volume=str(value),
                direct=str(graph.increments[(a, b)]),
            )
            return _result("volume-formula", checked, {}, locus)

        moved = y_volume(shape_a.translate(1, 0), shape_b.translate(1, 0))
        if moved != value:
            locus = _shape_locus(shape_a, partner=shape_b.hex, check="translation")
            return _result("volume-formula", checked, {}, locus)

    return _result("volume-formula", checked, {"pairs": checked})


def check_closed_form(context):
    """Closed form of z + kappa(B) - kappa(A) on P, bounds on kappa and on d"""
    graph = context.graph
    kappa = context.kappa_strip
    y, _, d = decompose(graph, kappa)
    checked = in_p = 0

    for a, value in enumerate(kappa):
        checked += 1
        if abs(value) > 1:
            return _result(
                "closed-form", checked, {}, _shape_locus(graph.shapes[a], kappa=str(value))
            )

    for a, b in graph.pairs():
        shape_a, shape_b = graph.shapes[a], graph.shapes[b]
        checked += 1
        if abs(d(a, b)) > 3:
            locus = _shape_locus(shape_a, partner=shape_b.hex, d=str(d(a, b)))
            return _result("closed-form", checked, {}, locus)

        if not in_P(shape_a, shape_b):
            continue
        in_p += 1
        expected = y(a, b) + kappa[b] - kappa[a]
        closed = z_closed_form(shape_a, shape_b)
        if closed != expected:
            locus = _shape_locus(
                shape_a, partner=shape_b.hex, closed_form=str(closed), expected=str(expected)
            )
            return _result("closed-form", checked, {"in_P": in_p}, locus)

    return _result("closed-form", checked, {"in_P": in_p, "pairs": graph.edge_count})


def check_tau_involution(context):
    """Reflection involution and vanishing closed-form sums at every shape"""
    checked = pairs = 0
    for shape in context.shapes:
        report = verify_tau_involution(shape)
        checked += 1
        pairs += report.pairs
        if not report.passed:
            locus = _shape_locus(shape, total=str(report.total), failures=report.failures)
            return _result("tau-involution", checked, {"pairs": pairs}, locus)

    return _result("tau-involution", checked, {"pairs": pairs})


def check_corrector(context):
    """Zero drift, variance identities and minimality of the solved corrector"""
    graph = context.graph
    checked = 1
    if not graph.is_connected():
        return _result("corrector", checked, {}, {"check": "connected"})

    kappa = solve_corrector(graph, mode="exact")
    residuals = drift_residuals(graph, kappa)
    checked += len(residuals)
    for a, residual in enumerate(residuals):
        if residual:
            locus = _shape_locus(graph.shapes[a], residual=str(residual))
            return _result("corrector", checked, {}, locus)

    report = exact_diffusivity(graph, kappa=kappa)
    details = {"sigma2_Xhat": str(report.sigma2_Xhat), "gap": str(report.gap)}
    checked += 1
    second = stationary_second_moment(graph, kappa)
    if second != report.sigma2_Xhat:
        return _result(
            "corrector", checked, details, {"check": "second-moment", "direct": str(second)}
        )

    rng = np.random.default_rng(context.seed)
    best = variance_objective(graph, kappa)
    for _ in range(PERTURBATIONS):
        noise = rng.integers(-1000, 1001, size=graph.shape_count)
        perturbed = [k + Fraction(int(e), 1000) for k, e in zip(kappa.values, noise)]
        checked += 1
        if variance_objective(graph, perturbed) < best:
            return _result("corrector", checked, details, {"check": "minimality"})

    return _result("corrector", checked, details)


SUITES = OrderedDict(
    [
        ("bijection", check_bijection),
        ("counts", check_counts),
        ("neighbour-criterion", check_neighbour_criterion),
        ("volume-formula", check_volume_formula),
        ("closed-form", check_closed_form),
        ("tau-involution", check_tau_involution),
        ("corrector", check_corrector),
    ]
)

# Published names of the suites
SUITE_ALIASES = OrderedDict(
    [
        ("lemma8", "neighbour-criterion"),
        ("lemma9", "volume-formula"),
        ("lemma20", "closed-form"),
        ("lemma21", "tau-involution"),
    ]
)


def run_verification(params, suite="all", budget=2000000, workers=1, seed=0):
    """Run one suite, or all of them, at ``params``

    ``suite`` may also be one of the names in :data:`SUITE_ALIASES`.

    Raises:
        ParameterError: Unknown suite name
    """
    suite = SUITE_ALIASES.get(suite, suite)
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        known = ["all"] + list(SUITES) + list(SUITE_ALIASES)
        raise ParameterError("Unknown suite %r, expected one of %s" % (suite, ", ".join(known)))

    context = VerificationContext(params, budget=budget, workers=workers, seed=seed)
    results = []
    for name in names:
        result = SUITES[name](context)
        logger.info(
            "Suite %s at %s: %s (%d checks)",
            name,
            params,
            "passed" if result.passed else "FAILED",
            result.checked,
        )
        results.append(result)

    return VerificationReport(p=list(params.p), n=list(params.n), suites=results)


def raise_for_failure(report):
    """Raise for the first failing suite of ``report``

    Raises:
        VerificationFailure: Carries the suite name and the failure locus
    """
    for result in report.suites:
        if not result.passed:
            raise VerificationFailure(
                "Suite %s failed after %d checks" % (result.name, result.checked),
                suite=result.name,
                locus=result.locus,
            )
