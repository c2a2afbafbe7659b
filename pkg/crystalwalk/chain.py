# -*- coding: utf-8 -*-
"""The shape graph, the y functional, the corrector and exact diffusivity

The walk moves from a height function ``f`` to one of its neighbours chosen
uniformly. Two of the ``deg(A) + 2`` neighbours of a representative of shape ``A``
are ``f + 1`` and ``f - 1``; every other neighbour has a different shape, and no
two share one. The stationary law of the shape chain puts mass
``(deg(A) + 2) / (|M| + |S|)`` on ``A``, where ``|M|`` counts ordered neighbour
pairs including the pairs ``(A, A)``.
"""

import functools
import itertools
import logging
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import reverse_cuthill_mckee
from scipy.sparse.linalg import cg
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from crystalwalk.errors import DomainError, ParameterError, ShapeError, SolverError
from crystalwalk.lattice import Edge, Vertex, average_height, neighbor_delta, neighbour_deltas
from crystalwalk.loops import minimal_strip, to_loops
from crystalwalk.models import DiffusivityReport
from crystalwalk.shapes import (
    enumerate_shapes,
    natural_partition,
    phi,
    pi12,
    psi,
    reconstruct_from_shape,
)

logger = logging.getLogger(__name__)

__all__ = [
    "ShapeGraph",
    "EdgeFunctional",
    "Corrector",
    "Intertwining",
    "build_shape_graph",
    "shape_neighbours",
    "y_direct",
    "y_volume",
    "intertwine_neighbor_test",
    "solve_corrector",
    "exact_diffusivity",
    "stationary_distribution",
    "drift_residuals",
    "variance_objective",
    "stationary_second_moment",
    "outside_fraction",
    "gap_trend",
]

STRATEGIES = ("closure", "pairwise")


class ShapeGraph(object):
    """Shapes of N_{t,n} and their neighbour relation

    Attributes:
        params (TorusParams): Torus parameters
        shapes (list): Shapes in bitset order
        index (dict): Shape bitset to position in ``shapes``
        adjacency (list): Per shape, the sorted positions of its neighbours B != A
        increments (dict): (a, b) -> y(A, B), the average-height change of the move
        origins (dict): (a, b) -> delta(0), the change of f(0, 0) along the move
        strategy (str): How adjacency was computed
    """

    __slots__ = ("params", "shapes", "index", "adjacency", "increments", "origins", "strategy")

    def __init__(self, params, shapes, adjacency, increments, origins, strategy="closure"):
        self.params = params
        self.shapes = shapes
        self.index = {shape.bits: k for k, shape in enumerate(shapes)}
        self.adjacency = [tuple(sorted(neighbours)) for neighbours in adjacency]
        self.increments = increments
        self.origins = origins
        self.strategy = strategy

    def __len__(self):
        return len(self.shapes)

    def __repr__(self):
        return "<ShapeGraph: params=%s, shapes=%d, edges=%d>" % (
            self.params,
            self.shape_count,
            self.edge_count,
        )

    @property
    def shape_count(self):
        return len(self.shapes)

    @property
    def edge_count(self):
        """|M|: ordered neighbour pairs, the pairs (A, A) included"""
        return sum(len(n) for n in self.adjacency) + len(self.shapes)

    @property
    def total_weight(self):
        """|M| + |S|, the normalisation of the stationary edge law"""
        return self.edge_count + self.shape_count

    def position(self, shape):
        try:
            return self.index[shape.bits]
        except KeyError:
            raise DomainError("%r is not a vertex of the shape graph" % shape)

    def degree(self, a):
        return len(self.adjacency[a])

    def pairs(self):
        """Ordered off-diagonal neighbour pairs (a, b)"""
        for a, neighbours in enumerate(self.adjacency):
            for b in neighbours:
                yield a, b

    def is_connected(self):
        if not self.shapes:
            return False
        seen = {0}
        queue = deque([0])
        while queue:
            a = queue.popleft()
            for b in self.adjacency[a]:
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return len(seen) == len(self.shapes)

    def offsets(self):
        """Per shape, the average of f - f(0, 0) for any representative f"""
        return [average_height(reconstruct_from_shape(shape)) for shape in self.shapes]

    def y_functional(self):
        return EdgeFunctional(self, dict(self.increments))


class EdgeFunctional(object):
    """Antisymmetric map over ordered neighbour pairs, zero elsewhere

    Args:
        graph (ShapeGraph): The graph the pairs index into
        values (dict): (a, b) -> value for neighbour pairs; missing pairs are zero
    """

    __slots__ = ("graph", "values")

    def __init__(self, graph, values):
        for (a, b), value in values.items():
            if a == b and value:
                raise DomainError("Edge functionals vanish on the diagonal")
            if values.get((b, a), 0) != -value:
                raise DomainError("Edge functional is not antisymmetric at (%d, %d)" % (a, b))

        self.graph = graph
        self.values = values

    def __call__(self, a, b):
        return self.values.get((a, b), 0)

    def __sub__(self, other):
        keys = set(self.values) | set(other.values)
        return EdgeFunctional(self.graph, {k: self(*k) - other(*k) for k in keys})

    def __repr__(self):
        return "<EdgeFunctional: pairs=%d>" % len(self.values)

    def at(self, shape_a, shape_b):
        return self(self.graph.position(shape_a), self.graph.position(shape_b))

    def net(self, a):
        """Sum of the functional over the neighbours of shape ``a``"""
        return sum((self(a, b) for b in self.graph.adjacency[a]), Fraction(0))


class Corrector(object):
    """Solution of the martingale (zero drift) condition

    Attributes:
        graph (ShapeGraph): The graph the corrector lives on
        values (list): kappa per shape position; position 0 is pinned to zero
        exact (bool): True for rational values, False for floats
        residual: Largest absolute drift residual after the solve
    """

    __slots__ = ("graph", "values", "exact", "residual")

    def __init__(self, graph, values, exact, residual=0):
        self.graph = graph
        self.values = values
        self.exact = exact
        self.residual = residual

    def __getitem__(self, a):
        return self.values[a]

    def __call__(self, shape):
        return self.values[self.graph.position(shape)]

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return "<Corrector: shapes=%d, exact=%s, residual=%s>" % (
            len(self.values),
            self.exact,
            self.residual,
        )

    def shifted(self, constant):
        return Corrector(
            self.graph, [v + constant for v in self.values], self.exact, self.residual
        )


class Intertwining(Enum):
    YES = 1
    NO = 2
    INAPPLICABLE = 3


def _closure_neighbours(graph_index, shape):
    found = []
    for delta in neighbour_deltas(shape)[2:]:
        if delta.bits == shape.bits:
            raise ShapeError("Non-constant perturbation keeps the shape of %r" % shape)
        try:
            b = graph_index[delta.bits]
        except KeyError:
            raise ShapeError(
                "Neighbour %x of %r is missing from the enumeration" % (delta.bits, shape)
            )
        found.append((b, delta.increment, delta.origin))
    return found


def _pairwise_neighbours(shapes, a):
    volume = shapes[a].params.volume
    found = []
    for b, other in enumerate(shapes):
        if b == a:
            continue
        if intertwine_neighbor_test(shapes[a], other) is Intertwining.NO:
            continue
        deltas = neighbor_delta(shapes[a], other)
        if deltas:
            delta = deltas[0]
            found.append((b, Fraction(sum(delta.values()), volume), delta[Vertex(0, 0)]))
    return found


def build_shape_graph(params, budget=2000000, strategy="closure", workers=1, shapes=None):
    """Enumerate N_{t,n} and connect neighbouring shapes

    Args:
        params (TorusParams): Torus parameters
        budget (int): Largest accepted loop-count bound
        strategy (str): ``closure`` enumerates the perturbations of each shape
            directly; ``pairwise`` tests every pair of shapes by propagation
        workers (int): Parallel workers
        shapes (list, optional): Pre-enumerated shapes

    Returns:
        ShapeGraph: The shape graph

    Raises:
        BudgetExceededError: The enumeration bound exceeds ``budget``
    """
    if strategy not in STRATEGIES:
        raise ParameterError("Unknown graph strategy %r" % (strategy,))

    if shapes is None:
        shapes = enumerate_shapes(params, budget=budget, workers=workers)
    shapes = sorted(shapes)
    index = {shape.bits: k for k, shape in enumerate(shapes)}

    if strategy == "closure":
        task = lambda a: _closure_neighbours(index, shapes[a])  # noqa: E731
    else:
        task = lambda a: _pairwise_neighbours(shapes, a)  # noqa: E731

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            found = list(executor.map(task, range(len(shapes))))
    else:
        found = [task(a) for a in range(len(shapes))]

    adjacency = []
    increments = {}
    origins = {}
    for a, neighbours in enumerate(found):
        adjacency.append([b for b, _, _ in neighbours])
        for b, increment, origin in neighbours:
            increments[(a, b)] = increment
            origins[(a, b)] = origin

    graph = ShapeGraph(params, shapes, adjacency, increments, origins, strategy=strategy)

    for a, b in graph.pairs():
        if (b, a) not in increments:
            raise ShapeError("Neighbour relation is not symmetric at (%d, %d)" % (a, b))

    logger.info(
        "Shape graph for %s: %d shapes, %d ordered pairs", params, len(graph), graph.edge_count
    )

    return graph


def shape_neighbours(graph, shape):
    """Distinct neighbour shapes B != A, in bitset order"""
    return [graph.shapes[b] for b in graph.adjacency[graph.position(shape)]]


def y_direct(shape_a, shape_b):
    """Average-height change between neighbouring representatives

    Raises:
        DomainError: The shapes are equal or not neighbours
    """
    if shape_a == shape_b:
        raise DomainError("y is only defined for distinct shapes")

    deltas = neighbor_delta(shape_a, shape_b)
    if not deltas:
        raise DomainError("%r and %r are not neighbours" % (shape_a, shape_b))

    return Fraction(sum(deltas[0].values()), shape_a.params.volume)


def _union(shape_a, shape_b):
    if shape_a.bits & shape_b.bits:
        raise DomainError("%r and %r overlap" % (shape_a, shape_b))
    return shape_a.union(shape_b)


def y_volume(shape_a, shape_b):
    """Average-height change of disjoint neighbours from the first union edge per row

    Reading each row forward from ``x``, the first edge of A u B decides the sign
    of the perturbation at ``x``: +1 if it belongs to B, -1 if it belongs to A.

    Raises:
        DomainError: The shapes are equal or overlap
    """
    if shape_a == shape_b:
        raise DomainError("y is only defined for distinct shapes")

    union = _union(shape_a, shape_b)
    params = shape_a.params

    total = 0
    for vertex in params.vertices():
        first = phi(union, Edge(vertex.x, vertex.y, 1))
        total += (first in shape_b) - (first in shape_a)

    return Fraction(total, params.volume)


def _strips_disjoint(loops):
    strips = [minimal_strip(loop) for loop in loops]
    return strips, all(s.disjoint(t) for s, t in itertools.combinations(strips, 2))


def intertwine_neighbor_test(shape_a, shape_b):
    """Neighbour test for disjoint shapes through their natural partitions

    When every fracture loop of both shapes sits in its own strip, the shapes are
    neighbours iff the loops alternate between A and B in the circular order of
    their strip centres. Otherwise A and B must each be closed under pi12 of their
    union C, and they are neighbours iff psi_C sends the cycles of A onto those of B.

    Returns:
        Intertwining: YES, NO, or INAPPLICABLE when the hypotheses fail
    """
    if shape_a == shape_b or shape_a.bits & shape_b.bits:
        return Intertwining.INAPPLICABLE

    loops_a = to_loops(shape_a)
    loops_b = to_loops(shape_b)
    strips, disjoint = _strips_disjoint(loops_a + loops_b)
    if disjoint:
        labels = ["A"] * len(loops_a) + ["B"] * len(loops_b)
        owners = [label for _, label in sorted(zip([s.h for s in strips], labels))]
        alternating = all(owners[k] != owners[k - 1] for k in range(len(owners)))
        return Intertwining.YES if alternating else Intertwining.NO

    union = _union(shape_a, shape_b)
    for shape in (shape_a, shape_b):
        if any(pi12(union, edge) not in shape for edge in shape.edges):
            return Intertwining.INAPPLICABLE

    images = {
        frozenset(psi(union, edge) for edge in cycle) for cycle in natural_partition(shape_a)
    }
    targets = {frozenset(cycle) for cycle in natural_partition(shape_b)}

    return Intertwining.YES if images == targets else Intertwining.NO


def _reduced_laplacian(graph):
    """Rows and columns of the graph Laplacian with position 0 removed"""
    entries = {}
    for a, neighbours in enumerate(graph.adjacency):
        if a == 0:
            continue
        entries[(a - 1, a - 1)] = len(neighbours)
        for b in neighbours:
            if b:
                entries[(a - 1, b - 1)] = -1
    return entries


def _sparse_matrix(entries, size):
    keys = sorted(entries)
    return csr_matrix(
        (
            np.array([float(entries[k]) for k in keys]),
            (np.array([k[0] for k in keys]), np.array([k[1] for k in keys])),
        ),
        shape=(size, size),
    )


def _exact_solve(entries, rhs):
    """Solve the reduced Laplace system in exact arithmetic

    Rows and columns are renumbered in reverse Cuthill-McKee order and the system
    is eliminated fraction-free over ZZ in sparse form. Rational right-hand sides
    are scaled to integers first.

    Returns:
        list: One Fraction per unknown, in the original order
    """
    size = len(rhs)
    order = reverse_cuthill_mckee(_sparse_matrix(entries, size), symmetric_mode=True)
    position = {int(old): new for new, old in enumerate(order)}

    scale = functools.reduce(
        lambda a, b: a * b // math.gcd(a, b), (value.denominator for value in rhs), 1
    )

    rows = {}
    for (i, j), value in entries.items():
        rows.setdefault(position[i], {})[position[j]] = ZZ(value)
    column = {}
    for i, value in enumerate(rhs):
        if value:
            column[position[i]] = {0: ZZ(value.numerator * (scale // value.denominator))}

    matrix = DomainMatrix(rows, (size, size), ZZ)
    vector = DomainMatrix(column, (size, 1), ZZ)
    numerators, denominator = matrix.solve_den(vector)

    numerators = numerators.to_list()
    denominator = int(denominator) * scale
    return [Fraction(int(numerators[position[i]][0]), denominator) for i in range(size)]


def solve_corrector(graph, y=None, mode="auto", threshold=400, tolerance=1e-10):
    """Solve for kappa with zero drift of y + kappa(B) - kappa(A) at every shape

    The condition is the Laplace equation ``L kappa = b`` with
    ``b(A) = sum_B y(A, B)``. The first shape is pinned to zero.

    Args:
        graph (ShapeGraph): A connected shape graph
        y (EdgeFunctional, optional): Defaults to the graph's y functional
        mode (str): ``exact``, ``iterative`` or ``auto`` (exact up to ``threshold``)
        threshold (int): Largest shape count solved exactly in ``auto`` mode; larger
            graphs fall back to the iterative solve with a warning
        tolerance (float): Residual bound of the iterative solve

    Raises:
        DomainError: The graph is not connected
        SolverError: The iterative solve did not reach ``tolerance``
    """
    if not graph.is_connected():
        raise DomainError("The corrector needs a connected shape graph")

    y = y if y is not None else graph.y_functional()
    size = graph.shape_count
    if mode == "auto":
        mode = "exact" if size <= threshold else "iterative"
        if mode == "iterative":
            logger.warning(
                "%d shapes exceed the exact threshold %d, solving the corrector in floats",
                size,
                threshold,
            )
    if mode not in ("exact", "iterative"):
        raise ParameterError("Unknown solver mode %r" % (mode,))

    logger.info("Solving the corrector for %d shapes in %s mode", size, mode)

    if size == 1:
        return Corrector(graph, [Fraction(0)], exact=True)

    rhs = [y.net(a) for a in range(1, size)]
    entries = _reduced_laplacian(graph)

    if mode == "exact":
        corrector = Corrector(graph, [Fraction(0)] + _exact_solve(entries, rhs), exact=True)
        corrector.residual = max(abs(r) for r in drift_residuals(graph, corrector, y))
        if corrector.residual:
            raise SolverError("Exact corrector has a non-zero drift", residual=corrector.residual)
        return corrector

    matrix = _sparse_matrix(entries, size - 1)
    vector = np.array([float(b) for b in rhs])
    solution, info = cg(matrix, vector, rtol=0.0, atol=tolerance, maxiter=50 * size)
    residual = float(np.linalg.norm(matrix @ solution - vector))

    if info != 0 or residual > tolerance:
        raise SolverError(
            "Conjugate gradient stopped with residual %g (info %d)" % (residual, info),
            residual=residual,
        )

    return Corrector(graph, [0.0] + [float(v) for v in solution], exact=False, residual=residual)


def stationary_distribution(graph):
    """pi(A) = (deg(A) + 2) / (|M| + |S|)"""
    total = graph.total_weight
    return [Fraction(graph.degree(a) + 2, total) for a in range(graph.shape_count)]


def drift_residuals(graph, kappa, y=None):
    """Expected one-step change of the corrected height at every shape"""
    y = y if y is not None else graph.y_functional()
    residuals = []
    for a, neighbours in enumerate(graph.adjacency):
        drift = sum(y(a, b) + kappa[b] - kappa[a] for b in neighbours)
        residuals.append(drift / (len(neighbours) + 2))
    return residuals


def variance_objective(graph, kappa, y=None):
    """sigma^2(Y): stationary mean square of y + kappa(B) - kappa(A) over moves"""
    y = y if y is not None else graph.y_functional()
    terms = [(y(a, b) + kappa[b] - kappa[a]) ** 2 for a, b in graph.pairs()]
    if terms and isinstance(terms[0], float):
        return math.fsum(terms) / graph.total_weight
    return sum(terms, Fraction(0)) / graph.total_weight


def stationary_second_moment(graph, kappa):
    """E[(Xhat_1 - Xhat_0 + kappa(X_1) - kappa(X_0))^2] from the kernel directly

    Walks every shape, weighs it by the stationary law and averages the squared
    corrected increment over all of its ``deg + 2`` moves, the two constant moves
    included.
    """
    law = stationary_distribution(graph)
    exact = not isinstance(kappa[0], float)
    total = Fraction(0) if exact else 0.0
    for a, neighbours in enumerate(graph.adjacency):
        moves = [Fraction(1), Fraction(1)]
        moves += [(graph.increments[(a, b)] + kappa[b] - kappa[a]) ** 2 for b in neighbours]
        local = sum(moves, Fraction(0)) / len(moves) if exact else math.fsum(moves) / len(moves)
        total += (law[a] if exact else float(law[a])) * local
    return total


def outside_fraction(graph):
    """Stationary probability that a step joins two shapes whose strips overlap

    A step leaves P when the 2 gcd(n) minimal strips of the two shapes' loops are
    not pairwise disjoint. Same-shape steps always leave P.
    """
    strips = [[minimal_strip(loop) for loop in to_loops(shape)] for shape in graph.shapes]
    outside = 2 * graph.shape_count
    for a, b in graph.pairs():
        joined = strips[a] + strips[b]
        if not all(s.disjoint(t) for s, t in itertools.combinations(joined, 2)):
            outside += 1
    return Fraction(outside, graph.total_weight)


def exact_diffusivity(graph, y=None, kappa=None, threshold=400, tolerance=1e-10):
    """sigma^2(Xhat) = sigma^2(Y) + P([X_1] = [X_0]) under the stationary law

    The report also carries the probability of a step outside P. Both it and the
    same-shape probability must vanish before the gap to the limit can close.

    Args:
        graph (ShapeGraph): A connected shape graph
        y (EdgeFunctional, optional): Defaults to the graph's y functional
        kappa (Corrector, optional): Solved when omitted
        threshold (int): Exact solve threshold when kappa is solved here
        tolerance (float): Iterative solve tolerance when kappa is solved here

    Returns:
        DiffusivityReport: The exact report
    """
    y = y if y is not None else graph.y_functional()
    if kappa is None:
        kappa = solve_corrector(graph, y, threshold=threshold, tolerance=tolerance)

    sigma2_y = variance_objective(graph, kappa, y)
    p_same = Fraction(2 * graph.shape_count, graph.total_weight)
    p_outside = outside_fraction(graph)
    if not kappa.exact:
        p_same = float(p_same)
        p_outside = float(p_outside)

    sigma2 = sigma2_y + p_same
    limit = Fraction(1, 1 + 2 * graph.params.g)
    gap = abs(sigma2 - (limit if kappa.exact else float(limit)))

    logger.info(
        "Diffusivity for %s: %s (gap %s, outside P %s)", graph.params, sigma2, gap, p_outside
    )

    return DiffusivityReport(
        p=list(graph.params.p),
        n=list(graph.params.n),
        shape_count=graph.shape_count,
        edge_count=graph.edge_count,
        sigma2_Y=sigma2_y,
        p_same_shape=p_same,
        p_outside_P=p_outside,
        sigma2_Xhat=sigma2,
        limit_value=limit,
        gap=gap,
        solver_mode="exact" if kappa.exact else "iterative",
        residual=kappa.residual,
    )


def gap_trend(reports):
    """Check that the gaps to the limit shrink along a sweep

    Returns:
        tuple: (the last gap is below the first, the gaps after the first never grow)
    """
    gaps = [report.gap for report in reports]
    shrinking = len(gaps) > 1 and gaps[-1] < gaps[0]
    steady = all(later <= earlier for earlier, later in zip(gaps[1:], gaps[2:]))
    return shrinking, steady
