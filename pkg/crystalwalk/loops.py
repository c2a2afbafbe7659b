# -*- coding: utf-8 -*-
"""Fracture loops, their minimal strips and the loop space K_{t,d}

A loop lives on the half-integer grid: vertex ``(x, y)`` of a loop stands for the
point ``(x + 1/2, y + 1/2)`` of the continuous torus. An UP move from ``v`` crosses
the edge ``(v + e2, 1)`` and a LEFT move from ``v`` crosses the edge ``(v, 2)``.

Strip positions use the functional ``l(x, y) = x + y * rho`` with
``rho = d2 t1 / (d1 t2)``, measured from the half-integer point next to the origin
and read modulo ``t1 / d1``. Along a loop an UP move adds ``rho`` and a LEFT move
subtracts one.
"""

import itertools
import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import comb

import numpy as np

from crystalwalk.errors import (
    BudgetExceededError,
    DomainError,
    GeometryError,
    ParameterError,
    ShapeError,
)
from crystalwalk.lattice import Edge, Vertex
from crystalwalk.shapes import Shape, natural_partition

logger = logging.getLogger(__name__)

UP = "U"
LEFT = "L"

__all__ = [
    "UP",
    "LEFT",
    "Loop",
    "Strip",
    "ZigZagWalk",
    "to_loops",
    "from_loops",
    "minimal_strip",
    "boundary_touches",
    "zeta",
    "sample_loop",
    "random_shape",
    "is_in_K",
    "simple_up_to_touches",
    "disjoint_up_to_touches",
    "loop_space_size",
    "enumerate_loop_space",
    "enumerate_loop_space_bruteforce",
    "enumerate_loop_systems",
]


class Loop(object):
    """A monotone closed lattice path on the half-integer grid

    Closed loops are stored in canonical form: the rotation whose
    ``(moves, start)`` pair is lexicographically smallest.

    Args:
        params (TorusParams): Torus parameters
        start (tuple): Vertex of the starting point
        moves (str): Sequence over ``"U"`` and ``"L"``
    """

    schema = "LoopSchema"

    __slots__ = ("params", "start", "moves")

    def __init__(self, params, start, moves):
        moves = str(moves)
        if not moves or set(moves) - {UP, LEFT}:
            raise ParameterError("Loop moves must be a non-empty string over U and L")

        self.params = params
        self.start = params.vertex(*start)
        self.moves = moves

        if self.closes:
            self.start, self.moves = _canonical_rotation(params, self.start, moves)

    def __eq__(self, other):
        return (
            isinstance(other, Loop)
            and self.params == other.params
            and self.start == other.start
            and self.moves == other.moves
        )

    def __ne__(self, other):
        return not self == other

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __hash__(self):
        return hash((self.params, self.start, self.moves))

    def __len__(self):
        return len(self.moves)

    def __repr__(self):
        return "<Loop: start=(%d, %d), moves=%s>" % (self.start.x, self.start.y, self.moves)

    @property
    def sort_key(self):
        return self.start, self.moves

    @property
    def doubled_start(self):
        """Start point with doubled coordinates, so that they stay integers"""
        return [2 * self.start.x + 1, 2 * self.start.y + 1]

    @property
    def closes(self):
        t1, t2 = self.params.t
        return self.moves.count(LEFT) % t1 == 0 and self.moves.count(UP) % t2 == 0

    def vertices(self):
        """Vertex before each move"""
        return _walk(self.params, self.start, self.moves)

    def edges(self):
        """Edge crossed by each move"""
        params = self.params
        crossed = []
        for vertex, move in zip(self.vertices(), self.moves):
            if move == UP:
                crossed.append(params.edge(vertex.x, vertex.y + 1, 1))
            else:
                crossed.append(Edge(vertex.x, vertex.y, 2))
        return crossed

    def edge_bits(self):
        bits = 0
        for edge in self.edges():
            bits |= 1 << self.params.edge_index(edge)
        return bits

    def passes(self):
        """(vertex, incoming move, outgoing move) for every visit of a vertex"""
        vertices = self.vertices()
        return [
            (vertices[k], self.moves[k - 1], self.moves[k]) for k in range(len(self.moves))
        ]

    def levels(self):
        """Lifted strip functional at each vertex, starting from the start vertex"""
        rho = self.params.slope
        level = self.start.x + self.start.y * rho
        levels = [level]
        for move in self.moves[:-1]:
            level += rho if move == UP else -1
            levels.append(level)
        return levels


def _walk(params, start, moves):
    vertices = []
    vertex = start
    for move in moves:
        vertices.append(vertex)
        vertex = params.step(vertex, 2) if move == UP else params.step(vertex, 1, -1)
    return vertices


def _canonical_rotation(params, start, moves):
    vertices = _walk(params, start, moves)
    best = min((moves[k:] + moves[:k], vertices[k]) for k in range(len(moves)))
    return best[1], best[0]


class Strip(object):
    """Minimal closed diagonal strip of a loop

    Args:
        h (Fraction): Centre position in [0, period)
        r (Fraction): Width in [0, period]; ``r == period`` is the whole torus
        period (Fraction): Circle length t1/d1
    """

    __slots__ = ("h", "r", "period")

    def __init__(self, h, r, period):
        self.period = Fraction(period)
        self.r = Fraction(r)
        self.h = Fraction(h) % self.period

        if self.r >= self.period:
            self.r = self.period
            self.h = Fraction(0)

    def __eq__(self, other):
        return isinstance(other, Strip) and (self.h, self.r, self.period) == (
            other.h,
            other.r,
            other.period,
        )

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.h, self.r, self.period))

    def __repr__(self):
        return "<Strip: h=%s, r=%s>" % (self.h, self.r)

    @property
    def whole(self):
        return self.r == self.period

    @property
    def lower(self):
        return self.h - self.r / 2

    @property
    def upper(self):
        return self.h + self.r / 2

    def disjoint(self, other):
        """Closed strips as arcs of the circle of length ``period``"""
        if self.whole or other.whole:
            return False
        distance = (self.h - other.h) % self.period
        distance = min(distance, self.period - distance)
        return distance > (self.r + other.r) / 2


class ZigZagWalk(object):
    """A +1/-1 walk on the integers from 0 to x - y

    Args:
        steps: Sequence of +1 and -1
        x (int, optional): Expected number of +1 steps
        y (int, optional): Expected number of -1 steps
    """

    __slots__ = ("x", "y", "steps")

    def __init__(self, steps, x=None, y=None):
        steps = tuple(int(s) for s in steps)
        if any(s not in (1, -1) for s in steps):
            raise ParameterError("Walk steps must be +1 or -1")

        self.steps = steps
        self.x = steps.count(1)
        self.y = steps.count(-1)

        if (x is not None and x != self.x) or (y is not None and y != self.y):
            raise ParameterError(
                "Walk has %d up and %d down steps, expected %s and %s"
                % (self.x, self.y, x, y)
            )

    def __repr__(self):
        return "<ZigZagWalk: x=%d, y=%d>" % (self.x, self.y)

    def partial_sums(self):
        return [0] + list(itertools.accumulate(self.steps))

    def deviations(self):
        """|w_k - k (x - y) / (x + y)| for k = 0 .. x + y"""
        drift = Fraction(self.x - self.y, self.x + self.y)
        return [abs(w - k * drift) for k, w in enumerate(self.partial_sums())]

    def max_deviation(self):
        return max(self.deviations())

    def in_gate(self, bound):
        """Membership in W_{x,y}(bound)"""
        return self.max_deviation() <= bound


def is_in_K(loop):
    """Check move counts and closure of a loop"""
    params = loop.params
    return (
        loop.moves.count(UP) == params.up_moves
        and loop.moves.count(LEFT) == params.left_moves
        and loop.closes
    )


def _pass_conflicts(passes):
    """True unless every shared vertex is a touch of two turning passes"""
    at_vertex = defaultdict(list)
    for vertex, arrive, leave in passes:
        at_vertex[vertex].append((arrive, leave))

    for visits in at_vertex.values():
        if len(visits) == 1:
            continue
        if len(visits) > 2 or sorted(visits) != [(LEFT, UP), (UP, LEFT)]:
            return True
    return False


def simple_up_to_touches(loop):
    """No shared segment and no straight crossing of the loop with itself"""
    edges = loop.edges()
    if len(set(edges)) != len(edges):
        return False
    return not _pass_conflicts(loop.passes())


def disjoint_up_to_touches(a, b):
    """No shared segment and no straight crossing between two loops"""
    if a.edge_bits() & b.edge_bits():
        return False

    b_vertices = set(b.vertices())
    shared = [p for p in a.passes() if p[0] in b_vertices]
    if not shared:
        return True

    a_vertices = {p[0] for p in shared}
    shared += [p for p in b.passes() if p[0] in a_vertices]
    return not _pass_conflicts(shared)


def to_loops(shape):
    """The fracture loops of a shape, one per natural-partition cycle, sorted"""
    loops = []
    for cycle in natural_partition(shape):
        first = cycle[0]
        if first.i == 1:
            start = (first.x, first.y - 1)
        else:
            start = (first.x, first.y)
        moves = "".join(UP if edge.i == 1 else LEFT for edge in cycle)
        loops.append(Loop(shape.params, start, moves))
    return sorted(loops)


def from_loops(params, loops):
    """Rebuild the shape whose fracture loops are ``loops``

    Raises:
        GeometryError: The loops are not in K_{t,d}, overlap, or cross
    """
    loops = sorted(loops)
    if not loops:
        raise GeometryError("At least one loop is needed")

    for loop in loops:
        if not is_in_K(loop):
            raise GeometryError("%r is not in the loop space" % loop)
        if not simple_up_to_touches(loop):
            raise GeometryError("%r is not simple up to touches" % loop)

    for a, b in itertools.combinations(loops, 2):
        if not disjoint_up_to_touches(a, b):
            raise GeometryError("%r and %r are not disjoint up to touches" % (a, b))

    bits = 0
    for loop in loops:
        bits |= loop.edge_bits()

    count = len(loops)
    try:
        shape = Shape(params, bits, a=(count * params.d[0], count * params.d[1]))
    except ShapeError as ex:
        raise GeometryError("Loops do not form a valid shape: %s" % ex)

    if to_loops(shape) != loops:
        raise GeometryError("Loops are not the fracture loops of their union")

    return shape


def minimal_strip(loop):
    """Smallest closed diagonal strip containing the loop

    The lifted strip functional over the loop's vertices attains its extremes at
    the boundary lines; the strip wraps the whole torus once their distance reaches
    the circle length.
    """
    levels = loop.levels()
    low, high = min(levels), max(levels)
    return Strip((low + high) / 2, high - low, loop.params.period)


def boundary_touches(loop):
    """First vertices, in loop order, on the lower and on the upper strip boundary"""
    levels = loop.levels()
    low, high = min(levels), max(levels)
    if high - low >= loop.params.period:
        raise DomainError("%r winds around the whole torus" % loop)

    vertices = loop.vertices()
    return vertices[levels.index(low)], vertices[levels.index(high)]


def zeta(params, xhat, walk):
    """Loop starting at ``xhat`` whose +1 steps go UP and -1 steps go LEFT

    Raises:
        ParameterError: The walk does not have d1 t2 up and d2 t1 down steps
    """
    if walk.x != params.up_moves or walk.y != params.left_moves:
        raise ParameterError(
            "Walk signature (%d, %d) does not match (%d, %d)"
            % (walk.x, walk.y, params.up_moves, params.left_moves)
        )
    moves = "".join(UP if step == 1 else LEFT for step in walk.steps)
    return Loop(params, xhat, moves)


def sample_loop(params, rng):
    """Uniform loop of K_{t,d}

    Args:
        params (TorusParams): Torus parameters
        rng (numpy.random.Generator): Random stream

    Returns:
        Loop: A uniform sample
    """
    start = (int(rng.integers(params.t[0])), int(rng.integers(params.t[1])))
    steps = rng.permutation(
        np.concatenate(
            [np.ones(params.up_moves, dtype=int), -np.ones(params.left_moves, dtype=int)]
        )
    )
    return zeta(params, start, ZigZagWalk(steps))


def random_shape(params, rng, attempts=10000):
    """Shape built from gcd(n) independent uniform loops

    Draws are repeated until the loops form a valid loop system.

    Raises:
        GeometryError: No valid system was found within ``attempts`` draws
    """
    for attempt in range(attempts):
        loops = [sample_loop(params, rng) for _ in range(params.g)]
        try:
            shape = from_loops(params, loops)
        except GeometryError:
            continue
        logger.debug("Random shape found after %d draws", attempt + 1)
        return shape

    raise GeometryError("No valid loop system in %d draws for %s" % (attempts, params))


def loop_space_size(params):
    """|K_{t,d}| from the n-to-1 parametrization by start point and walk"""
    n = params.loop_length
    return params.volume * comb(n, params.up_moves) // n


def _necklace_words(params):
    """Move words that are the smallest of their rotations"""
    n = params.loop_length
    for ups in itertools.combinations(range(n), params.up_moves):
        chosen = set(ups)
        word = "".join(UP if k in chosen else LEFT for k in range(n))
        if all(word <= word[k:] + word[:k] for k in range(1, n)):
            yield word


def enumerate_loop_space(params):
    """Every loop of K_{t,d} once, in canonical form, sorted"""
    n = params.loop_length
    loops = []

    for word in _necklace_words(params):
        period = next(p for p in range(1, n + 1) if n % p == 0 and word[p:] + word[:p] == word)
        prefix = word[:period]
        shift = (-prefix.count(LEFT), prefix.count(UP))

        for start in params.vertices():
            orbit = [
                params.vertex(start.x + j * shift[0], start.y + j * shift[1])
                for j in range(n // period)
            ]
            if start == min(orbit):
                loops.append(Loop(params, start, word))

    return sorted(loops)


def enumerate_loop_space_bruteforce(params):
    """K_{t,d} from all (start, walk) pairs, deduplicated by canonical form"""
    n = params.loop_length
    found = set()
    for start in params.vertices():
        for ups in itertools.combinations(range(n), params.up_moves):
            chosen = set(ups)
            moves = "".join(UP if k in chosen else LEFT for k in range(n))
            found.add(Loop(params, start, moves))
    return sorted(found)


def enumerate_loop_systems(params, budget=2000000, workers=1):
    """Shapes of N_{t,n} from systems of gcd(n) compatible loops

    Raises:
        BudgetExceededError: The loop-count bound exceeds ``budget``
    """
    bound = loop_space_size(params)
    if bound > budget:
        raise BudgetExceededError(
            "Loop-count bound %d for %s exceeds the budget %d" % (bound, params, budget),
            bound=bound,
            budget=budget,
        )

    candidates = [loop for loop in enumerate_loop_space(params) if simple_up_to_touches(loop)]
    logger.info("%d of %d loops in K are simple up to touches", len(candidates), bound)
    bits = [loop.edge_bits() for loop in candidates]

    if params.g == 1:
        return [Shape(params, b) for b in bits]

    compatible = {}

    def fits(i, j):
        if (i, j) not in compatible:
            compatible[(i, j)] = not bits[i] & bits[j] and disjoint_up_to_touches(
                candidates[i], candidates[j]
            )
        return compatible[(i, j)]

    def subtree(first):
        found = []
        stack = [([first], bits[first])]
        while stack:
            chosen, union = stack.pop()
            if len(chosen) == params.g:
                found.append(Shape(params, union))
                continue
            for k in range(chosen[-1] + 1, len(candidates)):
                if not union & bits[k] and all(fits(i, k) for i in chosen):
                    stack.append((chosen + [k], union | bits[k]))
        return found

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(subtree, range(len(candidates))))
    else:
        parts = [subtree(first) for first in range(len(candidates))]

    return [shape for part in parts for shape in part]
