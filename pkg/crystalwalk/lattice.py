# -*- coding: utf-8 -*-
"""Torus geometry, edges, lines and height functions

All heights are exact :class:`fractions.Fraction` values. Vertices are stored with
canonical coordinates ``0 <= x < t1`` and ``0 <= y < t2``; every wrap-around goes
through :meth:`TorusParams.vertex`.
"""

import logging
from collections import deque, namedtuple
from fractions import Fraction
from math import gcd

from sympy.utilities.iterables import strongly_connected_components

from crystalwalk.errors import DomainError, ParameterError

logger = logging.getLogger(__name__)

__all__ = [
    "Vertex",
    "Edge",
    "TorusParams",
    "HeightFunction",
    "NeighbourDelta",
    "make_params",
    "sgn",
    "line",
    "average_height",
    "chi",
    "neighbor_delta",
    "neighbour_deltas",
]

Vertex = namedtuple("Vertex", ["x", "y"])


class Edge(namedtuple("Edge", ["x", "y", "i"])):
    """The edge {v, v + e_i} identified with the pair (v, i)"""

    __slots__ = ()

    @property
    def base(self):
        return Vertex(self.x, self.y)

    def __repr__(self):
        return "<Edge: (%d, %d), %d>" % (self.x, self.y, self.i)


def _lcm(a, b):
    return a * b // gcd(a, b)


class TorusParams(object):
    """Parameters (p, n) of a pn-periodic height function and everything derived

    Args:
        p (tuple): Up-step counts per line in directions 1 and 2
        n (tuple): Down-step counts per line in directions 1 and 2
    """

    __slots__ = ("p", "n", "t", "q", "g", "d")

    def __init__(self, p, n):
        p = tuple(int(v) for v in p)
        n = tuple(int(v) for v in n)
        if len(p) != 2 or len(n) != 2:
            raise ParameterError("p and n must be pairs, got p=%r n=%r" % (p, n))
        if min(p) < 1 or min(n) < 1:
            raise ParameterError("p and n must be positive, got p=%r n=%r" % (p, n))

        self.p = p
        self.n = n
        self.t = (p[0] + n[0], p[1] + n[1])
        self.q = (
            Fraction(p[0] - n[0], self.t[0]),
            Fraction(p[1] - n[1], self.t[1]),
        )
        self.g = gcd(n[0], n[1])
        self.d = (n[0] // self.g, n[1] // self.g)

    def __eq__(self, other):
        return isinstance(other, TorusParams) and (self.p, self.n) == (other.p, other.n)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.p, self.n))

    def __str__(self):
        return "%s%s" % (self.p, self.n)

    def __repr__(self):
        return "<TorusParams: p=%s, n=%s>" % (self.p, self.n)

    @property
    def volume(self):
        """Number of vertices |V_t|"""
        return self.t[0] * self.t[1]

    @property
    def edge_count(self):
        return 2 * self.volume

    @property
    def up_moves(self):
        """Number of UP moves of a fracture loop (d1 t2)"""
        return self.d[0] * self.t[1]

    @property
    def left_moves(self):
        """Number of LEFT moves of a fracture loop (d2 t1)"""
        return self.d[1] * self.t[0]

    @property
    def loop_length(self):
        return self.up_moves + self.left_moves

    @property
    def period(self):
        """Length t1/d1 of the circle on which strip positions live"""
        return Fraction(self.t[0], self.d[0])

    @property
    def slope(self):
        """Increase of the strip functional along one UP move"""
        return Fraction(self.left_moves, self.up_moves)

    @property
    def denominator(self):
        """Every height denominator divides this number"""
        return _lcm(self.t[0], self.t[1])

    def vertex(self, x, y):
        return Vertex(x % self.t[0], y % self.t[1])

    def step(self, vertex, i, k=1):
        """Shift ``vertex`` by ``k`` unit steps along axis ``i``"""
        if i == 1:
            return self.vertex(vertex[0] + k, vertex[1])
        return self.vertex(vertex[0], vertex[1] + k)

    def edge(self, x, y, i):
        if i not in (1, 2):
            raise ParameterError("Edge direction must be 1 or 2, got %r" % (i,))
        return Edge(x % self.t[0], y % self.t[1], i)

    def shift_edge(self, edge, i, k=1):
        v = self.step(edge, i, k)
        return Edge(v.x, v.y, edge.i)

    def vertex_index(self, vertex):
        return vertex[1] * self.t[0] + vertex[0]

    def vertex_from_index(self, index):
        y, x = divmod(index, self.t[0])
        return Vertex(x, y)

    def edge_index(self, edge):
        return (edge.i - 1) * self.volume + edge.y * self.t[0] + edge.x

    def edge_from_index(self, index):
        block, rest = divmod(index, self.volume)
        y, x = divmod(rest, self.t[0])
        return Edge(x, y, block + 1)

    def vertices(self):
        return [self.vertex_from_index(k) for k in range(self.volume)]

    def edges(self):
        return [self.edge_from_index(k) for k in range(self.edge_count)]


def make_params(p, n):
    """Build :class:`TorusParams` from two pairs of positive integers

    Raises:
        ParameterError: A component is not a positive integer
    """
    return TorusParams(p, n)


class HeightFunction(object):
    """A pn-periodic height function

    Args:
        params (TorusParams): Torus parameters
        rows (list): ``rows[y][x]`` is the height at vertex (x, y)
    """

    schema = "HeightFunctionSchema"

    __slots__ = ("params", "rows")

    def __init__(self, params, rows):
        self.params = params
        self.rows = tuple(tuple(Fraction(v) for v in row) for row in rows)
        self._validate()

    @classmethod
    def from_values(cls, params, values):
        """Build from a mapping Vertex -> height"""
        rows = [
            [values[Vertex(x, y)] for x in range(params.t[0])] for y in range(params.t[1])
        ]
        return cls(params, rows)

    def _validate(self):
        t1, t2 = self.params.t
        if len(self.rows) != t2 or any(len(row) != t1 for row in self.rows):
            raise ParameterError("Height table must have shape %dx%d" % (t2, t1))

        if self.rows[0][0].denominator != 1:
            raise ParameterError("Height at the origin must be an integer")

        for vertex in self.params.vertices():
            if self.params.denominator % self[vertex].denominator:
                raise ParameterError("Height at %s has a foreign denominator" % (vertex,))
            for i in (1, 2):
                diff = self[self.params.step(vertex, i)] - self[vertex]
                if diff + self.params.q[i - 1] not in (1, -1):
                    raise ParameterError(
                        "Step %s along axis %d is %s, not -q%d +/- 1" % (vertex, i, diff, i)
                    )

    def __getitem__(self, vertex):
        return self.rows[vertex[1] % self.params.t[1]][vertex[0] % self.params.t[0]]

    def __eq__(self, other):
        return (
            isinstance(other, HeightFunction)
            and self.params == other.params
            and self.rows == other.rows
        )

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.params, self.rows))

    def __repr__(self):
        return "<HeightFunction: params=%s, base=%s>" % (self.params, self.base)

    @property
    def base(self):
        return int(self.rows[0][0])

    def shifted(self, constant):
        """Return f + constant (constant must be an integer)"""
        return HeightFunction(
            self.params, [[v + constant for v in row] for row in self.rows]
        )


def sgn(f, e):
    """Sign of the edge ``e`` for the height function ``f``

    Returns:
        int: +1 for an up step and -1 for a down step
    """
    diff = f[f.params.step(e, e.i)] - f[e]
    return int(diff + f.params.q[e.i - 1])


def line(params, e):
    """The line of edges starting from ``e`` in its own direction"""
    return frozenset(params.shift_edge(e, e.i, k) for k in range(params.t[e.i - 1]))


def average_height(f):
    """Exact average height of ``f``"""
    return sum(sum(row) for row in f.rows) / Fraction(f.params.volume)


def chi(f):
    """Sum over all vertices of f(x) - f(0)"""
    return sum(sum(row) for row in f.rows) - f.params.volume * f.rows[0][0]


def neighbor_delta(f_shape, g_shape):
    """Find every perturbation turning a representative of one shape into the other

    Writing g = f + delta with nu(f) = A and nu(g) = B, delta takes values in {-1, +1}
    and satisfies ``delta(x + e_i) - delta(x) = 2 (1[(x,i) in A] - 1[(x,i) in B])``.
    Both values of delta at the origin are propagated breadth first; a branch is
    dropped at its first inconsistency.

    Args:
        f_shape (Shape): Shape A
        g_shape (Shape): Shape B, on the same torus

    Returns:
        list: Zero, one or two dicts mapping Vertex to +1/-1
    """
    params = f_shape.params
    if g_shape.params != params:
        raise DomainError("Shapes live on different tori: %s vs %s" % (params, g_shape.params))

    found = []
    for origin in (1, -1):
        delta = _propagate(params, f_shape, g_shape, origin)
        if delta is not None:
            found.append(delta)

    return found


def _propagate(params, f_shape, g_shape, origin):
    start = Vertex(0, 0)
    delta = {start: origin}
    queue = deque([start])

    while queue:
        vertex = queue.popleft()
        value = delta[vertex]

        for i in (1, 2):
            forward = Edge(vertex.x, vertex.y, i)
            jump = 2 * ((forward in f_shape) - (forward in g_shape))
            candidates = [(params.step(vertex, i), value + jump)]

            back = params.step(vertex, i, -1)
            backward = Edge(back.x, back.y, i)
            jump = 2 * ((backward in f_shape) - (backward in g_shape))
            candidates.append((back, value - jump))

            for other, other_value in candidates:
                if other_value not in (1, -1):
                    return None
                if other in delta:
                    if delta[other] != other_value:
                        return None
                else:
                    delta[other] = other_value
                    queue.append(other)

    return delta


class NeighbourDelta(object):
    """One neighbour g = f + delta of a representative f of a shape

    Attributes:
        bits (int): Bitset of the neighbour shape nu(g)
        plus (int): Vertex bitset of {x : delta(x) = +1}
        plus_count (int): Number of vertices with delta = +1
        origin (int): delta(0, 0)
        increment (Fraction): average of delta, the change of the average height
    """

    __slots__ = ("bits", "plus", "plus_count", "origin", "increment")

    def __init__(self, bits, plus, plus_count, origin, increment):
        self.bits = bits
        self.plus = plus
        self.plus_count = plus_count
        self.origin = origin
        self.increment = increment

    def __repr__(self):
        return "<NeighbourDelta: bits=%x, increment=%s>" % (self.bits, self.increment)


def neighbour_deltas(shape):
    """Enumerate every neighbour of a representative of ``shape``

    A perturbation delta is admissible iff the set S = {delta = +1} is never left
    forward across a down step and never entered forward across an up step. These
    are closure constraints of a digraph on the vertices, so the admissible S are
    the successor-closed unions of its strongly connected components.

    The two constant perturbations come first; the rest follow in the order of the
    component search.

    Args:
        shape (Shape): The shape of the current height function

    Returns:
        list: One :class:`NeighbourDelta` per neighbour height function
    """
    params = shape.params
    volume = params.volume

    wiring = []
    arcs = []
    for index in range(params.edge_count):
        edge = params.edge_from_index(index)
        u = params.vertex_index(edge)
        w = params.vertex_index(params.step(edge, edge.i))
        down = bool(shape.bits >> index & 1)
        wiring.append((index, u, w, down))
        arcs.append((u, w) if down else (w, u))

    components = strongly_connected_components((list(range(volume)), arcs))
    component_of = {}
    for k, members in enumerate(components):
        for vertex in members:
            component_of[vertex] = k

    successors = [set() for _ in components]
    for u, w in arcs:
        if component_of[u] != component_of[w]:
            successors[component_of[u]].add(component_of[w])

    order = _successors_first(successors)
    masks = [sum(1 << v for v in members) for members in components]
    sizes = [len(members) for members in components]

    results = []
    full = (1 << volume) - 1
    for plus, count in ((full, volume), (0, 0)):
        results.append(_make_delta(params, shape, wiring, plus, count))

    included = [False] * len(components)

    def search(position, plus, count):
        if position == len(order):
            if 0 < count < volume:
                results.append(_make_delta(params, shape, wiring, plus, count))
            return

        component = order[position]
        search(position + 1, plus, count)

        if all(included[s] for s in successors[component]):
            included[component] = True
            search(position + 1, plus | masks[component], count + sizes[component])
            included[component] = False

    search(0, 0, 0)

    logger.debug("Shape %x has %d neighbour height functions", shape.bits, len(results))

    return results


def _successors_first(successors):
    """Order components so that every successor precedes its predecessors"""
    order = []
    state = [0] * len(successors)

    for root in range(len(successors)):
        if state[root]:
            continue
        stack = [(root, iter(sorted(successors[root])))]
        state[root] = 1
        while stack:
            node, children = stack[-1]
            for child in children:
                if not state[child]:
                    state[child] = 1
                    stack.append((child, iter(sorted(successors[child]))))
                    break
            else:
                stack.pop()
                order.append(node)

    return order


def _make_delta(params, shape, wiring, plus, count):
    bits = 0
    for index, u, w, down in wiring:
        jump = (plus >> w & 1) - (plus >> u & 1)
        if (down and jump == 0) or (not down and jump == -1):
            bits |= 1 << index

    origin = 1 if plus & 1 else -1
    increment = Fraction(2 * count - params.volume, params.volume)

    return NeighbourDelta(bits, plus, count, origin, increment)
