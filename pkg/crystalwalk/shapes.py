# -*- coding: utf-8 -*-
"""Down-step sets (shapes) and the maps defined on them

A :class:`Shape` stores its edges as a bitset over the ``2 t1 t2`` edge slots, using
:meth:`TorusParams.edge_index`. Shapes order by that integer, which is the canonical
(reproducible) order of every shape list in the package.
"""

import functools
import itertools
import logging

from crystalwalk.errors import DomainError, ShapeError
from crystalwalk.lattice import Edge, HeightFunction, Vertex, chi, sgn

logger = logging.getLogger(__name__)

__all__ = [
    "Shape",
    "NaturalPartition",
    "square_condition",
    "line_counts",
    "nu",
    "reconstruct_from_shape",
    "phi",
    "psi",
    "pi12",
    "pi21",
    "natural_partition",
    "enumerate_shapes",
    "enumerate_shapes_bruteforce",
    "canonical_shape",
    "is_irreducible_reachable",
    "descent_path",
]


class Shape(object):
    """A set of torus edges, normally the down steps of a height function

    Args:
        params (TorusParams): Torus parameters
        bits (int): Edge bitset
        a (tuple, optional): Expected line counts. Defaults to ``params.n``.
        validate (bool): Check the square condition and the line counts
    """

    schema = "ShapeSchema"

    __slots__ = ("params", "bits", "a")

    def __init__(self, params, bits, a=None, validate=True):
        self.params = params
        self.bits = int(bits)
        self.a = tuple(a) if a is not None else params.n

        if validate:
            if not square_condition(self):
                raise ShapeError("Edge set %x fails the square condition" % self.bits)
            if line_counts(self) != self.a:
                raise ShapeError(
                    "Edge set %x does not have %s edges on every line" % (self.bits, self.a)
                )

    @classmethod
    def from_edges(cls, params, edges, a=None, validate=True):
        bits = 0
        for edge in edges:
            bits |= 1 << params.edge_index(params.edge(*edge))
        return cls(params, bits, a=a, validate=validate)

    def __contains__(self, edge):
        return bool(self.bits >> self.params.edge_index(edge) & 1)

    def __iter__(self):
        return iter(self.edges)

    def __len__(self):
        return bin(self.bits).count("1")

    def __eq__(self, other):
        return (
            isinstance(other, Shape)
            and self.params == other.params
            and self.bits == other.bits
        )

    def __ne__(self, other):
        return not self == other

    def __lt__(self, other):
        return self.bits < other.bits

    def __hash__(self):
        return hash((self.params, self.bits))

    def __repr__(self):
        return "<Shape: params=%s, edges=%d, bits=%s>" % (self.params, len(self), self.hex)

    @property
    def edges(self):
        """Edges in index order"""
        bits = self.bits
        return [
            self.params.edge_from_index(k)
            for k in range(self.params.edge_count)
            if bits >> k & 1
        ]

    @property
    def edge_indices(self):
        return [k for k in range(self.params.edge_count) if self.bits >> k & 1]

    @property
    def hex(self):
        return "%x" % self.bits

    def isdisjoint(self, other):
        return not self.bits & other.bits

    def union(self, other):
        """Union of two disjoint shapes, a member of N_{t, a + a'}"""
        if not self.isdisjoint(other):
            raise DomainError("Only disjoint shapes can be joined")
        a = (self.a[0] + other.a[0], self.a[1] + other.a[1])
        return Shape(self.params, self.bits | other.bits, a=a, validate=False)

    def translate(self, dx, dy):
        return Shape.from_edges(
            self.params,
            [Edge(e.x + dx, e.y + dy, e.i) for e in self.edges],
            a=self.a,
            validate=False,
        )


class NaturalPartition(object):
    """Orbits of pi12 on a shape, each as a cyclic edge sequence

    Each cycle starts at its smallest edge index; cycles are sorted by that edge.
    """

    __slots__ = ("shape", "cycles")

    def __init__(self, shape, cycles):
        self.shape = shape
        self.cycles = cycles

    def __len__(self):
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def __repr__(self):
        return "<NaturalPartition: %d cycles of lengths %s>" % (
            len(self.cycles),
            [len(c) for c in self.cycles],
        )

    def cycle_of(self, edge):
        """Index of the cycle containing ``edge``"""
        for k, cycle in enumerate(self.cycles):
            if edge in cycle:
                return k
        raise DomainError("%r is not in the partitioned shape" % (edge,))

    def member_shapes(self):
        """Each cycle as a Shape with line counts left unchecked"""
        params = self.shape.params
        return [
            Shape.from_edges(params, cycle, a=(0, 0), validate=False)
            for cycle in self.cycles
        ]


@functools.lru_cache(maxsize=None)
def _square_sites(params):
    """Per vertex, the masks of {(x,1),(x+e1,2)} and {(x,2),(x+e2,1)}"""
    sites = []
    for v in params.vertices():
        right = params.step(v, 1)
        up = params.step(v, 2)
        lower = (
            1 << params.edge_index(Edge(v.x, v.y, 1)),
            1 << params.edge_index(Edge(right.x, right.y, 2)),
        )
        upper = (
            1 << params.edge_index(Edge(v.x, v.y, 2)),
            1 << params.edge_index(Edge(up.x, up.y, 1)),
        )
        sites.append((lower, upper))
    return tuple(sites)


def square_condition(shape):
    """Check |A n {(x,1),(x+e1,2)}| = |A n {(x,2),(x+e2,1)}| at every vertex"""
    bits = shape.bits
    for (a, b), (c, d) in _square_sites(shape.params):
        if bool(bits & a) + bool(bits & b) != bool(bits & c) + bool(bits & d):
            return False
    return True


def line_counts(shape):
    """The common number of edges per line in each direction, or None"""
    params = shape.params
    t1, t2 = params.t
    rows = {sum(Edge(x, y, 1) in shape for x in range(t1)) for y in range(t2)}
    columns = {sum(Edge(x, y, 2) in shape for y in range(t2)) for x in range(t1)}

    if len(rows) != 1 or len(columns) != 1:
        return None
    return rows.pop(), columns.pop()


def nu(f):
    """The down-step set of a height function"""
    params = f.params
    edges = [e for e in params.edges() if sgn(f, e) == -1]
    return Shape.from_edges(params, edges, validate=False)


def reconstruct_from_shape(shape, base=0):
    """Rebuild the height function with down steps ``shape`` and f(0,0) = ``base``

    The bottom row is filled along e1, then every column is filled along e2.

    Raises:
        ShapeError: The shape is not in N_{t,n}
    """
    params = shape.params
    if shape.a != params.n or line_counts(shape) != params.n or not square_condition(shape):
        raise ShapeError("%r is not the down-step set of a height function" % shape)

    q1, q2 = params.q
    t1, t2 = params.t
    rows = [[None] * t1 for _ in range(t2)]
    rows[0][0] = base
    for x in range(1, t1):
        rows[0][x] = rows[0][x - 1] - q1 + 1 - 2 * (Edge(x - 1, 0, 1) in shape)
    for x in range(t1):
        for y in range(1, t2):
            rows[y][x] = rows[y - 1][x] - q2 + 1 - 2 * (Edge(x, y - 1, 2) in shape)

    return HeightFunction(params, rows)


def _require_member(shape, edge):
    if edge not in shape:
        raise DomainError("%r is not in the shape" % (edge,))


def phi(shape, edge):
    """First edge of the shape reached by shifting ``edge`` forward along its axis"""
    params = shape.params
    for k in range(params.t[edge.i - 1]):
        candidate = params.shift_edge(edge, edge.i, k)
        if candidate in shape:
            return candidate
    raise DomainError("The line through %r contains no edge of the shape" % (edge,))


def psi(shape, edge):
    """Next edge of the shape strictly after ``edge`` on its line"""
    _require_member(shape, edge)
    return phi(shape, shape.params.shift_edge(edge, edge.i))


def pi12(shape, edge):
    """Successor of ``edge`` along its fracture loop"""
    _require_member(shape, edge)
    params = shape.params

    if edge.i == 1:
        turn = Edge(edge.x, edge.y, 2)
        if turn in shape:
            return turn
        return params.shift_edge(edge, 2)

    turn = params.edge(edge.x - 1, edge.y + 1, 1)
    if turn in shape:
        return turn
    return params.shift_edge(edge, 1, -1)


def pi21(shape, edge):
    """Inverse of :func:`pi12`"""
    _require_member(shape, edge)
    params = shape.params

    if edge.i == 2:
        turn = Edge(edge.x, edge.y, 1)
        if turn in shape:
            return turn
        return params.shift_edge(edge, 1)

    turn = params.edge(edge.x + 1, edge.y - 1, 2)
    if turn in shape:
        return turn
    return params.shift_edge(edge, 2, -1)


def natural_partition(shape):
    """Cycle decomposition of pi12 on the shape"""
    remaining = set(shape.edges)
    cycles = []

    for first in shape.edges:
        if first not in remaining:
            continue
        cycle = [first]
        remaining.discard(first)
        current = pi12(shape, first)
        while current != first:
            cycle.append(current)
            remaining.discard(current)
            current = pi12(shape, current)
        cycles.append(tuple(cycle))

    return NaturalPartition(shape, cycles)


def enumerate_shapes(params, budget=2000000, workers=1):
    """All shapes of N_{t,n} in bitset order

    Shapes are built from their fracture loops: systems of gcd(n) loops that are
    simple and pairwise disjoint up to touches.

    Args:
        params (TorusParams): Torus parameters
        budget (int): Largest accepted loop-count bound
        workers (int): Parallel workers for the loop-system search

    Raises:
        BudgetExceededError: The loop-count bound exceeds ``budget``
    """
    from crystalwalk.loops import enumerate_loop_systems

    shapes = sorted(enumerate_loop_systems(params, budget=budget, workers=workers))
    logger.info("Enumerated %d shapes for %s", len(shapes), params)

    return shapes


def enumerate_shapes_bruteforce(params):
    """All shapes by direct search over line-count-respecting edge subsets

    Every row gets ``n1`` direction-1 edges and every column ``n2`` direction-2
    edges, and the square condition filters the products. Only usable on tiny tori.
    """
    t1, t2 = params.t
    n1, n2 = params.n

    def masks(edges_of, length, count):
        return [
            sum(1 << params.edge_index(edge) for edge in edges_of(chosen))
            for chosen in itertools.combinations(range(length), count)
        ]

    row_choices = [
        masks(lambda xs, y=y: [Edge(x, y, 1) for x in xs], t1, n1) for y in range(t2)
    ]
    column_choices = [
        masks(lambda ys, x=x: [Edge(x, y, 2) for y in ys], t2, n2) for x in range(t1)
    ]

    columns = [sum(combo) for combo in itertools.product(*column_choices)]
    sites = _square_sites(params)

    found = []
    for rows in itertools.product(*row_choices):
        row_bits = sum(rows)
        for column_bits in columns:
            bits = row_bits | column_bits
            if all(
                bool(bits & a) + bool(bits & b) == bool(bits & c) + bool(bits & d)
                for (a, b), (c, d) in sites
            ):
                found.append(Shape(params, bits, validate=False))

    return sorted(found)


def canonical_shape(params):
    """The shape A* = {(x,i) : x_i in 0..n_i-1}"""
    t1, t2 = params.t
    n1, n2 = params.n
    edges = [Edge(x, y, 1) for x in range(n1) for y in range(t2)]
    edges += [Edge(x, y, 2) for x in range(t1) for y in range(n2)]
    return Shape.from_edges(params, edges)


def _column_run(shape, y, i, j, length, sign):
    """Edges (y + sign k e_j, i) lie in ``shape``, their e_i-predecessors do not (k <= length)"""
    params = shape.params
    for k in range(length + 1):
        edge = Edge(*params.step(y, j, sign * k), i=i)
        if edge not in shape or params.shift_edge(edge, i, -1) in shape:
            return False
    return True


def _flip_site(shape):
    """One chi-lowering flip: returns (z, new shape), or None at A*"""
    params = shape.params

    for edge in shape.edges:
        i = edge.i
        if (edge.x, edge.y)[i - 1] == 0 or params.shift_edge(edge, i, -1) in shape:
            continue

        # Walk along the other axis j to find the flip site z
        j = 3 - i
        y = edge.base
        k = 0
        while Edge(*params.step(y, j, k), i=j) not in shape:
            k += 1
            if k > params.t[j - 1]:
                raise ShapeError("No direction-%d edge on the line through %s" % (j, y))
        if k > 0:
            z = params.step(y, j, k)
        else:
            m = 0
            while Edge(*params.step(y, j, -(m + 1)), i=j) in shape:
                m += 1
                if m > params.t[j - 1]:
                    raise ShapeError("Line through %s is saturated" % (y,))
            z = params.step(y, j, -m)

        length, sign = (k, 1) if k > 0 else (m, -1)
        if not _column_run(shape, y, i, j, length, sign):
            raise ShapeError(
                "Column from %s to %s of %r breaks the square condition" % (y, z, shape)
            )
        logger.debug("Flip site %s reached from %s in %d steps along axis %d", z, y, length, j)

        outgoing = [Edge(z.x, z.y, 1), Edge(z.x, z.y, 2)]
        incoming = [
            params.shift_edge(outgoing[0], 1, -1),
            params.shift_edge(outgoing[1], 2, -1),
        ]
        if z == Vertex(0, 0) or not all(e in shape for e in outgoing) or any(
            e in shape for e in incoming
        ):
            raise ShapeError("Flip site %s of %r violates the descent invariants" % (z, shape))

        bits = shape.bits
        for e in outgoing:
            bits &= ~(1 << params.edge_index(e))
        for e in incoming:
            bits |= 1 << params.edge_index(e)

        return z, Shape(params, bits)

    return None


def descent_path(shape):
    """Shapes visited by the chi descent from ``shape`` to A*, endpoints included"""
    path = [shape]
    current_chi = chi(reconstruct_from_shape(shape))

    step = _flip_site(shape)
    while step is not None:
        _, shape = step
        new_chi = chi(reconstruct_from_shape(shape))
        if new_chi != current_chi - 2:
            raise ShapeError("Flip changed chi from %s to %s" % (current_chi, new_chi))
        path.append(shape)
        current_chi = new_chi
        step = _flip_site(shape)

    if shape != canonical_shape(shape.params):
        raise ShapeError("Descent stopped at %r instead of A*" % shape)

    return path


def is_irreducible_reachable(shape):
    """Number of single-site flips needed to reach A* from ``shape``"""
    return len(descent_path(shape)) - 1
