# -*- coding: utf-8 -*-
"""The strip corrector of the fracture-loop process and its identities

Continuous coordinates put the vertex ``(x, y)`` of a loop at ``(x + 1/2, y + 1/2)``.
Within the row band ``m - 1/2 < Y < m + 1/2`` the fracture set is crossed by the
vertical segments of the UP moves, at ``X = a + 1/2`` for every edge ``((a, m), 1)``
of the shape. Strip boundaries are the diagonal lines
``X = 1/2 + c - (Y - 1/2) rho (mod t1/d1)``.

On a horizontal line, a point of the strip union that moves along e1 either meets
the fracture set first (it counts -1) or leaves the union first (it counts +1).
Integrated over the torus and divided by the volume, the balance is ``kappa(A)``.
"""

import itertools
import logging
import math
from fractions import Fraction

from crystalwalk.chain import EdgeFunctional
from crystalwalk.errors import DomainError, GeometryError
from crystalwalk.lattice import Edge, neighbour_deltas
from crystalwalk.loops import Loop, boundary_touches, from_loops, minimal_strip, to_loops
from crystalwalk.models import TauReport
from crystalwalk.shapes import Shape

logger = logging.getLogger(__name__)

__all__ = [
    "StripSystem",
    "kappa_strip",
    "kappa_strip_raster",
    "in_P",
    "z_closed_form",
    "decompose",
    "tau",
    "verify_tau_involution",
]

HALF = Fraction(1, 2)


class StripSystem(object):
    """Fracture loops of a shape with their minimal strips

    Args:
        shape (Shape): A shape of N_{t,n}
    """

    __slots__ = ("shape", "loops", "strips")

    def __init__(self, shape):
        self.shape = shape
        self.loops = to_loops(shape)
        self.strips = [minimal_strip(loop) for loop in self.loops]

    def __repr__(self):
        return "<StripSystem: loops=%d, strips=%s>" % (len(self.loops), self.strips)

    @property
    def params(self):
        return self.shape.params

    @property
    def whole(self):
        """True when some strip wraps the whole torus"""
        return any(strip.whole for strip in self.strips)

    @property
    def disjoint(self):
        return all(s.disjoint(t) for s, t in itertools.combinations(self.strips, 2))

    def boundary_levels(self):
        levels = []
        for strip in self.strips:
            levels.extend([strip.lower, strip.upper])
        return levels

    def fracture_abscissae(self, row):
        """X positions of the vertical fracture segments in the band around ``row``"""
        t1, t2 = self.params.t
        return [a + HALF for a in range(t1) if Edge(a, row % t2, 1) in self.shape]

    def arcs(self, y):
        """Intervals [start, end] of the line at height ``y`` covered by each strip"""
        params = self.params
        period = params.period
        arcs = []
        for strip in self.strips:
            base = HALF + strip.lower - (y - HALF) * params.slope
            for k in range(params.d[0]):
                start = (base + k * period) % params.t[0]
                arcs.append((start, start + strip.r))
        return sorted(arcs)

    def components(self, y):
        """Connected components of the strip union on the line at height ``y``

        Returns:
            list: Pairs (u, v) with 0 <= u < t1 and u <= v < u + t1, or None when the
            union covers the whole line
        """
        t1 = self.params.t[0]
        if self.whole:
            return None

        merged = []
        for start, end in self.arcs(y):
            if merged and start <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], end)
            else:
                merged.append([start, end])

        while len(merged) > 1 and merged[-1][1] >= merged[0][0] + t1:
            first = merged.pop(0)
            merged[-1][1] = max(merged[-1][1], first[1] + t1)

        if any(v - u >= t1 for u, v in merged):
            return None
        return [(u, v) for u, v in merged]


def _line_balance(system, y, abscissae):
    """Length reaching the union boundary minus length reaching the fracture set"""
    t1 = system.params.t[0]
    components = system.components(y)
    if components is None:
        return Fraction(-t1)

    extended = abscissae + [a + t1 for a in abscissae]
    total = Fraction(0)
    for u, v in components:
        inside = [a for a in extended if u <= a <= v]
        if inside:
            total += u + v - 2 * max(inside)
        else:
            total += v - u
    return total


def _crossing_heights(system, row, abscissae):
    """Heights in the band of ``row`` where a strip boundary meets a fracture segment"""
    params = system.params
    rho = params.slope
    period = params.period
    low, high = row - HALF, row + HALF

    heights = {low, high}
    for level in system.boundary_levels():
        for x in abscissae:
            a = x - HALF
            first = math.floor(((row - 1) * rho - level + a) / period)
            last = math.ceil((row * rho - level + a) / period)
            for k in range(first, last + 1):
                y = HALF + (level - a + k * period) / rho
                if low < y < high:
                    heights.add(y)
    return sorted(heights)


def kappa_strip(shape):
    """Exact strip corrector of a shape

    The balance of a horizontal line is piecewise affine in its height, with breaks
    only at band edges and where a strip boundary meets a fracture segment, so the
    midpoint rule on each piece integrates it exactly.

    Args:
        shape (Shape): A shape of N_{t,n}

    Returns:
        Fraction: kappa(A), with |kappa(A)| <= 1
    """
    system = StripSystem(shape)
    params = shape.params

    if system.whole:
        return Fraction(-1)

    total = Fraction(0)
    for row in range(params.t[1]):
        abscissae = system.fracture_abscissae(row)
        heights = _crossing_heights(system, row, abscissae)
        for low, high in zip(heights, heights[1:]):
            total += (high - low) * _line_balance(system, (low + high) / 2, abscissae)

    return total / params.volume


def _first_hit(system, x, level, abscissae):
    """+1, -1 or 0 for one point, marching along e1 strip by strip"""
    params = system.params
    period = params.period
    t1 = params.t[0]

    def reach(current):
        offsets = [
            strip.r - (current - strip.lower) % period
            for strip in system.strips
            if (current - strip.lower) % period <= strip.r
        ]
        return max(offsets) if offsets else None

    if reach(level) is None:
        return 0
    if system.whole:
        return -1

    travel = Fraction(0)
    step = reach(level)
    while step:
        travel += step
        if travel >= t1:
            return -1
        step = reach(level + travel)

    following = min(a if a >= x else a + t1 for a in abscissae)
    return -1 if following < x + travel else 1


def kappa_strip_raster(shape, step=Fraction(1, 64)):
    """Grid estimate of :func:`kappa_strip` with a rigorous error bound

    Each grid cell is classified by its centre. Cells crossed by a strip boundary,
    a fracture segment or a band edge may be misclassified; every other cell is
    classified exactly.

    Returns:
        tuple: (estimate, tolerance), both Fractions
    """
    system = StripSystem(shape)
    params = shape.params
    t1, t2 = params.t
    step = Fraction(step)
    columns, rows = t1 / step, t2 / step
    if columns.denominator != 1 or rows.denominator != 1:
        raise DomainError("Raster step %s does not divide the torus" % step)

    rho = params.slope
    period = params.period
    spread = step * (1 + rho) / 2
    levels = system.boundary_levels()

    score = 0
    flagged = 0
    for j in range(int(rows)):
        y = (j + HALF) * step
        band = math.floor(y + HALF)
        abscissae = system.fracture_abscissae(band)
        near_band = abs(y - (band - HALF)) <= step / 2 or abs(y - (band + HALF)) <= step / 2

        for i in range(int(columns)):
            x = (i + HALF) * step
            level = (x - HALF) + (y - HALF) * rho
            near = (
                near_band
                or any(abs(x - a) <= step / 2 for a in abscissae)
                or any(
                    min((level - c) % period, (c - level) % period) <= spread for c in levels
                )
            )
            flagged += near
            score += _first_hit(system, x, level, abscissae)

    area = step * step
    estimate = score * area / params.volume
    tolerance = 2 * flagged * area / params.volume

    logger.debug("Raster estimate %s +/- %s from %d flagged cells", estimate, tolerance, flagged)

    return estimate, tolerance


def in_P(shape_a, shape_b):
    """All 2 gcd(n) minimal strips of both shapes' loops are pairwise disjoint"""
    strips = [minimal_strip(loop) for loop in to_loops(shape_a) + to_loops(shape_b)]
    return all(s.disjoint(t) for s, t in itertools.combinations(strips, 2))


def z_closed_form(shape_a, shape_b):
    """z(A, B) + kappa(B) - kappa(A) from strip centres alone

    Raises:
        DomainError: The pair is not in P
    """
    if not in_P(shape_a, shape_b):
        raise DomainError("Strips of %r and %r are not pairwise disjoint" % (shape_a, shape_b))

    params = shape_a.params
    alphas = sorted(minimal_strip(loop).h for loop in to_loops(shape_a))
    betas = sorted(minimal_strip(loop).h for loop in to_loops(shape_b))

    value = 2 * Fraction(params.d[0], params.t[0]) * (sum(betas) - sum(alphas))
    if alphas[0] < betas[0]:
        value -= 1
    elif betas[0] < alphas[0]:
        value += 1
    return value


def decompose(graph, kappa=None):
    """Split the y functional into z and d = y - z

    On neighbour pairs in P, z equals y; elsewhere z is kappa(A) - kappa(B), so
    that the strip corrector makes z a martingale increment.

    Args:
        graph (ShapeGraph): The shape graph
        kappa (list, optional): Strip corrector per shape position

    Returns:
        tuple: EdgeFunctionals (y, z, d)
    """
    if kappa is None:
        kappa = [kappa_strip(shape) for shape in graph.shapes]

    y = graph.y_functional()
    z_values = {}
    for a, b in graph.pairs():
        if in_P(graph.shapes[a], graph.shapes[b]):
            z_values[(a, b)] = y(a, b)
        else:
            z_values[(a, b)] = kappa[a] - kappa[b]

    z = EdgeFunctional(graph, z_values)
    return y, z, y - z


def _centre_order(loops, origin):
    period = origin.params.period
    start = minimal_strip(origin).lower
    return sorted(loops, key=lambda loop: ((minimal_strip(loop).h - start) % period, loop))


def tau(shape_a, shape_b):
    """Reflect every loop of B through the gap it occupies between two loops of A

    Loops are ordered by strip centre counted from the lower boundary of the first
    loop of A. The i-th loop of B sits between the i-th and the next loop of A and
    is reflected through the midpoint of the first upper-boundary vertex of the
    former and the first lower-boundary vertex of the latter, with its moves
    reversed.

    Raises:
        DomainError: The pair is not in P or its loops do not alternate
        GeometryError: The reflected loops do not form a shape
    """
    if not in_P(shape_a, shape_b):
        raise DomainError("Strips of %r and %r are not pairwise disjoint" % (shape_a, shape_b))

    params = shape_a.params
    loops_a = to_loops(shape_a)
    origin = loops_a[0]
    alphas = _centre_order(loops_a, origin)
    betas = _centre_order(to_loops(shape_b), origin)

    owners = [owner for _, owner in _centre_order_labelled(alphas, betas, origin)]
    if owners != ["A", "B"] * len(alphas):
        raise DomainError("Loops of %r and %r do not alternate" % (shape_a, shape_b))

    reflected = []
    for i, beta in enumerate(betas):
        upper = boundary_touches(alphas[i])[1]
        lower = boundary_touches(alphas[(i + 1) % len(alphas)])[0]
        start = (upper.x + lower.x - beta.start.x, upper.y + lower.y - beta.start.y)
        reflected.append(Loop(params, start, beta.moves[::-1]))

    return from_loops(params, reflected)


def _centre_order_labelled(alphas, betas, origin):
    period = origin.params.period
    start = minimal_strip(origin).lower
    labelled = [(loop, "A") for loop in alphas] + [(loop, "B") for loop in betas]
    return sorted(labelled, key=lambda item: (minimal_strip(item[0]).h - start) % period)


def verify_tau_involution(shape):
    """Check the reflection involution on the P-neighbours of ``shape``

    For every neighbour B with (A, B) in P: tau(B) is a valid shape, a P-neighbour of
    A, flips the sign of the closed form, keeps every strip width, and tau(tau(B))
    is B. The closed forms over all P-neighbours must sum to zero.

    Returns:
        TauReport: Totals and the list of failures
    """
    params = shape.params
    neighbours = sorted({delta.bits for delta in neighbour_deltas(shape)[2:]})
    partners = [Shape(params, bits, validate=False) for bits in neighbours]
    partners = [b for b in partners if in_P(shape, b)]
    neighbour_bits = set(neighbours)

    total = Fraction(0)
    failures = []

    def fail(partner, check, message):
        failures.append({"partner": partner.hex, "check": check, "message": message})

    for partner in partners:
        value = z_closed_form(shape, partner)
        total += value

        try:
            image = tau(shape, partner)
        except (DomainError, GeometryError) as ex:
            fail(partner, "valid", str(ex))
            continue

        if image.bits not in neighbour_bits or not in_P(shape, image):
            fail(partner, "neighbour", "tau image %s is not a P-neighbour" % image.hex)
            continue
        if z_closed_form(shape, image) != -value:
            fail(partner, "sign", "closed form does not change sign")
        widths = sorted(minimal_strip(loop).r for loop in to_loops(partner))
        if sorted(minimal_strip(loop).r for loop in to_loops(image)) != widths:
            fail(partner, "width", "strip widths are not preserved")
        try:
            back = tau(shape, image)
        except (DomainError, GeometryError) as ex:
            fail(partner, "involution", str(ex))
            continue
        if back != partner:
            fail(partner, "involution", "tau(tau(B)) is %s" % back.hex)

    passed = total == 0 and not failures
    if not passed:
        logger.warning(
            "Reflection check failed at %r: total %s, %d failures", shape, total, len(failures)
        )

    return TauReport(
        shape=shape, pairs=len(partners), total=total, passed=passed, failures=failures
    )
