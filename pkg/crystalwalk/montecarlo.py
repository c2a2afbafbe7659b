# -*- coding: utf-8 -*-
"""Simulation of the walk and the sampling experiments on fracture loops

Every random stream derives from one root seed: run ``k`` of a simulation uses the
``k``-th child of ``numpy.random.SeedSequence(seed)``, so reports do not depend on
the number of workers.
"""

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import comb, factorial

import numpy as np
from scipy import stats

from crystalwalk.errors import EstimationError, ParameterError
from crystalwalk.lattice import average_height, neighbour_deltas
from crystalwalk.loops import random_shape
from crystalwalk.models import (
    CountingReport,
    DiffusivityEstimate,
    GateReport,
    SimplexReport,
    StripStatistics,
)
from crystalwalk.shapes import Shape, reconstruct_from_shape

logger = logging.getLogger(__name__)

__all__ = [
    "MoveTable",
    "WalkState",
    "SimConfig",
    "step_walk",
    "simulate_run",
    "estimate_diffusivity",
    "sample_strips",
    "strip_statistics",
    "gate_concentration_check",
    "exhaustive_gate_fraction",
    "gate_probabilities",
    "simplex_integral_exact",
    "simplex_integral_check",
    "counting_constant_check",
]

CHUNK = 10000


class MoveTable(object):
    """Neighbour moves and height offsets per shape, filled on first visit

    Args:
        params (TorusParams): Torus parameters
        graph (ShapeGraph, optional): Pre-computed graph used to fill the table
    """

    def __init__(self, params, graph=None):
        self.params = params
        self._moves = {}
        self._offsets = {}

        if graph is not None:
            offsets = graph.offsets()
            for a, shape in enumerate(graph.shapes):
                self._moves[shape.bits] = [
                    (graph.shapes[b].bits, graph.origins[(a, b)]) for b in graph.adjacency[a]
                ]
                self._offsets[shape.bits] = float(offsets[a])

    def __len__(self):
        return len(self._moves)

    def moves(self, bits):
        """(neighbour bits, change of f(0, 0)) for every shape-changing move"""
        if bits not in self._moves:
            shape = Shape(self.params, bits, validate=False)
            self._moves[bits] = [(d.bits, d.origin) for d in neighbour_deltas(shape)[2:]]
        return self._moves[bits]

    def offset(self, bits):
        """Average of f - f(0, 0) for the shape ``bits``"""
        if bits not in self._offsets:
            shape = Shape(self.params, bits, validate=False)
            self._offsets[bits] = float(average_height(reconstruct_from_shape(shape)))
        return self._offsets[bits]


class WalkState(object):
    """Current shape and integer height at the origin of the walk

    The average height is ``anchor + offset(shape)``.
    """

    __slots__ = ("table", "bits", "anchor")

    def __init__(self, table, bits, anchor=0):
        self.table = table
        self.bits = bits
        self.anchor = int(anchor)

    def __repr__(self):
        return "<WalkState: shape=%x, anchor=%d>" % (self.bits, self.anchor)

    @property
    def shape(self):
        return Shape(self.table.params, self.bits, validate=False)

    @property
    def height(self):
        return self.anchor + self.table.offset(self.bits)


def step_walk(state, rng):
    """Move to a uniformly chosen neighbour of the current height function

    The first two of the ``deg + 2`` choices are ``f + 1`` and ``f - 1``.
    """
    moves = state.table.moves(state.bits)
    k = int(rng.integers(len(moves) + 2))
    if k == 0:
        return WalkState(state.table, state.bits, state.anchor + 1)
    if k == 1:
        return WalkState(state.table, state.bits, state.anchor - 1)
    bits, origin = moves[k - 2]
    return WalkState(state.table, bits, state.anchor + origin)


class SimConfig(object):
    """Lengths and seeding of a Monte Carlo estimate

    Args:
        steps (int): Recorded steps per run
        runs (int): Independent runs
        burn_in (int): Discarded steps per run; negative picks 50 |S| (or 100000
            when the shape count is unknown)
        seed (int): Root seed
        batch_window (int): Steps per batch; non-positive picks sqrt(steps)
    """

    __slots__ = ("steps", "runs", "burn_in", "seed", "batch_window")

    def __init__(self, steps=200000, runs=4, burn_in=-1, seed=0, batch_window=0):
        if steps < 1 or runs < 1:
            raise ParameterError("steps and runs must be positive")
        if seed < 0:
            raise ParameterError("seed must be non-negative")

        self.steps = int(steps)
        self.runs = int(runs)
        self.burn_in = int(burn_in)
        self.seed = int(seed)
        self.batch_window = int(batch_window)

    def __repr__(self):
        return "<SimConfig: steps=%d, runs=%d, seed=%d>" % (self.steps, self.runs, self.seed)

    @classmethod
    def from_config(cls, config):
        return cls(
            steps=config.steps,
            runs=config.runs,
            burn_in=config.burn_in,
            seed=config.seed,
            batch_window=config.batch_window,
        )

    @property
    def window(self):
        if self.batch_window > 0:
            return self.batch_window
        return max(1, math.isqrt(self.steps))

    def burn_in_for(self, shape_count=None):
        if self.burn_in >= 0:
            return self.burn_in
        if shape_count:
            return 50 * shape_count
        return 100000


class RunResult(object):
    """Batch statistics of one simulated run"""

    __slots__ = ("batches", "same_shape", "recorded", "visits")

    def __init__(self, batches, same_shape, recorded, visits):
        self.batches = batches
        self.same_shape = same_shape
        self.recorded = recorded
        self.visits = visits


def simulate_run(table, bits, steps, burn_in, window, rng):
    """Run the walk and collect squared batch increments of the average height

    Args:
        table (MoveTable): Move table of the torus
        bits (int): Starting shape
        steps (int): Recorded steps
        burn_in (int): Steps discarded before recording
        window (int): Steps per batch
        rng (numpy.random.Generator): Random stream

    Returns:
        RunResult: ``batches`` holds (increment over a batch)^2 / window
    """
    anchor = 0
    for _ in range(burn_in):
        moves = table.moves(bits)
        k = int(rng.integers(len(moves) + 2))
        if k < 2:
            anchor += 1 - 2 * k
        else:
            bits, origin = moves[k - 2]
            anchor += origin

    batches = []
    same_shape = 0
    visits = Counter()
    batch_start = anchor + table.offset(bits)

    done = 0
    while done < steps:
        draws = rng.random(min(CHUNK, steps - done))
        for u in draws:
            moves = table.moves(bits)
            k = int(u * (len(moves) + 2))
            if k < 2:
                anchor += 1 - 2 * k
                same_shape += 1
            else:
                bits, origin = moves[k - 2]
                anchor += origin
            visits[bits] += 1
            done += 1

            if done % window == 0:
                height = anchor + table.offset(bits)
                batches.append((height - batch_start) ** 2 / window)
                batch_start = height

    return RunResult(batches, same_shape, steps, visits)


def estimate_diffusivity(params, cfg, graph=None, workers=1):
    """Batch-means estimate of Var(Xhat_n) / n

    With a graph the runs start from the stationary shape law; without one they
    start from a random shape and rely on the burn-in.

    Raises:
        EstimationError: Fewer than two batches were recorded
    """
    table = MoveTable(params, graph)
    window = cfg.window
    burn_in = cfg.burn_in_for(graph.shape_count if graph is not None else None)

    law = None
    if graph is not None:
        weights = np.array([graph.degree(a) + 2 for a in range(graph.shape_count)], float)
        law = weights / weights.sum()

    def run(seed_sequence):
        rng = np.random.default_rng(seed_sequence)
        if law is not None:
            bits = graph.shapes[int(rng.choice(len(law), p=law))].bits
        else:
            bits = random_shape(params, rng).bits
        return simulate_run(table, bits, cfg.steps, burn_in, window, rng)

    children = np.random.SeedSequence(cfg.seed).spawn(cfg.runs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run, children))
    else:
        results = [run(child) for child in children]

    batches = [b for result in results for b in result.batches]
    if len(batches) < 2:
        raise EstimationError(
            "Only %d batches of %d steps were recorded" % (len(batches), window)
        )

    count = len(batches)
    mean = math.fsum(batches) / count
    variance = math.fsum((b - mean) ** 2 for b in batches) / (count - 1)
    same = sum(r.same_shape for r in results)
    recorded = sum(r.recorded for r in results)

    logger.info("Monte Carlo estimate for %s: %g from %d batches", params, mean, count)

    return DiffusivityEstimate(
        p=list(params.p),
        n=list(params.n),
        estimate=mean,
        standard_error=math.sqrt(variance / count),
        runs=cfg.runs,
        steps=cfg.steps,
        burn_in=burn_in,
        batch_window=window,
        batch_count=count,
        same_shape_frequency=same / recorded,
        run_estimates=[math.fsum(r.batches) / len(r.batches) for r in results if r.batches],
    )


def sample_strips(params, count, rng):
    """Minimal strips of ``count`` uniform loops in integer units

    The strip functional is scaled by ``d1 t2`` so that an UP move adds ``d2 t1``,
    a LEFT move subtracts ``d1 t2`` and the circle has length ``P = t1 t2``.

    Returns:
        tuple: Arrays (doubled centre modulo 2P, width); a width of at least P
        marks a strip wrapping the whole torus, with centre 0
    """
    t1, t2 = params.t
    up_step, left_step = params.left_moves, params.up_moves
    circle = t1 * t2
    steps = np.concatenate(
        [
            np.full(params.up_moves, up_step, dtype=np.int64),
            np.full(params.left_moves, -left_step, dtype=np.int64),
        ]
    )

    centres = []
    widths = []
    done = 0
    while done < count:
        size = min(CHUNK, count - done)
        starts = rng.integers(t1, size=size) * left_step + rng.integers(t2, size=size) * up_step
        walks = rng.permuted(np.tile(steps, (size, 1)), axis=1)
        levels = np.cumsum(walks[:, :-1], axis=1)
        low = np.minimum(levels.min(axis=1), 0)
        high = np.maximum(levels.max(axis=1), 0)

        width = high - low
        centre = np.mod(2 * starts + low + high, 2 * circle)
        whole = width >= circle
        centres.append(np.where(whole, 0, centre))
        widths.append(np.where(whole, circle, width))
        done += size

    return np.concatenate(centres), np.concatenate(widths)


def _pairwise_disjoint(centres, widths, circle):
    """Row-wise disjointness of every pair of strips, as a boolean array"""
    columns = centres.shape[1]
    disjoint = np.all(widths < circle, axis=1)
    for i in range(columns):
        for j in range(i + 1, columns):
            gap = np.mod(centres[:, i] - centres[:, j], 2 * circle)
            gap = np.minimum(gap, 2 * circle - gap)
            disjoint &= gap > widths[:, i] + widths[:, j]
    return disjoint


def strip_statistics(params, sample_count, eps_list, rng):
    """Width, position and disjointness statistics of uniform loops

    Reports the fraction of loops with ``(d1/t1) r <= eps`` per eps, the
    Kolmogorov-Smirnov statistic of ``(d1/t1) h`` against the uniform law, and the
    frequency with which 2 gcd(n) independent loops have pairwise disjoint strips.
    """
    circle = params.t[0] * params.t[1]
    centres, widths = sample_strips(params, sample_count, rng)

    fractions = []
    for eps in eps_list:
        eps = Fraction(eps)
        narrow = widths * eps.denominator <= eps.numerator * circle
        fractions.append(float(np.mean(narrow)))

    # unit jitter spreads the lattice of doubled centres over the circle
    open_centres = centres[widths < circle]
    jittered = (open_centres + rng.random(len(open_centres))) / (2.0 * circle)
    ks = stats.kstest(jittered, "uniform")

    group = 2 * params.g
    group_centres, group_widths = sample_strips(params, sample_count * group, rng)
    disjoint = _pairwise_disjoint(
        group_centres.reshape(sample_count, group),
        group_widths.reshape(sample_count, group),
        circle,
    )
    frequency = float(np.mean(disjoint))

    return StripStatistics(
        p=list(params.p),
        n=list(params.n),
        samples=sample_count,
        eps=[Fraction(e) for e in eps_list],
        narrow_fractions=fractions,
        ks_statistic=float(ks.statistic),
        ks_pvalue=float(ks.pvalue),
        disjoint_fraction=frequency,
        disjoint_standard_error=math.sqrt(frequency * (1 - frequency) / sample_count),
    )


def _gate_bound(x, y, eps):
    return Fraction(x * y) * Fraction(eps) / (x + y)


def _in_gate(walks, x, y, eps):
    """Row-wise membership of +1/-1 walks in the gate of width xy eps/(x+y)"""
    eps = Fraction(eps)
    sums = np.cumsum(walks, axis=1)
    k = np.arange(1, walks.shape[1] + 1)
    scaled = np.abs(eps.denominator * ((x + y) * sums - k * (x - y)))
    return np.all(scaled <= x * y * eps.numerator, axis=1)


def gate_probabilities(x, y, eps):
    """Per time k, the exact probability of the one-time gate and its Chebyshev bound

    Half of ``w_k + k`` is hypergeometric with ``x + y`` items, ``x`` marked and
    ``k`` drawn, of mean ``k x / (x + y)``.

    Returns:
        list: (k, probability, Chebyshev lower bound) for k = 0 .. x + y
    """
    half = _gate_bound(x, y, eps) / 2
    total = x + y
    rows = []
    for k in range(total + 1):
        mean = Fraction(k * x, total)
        low = math.ceil(mean - half)
        high = math.floor(mean + half)
        law = stats.hypergeom(total, x, k)
        probability = float(law.cdf(high) - law.cdf(low - 1)) if high >= low else 0.0

        variance = Fraction(x * y * k * (total - k), total * total * (total - 1))
        chebyshev = 1 - variance / (half * half) if half else Fraction(0)
        rows.append((k, probability, float(max(chebyshev, Fraction(0)))))
    return rows


def gate_concentration_check(x, y, eps, samples, rng):
    """Fraction of uniform walks staying within xy eps/(x+y) of the straight line

    Raises:
        ParameterError: x or y is not positive
    """
    if x < 1 or y < 1:
        raise ParameterError("Gate walks need x, y >= 1, got %d, %d" % (x, y))

    steps = np.concatenate([np.ones(x, dtype=np.int64), -np.ones(y, dtype=np.int64)])
    inside = 0
    done = 0
    while done < samples:
        size = min(CHUNK, samples - done)
        walks = rng.permuted(np.tile(steps, (size, 1)), axis=1)
        inside += int(np.sum(_in_gate(walks, x, y, eps)))
        done += size

    fraction = inside / samples
    rows = gate_probabilities(x, y, eps)

    return GateReport(
        x=x,
        y=y,
        eps=Fraction(eps),
        bound=_gate_bound(x, y, eps),
        samples=samples,
        fraction=fraction,
        standard_error=math.sqrt(fraction * (1 - fraction) / samples),
        chebyshev_lower_bound=min(row[2] for row in rows),
        step_probabilities=[row[1] for row in rows],
    )


def exhaustive_gate_fraction(x, y, eps):
    """Exact gate fraction over all C(x + y, x) walks"""
    total = x + y
    walks = []
    for ups in itertools.combinations(range(total), x):
        walk = -np.ones(total, dtype=np.int64)
        walk[list(ups)] = 1
        walks.append(walk)
    inside = int(np.sum(_in_gate(np.array(walks), x, y, eps)))
    return Fraction(inside, comb(total, x))


def simplex_integral_exact(g):
    """Exact values of the ordered-simplex integral

    Returns:
        tuple: (integral 1/(2g+1)!, ordering probability 1/(2g)!, conditional
        value 1/(2g+1))
    """
    return (
        Fraction(1, factorial(2 * g + 1)),
        Fraction(1, factorial(2 * g)),
        Fraction(1, 2 * g + 1),
    )


def simplex_integral_check(g, samples, rng):
    """Monte Carlo check of E[(1 - 2 sum(J_i - I_i))^2; I_1 < J_1 < ... < J_g]

    Raises:
        ParameterError: g is not positive
    """
    if g < 1:
        raise ParameterError("g must be positive, got %r" % (g,))

    totals = []
    squares = []
    hits = 0
    done = 0
    while done < samples:
        size = min(CHUNK * 10, samples - done)
        points = rng.random((size, 2 * g))
        ordered = np.all(np.diff(points, axis=1) > 0, axis=1)
        values = (1 - 2 * np.sum(points[:, 1::2] - points[:, 0::2], axis=1)) ** 2
        values = np.where(ordered, values, 0.0)

        totals.append(float(np.sum(values)))
        squares.append(float(np.sum(values ** 2)))
        hits += int(np.sum(ordered))
        done += size

    total = math.fsum(totals)
    square = math.fsum(squares)
    integral = total / samples
    integral_se = math.sqrt(max(square / samples - integral ** 2, 0.0) / samples)
    ordering = hits / samples
    ordering_se = math.sqrt(ordering * (1 - ordering) / samples)

    conditional = conditional_se = None
    if hits > 1:
        conditional = total / hits
        conditional_se = math.sqrt(max(square / hits - conditional ** 2, 0.0) / hits)

    exact_integral, exact_ordering, exact_conditional = simplex_integral_exact(g)

    return SimplexReport(
        g=g,
        samples=samples,
        integral=integral,
        integral_standard_error=integral_se,
        integral_exact=exact_integral,
        ordering_probability=ordering,
        ordering_standard_error=ordering_se,
        ordering_exact=exact_ordering,
        conditional=conditional,
        conditional_standard_error=conditional_se,
        conditional_exact=exact_conditional,
    )


def counting_constant_check(params, samples, rng):
    """Probability that two families of gcd(n) loops in disjoint strips alternate

    By exchangeability of the strip centres the exact value is 2 / C(2g, g).
    """
    g = params.g
    circle = params.t[0] * params.t[1]
    centres, widths = sample_strips(params, samples * 2 * g, rng)
    centres = centres.reshape(samples, 2 * g)
    widths = widths.reshape(samples, 2 * g)

    disjoint = _pairwise_disjoint(centres, widths, circle)
    labels = np.array([0] * g + [1] * g)
    order = np.argsort(centres[disjoint], axis=1, kind="stable")
    sorted_labels = labels[order]
    alternating = np.all(np.diff(sorted_labels, axis=1) != 0, axis=1)

    kept = int(np.sum(disjoint))
    fraction = float(np.mean(alternating)) if kept else None
    error = math.sqrt(fraction * (1 - fraction) / kept) if kept else None

    return CountingReport(
        p=list(params.p),
        n=list(params.n),
        samples=samples,
        disjoint_samples=kept,
        alternating_fraction=fraction,
        standard_error=error,
        expected=Fraction(2, comb(2 * g, g)),
    )
