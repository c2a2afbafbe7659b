# -*- coding: utf-8 -*-
"""SVG pictures of a shape and its fracture loops"""

import logging

import svgwrite

from crystalwalk.loops import UP, to_loops

logger = logging.getLogger(__name__)

CELL = 16
MARGIN = 8
PALETTE = ["#c0392b", "#2471a3", "#229954", "#b9770e", "#7d3c98", "#17a589"]


def _point(params, x, y):
    """Canvas coordinates of torus point (x, y), with y pointing up"""
    return (MARGIN + x * CELL, MARGIN + (params.t[1] - y) * CELL)


def _copies(params, start, end):
    """Translates of a segment that meet the fundamental domain"""
    t1, t2 = params.t
    shifts = [(0, 0)]
    if max(start[0], end[0]) > t1 or min(start[0], end[0]) < 0:
        shifts.append((-t1 if max(start[0], end[0]) > t1 else t1, 0))
    if max(start[1], end[1]) > t2 or min(start[1], end[1]) < 0:
        shifts += [(dx, -t2 if max(start[1], end[1]) > t2 else t2) for dx, _ in shifts]
    for dx, dy in shifts:
        yield (start[0] + dx, start[1] + dy), (end[0] + dx, end[1] + dy)


def render_svg(shape, loops=True):
    """Draw the edges of ``shape`` and, optionally, its fracture loops

    Args:
        shape (Shape): The shape to draw
        loops (bool): Also draw the fracture loops, one colour per loop

    Returns:
        str: An SVG 1.1 document
    """
    params = shape.params
    t1, t2 = params.t
    width, height = t1 * CELL + 2 * MARGIN, t2 * CELL + 2 * MARGIN

    drawing = svgwrite.Drawing(size=(width, height), profile="full")
    clip = drawing.defs.add(drawing.clipPath(id="torus"))
    clip.add(drawing.rect(insert=(MARGIN, MARGIN), size=(t1 * CELL, t2 * CELL)))

    grid = drawing.add(drawing.g(stroke="#d5d8dc", stroke_width=0.5))
    for x in range(t1 + 1):
        grid.add(drawing.line(_point(params, x, 0), _point(params, x, t2)))
    for y in range(t2 + 1):
        grid.add(drawing.line(_point(params, 0, y), _point(params, t1, y)))

    edges = drawing.add(drawing.g(stroke="#1c2833", stroke_width=2, clip_path="url(#torus)"))
    for edge in shape.edges:
        end = (edge.x + 1, edge.y) if edge.i == 1 else (edge.x, edge.y + 1)
        for a, b in _copies(params, (edge.x, edge.y), end):
            edges.add(drawing.line(_point(params, *a), _point(params, *b)))

    if loops:
        fracture_loops = to_loops(shape)
        for k, loop in enumerate(fracture_loops):
            group = drawing.add(
                drawing.g(
                    stroke=PALETTE[k % len(PALETTE)],
                    stroke_width=2.5,
                    stroke_linecap="round",
                    clip_path="url(#torus)",
                )
            )
            for vertex, move in zip(loop.vertices(), loop.moves):
                start = (vertex.x + 0.5, vertex.y + 0.5)
                end = (start[0], start[1] + 1) if move == UP else (start[0] - 1, start[1])
                for a, b in _copies(params, start, end):
                    group.add(drawing.line(_point(params, *a), _point(params, *b)))

        logger.debug("Rendered %s with %d loops", params, len(fracture_loops))

    return drawing.tostring()
