"""Triangulations of kP read off a squarefree initial ideal.

The maximal faces of the Stanley-Reisner complex of a squarefree initial
ideal of the toric ideal are the cells of the associated regular
triangulation. :func:`verify_triangulation` re-checks that claim
geometrically with exact arithmetic.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .family import build_simplex
from .lattice import LatticeSimplex, Vector, bareiss_det, enumerate_dilation_points, rational_inverse
from .monomials import Monomial, VariableCatalog, is_squarefree_monomial


@dataclass
class SimplicialComplexOnPoints:
    """Cells given as sorted tuples of point indices."""

    points: list[Vector]
    facets: list[tuple[int, ...]]
    nonfaces: list[tuple[int, ...]]
    polytope: LatticeSimplex
    dilation: int
    labels: list[str] = field(default_factory=list)

    def without_cell(self, index: int) -> "SimplicialComplexOnPoints":
        facets = self.facets[:index] + self.facets[index + 1:]
        return SimplicialComplexOnPoints(self.points, facets, self.nonfaces, self.polytope,
                                         self.dilation, self.labels)

    def to_json(self) -> dict:
        label = (lambda i: self.labels[i]) if self.labels else (lambda i: i)
        return {
            "dim": self.polytope.dim,
            "dilation": self.dilation,
            "points": {str(label(i)): list(p) for i, p in enumerate(self.points)},
            "cells": [[label(i) for i in cell] for cell in self.facets],
        }


def maximal_faces(n: int, nonfaces: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Maximal subsets of range(n) containing no nonface, by backtracking."""
    by_max = defaultdict(list)
    for f in nonfaces:
        f = tuple(sorted(set(f)))
        if not f:
            return []
        by_max[f[-1]].append(frozenset(f))

    def addable(face: set, v: int) -> bool:
        trial = face | {v}
        for w in trial:
            for f in by_max.get(w, ()):
                if v in f and f <= trial:
                    return False
        return True

    out = []

    def rec(face: list[int], start: int):
        extended = False
        fs = set(face)
        for v in range(start, n):
            if addable(fs, v):
                extended = True
                face.append(v)
                rec(face, v + 1)
                face.pop()
        if not extended and all(not addable(fs, v) for v in range(start) if v not in fs):
            out.append(tuple(face))

    rec([], 0)
    return sorted(out)


def complex_from_initial_ideal(cat: VariableCatalog, gens: Iterable[Monomial]) -> SimplicialComplexOnPoints:
    """The complex of ``gens`` on the lattice points of kP (one point per catalog variable)."""
    gens = list(gens)
    bad = [g for g in gens if not is_squarefree_monomial(g)]
    if bad:
        raise ValueError(f"initial ideal is not squarefree: {cat.format(bad[0])}")
    facets = maximal_faces(cat.size, gens)
    return SimplicialComplexOnPoints(
        points=list(cat.points),
        facets=facets,
        nonfaces=[tuple(g) for g in gens],
        polytope=build_simplex(cat.params),
        dilation=cat.k,
        labels=list(cat.names),
    )


@dataclass
class TriangulationReport:
    cells: int
    expected_cells: int
    volume_sum: int
    expected_volume: int
    non_unimodular: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    overlaps: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    unmatched_faces: list[tuple[int, ...]] = field(default_factory=list)
    same_side_faces: list[tuple[int, ...]] = field(default_factory=list)
    missing_points: list[Vector] = field(default_factory=list)
    foreign_points: list[Vector] = field(default_factory=list)

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "unimodular": not self.non_unimodular,
            "volume": self.volume_sum == self.expected_volume and self.cells == self.expected_cells,
            "proper_intersection": not (self.overlaps or self.unmatched_faces or self.same_side_faces),
            "vertices": not (self.missing_points or self.foreign_points),
        }

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def summary(self) -> dict:
        return {
            "cells": self.cells, "expected_cells": self.expected_cells,
            "volume_sum": self.volume_sum, "expected_volume": self.expected_volume,
            "checks": self.checks,
        }

    def first_witness(self) -> str | None:
        if self.non_unimodular:
            cell, vol = self.non_unimodular[0]
            return f"cell {list(cell)} has normalized volume {vol}"
        if self.cells != self.expected_cells or self.volume_sum != self.expected_volume:
            msg = (f"{self.cells} cells of total volume {self.volume_sum}, "
                   f"expected {self.expected_cells} / {self.expected_volume}")
            if self.unmatched_faces:
                msg += f"; interior face {list(self.unmatched_faces[0])} lies on one cell only"
            return msg
        if self.overlaps:
            a, b = self.overlaps[0]
            return f"cells {list(a)} and {list(b)} overlap"
        if self.unmatched_faces:
            return f"interior face {list(self.unmatched_faces[0])} lies on one cell only"
        if self.same_side_faces:
            return f"face {list(self.same_side_faces[0])} has its cells on the same side"
        if self.missing_points:
            return f"lattice point {self.missing_points[0]} is not a vertex"
        if self.foreign_points:
            return f"vertex {self.foreign_points[0]} is not a lattice point of the polytope"
        return None


def _cell_volume(points: Sequence[Vector], cell: Sequence[int]) -> int:
    base = points[cell[0]]
    return abs(bareiss_det([[x - y for x, y in zip(points[i], base)] for i in cell[1:]]))


def _barycentric_in(points, cell) -> "callable":
    """Function mapping a rational point to its barycentric coordinates w.r.t. ``cell``."""
    base = points[cell[0]]
    cols = [[x - y for x, y in zip(points[i], base)] for i in cell[1:]]
    inv = rational_inverse([list(r) for r in zip(*cols)])

    def coords(p: Sequence[Fraction]):
        rel = [x - y for x, y in zip(p, base)]
        tail = [sum((a * b for a, b in zip(row, rel)), Fraction(0)) for row in inv]
        return [1 - sum(tail, Fraction(0))] + tail

    return coords


def _centroid_overlaps(points, cells, d: int) -> list:
    """Pairs of unimodular cells where one contains the other's centroid in its interior.

    Inverses of unimodular edge matrices are integral, so the test runs on
    centroids scaled by d + 1 in plain integer arithmetic.
    """
    pts = np.array(points, dtype=np.int64)
    idx = np.array(cells, dtype=np.int64)
    scaled = pts[idx].sum(axis=1)
    found = set()
    for a, cell in enumerate(cells):
        base = pts[cell[0]]
        edges = [[x - y for x, y in zip(points[i], points[cell[0]])] for i in cell[1:]]
        inv = np.array([[int(x) for x in row] for row in rational_inverse([list(r) for r in zip(*edges)])],
                       dtype=np.int64)
        tail = (scaled - (d + 1) * base) @ inv.T
        head = (d + 1) - tail.sum(axis=1)
        inside = (tail > 0).all(axis=1) & (head > 0)
        inside[a] = False
        for b in np.flatnonzero(inside):
            found.add((min(a, int(b)), max(a, int(b))))
    return [(cells[a], cells[b]) for a, b in sorted(found)]


def verify_triangulation(cx: SimplicialComplexOnPoints) -> TriangulationReport:
    """Exact checks that the cells form a unimodular triangulation of the dilated polytope.

    (a) every cell is a unimodular d-simplex; (b) cell volumes add up to the
    normalized volume of the polytope; (c) no cell contains another cell's
    centroid, and every codimension-one face is either on the boundary or
    shared by exactly two cells on opposite sides; (d) the vertex set is
    exactly the set of lattice points.
    """
    points, S, n = cx.points, cx.polytope, cx.dilation
    d = S.dim
    expected_volume = abs(S.det) * n ** d
    rep = TriangulationReport(len(cx.facets), expected_volume, 0, expected_volume)

    for cell in cx.facets:
        vol = _cell_volume(points, cell) if len(cell) == d + 1 else 0
        rep.volume_sum += vol
        if vol != 1:
            rep.non_unimodular.append((cell, vol))
    if rep.non_unimodular:
        return rep

    coords = {cell: _barycentric_in(points, cell) for cell in cx.facets}
    rep.overlaps = _centroid_overlaps(points, cx.facets, d)

    outer = [S.barycentric(p, n) for p in points]
    faces = defaultdict(list)
    for cell in cx.facets:
        for drop in cell:
            faces[tuple(i for i in cell if i != drop)].append(drop)
    for face, apexes in sorted(faces.items()):
        on_boundary = any(all(outer[i][j] == 0 for i in face) for j in range(d + 1))
        if on_boundary:
            if len(apexes) != 1:
                rep.same_side_faces.append(face)
            continue
        if len(apexes) != 2:
            rep.unmatched_faces.append(face)
            continue
        # opposite sides: the two apexes get barycentric coordinates of
        # opposite sign in the first cell with respect to the dropped vertex
        cell = tuple(sorted(face + (apexes[0],)))
        pos = cell.index(apexes[0])
        other = [Fraction(x) for x in points[apexes[1]]]
        if coords[cell](other)[pos] >= 0:
            rep.same_side_faces.append(face)

    used = {points[i] for cell in cx.facets for i in cell}
    lattice = set(enumerate_dilation_points(S, n))
    rep.missing_points = sorted(lattice - used)
    rep.foreign_points = sorted(used - lattice)
    return rep
