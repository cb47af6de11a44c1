"""Rational points, homogeneous correspondents and regular (unimodular) simplexes."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial, gcd, lcm
from typing import Sequence

from .linalg import det, rank, sub

RationalPoint = tuple  # tuple[Fraction, ...]


def rational_point(coords: Sequence, *, unit_cube: bool = True) -> tuple[Fraction, ...]:
    point = tuple(Fraction(c) for c in coords)
    if unit_cube and any(not 0 <= c <= 1 for c in point):
        raise ValueError(f"point {format_point(point)} is not in the unit cube")
    return point


def format_point(point: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(c) for c in point) + ")"


def den(point: Sequence[Fraction]) -> int:
    return lcm(*(Fraction(c).denominator for c in point)) if len(point) else 1


def homogeneous_correspondent(point: Sequence) -> tuple[int, ...]:
    """``(x1*d, ..., xk*d, d)`` with ``d`` the lcm of the coordinate denominators."""
    point = [Fraction(c) for c in point]
    d = den(point)
    return tuple(int(c * d) for c in point) + (d,)


def dehomogenize(vector: Sequence[int]) -> tuple[Fraction, ...]:
    *coords, d = vector
    if d < 1:
        raise ValueError("last entry of a homogeneous vector must be positive")
    return tuple(Fraction(c, d) for c in coords)


class Simplex:
    """A rational simplex given by affinely independent vertices."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[Sequence]):
        verts = tuple(tuple(Fraction(c) for c in v) for v in vertices)
        if not verts:
            raise ValueError("a simplex needs at least one vertex")
        n = len(verts[0])
        if any(len(v) != n for v in verts):
            raise ValueError("vertices have different dimensions")
        if len(verts) > n + 1 or rank([sub(v, verts[0]) for v in verts[1:]]) != len(verts) - 1:
            raise ValueError("vertices are not affinely independent")
        self.vertices = verts

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    def __repr__(self) -> str:
        return "co(" + ", ".join(format_point(v) for v in self.vertices) + ")"


def _maximal_minors_gcd(rows: Sequence[Sequence[int]]) -> int:
    m, ncols = len(rows), len(rows[0])
    g = 0
    for cols in combinations(range(ncols), m):
        g = gcd(g, det([[r[c] for c in cols] for r in rows]))
        if g == 1:
            break
    return g


def is_regular_simplex(s: Simplex | Sequence[Sequence]) -> bool:
    """True iff the homogeneous correspondents of the vertices extend to a
    basis of the integer lattice, i.e. the gcd of the maximal minors is 1."""
    if not isinstance(s, Simplex):
        s = Simplex(s)
    rows = [homogeneous_correspondent(v) for v in s.vertices]
    return _maximal_minors_gcd(rows) == 1


def simplex_volume(s: Simplex | Sequence[Sequence]) -> Fraction:
    """Lebesgue volume in the ambient space (zero unless full-dimensional)."""
    if not isinstance(s, Simplex):
        s = Simplex(s)
    n = s.ambient_dim
    if s.dim < n:
        return Fraction(0)
    v0 = s.vertices[0]
    return abs(Fraction(det([sub(v, v0) for v in s.vertices[1:]]))) / factorial(n)
