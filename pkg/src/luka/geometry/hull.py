"""Exact convex hulls of rational point sets in any (small) dimension.

The hull is computed inside the affine hull of the input: points are mapped
to coordinates relative to an affine basis, a beneath-beyond incremental
insertion builds the facets there, and facet inequalities are mapped back
to the ambient space.  Facets of lower-dimensional polytopes are therefore
relative to the affine hull, which is what relative-interior tests need.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import dot, integer_form, inverse, nullspace, rank, row_reduce, sub

__all__ = ["Facet", "Polytope", "convex_hull", "faces"]


@dataclass(frozen=True)
class Facet:
    """``normal . x <= offset`` on the polytope, with equality on ``vertices``."""

    normal: tuple
    offset: Fraction
    vertices: tuple  # indices into Polytope.extremals

    def slack(self, x: Sequence[Fraction]) -> Fraction:
        return self.offset - dot(self.normal, x)


@dataclass(frozen=True)
class Polytope:
    generators: tuple
    extremals: tuple
    facets: tuple
    equations: tuple  # ((normal, offset), ...) cutting out the affine hull
    hull_point: tuple
    hull_directions: tuple
    dim: int

    @property
    def ambient_dim(self) -> int:
        return len(self.hull_point)

    def in_affine_hull(self, x: Sequence) -> bool:
        x = tuple(Fraction(c) for c in x)
        return all(dot(a, x) == b for a, b in self.equations)

    def contains(self, x: Sequence) -> bool:
        x = tuple(Fraction(c) for c in x)
        return self.in_affine_hull(x) and all(f.slack(x) >= 0 for f in self.facets)

    def in_relative_interior(self, x: Sequence) -> bool:
        x = tuple(Fraction(c) for c in x)
        return self.in_affine_hull(x) and all(f.slack(x) > 0 for f in self.facets)

    def on_relative_boundary(self, x: Sequence) -> bool:
        return self.contains(x) and not self.in_relative_interior(x)

    def constraints(self) -> list[tuple[tuple[int, ...], int, str]]:
        """Integer H-representation: ``(a, b, sense)`` meaning ``a . x sense b``."""
        out = [integer_form(f.normal, f.offset) + ("<=",) for f in self.facets]
        out += [integer_form(a, b) + ("=",) for a, b in self.equations]
        return out


def _affine_frame(points: Sequence[tuple]) -> tuple[list[int], list[tuple], list[int]]:
    """Indices of an affine basis among ``points``, the direction vectors and
    the pivot columns that make the direction matrix invertible."""
    base = points[0]
    basis_idx = [0]
    dirs: list[tuple] = []
    for i, p in enumerate(points[1:], start=1):
        d = sub(p, base)
        if rank(dirs + [d]) > len(dirs):
            dirs.append(d)
            basis_idx.append(i)
    pivots = row_reduce(dirs)[1] if dirs else []
    return basis_idx, dirs, pivots


def _hyperplane(points: Sequence[tuple], inside: tuple, d: int):
    """Oriented hyperplane through ``points`` (affine rank d-1) with ``inside`` below it."""
    q0 = points[0]
    normal = nullspace([sub(q, q0) for q in points[1:]], d)
    assert len(normal) == 1
    a = normal[0]
    b = dot(a, q0)
    if dot(a, inside) > b:
        a, b = tuple(-c for c in a), -b
    return a, b


def _affine_rank(pts: Sequence[tuple]) -> int:
    if not pts:
        return -1
    return rank([sub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0


def _beneath_beyond(local: list[tuple], start: list[int], d: int):
    """Facets ``(a, b, vertex-index set)`` of conv(local) in full dimension d >= 2."""
    inside = tuple(sum(local[i][c] for i in start) / (d + 1) for c in range(d))
    facets = []
    for skip in start:
        verts = [i for i in start if i != skip]
        a, b = _hyperplane([local[i] for i in verts], inside, d)
        facets.append((a, b, frozenset(verts)))
    vertices = set(start)
    for p in range(len(local)):
        if p in vertices:
            continue
        x = local[p]
        sides = [dot(a, x) - b for a, b, _ in facets]
        if all(s <= 0 for s in sides):
            continue
        visible = [f for f, s in zip(facets, sides) if s > 0]
        kept = [(f, s) for f, s in zip(facets, sides) if s <= 0]
        new = {}
        for fa, fb, fv in visible:
            for (ga, gb, gv), s in kept:
                if s == 0:
                    continue
                ridge = sorted(fv & gv)
                if _affine_rank([local[i] for i in ridge]) != d - 2:
                    continue
                # a ridge of rank d-2 spans d-1 points; keep an independent subset
                chosen = _independent_subset([local[i] for i in ridge], d - 1)
                a, b = _hyperplane(chosen + [x], inside, d)
                key = (integer_form(a, b))
                new.setdefault(key, (a, b))
        facets = [f for f, _ in kept] + list(new.values())
        vertices.add(p)
        facets = [(a, b, frozenset(i for i in vertices if dot(a, local[i]) == b)) for a, b, *_ in facets]
        # drop points that stopped being extremal
        extremal = set()
        for i in vertices:
            normals = [a for a, _, fv in facets if i in fv]
            if normals and rank(normals) == d:
                extremal.add(i)
        vertices = extremal
        facets = [(a, b, fv & vertices) for a, b, fv in facets]
    return facets, vertices


def _independent_subset(pts: Sequence[tuple], count: int) -> list[tuple]:
    chosen = [pts[0]]
    for q in pts[1:]:
        if len(chosen) == count:
            break
        if _affine_rank(chosen + [q]) == len(chosen):
            chosen.append(q)
    return chosen


def convex_hull(points: Sequence[Sequence]) -> Polytope:
    """Convex hull of a nonempty finite set of rational points."""
    gens = tuple(tuple(Fraction(c) for c in p) for p in points)
    if not gens:
        raise ValueError("convex hull of an empty point set")
    n = len(gens[0])
    if any(len(p) != n for p in gens):
        raise ValueError("points have different dimensions")
    uniq = list(dict.fromkeys(gens))
    base = uniq[0]
    basis_idx, dirs, pivots = _affine_frame(uniq)
    d = len(dirs)
    # local coordinates: y = (p - base)[pivots] @ G
    G = inverse([[v[c] for c in pivots] for v in dirs]) if d else []
    local = []
    for p in uniq:
        diff = [p[c] - base[c] for c in pivots]
        local.append(tuple(sum((diff[r] * G[r][k] for r in range(d)), Fraction(0)) for k in range(d)))

    if d == 0:
        raw_facets, ext = [], {0}
    elif d == 1:
        lo = min(range(len(uniq)), key=lambda i: local[i][0])
        hi = max(range(len(uniq)), key=lambda i: local[i][0])
        raw_facets = [((Fraction(-1),), -local[lo][0], frozenset([lo])),
                      ((Fraction(1),), local[hi][0], frozenset([hi]))]
        ext = {lo, hi}
    else:
        raw_facets, ext = _beneath_beyond(local, basis_idx, d)

    order = sorted(ext)  # generator order
    extremals = tuple(uniq[i] for i in order)
    position = {i: k for k, i in enumerate(order)}

    facets = []
    for a, b, fv in raw_facets:
        # a . y <= b  with y = (x - base)[pivots] @ G  =>  (G a) . x[pivots] <= b + (G a) . base[pivots]
        ga = [sum((G[r][k] * a[k] for k in range(d)), Fraction(0)) for r in range(d)]
        normal = [Fraction(0)] * n
        for r, c in enumerate(pivots):
            normal[c] = ga[r]
        offset = b + dot(normal, base)
        inormal, ioffset = integer_form(normal, offset)
        facets.append(Facet(tuple(Fraction(c) for c in inormal), Fraction(ioffset),
                            tuple(sorted(position[i] for i in fv))))
    facets.sort(key=lambda f: (f.vertices, f.normal))

    equations = []
    for e in nullspace(list(dirs), n) if d < n else []:
        ie, ib = integer_form(e, dot(e, base))
        equations.append((tuple(Fraction(c) for c in ie), Fraction(ib)))
    return Polytope(
        generators=gens,
        extremals=extremals,
        facets=tuple(facets),
        equations=tuple(equations),
        hull_point=base,
        hull_directions=tuple(dirs),
        dim=d,
    )


def faces(p: Polytope) -> list[Polytope]:
    """All nonempty proper faces of ``p``, largest dimension first."""
    found: set[frozenset] = set()
    frontier = {frozenset(f.vertices) for f in p.facets}
    while frontier:
        found |= frontier
        nxt = set()
        for a in frontier:
            for b in found:
                c = a & b
                if c and c not in found:
                    nxt.add(c)
        frontier = nxt
    polys = [convex_hull([p.extremals[i] for i in sorted(vs)]) for vs in found]
    polys.sort(key=lambda q: (-q.dim, q.extremals))
    return polys
