"""Regular (unimodular) triangulations of the unit cube linearizing formulas.

Construction works on homogeneous integer data.  A vertex ``v`` with common
denominator ``d`` is stored as ``(d*v, d)``; a McNaughton function ``f``
that is affine on the simplexes around ``v`` has the integer homogeneous
value ``d*f(v)``.  Starting from the Kuhn triangulation, each simplex
evaluates the formulas bottom-up, reusing what its ancestors resolved.  A
truncating connective needs the sign of its splitting form (``p + q - 1``
for ⊕ and ⊙, ``q - p`` for →, ``p - q`` for ∧ and ∨); a simplex on which
that form changes sign waits to be cut along its zero set.  Cuts are
stellar subdivisions of a crossing edge, at the Farey mediant ``ũ + w̃``
or at the exact crossing point; a final round of blow-ups at lattice
points of fundamental parallelepipeds restores unimodularity.
"""
from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from math import factorial, gcd
from typing import Iterable, Mapping, Sequence

from .config import DEFAULT_MAX_SUBDIVISIONS, LimitError, check_dim
from .formula import (
    Const0, Const1, Formula, Join, Meet, Neg, Odot, Oplus, Var,
    evaluate, postorder, render,
)
from .geometry.lattice import format_point, homogeneous_correspondent
from .geometry.linalg import det, inverse

__all__ = [
    "RegularComplex", "SchauderHat", "PLFunction", "LinearizationError",
    "SubdivisionLimitError", "kuhn_base", "linearize", "refine", "hats",
    "check_linear", "agrees_with", "cut_by_forms", "vertex_profile", "hat",
]


class LinearizationError(ValueError):
    """A formula is not affine on every simplex of the given complex."""


class SubdivisionLimitError(RuntimeError):
    """The subdivision budget was exhausted."""


@dataclass(frozen=True)
class RegularComplex:
    n: int
    vertices: tuple  # tuple of points (tuples of Fraction), lexicographically sorted
    simplexes: tuple  # tuple of sorted vertex-index tuples, each of length n + 1

    @cached_property
    def homogeneous(self) -> tuple:
        return tuple(homogeneous_correspondent(v) for v in self.vertices)

    @cached_property
    def _index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def index_of(self, point: Sequence) -> int:
        return self._index[tuple(Fraction(c) for c in point)]

    @cached_property
    def _inverses(self) -> dict:
        return {}

    def _inverse(self, s: int) -> list[list[int]]:
        """Integer inverse of the matrix whose columns are the homogeneous vertices."""
        cache = self._inverses
        inv = cache.get(s)
        if inv is None:
            cols = [self.homogeneous[v] for v in self.simplexes[s]]
            m = [[cols[j][i] for j in range(len(cols))] for i in range(self.n + 1)]
            finv = inverse(m)
            if finv is None:
                raise ValueError(f"simplex {s} is degenerate")
            inv = [[int(c) if c.denominator == 1 else c for c in row] for row in finv]
            cache[s] = inv
        return inv

    def barycentric(self, s: int, x: Sequence) -> tuple[Fraction, ...]:
        """Barycentric coordinates of ``x`` with respect to simplex ``s``."""
        xh = [Fraction(c) for c in x] + [Fraction(1)]
        inv = self._inverse(s)
        verts = self.simplexes[s]
        return tuple(
            self.homogeneous[v][-1] * sum((inv[i][k] * xh[k] for k in range(self.n + 1)), Fraction(0))
            for i, v in enumerate(verts)
        )

    def locate(self, x: Sequence) -> tuple[int, tuple[Fraction, ...]]:
        """A simplex containing ``x`` and the barycentric coordinates there."""
        x = tuple(Fraction(c) for c in x)
        if len(x) != self.n:
            raise ValueError(f"point has dimension {len(x)}, complex has {self.n}")
        for s in range(len(self.simplexes)):
            bc = self.barycentric(s, x)
            if all(c >= 0 for c in bc):
                return s, bc
        raise ValueError(f"point {format_point(x)} is not covered by the complex")

    def star(self, v: int) -> list[int]:
        return [s for s, verts in enumerate(self.simplexes) if v in verts]

    def volume(self, s: int) -> Fraction:
        # unimodular: |det(homogeneous)| = 1, so vol = 1 / (n! * prod of denominators)
        prod = 1
        for v in self.simplexes[s]:
            prod *= self.homogeneous[v][-1]
        return Fraction(abs(det([list(self.homogeneous[v]) for v in self.simplexes[s]])), factorial(self.n) * prod)

    # ------------------------------------------------------------------
    def validate(self) -> None:
        """Check regularity, cube cover and face-to-face adjacency; raise on failure."""
        n = self.n
        if any(not 0 <= c <= 1 for v in self.vertices for c in v):
            raise ValueError("vertex outside the unit cube")
        if list(self.vertices) != sorted(set(self.vertices)):
            raise ValueError("vertices must be distinct and lexicographically sorted")
        used = set()
        for s, verts in enumerate(self.simplexes):
            if len(verts) != n + 1:
                raise ValueError(f"simplex {s} is not {n}-dimensional")
            if abs(det([list(self.homogeneous[v]) for v in verts])) != 1:
                raise ValueError(f"simplex {s} is not regular")
            used.update(verts)
        if used != set(range(len(self.vertices))):
            raise ValueError("complex has unused vertices")
        if sum(self.volume(s) for s in range(len(self.simplexes))) != 1:
            raise ValueError("simplex volumes do not sum to 1")
        incident: dict[tuple, list[int]] = {}
        for s, verts in enumerate(self.simplexes):
            for skip in verts:
                incident.setdefault(tuple(v for v in verts if v != skip), []).append(s)
        for face, owners in incident.items():
            on_boundary = any(
                all(self.vertices[v][c] == b for v in face) for c in range(n) for b in (0, 1)
            )
            if len(owners) > 2 or (len(owners) == 1) != on_boundary:
                raise ValueError(f"face {face} is not properly shared")
            if len(owners) == 2:
                opposite = [next(v for v in self.simplexes[o] if v not in face) for o in owners]
                # opposite apexes must lie on different sides of the shared facet
                rows = [list(self.homogeneous[v]) for v in face]
                sides = [det(rows + [list(self.homogeneous[a])]) for a in opposite]
                if sides[0] * sides[1] >= 0:
                    raise ValueError(f"simplexes {owners} overlap across face {face}")

    # ------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [[str(c) for c in v] for v in self.vertices],
            "simplexes": [list(s) for s in self.simplexes],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "RegularComplex":
        verts = [tuple(Fraction(c) for c in v) for v in data["vertices"]]
        order = sorted(range(len(verts)), key=lambda i: verts[i])
        remap = {old: new for new, old in enumerate(order)}
        simplexes = sorted(tuple(sorted(remap[i] for i in s)) for s in data["simplexes"])
        cx = cls(int(data["n"]), tuple(verts[i] for i in order), tuple(simplexes))
        cx.validate()
        return cx

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# ----------------------------------------------------------------------
# construction

def kuhn_base(n: int) -> RegularComplex:
    """The ``n!`` permutation simplexes ``x_p(1) <= ... <= x_p(n)`` of [0,1]^n."""
    check_dim(n)
    simplexes = []
    points = set()
    for perm in permutations(range(n)):
        v = [0] * n
        chain = [tuple(v)]
        for axis in reversed(perm):
            v[axis] = 1
            chain.append(tuple(v))
        simplexes.append(chain)
        points.update(chain)
    verts = sorted(points)
    index = {p: i for i, p in enumerate(verts)}
    simp = sorted(tuple(sorted(index[p] for p in chain)) for chain in simplexes)
    return RegularComplex(n, tuple(tuple(Fraction(c) for c in p) for p in verts), tuple(simp))


class _Split(Exception):
    def __init__(self, alpha: tuple[int, ...], tag: tuple[int, int]):
        self.alpha, self.tag = alpha, tag


def _crossing(alpha: Sequence[int], verts: Sequence[int], hom: Sequence[tuple]):
    """The split of a simplex by the zero set of ``alpha``: the edge whose
    crossing point has the least denominator, that point as a primitive
    vector, and its weights on the edge ends; None if nothing crosses."""
    hs = [hom[v] for v in verts]
    vs = [sum(a * x for a, x in zip(alpha, h)) for h in hs]
    best = None
    for i, a in enumerate(vs):
        for j, b in enumerate(vs):
            if a < 0 < b:
                g = gcd(b, -a)
                wu, ww = b // g, -a // g
                point = tuple(wu * x + ww * y for x, y in zip(hs[i], hs[j]))
                g = gcd(*point)
                key = (point[-1] // g, min(verts[i], verts[j]), max(verts[i], verts[j]))
                if best is None or key < best[0]:
                    best = (key, (verts[i], verts[j]), tuple(x // g for x in point),
                            (Fraction(wu, g), Fraction(ww, g)))
    return None if best is None else best[1:]


class _Builder:
    """Mutable triangulation refined simplex by simplex.

    Each pending simplex carries the subformulas already known to be affine
    on it, as integer homogeneous forms ``α`` (value at a vertex with
    homogeneous coordinates ``h`` is ``α . h``).  Those stay valid on every
    sub-simplex, so a split only ever re-examines what is still unresolved.
    """

    # mediant splits allowed per phase: factor * simplices + base
    budget_factor = 2
    budget_base = 1000
    regular = True

    def __init__(self, base: RegularComplex, tracked: Sequence[Sequence[int]], limit: int):
        self.n = base.n
        self.hom: list[tuple[int, ...]] = list(base.homogeneous)
        self.simplices: dict[int, tuple[int, ...]] = dict(enumerate(base.simplexes))
        self.parent: dict[int, int] = {s: s for s in self.simplices}
        self.next_sid = len(base.simplexes)
        self.incidence: list[set[int]] = [set() for _ in self.hom]
        for s, verts in self.simplices.items():
            for v in verts:
                self.incidence[v].add(s)
        self.tracked = [list(arr) for arr in tracked]
        self.knowledge: dict[int, dict] = {s: {} for s in self.simplices}
        self.pending = deque(sorted(self.simplices))
        self.done: set[int] = set()
        self.values: list = [None] * len(self.hom)
        self.limit = limit
        self.splits = 0
        self.irregular: set[int] = set()

    def _add_simplex(self, verts: tuple[int, ...], parent: int, know: dict | None) -> int:
        sid = self.next_sid
        self.next_sid += 1
        self.simplices[sid] = verts
        self.parent[sid] = parent
        for v in verts:
            self.incidence[v].add(sid)
        if know is None:
            self.done.add(sid)
        else:
            self.knowledge[sid] = know
            self.pending.append(sid)
        return sid

    def stellar(self, face: Sequence[int], point: tuple[int, ...], weights: Sequence) -> list[int]:
        """Stellar subdivision at ``point = Σ weights[i] * hom[face[i]]``,
        which lies in the relative interior of ``face``."""
        self.splits += 1
        if self.splits > self.limit:
            raise SubdivisionLimitError(f"more than {self.limit} subdivisions")

        def interpolate(vals):
            total = sum((w * x for w, x in zip(weights, vals)), Fraction(0))
            assert total.denominator == 1
            return int(total)

        m = len(self.hom)
        self.hom.append(point)
        self.incidence.append(set())
        self.values.append(None)
        for arr in self.tracked:
            arr.append(interpolate([arr[v] for v in face]))
        common = set.intersection(*(self.incidence[v] for v in face))
        regular = all(w == 1 for w in weights)
        children = []
        for s in sorted(common):
            verts = self.simplices.pop(s)
            parent = self.parent.pop(s)
            for v in verts:
                self.incidence[v].discard(s)
            if s in self.done:
                self.done.discard(s)
                if self.values[m] is None:
                    cols = zip(*(self.values[v] for v in face))
                    self.values[m] = tuple(interpolate(c) for c in cols)
                know = None
            else:
                know = self.knowledge.pop(s)
            was_regular = s not in self.irregular
            self.irregular.discard(s)
            for f in face:
                child = self._add_simplex(tuple(sorted(m if v == f else v for v in verts)), parent, know)
                children.append(child)
                if not (regular and was_regular):
                    self.irregular.add(child)
        return children

    def desingularize(self) -> None:
        """Blow up every simplex of determinant other than ±1 at a lattice
        point of its half-open fundamental parallelepiped.  Each child
        replaces one generator by that point, whose coefficient there is
        below 1, so determinants strictly drop."""
        while self.irregular:
            batch = sorted(self.irregular)
            self.irregular.clear()
            for s in batch:
                if s in self.simplices:
                    self._blow_up(s)

    def _blow_up(self, s: int) -> None:
        verts = self.simplices[s]
        rows = [self.hom[v] for v in verts]
        if abs(det(rows)) == 1:
            return
        inv = inverse(rows)
        best = None
        for k in range(len(rows)):
            coeffs = [c - c.numerator // c.denominator for c in inv[k]]
            if not any(coeffs):
                continue
            point = tuple(int(sum(c * r[j] for c, r in zip(coeffs, rows))) for j in range(len(rows)))
            g = gcd(*point)
            point, coeffs = tuple(x // g for x in point), [c / g for c in coeffs]
            key = (point[-1], point)
            if best is None or key < best[0]:
                best = (key, point, coeffs)
        _, point, coeffs = best
        face = [v for v, c in zip(verts, coeffs) if c]
        self.stellar(face, point, [c for c in coeffs if c])

    def run(self, roots: Sequence[Formula], cuts: Sequence[tuple], known: Mapping) -> None:
        n1 = self.n + 1
        zero = (0,) * n1
        one = (0,) * self.n + (1,)
        # Each sign test is tagged by its node's post-order position (cuts
        # first) and a slot, so one tag tests one global PL function.  Splits
        # run in tag order and pieces never fall back to an earlier tag.  A
        # phase splits at mediants, which keep the complex regular; past its
        # budget it splits at exact crossing points, each of which removes a
        # crossing edge and adds none, so every phase ends.
        order = {node: i for i, node in enumerate(postorder(roots, leaves=known))}
        waiting: list = []
        phase = None
        while self.pending or waiting:
            if not self.pending:
                if waiting[0][0] != phase:
                    # start every phase from a regular complex
                    phase = waiting[0][0]
                    if self.regular:
                        self.desingularize()
                    mediants, budget = 0, self.budget_factor * len(self.simplices) + self.budget_base
                    if self.pending:
                        continue
                *_, t, alpha = heapq.heappop(waiting)
                verts = self.simplices.get(t)
                if verts is not None:
                    split = _crossing(alpha, verts, self.hom)
                    mediants += 1
                    if mediants <= budget:
                        (u, w), _, _ = split
                        split = ((u, w), tuple(a + b for a, b in zip(self.hom[u], self.hom[w])), (1, 1))
                    self.stellar(*split)
                continue
            s = self.pending.popleft()
            verts = self.simplices.get(s)
            if verts is None or s in self.done:
                continue
            hs = [self.hom[v] for v in verts]
            know = dict(self.knowledge[s])

            def vals(alpha):
                return [sum(a * x for a, x in zip(alpha, h)) for h in hs]

            def sign(alpha, tag) -> int:
                """+1 / -1 if ``alpha`` is >= 0 / <= 0 on the simplex, else split."""
                vs = vals(alpha)
                if all(v >= 0 for v in vs):
                    return 1
                if all(v <= 0 for v in vs):
                    return -1
                raise _Split(alpha, tag)

            def add(a, b):
                return tuple(x + y for x, y in zip(a, b))

            def sub(a, b):
                return tuple(x - y for x, y in zip(a, b))

            def clamp(alpha, k):
                if sign(alpha, (k, 0)) < 0:
                    return zero
                if sign(sub(alpha, one), (k, 1)) > 0:
                    return one
                return alpha

            def ev(node):
                r = know.get(node)
                if r is not None:
                    return r
                t = type(node)
                if node in known:
                    a, c = known[node]
                    r = clamp(tuple(a) + (0,) * (self.n - len(a)) + (c,), order[node])
                elif t is Var:
                    r = tuple(1 if i == node.index - 1 else 0 for i in range(n1))
                elif t is Const0:
                    r = zero
                elif t is Const1:
                    r = one
                elif t is Neg:
                    r = sub(one, ev(node.children[0]))
                else:
                    left, right = node.children
                    tag = (order[node], 0)
                    a = ev(left)
                    if t is Meet:
                        r = zero if a == zero else (a if sign(sub(ev(right), a), tag) > 0 else ev(right))
                    elif t is Join:
                        r = one if a == one else (a if sign(sub(a, ev(right)), tag) > 0 else ev(right))
                    elif t is Oplus:
                        if a == one:
                            r = one
                        else:
                            total = add(a, ev(right))
                            r = one if sign(sub(total, one), tag) > 0 else total
                    elif t is Odot:
                        if a == zero:
                            r = zero
                        else:
                            total = sub(add(a, ev(right)), one)
                            r = zero if sign(total, tag) < 0 else total
                    else:  # Implies
                        if a == zero:
                            r = one
                        else:
                            diff = sub(ev(right), a)
                            r = one if sign(diff, tag) > 0 else add(one, diff)
                know[node] = r
                return r

            try:
                for i, (a, c) in enumerate(cuts):
                    sign(tuple(a) + (c,), (i - len(cuts), 0))
                forms = [ev(f) for f in roots]
            except _Split as split:
                self.knowledge[s] = know
                u, w = _crossing(split.alpha, verts, self.hom)[0]
                key = (split.tag, self.hom[u][-1] + self.hom[w][-1], min(u, w), max(u, w))
                heapq.heappush(waiting, key + (s, split.alpha))
                continue
            del self.knowledge[s]
            self.done.add(s)
            for v, h in zip(verts, hs):
                vv = tuple(sum(a * x for a, x in zip(alpha, h)) for alpha in forms)
                if self.values[v] is None:
                    self.values[v] = vv
                elif self.values[v] != vv:
                    raise AssertionError("inconsistent values at a shared vertex")

    def freeze(self) -> tuple[RegularComplex, list[int], list[int]]:
        """(complex, new->old vertex order, parent of each output simplex)."""
        points = [tuple(Fraction(c, h[-1]) for c in h[:-1]) for h in self.hom]
        order = sorted(range(len(points)), key=lambda i: points[i])
        remap = [0] * len(order)
        for new, old in enumerate(order):
            remap[old] = new
        items = sorted((tuple(sorted(remap[v] for v in verts)), self.parent[s])
                       for s, verts in self.simplices.items())
        cx = RegularComplex(self.n, tuple(points[i] for i in order), tuple(s for s, _ in items))
        cx.__dict__["homogeneous"] = tuple(self.hom[i] for i in order)
        return cx, order, [p for _, p in items]


@dataclass(frozen=True)
class _Linearization:
    complex: RegularComplex
    values: dict  # Formula -> tuple of homogeneous int values, canonical vertex order
    parents: tuple  # parent simplex (index in the base complex) of each output simplex
    tracked: tuple  # extra linear arrays supplied by the caller, re-ordered


def _linearize(
    formulas: Sequence[Formula],
    base: RegularComplex,
    *,
    cuts: Sequence[tuple[Sequence[int], int]] = (),
    tracked: Sequence[Sequence[int]] = (),
    known: Mapping[Formula, tuple[Sequence[int], int]] | None = None,
    limit: int = DEFAULT_MAX_SUBDIVISIONS,
    regular: bool = True,
) -> _Linearization:
    """Subdivide ``base`` until every formula is affine on every simplex.

    ``cuts`` are integer affine forms ``(a, c)`` (meaning ``a.x + c``) whose
    zero sets must also not cross any simplex.  ``tracked`` are homogeneous
    vertex values of functions already affine on ``base``; they are carried
    through the subdivision.  ``known`` maps subformulas to integer forms
    ``(a, c)`` such that the subformula equals ``min(1, max(0, a.x + c))``;
    such nodes are evaluated from the form instead of their children.
    With ``regular=False`` the result is a triangulation that need not be
    unimodular; it is cheaper and suffices for vertex-value decisions.
    """
    formulas = list(dict.fromkeys(formulas))
    for f in formulas:
        if f.arity > base.n:
            raise LimitError(f"formula {render(f)} has arity {f.arity} > dimension {base.n}")
    for a, _ in cuts:
        if len(a) != base.n:
            raise ValueError("cut form has the wrong dimension")
    # forms of higher arity cannot occur inside these formulas
    known = {g: (tuple(a[:base.n]), c) for g, (a, c) in (known or {}).items()
             if g.arity <= base.n and not any(a[base.n:])}
    b = _Builder(base, tracked, limit)
    b.regular = regular
    if not regular:
        b.budget_factor = b.budget_base = 0
    b.run(formulas, cuts, known)
    if regular:
        b.desingularize()
    cx, order, parents = b.freeze()
    values = {f: tuple(b.values[i][k] for i in order) for k, f in enumerate(formulas)}
    extra = tuple(tuple(arr[i] for i in order) for arr in b.tracked)
    return _Linearization(cx, values, tuple(parents), extra)


def refine(cx: RegularComplex, extra: Iterable[Formula], *, limit: int = DEFAULT_MAX_SUBDIVISIONS) -> RegularComplex:
    """A subdivision of ``cx`` that also linearizes every formula in ``extra``."""
    extra = list(extra)
    if not extra:
        return cx
    return _linearize(extra, cx, limit=limit).complex


def linearize(formulas: Iterable[Formula], n: int | None = None, *, limit: int = DEFAULT_MAX_SUBDIVISIONS) -> RegularComplex:
    """A regular complex of [0,1]^n on whose simplexes every formula is affine."""
    formulas = list(formulas)
    if not formulas:
        raise ValueError("need at least one formula")
    if n is None:
        n = max(1, max(f.arity for f in formulas))
    return refine(kuhn_base(n), formulas, limit=limit)


# ----------------------------------------------------------------------
# functions on complexes

@dataclass(frozen=True)
class PLFunction:
    """The Δ-linear interpolant of rational values given at the vertices."""

    complex: RegularComplex
    values: tuple

    def __call__(self, x: Sequence) -> Fraction:
        s, bc = self.complex.locate(x)
        return sum((c * self.values[v] for c, v in zip(bc, self.complex.simplexes[s])), Fraction(0))


@dataclass(frozen=True)
class SchauderHat:
    """Normalized Schauder hat at vertex ``apex``.

    ``pieces`` maps each simplex of the apex's star to integer ``(coeffs, const)``
    with ``hat(x) = coeffs . x + const`` there; the hat is 0 elsewhere.
    """

    complex: RegularComplex
    apex: int
    pieces: dict

    def __call__(self, x: Sequence) -> Fraction:
        s, bc = self.complex.locate(x)
        verts = self.complex.simplexes[s]
        return bc[verts.index(self.apex)] if self.apex in verts else Fraction(0)

    def as_pl(self) -> PLFunction:
        vals = [Fraction(0)] * len(self.complex.vertices)
        vals[self.apex] = Fraction(1)
        return PLFunction(self.complex, tuple(vals))


def hat(cx: RegularComplex, apex: int) -> SchauderHat:
    d = cx.homogeneous[apex][-1]
    pieces = {}
    for s in cx.star(apex):
        inv = cx._inverse(s)
        i = cx.simplexes[s].index(apex)
        row = [d * c for c in inv[i]]
        if any(not isinstance(c, int) and Fraction(c).denominator != 1 for c in row):
            raise ValueError(f"hat at vertex {apex} has a non-integer piece on simplex {s}")
        row = [int(c) for c in row]
        pieces[s] = (tuple(row[:-1]), row[-1])
    return SchauderHat(cx, apex, pieces)


def hats(cx: RegularComplex) -> list[SchauderHat]:
    return [hat(cx, v) for v in range(len(cx.vertices))]


def agrees_with(f: Formula, cx: RegularComplex, values: Sequence, *, known: Mapping | None = None) -> bool:
    """Exact test that ``f`` equals the Δ-linear interpolant of ``values``.

    ``cx`` is refined until ``f`` is affine on every piece; the two functions
    agree iff they agree at every refined vertex, evaluating the interpolant
    on the original simplex containing it.
    """
    if f.arity > cx.n:
        return False
    values = [Fraction(v) for v in values]
    lin = _linearize([f], cx, known=known)
    fine = lin.complex
    fvals = lin.values[f]
    checked = set()
    for child, parent in zip(fine.simplexes, lin.parents):
        for w in child:
            if (parent, w) in checked:
                continue
            checked.add((parent, w))
            bc = cx.barycentric(parent, fine.vertices[w])
            interp = sum((c * values[v] for c, v in zip(bc, cx.simplexes[parent])), Fraction(0))
            if interp * fine.homogeneous[w][-1] != fvals[w]:
                return False
    return True


def check_linear(f: Formula, cx: RegularComplex) -> bool:
    """Exact test that ``f`` is affine on every simplex of ``cx``."""
    if f.arity > cx.n:
        return False
    return agrees_with(f, cx, [evaluate(f, v) for v in cx.vertices])


def cut_by_forms(cx: RegularComplex, forms: Iterable[tuple[Sequence[int], int]],
                 *, limit: int = DEFAULT_MAX_SUBDIVISIONS) -> RegularComplex:
    """Refine ``cx`` so that no hyperplane ``a.x + c = 0`` crosses a simplex."""
    forms = [(tuple(int(x) for x in a), int(c)) for a, c in forms]
    if not forms:
        return cx
    return _linearize([], cx, cuts=forms, limit=limit).complex


def vertex_profile(formulas: Sequence[Formula], cx: RegularComplex) -> tuple:
    """Rows ``(f_1(v), ..., f_k(v))`` for every vertex ``v``."""
    for f in formulas:
        if not check_linear(f, cx):
            raise LinearizationError(f"complex does not linearize {f}")
    return tuple(tuple(evaluate(f, v) for f in formulas) for v in cx.vertices)
