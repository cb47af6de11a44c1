import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from luka.geometry import (
    Infeasible, LinearProgram, Optimal, Simplex, Unbounded, check_outcome, convex_hull, dehomogenize,
    faces, homogeneous_correspondent, is_regular_simplex, lp_solve, simplex_volume,
)

from conftest import points

P = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1), (F(1, 2), F(1, 2), 1)]
P = [tuple(F(c) for c in p) for p in P]
TETRA = convex_hull(P)


# ----------------------------------------------------------------------
# lattice

@pytest.mark.parametrize("x, h", [
    ((F(1, 2), F(1, 2)), (1, 1, 2)),
    ((F(1, 3), F(1, 3)), (1, 1, 3)),
    ((0, 1), (0, 1, 1)),
    ((F(1, 2), F(2, 3)), (3, 4, 6)),
])
def test_homogeneous_correspondent(x, h):
    assert homogeneous_correspondent(x) == h


@given(points(3, 40))
def test_dehomogenize_inverts(x):
    assert dehomogenize(homogeneous_correspondent(x)) == x


@pytest.mark.parametrize("verts, regular", [
    ([(0, 0), (1, 0), (1, 1)], True),
    ([(0, 0), (F(1, 2), F(1, 2))], True),
    ([(F(1, 3),), (F(2, 3),)], False),
    ([(0, 0), (1, 0), (0, 1)], True),
    ([(0, 0), (1, 0), (F(1, 2), 1)], False),
])
def test_is_regular_simplex(verts, regular):
    assert is_regular_simplex(Simplex(verts)) is regular


@pytest.mark.parametrize("verts, vol", [
    ([(0, 0), (1, 0), (0, 1)], F(1, 2)),
    ([(0,), (1,)], F(1)),
    ([(0, 0), (F(1, 2), F(1, 2)), (1, 0)], F(1, 4)),
    ([(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1)], F(1, 6)),
])
def test_simplex_volume(verts, vol):
    assert simplex_volume(Simplex(verts)) == vol


def test_simplex_rejects_dependent_vertices():
    with pytest.raises(ValueError):
        Simplex([(0, 0), (1, 1), (2, 2)])


# ----------------------------------------------------------------------
# hulls

def test_example_extremals():
    assert set(TETRA.extremals) == set(P[:4])
    assert TETRA.dim == 3
    assert len(TETRA.facets) == 4


def test_square_with_center():
    sq = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1), (F(1, 2), F(1, 2))])
    assert len(sq.extremals) == 4 and sq.dim == 2


def test_single_point():
    p = convex_hull([(F(1, 3), F(1, 2))])
    assert p.dim == 0 and p.extremals == ((F(1, 3), F(1, 2)),)
    assert faces(p) == []


def test_lower_dimensional_hull():
    seg = convex_hull([(0, 1), (1, 0), (F(1, 2), F(1, 2))])
    assert seg.dim == 1 and set(seg.extremals) == {(0, 1), (1, 0)}
    assert seg.in_relative_interior((F(1, 2), F(1, 2)))
    assert not seg.in_relative_interior((0, 1))
    assert not seg.contains((F(1, 2), F(1, 3)))
    assert sorted(f.extremals for f in faces(seg)) == [((0, 1),), ((1, 0),)]


def test_face_counts():
    fs = faces(TETRA)
    assert sorted(f.dim for f in fs) == [0] * 4 + [1] * 6 + [2] * 4
    sq = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert sorted(f.dim for f in faces(sq)) == [0] * 4 + [1] * 4


def test_ri_and_boundary():
    assert TETRA.in_relative_interior((F(1, 2), F(1, 2), F(3, 4)))
    assert TETRA.on_relative_boundary((F(1, 2), F(1, 2), 1))
    assert not TETRA.in_relative_interior((0, 0, 0))
    assert not TETRA.contains((1, 1, F(1, 2)))


def _random_cloud(rng, n, k, den=6):
    return [tuple(F(rng.randint(0, den), den) for _ in range(n)) for _ in range(k)]


def _lp_member(gens, x) -> bool:
    """Float LP oracle: is x a convex combination of gens?"""
    a = [[float(g[i]) for g in gens] for i in range(len(x))] + [[1.0] * len(gens)]
    b = [float(c) for c in x] + [1.0]
    res = linprog([0] * len(gens), A_eq=a, b_eq=b, bounds=[(0, None)] * len(gens), method="highs")
    return res.status == 0


@pytest.mark.parametrize("seed", range(6))
def test_hull_matches_float_oracles(seed):
    rng = random.Random(seed)
    n = 2 + seed % 2
    gens = _random_cloud(rng, n, 8 + seed)
    hull = convex_hull(gens)
    if hull.dim == n:
        ref = ConvexHull([[float(c) for c in g] for g in gens])
        assert {gens[i] for i in ref.vertices} == set(hull.extremals)
    for _ in range(200):
        x = tuple(F(rng.randint(0, 12), 12) for _ in range(n))
        if hull.contains(x) != _lp_member(gens, x):
            # float LPs are only trusted away from the boundary
            assert min(f.slack(x) for f in hull.facets) == 0 or hull.dim < n


@given(st.lists(points(3, 4), min_size=1, max_size=9))
def test_hull_invariants(gens):
    hull = convex_hull(gens)
    assert set(hull.extremals) <= set(gens)
    for g in gens:
        assert hull.contains(g)
        assert all(f.slack(g) >= 0 for f in hull.facets)
    for f in hull.facets:
        assert len(f.vertices) >= hull.dim
        assert all(f.slack(hull.extremals[i]) == 0 for i in f.vertices)
    for e in hull.extremals:
        assert sum(1 for f in hull.facets if f.slack(e) == 0) >= hull.dim
        rest = [g for g in gens if g != e]
        assert not rest or not convex_hull(rest).contains(e)
    again = convex_hull(hull.extremals)
    assert again.extremals == hull.extremals and again.facets == hull.facets


# ----------------------------------------------------------------------
# linear programming

def _example_system(target, maximize_t=False):
    rows = [[p[i] for p in P] for i in range(3)]
    if not maximize_t:
        return LinearProgram.feasibility(rows + [[1] * 5], ["="] * 4, list(target) + [1])
    m = [r + [0] for r in rows] + [[1] * 5 + [0]]
    m += [[int(i == j) for i in range(5)] + [-1] for j in range(5)]
    return LinearProgram([0] * 5 + [1], m, ["="] * 4 + [">="] * 5, list(target) + [1] + [0] * 5,
                         maximize=True)


def test_lp_feasible_example():
    lp = _example_system((F(1, 2), F(1, 2), 1))
    out = lp_solve(lp)
    assert isinstance(out, Optimal) and check_outcome(lp, out)


def test_lp_farkas_example():
    lp = _example_system((1, 1, F(1, 2)))
    out = lp_solve(lp)
    assert isinstance(out, Infeasible) and check_outcome(lp, out)
    y = out.farkas
    # stakes from the certificate: a sure loss at every generator
    sigma = y[:3]
    target = (1, 1, F(1, 2))
    assert all(sum(s * (b - p[i]) for i, (s, b) in enumerate(zip(sigma, target))) < 0 for p in P)


def test_lp_max_t_example():
    lp = _example_system((F(1, 2), F(1, 2), 1), maximize_t=True)
    out = lp_solve(lp)
    assert isinstance(out, Optimal) and out.value == 0 and check_outcome(lp, out)
    assert out.x[0] == 0 and out.x[3] == 0


def test_lp_unbounded():
    lp = LinearProgram([1, 1], [[1, -1]], ["<="], [1], maximize=True)
    out = lp_solve(lp)
    assert isinstance(out, Unbounded) and check_outcome(lp, out)


def test_lp_free_variables():
    lp = LinearProgram([1], [[1]], [">="], [-3], free=[0])
    out = lp_solve(lp)
    assert isinstance(out, Optimal) and out.value == -3 and check_outcome(lp, out)


def test_lp_rejects_malformed():
    with pytest.raises(ValueError):
        LinearProgram([1, 2], [[1]], ["<="], [1])
    with pytest.raises(ValueError):
        LinearProgram([1], [[1]], ["<"], [1])


small = st.integers(-2, 2)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_lp_random_degenerate(m, n, data):
    """Small-integer data makes degenerate pivots common; Bland's rule must still terminate."""
    a = [[data.draw(small) for _ in range(n)] for _ in range(m)]
    b = [data.draw(st.integers(0, 2)) for _ in range(m)]
    senses = [data.draw(st.sampled_from(["<=", "=", ">="])) for _ in range(m)]
    c = [data.draw(small) for _ in range(n)]
    lp = LinearProgram(c, a, senses, b, maximize=data.draw(st.booleans()))
    out = lp_solve(lp)
    assert check_outcome(lp, out)
    sign = {"<=": 1, ">=": -1}
    ub = [(r, v, sign[s]) for r, v, s in zip(a, b, senses) if s != "="]
    eq = [(r, v) for r, v, s in zip(a, b, senses) if s == "="]
    ref = linprog([-v if lp.maximize else v for v in c],
                  A_ub=[[k * x for x in r] for r, _, k in ub] or None,
                  b_ub=[k * v for _, v, k in ub] or None,
                  A_eq=[r for r, _ in eq] or None, b_eq=[v for _, v in eq] or None,
                  bounds=[(0, None)] * n, method="highs")
    expected = {0: Optimal, 2: Infeasible, 3: Unbounded}[ref.status]
    assert isinstance(out, expected)
    if expected is Optimal:
        assert abs(float(out.value) - (-ref.fun if lp.maximize else ref.fun)) < 1e-7


def test_pairwise_faces_meet_in_faces():
    fs = faces(TETRA)
    verts = {f.extremals for f in fs}
    for a, b in combinations([f for f in fs if f.dim == 2], 2):
        common = tuple(sorted(set(a.extremals) & set(b.extremals)))
        assert tuple(sorted(common)) in {tuple(sorted(v)) for v in verts}
