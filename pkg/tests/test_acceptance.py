"""Acceptance criteria; one test per criterion, summarized at the end of the run."""
import json
import random
import time
from fractions import Fraction as F
from itertools import combinations, product

import sympy

from luka.coherence import (
    Book, CoherentNotStrict, Incoherent, StrictlyCoherent, boolean_points, decide_coherent, decide_strict,
    decide_strict_on_points, default_complex, ri_membership_crosscheck, risk_polytope, verify_certificate,
)
from luka.complex import agrees_with, cut_by_forms, hats, kuhn_base, linearize, refine, vertex_profile
from luka.formula import evaluate, parse, render
from luka.geometry import convex_hull
from luka.logic import (
    deduction_exponent, is_valid, logic_coherence_check, mod_of, oneset_matches, synth_affine_term,
    synth_boundary_formula, synth_polytope_formula,
)
from luka.states import ExtensionSession, lebesgue_state, open_session

from conftest import EXAMPLE, random_formula, random_point

H = F(1, 2)
P1, P2, P3, P4, P5 = (0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1), (H, H, 1)


def phis(*groups):
    return [tuple(parse(t) for t in g) for g in groups]


def sample_books(phi, rng, count):
    """Random odds mixed with points of the risk polytope, its faces and its interior."""
    n = max(f.arity for f in phi)
    rows = [tuple(evaluate(f, v) for f in phi) for v in linearize(phi, n).vertices]
    out = []
    for i in range(count):
        mode = i % 4
        if mode == 0:
            odds = tuple(F(rng.randint(0, q), q) for q in (rng.choice((2, 3, 4, 6)) for _ in phi))
        else:
            chosen = rows if mode == 1 else rng.sample(rows, min(len(rows), mode - 1))
            w = [F(rng.randint(1, 3)) for _ in chosen]
            odds = tuple(sum(a * r[k] for a, r in zip(w, chosen)) / sum(w) for k in range(len(phi)))
        out.append(Book(phi, odds, n))
    return out


# ----------------------------------------------------------------------

def test_criterion_1_worked_example():
    start = time.perf_counter()
    cx = linearize(EXAMPLE)
    profile = vertex_profile(EXAMPLE, cx)
    d = risk_polytope(EXAMPLE, cx)
    elapsed = time.perf_counter() - start
    assert (H, H) in cx.vertices
    assert dict(zip(cx.vertices, profile)) == {(0, 0): P1, (0, 1): P2, (1, 0): P3, (1, 1): P4, (H, H): P5}
    assert set(d.extremals) == {P1, P2, P3, P4}
    assert elapsed < 1.0, f"took {elapsed:.3f}s"


BOOKS_2 = [
    (("x1", "x2", "x1 + x2"), (H, H, F(3, 4))),
    (("x1", "x2", "x1 + x2"), (H, H, 1)),
    (("x1", "x2", "x1 + x2"), (1, 1, H)),
    (("x1", "~x1"), (F(1, 3), F(2, 3))),
    (("x1", "~x1"), (F(1, 3), F(1, 3))),
    (("x1 + x1", "x1 * x1"), (F(3, 4), F(1, 8))),
    (("x1 + x1", "x1 * x1"), (1, 0)),
    (("x1 & x2", "x1 | x2"), (F(1, 4), F(3, 4))),
    (("x1 -> x2", "x2", "x1 * x2"), (F(5, 6), H, F(1, 6))),
    (("x1 * x2", "x1 + ~x2", "x2"), (0, 1, H)),
]


def test_criterion_2_complex_independence():
    rng = random.Random(2)
    for texts, odds in BOOKS_2:
        b = Book.of(list(zip(texts, odds)))
        base = default_complex(b)
        complexes = [base] + [refine(base, [random_formula(rng, b.n, 5)]) for _ in range(3)]
        extremals, kinds = set(), set()
        for cx in complexes:
            cx.validate()
            d = risk_polytope(b.formulas, cx)
            v = decide_strict(b, cx)
            assert verify_certificate(v, b, cx)
            extremals.add(frozenset(d.extremals))
            kinds.add((type(v).__name__, decide_coherent(b, cx).coherent))
        assert len(extremals) == 1, texts
        assert len(kinds) == 1, texts


def test_criterion_3_trichotomy():
    cx = linearize(EXAMPLE)
    b = Book(EXAMPLE, (H, H, F(3, 4)), 2)
    v = decide_strict(b, cx)
    assert isinstance(v, StrictlyCoherent) and verify_certificate(v, b, cx)

    b = b.with_odds((H, H, 1))
    v = decide_strict(b, cx)
    assert isinstance(v, CoherentNotStrict) and v.sigma == (0, 0, -1)
    assert verify_certificate(v, b, cx)

    b = b.with_odds((1, 1, H))
    v = decide_strict(b, cx)
    assert isinstance(v, Incoherent) and verify_certificate(v, b, cx)
    # same sign pattern as the hand-derived stakes, which verify as well
    assert [s < 0 for s in v.sigma] == [True, True, False] and v.sigma[2] > 0
    assert verify_certificate(Incoherent((-1, -1, 1), v.points), b, cx)


PHIS_4 = phis(
    ("x1", "x2", "x1 + x2"),
    ("x1", "~x1"),
    ("x1 + x1", "x1 * x1", "x1 -> x1 * x1"),
    ("x1 & x2", "x1 | x2", "x1 * ~x2"),
    ("x1 + x2 + x3", "x2 * x3", "x3 -> x1"),
    ("x1 * x2 * x3", "x1 | x3"),
)


def test_criterion_4_ri_oracle_agreement():
    rng = random.Random(4)
    start = time.perf_counter()
    total = disagreements = 0
    for phi in PHIS_4:
        d = risk_polytope(phi, linearize(phi))
        for b in sample_books(phi, rng, 36):
            total += 1
            strict = isinstance(decide_strict(b), StrictlyCoherent)
            if strict != ri_membership_crosscheck(b.odds, d):
                disagreements += 1
    elapsed = time.perf_counter() - start
    assert total >= 200 and len(PHIS_4) >= 5
    assert disagreements == 0
    assert elapsed < 60, f"took {elapsed:.1f}s"


def test_criterion_5_hat_laws():
    fixtures = phis(("x1", "x2", "x1 + x2"), ("x1 + x1 + x1",), ("x1 * x2", "x1 -> x2 + x2"),
                    ("x1 + x2 + x3", "x3 * x1"))
    rng = random.Random(5)
    for phi in fixtures:
        cx = linearize(phi)
        hs = hats(cx)
        for _ in range(50):
            x = random_point(rng, cx.n, 40)
            values = [h(x) for h in hs]
            assert sum(values) == 1
            assert all(max(0, a + b - 1) == 0 for a, b in combinations(values, 2))
            for f in phi:
                assert evaluate(f, x) == sum(evaluate(f, v) * h for v, h in zip(cx.vertices, values))


def test_criterion_6_faithful_extension():
    session = open_session(Book.of([("x1", H)]))
    chain = ["x1 + x1", "x1 * x1", "~x1 -> x1 * x1 * x1", "(x1 + x1 + x1) & ~x1", "x1 * (x1 + x1)"]
    for text in chain:
        earlier = list(session.history)
        value = session.extend(parse(text))
        assert 0 < value < 1
        assert session.history[:-1] == earlier
        for g, stored in session.history:
            assert session.eval(g) == stored
        assert session.eval(parse("x1")) == H
        assert session.state.faithful
    assert len(session.history) == 5
    data = json.dumps(session.to_json(), sort_keys=True)
    again = ExtensionSession.from_json(json.loads(data))
    assert json.dumps(again.to_json(), sort_keys=True) == data
    assert [again.eval(g) for g, _ in again.history] == [v for _, v in session.history]


def _sympy_integral(text, n):
    x = sympy.symbols("x1:3")
    expr = {
        "x1": x[0],
        "x1 + x1": sympy.Min(1, 2 * x[0]),
        "x1 + x2": sympy.Min(1, x[0] + x[1]),
    }[text]
    expr = expr.rewrite(sympy.Piecewise)
    for v in x[:n]:
        expr = sympy.piecewise_fold(sympy.integrate(expr, (v, 0, 1)))
    return F(str(sympy.nsimplify(expr)))


def test_criterion_7_lebesgue_state():
    for text, n, value in [("x1", 1, H), ("x1 + x1", 1, F(3, 4)), ("x1 + x2", 2, F(5, 6))]:
        assert _sympy_integral(text, n) == value
        assert lebesgue_state(parse(text), n) == value
    rng = random.Random(7)
    grid = list(product([F(k, 6) for k in range(7)], repeat=2))
    found = 0
    while found < 50:
        f = random_formula(rng, 2, rng.randint(1, 6), constants=True)
        if all(evaluate(f, x) == 0 for x in grid):
            continue
        found += 1
        assert lebesgue_state(f, 2) > 0, render(f)


PHIS_8 = phis(
    ("x1", "x2", "x1 + x2"),
    ("x1", "~x1"),
    ("x1 * x2", "x1 | x2"),
    ("x1", "x1 + x1", "x2"),
    ("x1 -> x2", "x2", "x1 & x2"),
    ("x1",),
    ("x1 + x2 + x3", "x1 * x2"),
)


def test_criterion_8_provability_equivalence():
    rng = random.Random(8)
    total = disagreements = 0
    for i in range(105):
        phi = PHIS_8[i % len(PHIS_8)]
        b = sample_books(phi, rng, 4)[rng.randrange(4)]
        report = logic_coherence_check(b)
        coherent = decide_coherent(b).coherent
        strict = isinstance(decide_strict(b), StrictlyCoherent)
        total += 1
        if (report.coherent, report.strict) != (coherent, strict):
            disagreements += 1
    assert total >= 100 and disagreements == 0
    phi, psi = parse("~x1"), parse("~(x1 + x1)")
    assert deduction_exponent(phi, psi) == 2
    assert not is_valid(parse("~x1 -> ~(x1 + x1)"))
    assert is_valid(parse("~x1 * ~x1 -> ~(x1 + x1)"))


def _mod_equals(f, pieces):
    """Exact oneset comparison, plus the pieces of mod_of staying inside and spanning the target."""
    if not oneset_matches(f, pieces):
        return False
    mod = mod_of(f, pieces[0].ambient_dim)
    inside = all(any(p.contains(e) for p in pieces) for q in mod.pieces for e in q.extremals)
    spans = {e for q in mod.pieces for e in q.extremals} >= {e for p in pieces for e in p.extremals}
    return inside and spans


def test_criterion_9_synthesis():
    polytopes = [
        convex_hull([(H,)]),
        convex_hull([(F(1, 3),), (F(3, 4),)]),
        convex_hull([(0, 1), (1, 0)]),
        convex_hull([(H, F(1, 3))]),
        convex_hull([(0, 0), (1, 0), (H, H)]),
        convex_hull([(F(1, 3), F(1, 3)), (F(2, 3), F(1, 3)), (F(1, 3), F(2, 3))]),
        convex_hull([P1, P2, P3, P4]),
    ]
    for phi in phis(("x1", "~x1"), ("x1 + x1", "x1 * x1"), ("x1 & x2", "x1 | x2")):
        polytopes.append(risk_polytope(phi, linearize(phi)).polytope)
    for p in polytopes:
        f = synth_polytope_formula(p)
        assert _mod_equals(f, [p])
        if p.dim > 0:
            facets = [convex_hull([p.extremals[i] for i in fc.vertices]) for fc in p.facets]
            assert _mod_equals(synth_boundary_formula(p), facets)
    for p in polytopes[:4]:
        assert _mod_equals(synth_polytope_formula(p, method="hats"), [p])

    for n in (1, 2):
        for *coeffs, const in product(range(-3, 4), repeat=n + 1):
            f = synth_affine_term(coeffs, const)
            cx = cut_by_forms(kuhn_base(n), [(coeffs, const), (coeffs, const - 1)])
            clamp = [min(F(1), max(F(0), sum(a * c for a, c in zip(coeffs, v)) + const)) for v in cx.vertices]
            assert agrees_with(f, cx, clamp), (coeffs, const)


BOOLEAN = [parse(t) for t in ("x1", "x2", "~x1", "x1 & x2", "x1 | x2", "x1 & ~x2", "~x1 | x2",
                               "x1 & ~x1", "x1 | ~x1", "~(x1 & x2) & (x1 | x2)")]
VALUATIONS = list(product((0, 1), repeat=2))


def _classical(phi, odds):
    """Distributions on {0,1}^2 matching 0/1 odds: some exists iff some valuation hits the odds,
    and a full-support one exists iff every valuation does."""
    hits = [all(evaluate(f, w) == b for f, b in zip(phi, odds)) for w in VALUATIONS]
    return any(hits), all(hits)


def test_criterion_10_boolean_specialization():
    cases = 0
    for k in (1, 2, 3):
        for phi in combinations(BOOLEAN, k):
            for odds in product((0, 1), repeat=k):
                b = Book(phi, odds, 2)
                coherent, strict = _classical(phi, odds)
                v = decide_strict_on_points(b, boolean_points(2))
                assert verify_certificate(v, b, boolean_points(2))
                assert (v.coherent, isinstance(v, StrictlyCoherent)) == (coherent, strict), (phi, odds)
                if k <= 2:
                    assert decide_coherent(b).coherent == coherent, (phi, odds)
                cases += 1
    assert cases == 10 * 2 + 45 * 4 + 120 * 8
