"""Models, axiomatizing formulas and provability for coherence theories.

Provability is decided semantically: ``⊢ φ`` iff ``φ`` takes value 1 at every
point of the cube.  Every synthesized formula is checked against its intended
function before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .coherence import Book, default_complex
from .complex import RegularComplex, _linearize, agrees_with, cut_by_forms, hat, kuhn_base
from .config import check_dim
from .formula import (
    ONE, ZERO, Formula, Implies, Neg, Odot, Oplus, Var, big_join, big_meet, big_oplus,
    evaluate, power, render,
)
from .geometry import Polytope, convex_hull

__all__ = [
    "Polyhedron", "SynthesisError", "mod_of", "synth_affine_term", "hat_formula",
    "support_complex", "synth_polytope_formula", "synth_boundary_formula",
    "oneset_matches", "is_valid", "deduction_exponent", "prove", "Theory", "theory",
    "CoherenceReport", "logic_coherence_check",
]

AffineForm = tuple  # (coefficients, constant) with integer entries: a.x + c


class SynthesisError(AssertionError):
    """A synthesized formula failed its exact verification."""


@dataclass(frozen=True)
class Polyhedron:
    """A finite union of rational polytopes in [0,1]^n."""

    n: int
    pieces: tuple

    def contains(self, x: Sequence) -> bool:
        return any(p.contains(x) for p in self.pieces)

    @property
    def empty(self) -> bool:
        return not self.pieces


def _dim(formulas: Iterable[Formula], n: int | None) -> int:
    n = max([1] + [f.arity for f in formulas]) if n is None else n
    check_dim(n)
    return n


def _is_one(values: Sequence[int], dens: Sequence[int]) -> list[bool]:
    return [v == d for v, d in zip(values, dens)]


def mod_of(phi: Formula, n: int | None = None) -> Polyhedron:
    """The oneset of ``phi``: inside each simplex of a linearizing complex it is
    the face spanned by the vertices where ``phi`` is 1."""
    n = _dim([phi], n)
    lin = _linearize([phi], kuhn_base(n), known=_KNOWN, regular=False)
    cx = lin.complex
    one = _is_one(lin.values[phi], [h[-1] for h in cx.homogeneous])
    faces = {frozenset(v for v in s if one[v]) for s in cx.simplexes} - {frozenset()}
    maximal = [f for f in faces if not any(f < g for g in faces)]
    pieces = sorted((convex_hull([cx.vertices[v] for v in sorted(f)]) for f in maximal),
                    key=lambda p: p.extremals)
    return Polyhedron(n, tuple(pieces))


# ----------------------------------------------------------------------
# affine terms

def _bounds(coeffs: tuple, const: int) -> tuple[int, int]:
    lo = const + sum(a for a in coeffs if a < 0)
    hi = const + sum(a for a in coeffs if a > 0)
    return lo, hi


def _odot(a: Formula, b: Formula) -> Formula:
    if a is ZERO or b is ZERO:
        return ZERO
    if a is ONE:
        return b
    if b is ONE:
        return a
    return Odot(a, b)


def _oplus(a: Formula, b: Formula) -> Formula:
    if a is ONE or b is ONE:
        return ONE
    if a is ZERO:
        return b
    if b is ZERO:
        return a
    return Oplus(a, b)


def _neg(a: Formula) -> Formula:
    if a is ZERO:
        return ONE
    if a is ONE:
        return ZERO
    return Neg(a)


@lru_cache(maxsize=None)
def _affine_term(coeffs: tuple, const: int) -> Formula:
    lo, hi = _bounds(coeffs, const)
    if lo >= 1:
        return ONE
    if hi <= 0:
        return ZERO
    i = max(k for k, a in enumerate(coeffs) if a)
    x = Var(i + 1)
    a = coeffs[i]
    step = 1 if a > 0 else -1
    rest = coeffs[:i] + (a - step,) + coeffs[i + 1:]
    if step > 0:
        # [u + x] = [u + 1] * ([u] + x)
        return _odot(_affine_term(rest, const + 1), _oplus(_affine_term(rest, const), x))
    # [u - x] = [u] * ([u - 1] + ~x)
    return _odot(_affine_term(rest, const), _oplus(_affine_term(rest, const - 1), _neg(x)))


def _agrees_with_clamp(f: Formula, coeffs: tuple, const: int) -> bool:
    """Exact test that ``f`` equals ``min(1, max(0, a.x + c))`` on the cube."""
    n = max(1, len(coeffs), f.arity)
    a = tuple(coeffs) + (0,) * (n - len(coeffs))
    lin = _linearize([f], kuhn_base(n), cuts=[(a, const), (a, const - 1)], regular=False)
    for h, got in zip(lin.complex.homogeneous, lin.values[f]):
        d = h[-1]
        ell = sum(c * y for c, y in zip(a, h)) + const * d
        if got != min(d, max(0, ell)):
            return False
    return True


@lru_cache(maxsize=None)
def _peel_identities_hold() -> bool:
    """The two identities behind the recursion, for real ``u`` and ``y`` in [0,1]:
    ``[u + y] = [u + 1] * ([u] + y)`` and ``[u - y] = [u] * ([u - 1] + ~y)``.

    For ``u`` outside [-1, 1] (resp. [0, 2]) both sides of the first (resp.
    second) are constant and equal, so substituting ``u = 2s - 1`` (resp.
    ``u = 2s``) with ``s`` in [0,1] leaves a finite exact check.
    """
    s, y = Var(1), Var(2)
    plus = Odot(Oplus(s, s), Oplus(Odot(s, s), y))
    minus = Odot(Oplus(s, s), Oplus(Odot(s, s), Neg(y)))
    return _agrees_with_clamp(plus, (2, 1), -1) and _agrees_with_clamp(minus, (2, -1), 0)


def _built_by_peeling(f: Formula, coeffs: tuple, const: int) -> bool:
    """Whether every node of ``f`` is an instance of a peel identity, with
    trivial nodes only where the form is at least 1 or at most 0 on the cube."""
    seen: set = set()

    def ok(f: Formula, coeffs: tuple, const: int) -> bool:
        if (coeffs, const) in seen:
            return True
        lo, hi = _bounds(coeffs, const)
        if lo >= 1 or hi <= 0:
            good = f is (ONE if lo >= 1 else ZERO)
        else:
            i = max(k for k, a in enumerate(coeffs) if a)
            step = 1 if coeffs[i] > 0 else -1
            rest = coeffs[:i] + (coeffs[i] - step,) + coeffs[i + 1:]
            lit = Var(i + 1) if step > 0 else _neg(Var(i + 1))
            c1, c2 = (const + 1, const) if step > 0 else (const, const - 1)
            a, b = _affine_term(rest, c1), _affine_term(rest, c2)
            # _odot and _oplus only drop constants by the unit and absorbing laws
            good = f is _odot(a, _oplus(b, lit)) and ok(a, rest, c1) and ok(b, rest, c2)
        if good:
            seen.add((coeffs, const))
        return good

    return ok(f, coeffs, const)


# Terms with coefficients at most this large in total are checked by exact
# linearization; larger ones through the peel identities.
_DIRECT_CHECK = 6


@lru_cache(maxsize=None)
def _term_verified(coeffs: tuple, const: int) -> bool:
    f = _affine_term(coeffs, const)
    if sum(abs(a) for a in coeffs) <= _DIRECT_CHECK:
        return _agrees_with_clamp(f, coeffs, const)
    return _peel_identities_hold() and _built_by_peeling(f, coeffs, const)


# Verified terms; linearization evaluates these nodes from their forms.
_KNOWN: dict[Formula, AffineForm] = {}


def synth_affine_term(coeffs: Sequence[int], const: int = 0) -> Formula:
    """A formula for ``min(1, max(0, a.x + c))``, checked exactly before use."""
    coeffs = tuple(int(a) for a in coeffs)
    const = int(const)
    f = _affine_term(coeffs, const)
    if f not in _KNOWN:
        if not _term_verified(coeffs, const):
            raise SynthesisError(f"affine term for {coeffs}, {const} is wrong")
        _KNOWN.setdefault(f, (coeffs, const))
    return f


# ----------------------------------------------------------------------
# hats and polytopes

def _form_at(form: AffineForm, h: Sequence[int]) -> int:
    coeffs, const = form
    return sum(a * y for a, y in zip(coeffs, h)) + const * h[-1]


def hat_formula(cx: RegularComplex, apex: int, *, verify: bool = True) -> Formula:
    """A formula for the Schauder hat at ``apex`` in max–min form.

    With ``ℓ_T`` the affine piece of the hat on simplex ``T`` of its star, the
    hat equals ``⋁_T ⋀{[ℓ_T'] : ℓ_T' >= ℓ_T on T}``.
    """
    pieces = hat(cx, apex).pieces
    meets: set[tuple] = set()
    for s, form in pieces.items():
        hs = [cx.homogeneous[v] for v in cx.simplexes[s]]
        own = [_form_at(form, h) for h in hs]
        above = sorted({g for g in pieces.values()
                        if all(_form_at(g, h) >= o for h, o in zip(hs, own))})
        meets.add(tuple(above))
    # a meet over a superset is dominated and can be dropped from the join
    kept = sorted(m for m in meets if not any(set(o) < set(m) for o in meets))
    f = big_join([big_meet([synth_affine_term(a, c) for a, c in m]) for m in kept])
    if verify:
        target = [1 if v == apex else 0 for v in range(len(cx.vertices))]
        if not agrees_with(f, cx, target, known=_KNOWN):
            raise SynthesisError(f"hat formula at vertex {apex} is wrong")
    return f


def _forms(pieces: Iterable[Polytope]) -> list[AffineForm]:
    out = []
    for p in pieces:
        for a, b, _ in p.constraints():
            out.append((tuple(a), -b))
    return sorted(set(out))


def support_complex(p: Polytope) -> RegularComplex:
    """A regular complex of the cube in which ``p`` is a union of faces."""
    return cut_by_forms(kuhn_base(p.ambient_dim), _forms([p]))


def _facet_terms(p: Polytope) -> list[Formula]:
    terms = []
    for a, b, sense in p.constraints():
        # a.x <= b  iff  [1 + b - a.x] = 1
        terms.append(synth_affine_term(tuple(-x for x in a), 1 + b))
        if sense == "=":
            terms.append(synth_affine_term(tuple(a), 1 - b))
    return terms


def _hat_sum(p: Polytope) -> Formula:
    cx = support_complex(p)
    inside = [v for v, x in enumerate(cx.vertices) if p.contains(x)]
    if len(inside) == len(cx.vertices):
        return ONE
    f = big_oplus([hat_formula(cx, v, verify=False) for v in inside])
    target = [1 if p.contains(x) else 0 for x in cx.vertices]
    if not agrees_with(f, cx, target, known=_KNOWN):
        raise SynthesisError("polytope formula does not match its sum of hats")
    return f


def synth_polytope_formula(p: Polytope, *, method: str = "facets", verify: bool = True) -> Formula:
    """A formula whose oneset is exactly the polytope ``p`` in [0,1]^k.

    ``method="hats"`` sums the hat formulas of a complex supporting ``p`` at
    the vertices lying in ``p``; ``method="facets"`` (the default) meets one
    clamped term ``[1 + b - a.x]`` per constraint ``a.x <= b``.  Hat pieces
    grow with the denominators of ``p`` and their formulas soon become too
    large to linearize, while facet terms stay as small as the constraints.
    The hat sum is always checked against its target values; ``verify``
    additionally checks the oneset exactly.
    """
    k = p.ambient_dim
    check_dim(k)
    if any(not 0 <= c <= 1 for e in p.extremals for c in e):
        raise ValueError("polytope is not inside the unit cube")
    if method == "hats":
        f = _hat_sum(p)
    elif method == "facets":
        f = big_meet([t for t in _facet_terms(p) if t is not ONE])
    else:
        raise ValueError(f"unknown method {method!r}")
    if verify and not oneset_matches(f, p):
        raise SynthesisError("oneset of the polytope formula differs from the polytope")
    return f


def boundary_pieces(d: Polytope) -> list[Polytope]:
    return [convex_hull([d.extremals[i] for i in f.vertices]) for f in d.facets]


def synth_boundary_formula(d: Polytope | Book, *, method: str = "facets", verify: bool = True) -> Formula:
    """A formula whose oneset is the relative boundary of ``d``.

    ``d`` is a polytope, or a book whose risk polytope is meant.
    """
    if isinstance(d, Book):
        d = _risk_hull(d.formulas, d.n)
    if d.dim == 0:
        return ZERO
    return big_join([synth_polytope_formula(f, method=method, verify=verify)
                     for f in boundary_pieces(d)])


def oneset_matches(phi: Formula, pieces: Polytope | Sequence[Polytope], n: int | None = None) -> bool:
    """Exact test that the oneset of ``phi`` is the union of ``pieces``.

    After cutting by every constraint hyperplane, each polytope meets a
    simplex in the face spanned by its vertices lying in the polytope, and
    so does the oneset of ``phi`` once ``phi`` is linearized too.
    """
    pieces = [pieces] if isinstance(pieces, Polytope) else list(pieces)
    if n is None:
        n = pieces[0].ambient_dim if pieces else max(1, phi.arity)
    if phi.arity > n or any(p.ambient_dim != n for p in pieces):
        raise ValueError("dimension mismatch")
    lin = _linearize([phi], kuhn_base(n), cuts=_forms(pieces), known=_KNOWN, regular=False)
    cx = lin.complex
    one = _is_one(lin.values[phi], [h[-1] for h in cx.homogeneous])
    member = [[p.contains(x) for p in pieces] for x in cx.vertices]
    for s in cx.simplexes:
        ones = frozenset(v for v in s if one[v])
        per_piece = [frozenset(v for v in s if member[v][j]) for j in range(len(pieces))]
        union = frozenset().union(*per_piece)
        if ones != union or (ones and ones not in per_piece):
            return False
    return True


# ----------------------------------------------------------------------
# validity and deduction

def is_valid(phi: Formula, n: int | None = None) -> bool:
    """Whether ``phi`` is a tautology (value 1 everywhere on the cube)."""
    n = _dim([phi], n)
    lin = _linearize([phi], kuhn_base(n), known=_KNOWN, regular=False)
    return all(_is_one(lin.values[phi], [h[-1] for h in lin.complex.homogeneous]))


def _exponent(phi_vals: Sequence[int], psi_vals: Sequence[int], dens: Sequence[int]) -> int | None:
    """Least ``n >= 1`` with ``max(0, 1 - n(1 - φ)) <= ψ`` at all listed vertices."""
    best = 1
    for p, q, d in zip(phi_vals, psi_vals, dens):
        if p == d:
            if q != d:
                return None
            continue
        best = max(best, -(-(d - q) // (d - p)))
    return best


def deduction_exponent(phi: Formula, psi: Formula, n: int | None = None) -> int | None:
    """The least ``n`` with ``⊢ φ^n → ψ``, or None when ``Mod(φ) ⊄ Mod(ψ)``.

    On a complex linearizing both formulas the condition is affine on each
    simplex, so checking vertices settles it.
    """
    n = _dim([phi, psi], n)
    lin = _linearize([phi, psi], kuhn_base(n), known=_KNOWN, regular=False)
    dens = [h[-1] for h in lin.complex.homogeneous]
    return _exponent(lin.values[phi], lin.values[psi], dens)


def prove(phi: Formula, psi: Formula) -> dict:
    """Report for ``⊢ φ^n → ψ`` with the least exponent, double-checked by validity."""
    n = deduction_exponent(phi, psi)
    dim = max(1, phi.arity, psi.arity)
    report = {"phi": render(phi), "psi": render(psi), "n": n}
    if n is None:
        report["valid_at_n"] = False
    else:
        report["valid_at_n"] = is_valid(Implies(power(phi, n), psi), dim)
        report["valid_below_n"] = is_valid(Implies(power(phi, n - 1), psi), dim) if n > 1 else None
    return report


# ----------------------------------------------------------------------
# coherence through provability

@lru_cache(maxsize=64)
def _risk_hull(formulas: tuple, n: int) -> Polytope:
    cx = default_complex(Book(formulas, (Fraction(0),) * len(formulas), n))
    return convex_hull([tuple(evaluate(f, v) for f in formulas) for v in cx.vertices])


@dataclass(frozen=True)
class Theory:
    """Axioms of the risk polytope and of its relative boundary, with a complex
    linearizing both and their homogeneous vertex values there."""

    formulas: tuple
    n: int
    polytope: Polytope
    axiom: Formula
    boundary_axiom: Formula
    complex: RegularComplex
    axiom_values: tuple
    boundary_values: tuple


@lru_cache(maxsize=16)
def theory(formulas: tuple, n: int) -> Theory:
    k = len(formulas)
    check_dim(k)
    d = _risk_hull(formulas, n)
    axiom = synth_polytope_formula(d)
    boundary = synth_boundary_formula(d)
    lin = _linearize([axiom, boundary], kuhn_base(k), known=_KNOWN, regular=False)
    return Theory(formulas, n, d, axiom, boundary, lin.complex, lin.values[axiom], lin.values[boundary])


@dataclass(frozen=True)
class CoherenceReport:
    coherent: bool
    strict: bool
    exponent: int | None  # least n with ⊢ Π_β^n → Π_Φ
    boundary_exponent: int | None  # least n with ⊢ Π_β^n → Π_rb, None if there is none
    point_axiom: Formula


def logic_coherence_check(book: Book) -> CoherenceReport:
    """Coherence via provability: coherent iff some ``Π_β^n → Π_Φ`` is provable;
    strictly coherent iff moreover no ``Π_β^n → Π_rb`` is."""
    th = theory(book.formulas, book.n)
    pi_beta = synth_polytope_formula(convex_hull([book.odds]))
    lin = _linearize([pi_beta], th.complex, tracked=[th.axiom_values, th.boundary_values],
                     known=_KNOWN, regular=False)
    dens = [h[-1] for h in lin.complex.homogeneous]
    beta_vals = lin.values[pi_beta]
    n1 = _exponent(beta_vals, lin.tracked[0], dens)
    n2 = _exponent(beta_vals, lin.tracked[1], dens)
    return CoherenceReport(n1 is not None, n1 is not None and n2 is None, n1, n2, pi_beta)
