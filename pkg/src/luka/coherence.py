"""Coherence and strict coherence of rational books, with certificates.

A book ``β`` on formulas ``f_1..f_k`` is coherent iff ``β`` lies in the risk
polytope ``D = conv{F(v)}``, where ``F(v) = (f_1(v), ..., f_k(v))`` ranges
over the vertices of any regular complex linearizing the formulas, and
strictly coherent iff ``β`` lies in the relative interior of ``D``.

Both questions are LPs over weights ``λ`` on the vertices.  Strictness is
settled by maximizing a common lower bound ``t`` on the weights: ``t* > 0``
exactly when some witness gives every vertex positive weight.  Stakes ``σ``
come from LP duals and are always re-checked by :func:`verify_certificate`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence, Union

from .complex import RegularComplex, check_linear, linearize, vertex_profile
from .config import DEFAULT_MAX_FORMULAS, LimitError
from .formula import Formula, evaluate, parse, render
from .geometry import Infeasible, LinearProgram, Optimal, Polytope, convex_hull, format_point, lp_solve
from .geometry.linalg import primitive

__all__ = [
    "Book", "BookSyntaxError", "parse_book", "RiskPolytope", "risk_polytope",
    "Incoherent", "Coherent", "CoherentNotStrict", "StrictlyCoherent", "Verdict",
    "decide_coherent", "decide_strict", "decide_strict_on_points", "boolean_points", "default_complex",
    "verify_certificate", "ri_membership_crosscheck", "balance", "verdict_to_json",
]


class BookSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Book:
    formulas: tuple
    odds: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "formulas", tuple(self.formulas))
        object.__setattr__(self, "odds", tuple(Fraction(b) for b in self.odds))
        if len(self.formulas) != len(self.odds):
            raise ValueError("a book needs one betting odd per formula")
        if not self.formulas:
            raise ValueError("a book needs at least one formula")
        if any(not 0 <= b <= 1 for b in self.odds):
            raise ValueError("betting odds must lie in [0, 1]")
        if any(f.arity > self.n for f in self.formulas):
            raise ValueError(f"formula arity exceeds dimension {self.n}")

    @classmethod
    def of(cls, entries: Iterable[tuple], n: int | None = None) -> "Book":
        """Build from ``(formula or text, odd)`` pairs."""
        fs, bs = [], []
        for f, b in entries:
            fs.append(parse(f) if isinstance(f, str) else f)
            bs.append(Fraction(b))
        if n is None:
            n = max(1, max((f.arity for f in fs), default=1))
        return cls(tuple(fs), tuple(bs), n)

    def with_odds(self, odds: Sequence) -> "Book":
        return Book(self.formulas, tuple(odds), self.n)

    def restrict(self, indices: Sequence[int]) -> "Book":
        return Book(tuple(self.formulas[i] for i in indices), tuple(self.odds[i] for i in indices), self.n)

    def __len__(self) -> int:
        return len(self.formulas)

    def dumps(self) -> str:
        return "".join(f"{render(f)} ; {b}\n" for f, b in zip(self.formulas, self.odds))


_ODD = re.compile(r"\s*(\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_book(text: str, n: int | None = None) -> Book:
    """Parse lines ``<formula> ; <rational>``; ``#`` starts a comment."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count(";") != 1:
            raise BookSyntaxError("expected '<formula> ; <rational>'", lineno)
        ftext, otext = line.split(";")
        m = _ODD.match(otext)
        if not m or m.group(2) == "0":
            raise BookSyntaxError(f"bad rational {otext.strip()!r}", lineno)
        odd = Fraction(int(m.group(1)), int(m.group(2) or 1))
        if odd > 1:
            raise BookSyntaxError(f"betting odd {odd} is not in [0, 1]", lineno)
        try:
            f = parse(ftext)
        except ValueError as exc:
            raise BookSyntaxError(str(exc), lineno) from None
        entries.append((f, odd))
    if not entries:
        raise BookSyntaxError("empty book", 0)
    return Book.of(entries, n)


# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RiskPolytope:
    polytope: Polytope
    points: tuple  # the vertices v, in complex order
    profile: tuple  # F(v) for each point; the generators of the polytope

    @property
    def extremals(self) -> tuple:
        return self.polytope.extremals

    def provenance(self) -> dict:
        """Each extremal point mapped to the first vertex realizing it."""
        out = {}
        for v, row in zip(self.points, self.profile):
            out.setdefault(row, v)
        return {e: out[e] for e in self.extremals}


def risk_polytope(formulas: Sequence[Formula], cx: RegularComplex) -> RiskPolytope:
    rows = vertex_profile(formulas, cx)
    return RiskPolytope(convex_hull(rows), cx.vertices, rows)


@lru_cache(maxsize=256)
def _default_complex(formulas: tuple, n: int) -> RegularComplex:
    return linearize(formulas, n)


def _support(book: Book, cx: RegularComplex | None) -> tuple[tuple, tuple]:
    if len(book) > DEFAULT_MAX_FORMULAS:
        raise LimitError(f"at most {DEFAULT_MAX_FORMULAS} formulas are supported")
    if cx is None:
        cx = _default_complex(book.formulas, book.n)
        rows = tuple(tuple(evaluate(f, v) for f in book.formulas) for v in cx.vertices)
    else:
        rows = vertex_profile(book.formulas, cx)
    return cx.vertices, rows


def default_complex(book: Book) -> RegularComplex:
    """The complex used by the decisions when none is supplied."""
    return _default_complex(book.formulas, book.n)


# ----------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class Incoherent:
    """Stakes ``sigma`` with ``Σσ_i(β_i − f_i(v)) < 0`` at every vertex: a sure loss."""

    sigma: tuple
    points: tuple
    coherent = False
    strict = False
    kind = "incoherent"


@dataclass(frozen=True)
class Coherent:
    """Witness weights ``lam`` with ``Σλ_v F(v) = β`` (strictness not examined)."""

    lam: tuple
    points: tuple
    coherent = True
    strict = None
    kind = "coherent"


@dataclass(frozen=True)
class CoherentNotStrict:
    """Witness ``lam`` plus stakes ``sigma`` with balance ``<= 0`` everywhere, ``< 0`` somewhere."""

    lam: tuple
    sigma: tuple
    points: tuple
    coherent = True
    strict = False
    kind = "coherent"


@dataclass(frozen=True)
class StrictlyCoherent:
    """Witness ``lam`` positive at every vertex."""

    lam: tuple
    points: tuple
    coherent = True
    strict = True
    kind = "strict"


Verdict = Union[Incoherent, Coherent, CoherentNotStrict, StrictlyCoherent]


def balance(sigma: Sequence, odds: Sequence, values: Sequence) -> Fraction:
    """Bookmaker's payoff ``Σσ_i(β_i − f_i)`` at a valuation with values ``f_i``."""
    return sum((Fraction(s) * (Fraction(b) - v) for s, b, v in zip(sigma, odds, values)), Fraction(0))


def _stakes(y: Sequence[Fraction]) -> tuple[int, ...]:
    return primitive(y) if any(y) else tuple(0 for _ in y)


def _feasibility_lp(rows: Sequence[tuple], odds: Sequence[Fraction]) -> LinearProgram:
    k = len(odds)
    matrix = [[Fraction(1)] * len(rows)] + [[r[i] for r in rows] for i in range(k)]
    return LinearProgram.feasibility(matrix, ["="] * (k + 1), [Fraction(1)] + list(odds))


def _max_t_lp(rows: Sequence[tuple], odds: Sequence[Fraction], extra: Sequence[tuple] = ()) -> LinearProgram:
    """Maximize ``t`` over ``λ_v = μ_v + t`` with ``μ >= 0``; ``extra`` adds
    ``(values per vertex, target)`` equality rows."""
    targets = [Fraction(1)] + list(odds) + [Fraction(t) for _, t in extra]
    lines = [[Fraction(1)] * len(rows)]
    lines += [[r[i] for r in rows] for i in range(len(odds))]
    lines += [[Fraction(v) for v in vals] for vals, _ in extra]
    matrix = [line + [sum(line, Fraction(0))] for line in lines]
    objective = [Fraction(0)] * len(rows) + [Fraction(1)]
    return LinearProgram(objective, matrix, ["="] * len(matrix), targets, maximize=True)


def _incoherent(rows, odds, points) -> Incoherent:
    outcome = lp_solve(_feasibility_lp(rows, odds))
    assert isinstance(outcome, Infeasible)
    return Incoherent(_stakes(outcome.farkas[1:]), points)


def _decide_coherent(rows, odds, points) -> Verdict:
    outcome = lp_solve(_feasibility_lp(rows, odds))
    if isinstance(outcome, Infeasible):
        return Incoherent(_stakes(outcome.farkas[1:]), points)
    return Coherent(outcome.x, points)


def _boundary_stakes(rows, odds, y: Sequence[Fraction]) -> tuple[int, ...]:
    sigma = _stakes(y[1:])
    bals = [balance(sigma, odds, r) for r in rows]
    if all(b <= 0 for b in bals) and any(b < 0 for b in bals):
        return sigma
    # supporting hyperplane of a facet through β
    poly = convex_hull(rows)
    for f in poly.facets:
        if f.slack(odds) == 0:
            sigma = _stakes([-c for c in f.normal])
            bals = [balance(sigma, odds, r) for r in rows]
            if all(b <= 0 for b in bals) and any(b < 0 for b in bals):
                return sigma
    raise AssertionError("no boundary stakes found for a non-strict book")


def _decide_strict(rows, odds, points) -> Verdict:
    if not isinstance(lp_solve(_feasibility_lp(rows, odds)), Optimal):
        return _incoherent(rows, odds, points)
    outcome = lp_solve(_max_t_lp(rows, odds))
    assert isinstance(outcome, Optimal)
    *mu, t = outcome.x
    lam = tuple(m + t for m in mu)
    if t > 0:
        return StrictlyCoherent(lam, points)
    return CoherentNotStrict(lam, _boundary_stakes(rows, odds, outcome.y), points)


def decide_coherent(book: Book, cx: RegularComplex | None = None) -> Verdict:
    """``Coherent`` with a witness or ``Incoherent`` with sure-loss stakes."""
    points, rows = _support(book, cx)
    return _decide_coherent(rows, book.odds, points)


def decide_strict(book: Book, cx: RegularComplex | None = None) -> Verdict:
    """Full trichotomy: strictly coherent, coherent but not strictly, incoherent."""
    points, rows = _support(book, cx)
    return _decide_strict(rows, book.odds, points)


def boolean_points(n: int) -> tuple:
    return tuple(tuple(Fraction(b) for b in bits) for bits in product((0, 1), repeat=n))


def decide_strict_on_points(book: Book, points: Sequence[Sequence]) -> Verdict:
    """The trichotomy when valuations range over a finite point set only.

    This is the decision in the quotient algebra of functions restricted to
    ``points``; with ``points = {0,1}^n`` it is the classical (two-valued)
    notion of coherence.
    """
    points = tuple(tuple(Fraction(c) for c in p) for p in points)
    rows = tuple(tuple(evaluate(f, p) for f in book.formulas) for p in points)
    return _decide_strict(rows, book.odds, points)


# ----------------------------------------------------------------------
# checking

def verify_certificate(verdict: Verdict, book: Book, support: RegularComplex | Sequence | None = None) -> bool:
    """Re-check every inequality of ``verdict`` exactly, trusting nothing from the solver.

    ``support`` is the complex (or finite point set) the verdict ranges over;
    by default the points recorded in the verdict.  A complex is first
    checked to linearize every formula of the book, which makes the vertex
    checks cover all valuations.
    """
    if isinstance(support, RegularComplex):
        if not all(check_linear(f, support) for f in book.formulas):
            return False
        points = support.vertices
    else:
        points = tuple(tuple(Fraction(c) for c in p) for p in (support if support is not None else verdict.points))
    if tuple(points) != tuple(verdict.points):
        return False
    rows = [tuple(evaluate(f, p) for f in book.formulas) for p in points]
    if isinstance(verdict, Incoherent):
        return len(verdict.sigma) == len(book) and all(balance(verdict.sigma, book.odds, r) < 0 for r in rows)
    lam = verdict.lam
    if len(lam) != len(rows) or any(x < 0 for x in lam) or sum(lam) != 1:
        return False
    for i, b in enumerate(book.odds):
        if sum((x * r[i] for x, r in zip(lam, rows)), Fraction(0)) != b:
            return False
    if isinstance(verdict, StrictlyCoherent):
        return all(x > 0 for x in lam)
    if isinstance(verdict, CoherentNotStrict):
        if len(verdict.sigma) != len(book):
            return False
        bals = [balance(verdict.sigma, book.odds, r) for r in rows]
        return all(b <= 0 for b in bals) and any(b < 0 for b in bals)
    return isinstance(verdict, Coherent)


def ri_membership_crosscheck(odds: Sequence, d: RiskPolytope | Polytope) -> bool:
    """Geometry-only strictness oracle: is ``β`` in the relative interior of ``D``?"""
    poly = d.polytope if isinstance(d, RiskPolytope) else d
    return poly.in_relative_interior(tuple(Fraction(b) for b in odds))


def verdict_to_json(verdict: Verdict) -> dict:
    out: dict = {"verdict": verdict.kind}
    if getattr(verdict, "lam", None) is not None:
        out["lambda"] = {format_point(p): str(x) for p, x in zip(verdict.points, verdict.lam)}
    if getattr(verdict, "sigma", None) is not None:
        out["sigma"] = [str(s) for s in verdict.sigma]
    out["vertex_order"] = [format_point(p) for p in verdict.points]
    return out
