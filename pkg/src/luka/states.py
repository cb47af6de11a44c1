"""States on the free MV-algebra: discrete vertex states, the Lebesgue state,
and step-by-step faithful extension of a strictly coherent book.

A state given by weights ``λ`` on the vertices of a complex evaluates every
formula as ``s(f) = Σ_v f(v)·λ_v``.  It is positive on every Schauder hat of
the complex exactly when all weights are positive.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .coherence import Book, StrictlyCoherent, Verdict, _max_t_lp, decide_strict, default_complex
from .complex import RegularComplex, _linearize, kuhn_base, refine
from .formula import Formula, evaluate, parse, render
from .geometry import Optimal, format_point, lp_solve

__all__ = [
    "DiscreteState", "state_eval", "lebesgue_state", "restrict",
    "ExtensionSession", "NotStrictlyCoherent", "SessionReplayError", "open_session",
]


@dataclass(frozen=True)
class DiscreteState:
    complex: RegularComplex
    lam: tuple

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(Fraction(x) for x in self.lam))
        if len(self.lam) != len(self.complex.vertices):
            raise ValueError("one weight per vertex is required")
        if any(x < 0 for x in self.lam) or sum(self.lam) != 1:
            raise ValueError("weights must be nonnegative and sum to 1")

    @property
    def faithful(self) -> bool:
        """Positive on every hat of the complex."""
        return all(x > 0 for x in self.lam)

    def __call__(self, f: Formula) -> Fraction:
        return state_eval(self, f)


def restrict(f: Formula, cx: RegularComplex) -> tuple[Fraction, ...]:
    """The values of ``f`` at the vertices of ``cx``."""
    if f.arity > cx.n:
        raise ValueError(f"formula arity {f.arity} exceeds dimension {cx.n}")
    return tuple(evaluate(f, v) for v in cx.vertices)


def state_eval(s: DiscreteState, f: Formula) -> Fraction:
    return sum((x * y for x, y in zip(s.lam, restrict(f, s.complex))), Fraction(0))


def lebesgue_state(f: Formula, n: int | None = None) -> Fraction:
    """Exact integral of ``f`` over [0,1]^n.

    On a complex where ``f`` is affine piecewise, each simplex contributes its
    volume times the mean of the vertex values.
    """
    n = max(1, f.arity) if n is None else n
    lin = _linearize([f], kuhn_base(n))
    cx, vals = lin.complex, lin.values[f]
    total = Fraction(0)
    for s, verts in enumerate(cx.simplexes):
        mean = sum((Fraction(vals[v], cx.homogeneous[v][-1]) for v in verts), Fraction(0)) / len(verts)
        total += cx.volume(s) * mean
    return total


# ----------------------------------------------------------------------

class NotStrictlyCoherent(ValueError):
    def __init__(self, verdict: Verdict):
        super().__init__(f"book is not strictly coherent (verdict: {verdict.kind})")
        self.verdict = verdict


class SessionReplayError(ValueError):
    """A stored session does not match its replay."""


@dataclass
class ExtensionSession:
    """A strictly coherent book extended one formula at a time.

    Each ``extend`` refines the complex to linearize the new formula and
    picks, among the states positive on every vertex that reproduce the book
    and all earlier values, the one maximizing the smallest weight.
    """

    book: Book
    complex: RegularComplex
    lam: tuple
    history: list = field(default_factory=list)  # (Formula, Fraction) pairs

    @property
    def n(self) -> int:
        return self.book.n

    @property
    def state(self) -> DiscreteState:
        return DiscreteState(self.complex, self.lam)

    def eval(self, f: Formula) -> Fraction:
        return state_eval(self.state, f)

    def extend(self, g: Formula) -> Fraction:
        if g.arity > self.n:
            raise ValueError(f"formula arity {g.arity} exceeds dimension {self.n}")
        cx = refine(self.complex, [g])
        rows = tuple(tuple(evaluate(f, v) for f in self.book.formulas) for v in cx.vertices)
        extra = [(restrict(h, cx), val) for h, val in self.history]
        outcome = lp_solve(_max_t_lp(rows, self.book.odds, extra))
        if not isinstance(outcome, Optimal) or outcome.x[-1] <= 0:
            raise AssertionError("no faithful extension exists; the session is corrupt")
        *mu, t = outcome.x
        lam = tuple(m + t for m in mu)
        gvals = restrict(g, cx)
        value = sum((x * y for x, y in zip(lam, gvals)), Fraction(0))
        constant = len(set(gvals)) == 1
        assert constant or 0 < value < 1
        self.complex, self.lam = cx, lam
        self.history.append((g, value))
        return value

    # ------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "n": self.n,
            "book": [[render(f), str(b)] for f, b in zip(self.book.formulas, self.book.odds)],
            "history": [[render(g), str(v)] for g, v in self.history],
            "complex": self.complex.to_json(),
            "lambda": {format_point(p): str(x) for p, x in zip(self.complex.vertices, self.lam)},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ExtensionSession":
        """Rebuild by replaying the history and check it reproduces the stored data."""
        book = Book.of(((f, Fraction(b)) for f, b in data["book"]), int(data.get("n", 0)) or None)
        session = open_session(book)
        for text, stored in data["history"]:
            value = session.extend(parse(text))
            if value != Fraction(stored):
                raise SessionReplayError(f"replayed value {value} of {text} differs from stored {stored}")
        if session.to_json() != dict(data, n=session.n):
            raise SessionReplayError("replayed complex or weights differ from the stored session")
        return session


def open_session(book: Book, cx: RegularComplex | None = None) -> ExtensionSession:
    """Start an extension chain; the book must be strictly coherent."""
    verdict = decide_strict(book, cx)
    cx = cx if cx is not None else default_complex(book)
    if not isinstance(verdict, StrictlyCoherent):
        raise NotStrictlyCoherent(verdict)
    return ExtensionSession(book, cx, verdict.lam, [])
