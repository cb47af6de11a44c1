"""Command-line front end.

Every command prints one JSON report (sorted keys, rationals as ``p/q``
strings).  Exit codes: 0 positive answer, 1 negative answer, 2 bad input.
"""
from __future__ import annotations

import argparse
import fcntl
import json
import sys
from pathlib import Path
from typing import Sequence

from .coherence import (
    BookSyntaxError,
    StrictlyCoherent,
    decide_coherent,
    decide_strict,
    default_complex,
    parse_book,
    verdict_to_json,
)
from .complex import LinearizationError, SubdivisionLimitError, linearize
from .config import LimitError
from .formula import FormulaSyntaxError, parse, render
from .geometry.hull import convex_hull
from .geometry.lattice import format_point
from .logic import is_valid, prove, synth_polytope_formula, theory
from .states import ExtensionSession, NotStrictlyCoherent, SessionReplayError, open_session

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Unreadable or malformed input; reported with exit code 2."""


def _dumps(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, data: dict) -> None:
    try:
        Path(path).write_text(_dumps(data), encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _formula(text: str):
    try:
        return parse(text)
    except FormulaSyntaxError as exc:
        raise InputError(f"bad formula {text!r}: {exc}") from None


def _book(path: str):
    try:
        return parse_book(_read(path))
    except BookSyntaxError as exc:
        raise InputError(f"{path}: {exc}") from None


def _complex_stats(cx) -> dict:
    return {"n": cx.n, "vertices": len(cx.vertices), "simplexes": len(cx.simplexes)}


# ----------------------------------------------------------------------
# commands

def cmd_coherence(args) -> tuple[int, dict]:
    book = _book(args.book)
    cx = default_complex(book)
    verdict = decide_strict(book, cx) if args.strict else decide_coherent(book, cx)
    report = {
        "book": [[render(f), str(b)] for f, b in zip(book.formulas, book.odds)],
        "strict_check": args.strict,
        "complex": _complex_stats(cx),
        **verdict_to_json(verdict),
    }
    if args.certificate:
        _write(args.certificate, verdict_to_json(verdict))
    if args.complex:
        _write(args.complex, cx.to_json())
    positive = isinstance(verdict, StrictlyCoherent) if args.strict else verdict.coherent
    return (EXIT_OK if positive else EXIT_NEGATIVE), report


def _load_session(text: str) -> ExtensionSession:
    try:
        return ExtensionSession.from_json(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError, SessionReplayError) as exc:
        raise InputError(f"bad session file: {exc}") from None


def cmd_state(args) -> tuple[int, dict]:
    if args.action == "open":
        book = _book(args.book)
        try:
            session = open_session(book)
        except NotStrictlyCoherent as exc:
            return EXIT_NEGATIVE, {"error": str(exc), **verdict_to_json(exc.verdict)}
        _write(args.session, session.to_json())
        return EXIT_OK, {"session": args.session, "complex": _complex_stats(session.complex)}

    if args.action == "eval":
        f = _formula(args.formula)
        session = _load_session(_read(args.session))
        return EXIT_OK, {"formula": render(f), "value": str(session.eval(f))}

    g = _formula(args.formula)
    try:
        handle = open(args.session, "r+", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open {args.session}: {exc.strerror}") from None
    with handle:
        fcntl.flock(handle, fcntl.LOCK_EX)
        session = _load_session(handle.read())
        value = session.extend(g)
        handle.seek(0)
        handle.truncate()
        handle.write(_dumps(session.to_json()))
    return EXIT_OK, {"formula": render(g), "value": str(value), "history": len(session.history)}


def cmd_prove(args) -> tuple[int, dict]:
    report = prove(_formula(args.phi), _formula(args.psi))
    return (EXIT_NEGATIVE if report["n"] is None else EXIT_OK), report


def cmd_theory(args) -> tuple[int, dict]:
    book = _book(args.book)
    th = theory(book.formulas, book.n)
    point_axiom = synth_polytope_formula(convex_hull([book.odds]))
    report = {
        "book": [[render(f), str(b)] for f, b in zip(book.formulas, book.odds)],
        "pi_beta": render(point_axiom),
        "pi_phi": render(th.axiom),
        "pi_rb": render(th.boundary_axiom),
        "extremals": [format_point(p) for p in th.polytope.extremals],
        "verified": True,
    }
    return EXIT_OK, report


def cmd_triangulate(args) -> tuple[int, dict]:
    formulas = [_formula(t) for t in args.formulas]
    cx = linearize(formulas, args.n)
    if args.out:
        _write(args.out, cx.to_json())
    return EXIT_OK, {"formulas": [render(f) for f in formulas], "stats": _complex_stats(cx),
                     "complex": cx.to_json()}


def cmd_validity(args) -> tuple[int, dict]:
    f = _formula(args.formula)
    valid = is_valid(f, args.n)
    return (EXIT_OK if valid else EXIT_NEGATIVE), {"formula": render(f), "valid": valid}


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="luka", description="Exact coherence, states and provability "
                                     "for Łukasiewicz logic.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coherence", help="decide (strict) coherence of a book")
    p.add_argument("book", help="book file: '<formula> ; <rational>' per line")
    p.add_argument("--strict", action="store_true", help="decide strict coherence")
    p.add_argument("--certificate", metavar="OUT", help="write the verdict JSON here")
    p.add_argument("--complex", metavar="OUT", help="write the complex JSON here")
    p.set_defaults(run=cmd_coherence)

    p = sub.add_parser("state", help="faithful extension sessions")
    ssub = p.add_subparsers(dest="action", required=True)
    q = ssub.add_parser("open", help="start a session from a strictly coherent book")
    q.add_argument("book")
    q.add_argument("session", help="session file to create")
    q = ssub.add_parser("extend", help="assign a value to a new formula")
    q.add_argument("session")
    q.add_argument("formula")
    q = ssub.add_parser("eval", help="evaluate the session state at a formula")
    q.add_argument("session")
    q.add_argument("formula")
    p.set_defaults(run=cmd_state)

    p = sub.add_parser("prove", help="least n with |- phi^n -> psi")
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)
    p.set_defaults(run=cmd_prove)

    p = sub.add_parser("theory", help="axioms of a book's point, risk polytope and its boundary")
    p.add_argument("--book", required=True)
    p.set_defaults(run=cmd_theory)

    p = sub.add_parser("triangulate", help="regular complex linearizing the formulas")
    p.add_argument("formulas", nargs="+")
    p.add_argument("-n", type=int, default=None, help="dimension (default: largest arity)")
    p.add_argument("--out", metavar="OUT", help="write the complex JSON here")
    p.set_defaults(run=cmd_triangulate)

    p = sub.add_parser("validity", help="is the formula identically 1")
    p.add_argument("formula")
    p.add_argument("-n", type=int, default=None, help="dimension (default: arity)")
    p.set_defaults(run=cmd_validity)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        code, report = args.run(args)
    except (InputError, LimitError, LinearizationError, SubdivisionLimitError, ValueError) as exc:
        print(f"luka: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(_dumps({"command": argv, **report}))
    return code


if __name__ == "__main__":
    sys.exit(main())
