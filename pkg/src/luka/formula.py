"""Łukasiewicz formulas: AST, parser, printer and exact evaluation.

Concrete syntax (ASCII, one token per connective)::

    ~   negation          *   strong conjunction (⊙)
    +   strong disjunction (⊕)
    &   min (∧)           |   max (∨)
    ->  implication (right associative)
    0, 1, x1, x2, ...

Precedence, tightest first: ``~ * + & | ->``.  ``#`` starts a comment that
runs to the end of the line.

Nodes are hash-consed: two structurally equal formulas are the same object,
so ``==`` is identity and hashing is O(1) even for large shared DAGs.
"""
from __future__ import annotations

import re
import threading
import weakref
from fractions import Fraction
from typing import Container, Iterable, Sequence

__all__ = [
    "Formula", "Var", "Const0", "Const1", "Neg", "Oplus", "Odot", "Implies",
    "Meet", "Join", "ZERO", "ONE", "FormulaSyntaxError", "parse", "render",
    "evaluate", "power", "postorder", "big_oplus", "big_join", "big_meet",
]


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text; ``pos`` is a 0-based offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_intern_lock = threading.Lock()
_intern: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()


class Formula:
    __slots__ = ("children", "arity", "size", "__weakref__")

    # set on subclasses
    symbol: str = ""

    def __new__(cls, *args):
        key = (cls,) + args
        with _intern_lock:
            node = _intern.get(key)
            if node is None:
                node = object.__new__(cls)
                node._setup(*args)
                _intern[key] = node
        return node

    def _setup(self, *children: "Formula") -> None:
        for c in children:
            if not isinstance(c, Formula):
                raise TypeError(f"expected Formula, got {type(c).__name__}")
        self.children = children
        self.arity = max((c.arity for c in children), default=0)
        self.size = 1 + sum(c.size for c in children)

    def __reduce__(self):
        return (type(self), self._args())

    def _args(self) -> tuple:
        return self.children

    def __repr__(self) -> str:
        return f"{type(self).__name__}({', '.join(map(repr, self._args()))})"

    def __str__(self) -> str:
        return render(self)

    def __call__(self, *point) -> Fraction:
        return evaluate(self, point)


class Var(Formula):
    __slots__ = ("index",)

    def __new__(cls, index: int):
        if isinstance(index, bool) or not isinstance(index, int) or index < 1:
            raise ValueError(f"variable index must be a positive integer, got {index!r}")
        return super().__new__(cls, index)

    def _setup(self, index: int) -> None:
        self.index = index
        self.children = ()
        self.arity = index
        self.size = 1

    def _args(self) -> tuple:
        return (self.index,)


class Const0(Formula):
    __slots__ = ()
    symbol = "0"


class Const1(Formula):
    __slots__ = ()
    symbol = "1"


class Neg(Formula):
    __slots__ = ()
    symbol = "~"

    def __new__(cls, child: Formula):
        return super().__new__(cls, child)


class _Binary(Formula):
    __slots__ = ()
    precedence = 0

    def __new__(cls, left: Formula, right: Formula):
        return super().__new__(cls, left, right)

    @property
    def left(self) -> Formula:
        return self.children[0]

    @property
    def right(self) -> Formula:
        return self.children[1]


class Odot(_Binary):
    __slots__ = ()
    symbol, precedence = "*", 5


class Oplus(_Binary):
    __slots__ = ()
    symbol, precedence = "+", 4


class Meet(_Binary):
    __slots__ = ()
    symbol, precedence = "&", 3


class Join(_Binary):
    __slots__ = ()
    symbol, precedence = "|", 2


class Implies(_Binary):
    __slots__ = ()
    symbol, precedence = "->", 1


Neg.child = property(lambda self: self.children[0])

ZERO = Const0()
ONE = Const1()

_BINARY = {cls.symbol: cls for cls in (Odot, Oplus, Meet, Join, Implies)}


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s+|#[^\n]*|->|[~*+&|()01]|x(\d+)|.", re.S)


def _tokenize(text: str) -> list[tuple[str, int, int | None]]:
    tokens = []
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if tok.isspace() or tok.startswith("#"):
            continue
        if m.group(1) is not None:
            index = int(m.group(1))
            if index == 0:
                raise FormulaSyntaxError("variable index 0 is not allowed", m.start())
            tokens.append(("var", m.start(), index))
        elif tok in _BINARY or tok in "~()01":
            tokens.append((tok, m.start(), None))
        else:
            raise FormulaSyntaxError(f"unexpected character {tok!r}", m.start())
    tokens.append(("eof", len(text), None))
    return tokens


class _Parser:
    # one method per grammar level; binary levels other than '->' are left associative
    _LEVELS = ("|", "&", "+", "*")

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> None:
        tok, pos, _ = self.take()
        if tok != kind:
            what = "end of input" if tok == "eof" else repr(tok)
            raise FormulaSyntaxError(f"expected {kind!r}, found {what}", pos)

    def formula(self) -> Formula:
        left = self.level(0)
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def level(self, depth: int) -> Formula:
        if depth == len(self._LEVELS):
            return self.unary()
        symbol = self._LEVELS[depth]
        node = self.level(depth + 1)
        while self.peek() == symbol:
            self.take()
            node = _BINARY[symbol](node, self.level(depth + 1))
        return node

    def unary(self) -> Formula:
        tok, pos, value = self.take()
        if tok == "~":
            return Neg(self.unary())
        if tok == "var":
            return Var(value)
        if tok == "0":
            return ZERO
        if tok == "1":
            return ONE
        if tok == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        what = "end of input" if tok == "eof" else repr(tok)
        raise FormulaSyntaxError(f"unexpected {what}", pos)


def parse(text: str) -> Formula:
    """Parse ``text`` into a :class:`Formula`."""
    p = _Parser(text)
    f = p.formula()
    tok, pos, _ = p.take()
    if tok != "eof":
        raise FormulaSyntaxError(f"unexpected {tok!r} after formula", pos)
    return f


# --------------------------------------------------------------------------
# printing

def _render(f: Formula, out: list[str]) -> int:
    """Append the text of ``f`` to ``out``; return its precedence (atoms: 9)."""
    if isinstance(f, Var):
        out.append(f"x{f.index}")
        return 9
    if isinstance(f, (Const0, Const1)):
        out.append(f.symbol)
        return 9
    if isinstance(f, Neg):
        out.append("~")
        _wrapped(f.children[0], 6, out)
        return 6
    prec = f.precedence
    left, right = f.children
    if isinstance(f, Implies):
        _wrapped(left, prec + 1, out)
        out.append(" -> ")
        _wrapped(right, prec, out)
    else:
        _wrapped(left, prec, out)
        out.append(f" {f.symbol} ")
        _wrapped(right, prec + 1, out)
    return prec


def _wrapped(f: Formula, need: int, out: list[str]) -> None:
    buf: list[str] = []
    if _render(f, buf) < need:
        out.append("(")
        out.extend(buf)
        out.append(")")
    else:
        out.extend(buf)


def render(f: Formula) -> str:
    """Precedence-minimal text for ``f``; ``parse(render(f)) is f``."""
    out: list[str] = []
    _render(f, out)
    return "".join(out)


# --------------------------------------------------------------------------
# evaluation

def postorder(roots: Iterable[Formula], leaves: Container = frozenset()) -> list[Formula]:
    """Distinct subformulas of ``roots``, children before parents.

    Nodes in ``leaves`` are listed but not descended into.
    """
    seen: set[int] = set()
    order: list[Formula] = []
    for root in roots:
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in seen:
                continue
            if expanded:
                seen.add(id(node))
                order.append(node)
            else:
                stack.append((node, True))
                if node in leaves:
                    continue
                for child in reversed(node.children):
                    if id(child) not in seen:
                        stack.append((child, False))
    return order


def apply_connective(node: Formula, args: Sequence, one):
    """Truth function of ``node`` on child values ``args``.

    ``one`` is the top element: ``1`` for values in [0,1], or the common
    denominator when values are given in homogeneous (scaled integer) form.
    """
    t = type(node)
    if t is Oplus:
        return min(one, args[0] + args[1])
    if t is Odot:
        return max(0, args[0] + args[1] - one)
    if t is Neg:
        return one - args[0]
    if t is Implies:
        return min(one, one - args[0] + args[1])
    if t is Meet:
        return min(args[0], args[1])
    if t is Join:
        return max(args[0], args[1])
    if t is Const0:
        return 0
    if t is Const1:
        return one
    raise TypeError(f"not a connective: {node!r}")


def evaluate(f: Formula, point: Sequence) -> Fraction:
    """Exact value of the McNaughton function of ``f`` at ``point``."""
    x = [Fraction(c) for c in point]
    if len(x) < f.arity:
        raise ValueError(f"point has dimension {len(x)}, formula needs {f.arity}")
    for c in x:
        if not 0 <= c <= 1:
            raise ValueError(f"coordinate {c} outside [0,1]")
    values: dict[int, Fraction] = {}
    for node in postorder([f]):
        if isinstance(node, Var):
            values[id(node)] = x[node.index - 1]
        else:
            args = [values[id(c)] for c in node.children]
            values[id(node)] = Fraction(apply_connective(node, args, 1))
    return values[id(f)]


def power(f: Formula, n: int) -> Formula:
    """The ``n``-fold strong conjunction ``f * f * ... * f``."""
    if n < 1:
        raise ValueError("power exponent must be >= 1")
    result = f
    for _ in range(n - 1):
        result = Odot(result, f)
    return result


def _balanced(cls, items: Sequence[Formula], empty: Formula) -> Formula:
    items = list(items)
    if not items:
        return empty
    while len(items) > 1:
        paired = [cls(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            paired.append(items[-1])
        items = paired
    return items[0]


def big_oplus(items: Sequence[Formula]) -> Formula:
    return _balanced(Oplus, items, ZERO)


def big_join(items: Sequence[Formula]) -> Formula:
    return _balanced(Join, items, ZERO)


def big_meet(items: Sequence[Formula]) -> Formula:
    return _balanced(Meet, items, ONE)
