"""Exact rational linear programming: two-phase primal simplex, Bland's rule.

Problems have the form::

    minimize / maximize   c . x
    subject to            A[i] . x  (<= | = | >=)  b[i]
                          x[j] >= 0    unless j is declared free

Every outcome carries a certificate that :func:`check_outcome` validates
from the problem data alone.

Dual sign conventions (``y`` indexed by rows):

* minimize: ``y[i] <= 0`` on ``<=`` rows, ``y[i] >= 0`` on ``>=`` rows,
  ``y . A[:, j] <= c[j]`` (``==`` for free ``j``), ``b . y == optimum``.
* maximize: the mirror image (``y >= 0`` on ``<=`` rows, ``y . A[:, j] >= c[j]``).

A Farkas certificate ``y`` of infeasibility has ``y[i] >= 0`` on ``<=`` rows,
``y[i] <= 0`` on ``>=`` rows, ``y . A[:, j] >= 0`` (``== 0`` for free ``j``)
and ``y . b < 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

__all__ = [
    "LinearProgram", "Optimal", "Infeasible", "Unbounded", "LpOutcome",
    "lp_solve", "check_outcome",
]

SENSES = ("<=", "=", ">=")


def _fr(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class LinearProgram:
    objective: tuple
    matrix: tuple
    senses: tuple
    rhs: tuple
    maximize: bool = False
    free: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "objective", _fr(self.objective))
        object.__setattr__(self, "matrix", tuple(_fr(r) for r in self.matrix))
        object.__setattr__(self, "senses", tuple(self.senses))
        object.__setattr__(self, "rhs", _fr(self.rhs))
        object.__setattr__(self, "free", frozenset(self.free))
        n = len(self.objective)
        if any(len(r) != n for r in self.matrix):
            raise ValueError("constraint rows must have one entry per variable")
        if not len(self.matrix) == len(self.senses) == len(self.rhs):
            raise ValueError("matrix, senses and rhs must have the same length")
        if any(s not in SENSES for s in self.senses):
            raise ValueError(f"senses must be among {SENSES}")
        if any(not 0 <= j < n for j in self.free):
            raise ValueError("free variable index out of range")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @classmethod
    def feasibility(cls, matrix, senses, rhs, free=()) -> "LinearProgram":
        n = len(matrix[0]) if matrix else 0
        return cls((0,) * n, matrix, senses, rhs, free=frozenset(free))


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    x: tuple
    y: tuple


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple


@dataclass(frozen=True)
class Unbounded:
    x: tuple
    ray: tuple


LpOutcome = Union[Optimal, Infeasible, Unbounded]


class _Tableau:
    """Dense tableau; row ``m`` is the reduced-cost row of the active objective."""

    def __init__(self, rows, rhs, basis):
        self.rows = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.basis = list(basis)
        self.cost: list[Fraction] = []

    def set_objective(self, c: Sequence[Fraction]) -> None:
        width = len(self.rows[0])
        cost = list(c) + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = c[b]
            if cb:
                row = self.rows[i]
                cost = [cj - cb * rj for cj, rj in zip(cost, row)]
        assert len(cost) == width
        self.cost = cost

    def pivot(self, r: int, j: int) -> None:
        prow = self.rows[r]
        piv = prow[j]
        if piv != 1:
            prow = [v / piv for v in prow]
            self.rows[r] = prow
        nz = [(k, v) for k, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[j]
                if f:
                    for k, v in nz:
                        row[k] -= f * v
        f = self.cost[j]
        if f:
            for k, v in nz:
                self.cost[k] -= f * v
        self.basis[r] = j

    def run(self, allowed: int):
        """Bland's rule on columns ``< allowed``.  Returns None or an unbounded column."""
        while True:
            j = next((k for k in range(allowed) if self.cost[k] < 0), None)
            if j is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row[j]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return j
            self.pivot(best[1], j)


def lp_solve(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly.  Deterministic; Bland's rule prevents cycling."""
    m, n = len(lp.matrix), lp.num_vars
    # structural columns: x_j (and -x_j for free j)
    colmap: list[tuple[int, int]] = []
    for j in range(n):
        colmap.append((j, 1))
        if j in lp.free:
            colmap.append((j, -1))
    nstruct = len(colmap)
    slack_rows = [i for i, s in enumerate(lp.senses) if s != "="]
    nslack = len(slack_rows)
    ncols = nstruct + nslack + m  # artificials last
    signs = [(-1 if b < 0 else 1) for b in lp.rhs]
    rows = []
    for i in range(m):
        row = [Fraction(0)] * ncols
        for k, (j, sgn) in enumerate(colmap):
            row[k] = sgn * signs[i] * lp.matrix[i][j]
        if lp.senses[i] != "=":
            s = slack_rows.index(i)
            row[nstruct + s] = Fraction(signs[i] * (1 if lp.senses[i] == "<=" else -1))
        row[nstruct + nslack + i] = Fraction(1)
        rows.append(row)
    rhs = [signs[i] * lp.rhs[i] for i in range(m)]
    art0 = nstruct + nslack
    tab = _Tableau(rows, rhs, [art0 + i for i in range(m)])

    # phase 1
    tab.set_objective([Fraction(0)] * art0 + [Fraction(1)] * m)
    tab.run(ncols)
    if -tab.cost[-1] > 0:
        y1 = [1 - tab.cost[art0 + i] for i in range(m)]
        return Infeasible(tuple(-y1[i] * signs[i] for i in range(m)))
    for i in range(m):
        if tab.basis[i] >= art0:
            j = next((k for k in range(art0) if tab.rows[i][k] != 0), None)
            if j is not None:
                tab.pivot(i, j)

    # phase 2 (internally a minimization)
    sense = -1 if lp.maximize else 1
    c2 = [sense * lp.objective[j] * sgn for j, sgn in colmap] + [Fraction(0)] * (nslack + m)
    tab.set_objective(c2)
    unbounded_col = tab.run(art0)

    values = [Fraction(0)] * ncols
    for i, b in enumerate(tab.basis):
        values[b] = tab.rows[i][-1]
    x = [Fraction(0)] * n
    for k, (j, sgn) in enumerate(colmap):
        x[j] += sgn * values[k]
    if unbounded_col is not None:
        d = [Fraction(0)] * ncols
        d[unbounded_col] = Fraction(1)
        for i, b in enumerate(tab.basis):
            d[b] = -tab.rows[i][unbounded_col]
        ray = [Fraction(0)] * n
        for k, (j, sgn) in enumerate(colmap):
            ray[j] += sgn * d[k]
        return Unbounded(tuple(x), tuple(ray))
    y = tuple(sense * -tab.cost[art0 + i] * signs[i] for i in range(m))
    value = sum((c * v for c, v in zip(lp.objective, x)), Fraction(0))
    return Optimal(value, tuple(x), y)


# --------------------------------------------------------------------------
# certificate validation, independent of the solver internals

def _row_dot(row, x):
    return sum((a * v for a, v in zip(row, x)), Fraction(0))


def _feasible(lp: LinearProgram, x) -> bool:
    if len(x) != lp.num_vars:
        return False
    if any(x[j] < 0 for j in range(lp.num_vars) if j not in lp.free):
        return False
    for row, s, b in zip(lp.matrix, lp.senses, lp.rhs):
        v = _row_dot(row, x)
        if (s == "<=" and v > b) or (s == ">=" and v < b) or (s == "=" and v != b):
            return False
    return True


def _column_products(lp: LinearProgram, y):
    return [sum((y[i] * lp.matrix[i][j] for i in range(len(y))), Fraction(0))
            for j in range(lp.num_vars)]


def check_outcome(lp: LinearProgram, outcome: LpOutcome) -> bool:
    """Validate an outcome's certificate exactly against ``lp``."""
    m = len(lp.matrix)
    if isinstance(outcome, Optimal):
        y = outcome.y
        if len(y) != m or not _feasible(lp, outcome.x):
            return False
        sgn = 1 if lp.maximize else -1  # sign y must have on '<=' rows
        for yi, s in zip(y, lp.senses):
            if (s == "<=" and sgn * yi < 0) or (s == ">=" and sgn * yi > 0):
                return False
        for j, v in enumerate(_column_products(lp, y)):
            c = lp.objective[j]
            if j in lp.free:
                if v != c:
                    return False
            elif (lp.maximize and v < c) or (not lp.maximize and v > c):
                return False
        primal = _row_dot(lp.objective, outcome.x)
        return primal == outcome.value == _row_dot(lp.rhs, y)
    if isinstance(outcome, Infeasible):
        y = outcome.farkas
        if len(y) != m:
            return False
        for yi, s in zip(y, lp.senses):
            if (s == "<=" and yi < 0) or (s == ">=" and yi > 0):
                return False
        for j, v in enumerate(_column_products(lp, y)):
            if (j in lp.free and v != 0) or v < 0:
                return False
        return _row_dot(lp.rhs, y) < 0
    if isinstance(outcome, Unbounded):
        d = outcome.ray
        if not _feasible(lp, outcome.x) or len(d) != lp.num_vars:
            return False
        if any(d[j] < 0 for j in range(lp.num_vars) if j not in lp.free):
            return False
        for row, s in zip(lp.matrix, lp.senses):
            v = _row_dot(row, d)
            if (s == "<=" and v > 0) or (s == ">=" and v < 0) or (s == "=" and v != 0):
                return False
        gain = _row_dot(lp.objective, d)
        return gain > 0 if lp.maximize else gain < 0
    return False
