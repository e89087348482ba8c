"""Exact two-phase simplex over ``fractions.Fraction`` with Bland's rule.

Problems are in the form: maximize ``c . x`` subject to rows ``a . x (<=|=|>=) b``
and ``x >= 0``.  Instances here are tiny, so a dense tableau is fine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

LE, EQ, GE = "<=", "=", ">="


class LpError(ValueError):
    pass


class Infeasible(LpError):
    pass


class Unbounded(LpError):
    pass


@dataclass
class LpProblem:
    objective: list[Fraction]
    rows: list[list[Fraction]] = field(default_factory=list)
    senses: list[str] = field(default_factory=list)
    rhs: list[Fraction] = field(default_factory=list)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def add(self, coeffs: Sequence, sense: str, b) -> None:
        if sense not in (LE, EQ, GE):
            raise LpError(f"unknown constraint sense {sense!r}")
        if len(coeffs) != self.num_vars:
            raise LpError(f"row has {len(coeffs)} coefficients for {self.num_vars} variables")
        self.rows.append([Fraction(c) for c in coeffs])
        self.senses.append(sense)
        self.rhs.append(Fraction(b))


@dataclass(frozen=True)
class LpSolution:
    x: tuple[Fraction, ...]
    value: Fraction


def _pivot(tab: list[list[Fraction]], obj: list[Fraction], r: int, c: int) -> None:
    row = tab[r]
    piv = row[c]
    if piv != 1:
        row[:] = [v / piv for v in row]
    for other in tab:
        if other is not row and other[c] != 0:
            f = other[c]
            other[:] = [a - f * b for a, b in zip(other, row)]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [a - f * b for a, b in zip(obj, row)]


def _run(tab, obj, basis, allowed: int) -> None:
    """Maximise with ``obj`` holding negated reduced costs; columns >= ``allowed`` never enter."""
    while True:
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return
        best = None
        for i, row in enumerate(tab):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise Unbounded("objective is unbounded")
        i = best[1]
        _pivot(tab, obj, i, enter)
        basis[i] = enter


def solve_lp_exact(p: LpProblem) -> LpSolution:
    n = p.num_vars
    # normalise to nonnegative right-hand sides
    rows, senses, rhs = [], [], []
    for a, s, b in zip(p.rows, p.senses, p.rhs):
        if b < 0:
            a = [-v for v in a]
            b = -b
            s = {LE: GE, GE: LE, EQ: EQ}[s]
        rows.append(a)
        senses.append(s)
        rhs.append(b)

    n_slack = sum(1 for s in senses if s != EQ)
    n_art = sum(1 for s in senses if s != LE)
    width = n + n_slack + n_art
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    si, ai = n, n + n_slack
    art_cols = []
    for a, s, b in zip(rows, senses, rhs):
        row = list(a) + [Fraction(0)] * (n_slack + n_art) + [b]
        if s == LE:
            row[si] = Fraction(1)
            basis.append(si)
            si += 1
        else:
            if s == GE:
                row[si] = Fraction(-1)
                si += 1
            row[ai] = Fraction(1)
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        tab.append(row)

    # phase 1: maximise -(sum of artificials)
    if art_cols:
        obj = [Fraction(0)] * (width + 1)
        for c in art_cols:
            obj[c] = Fraction(1)
        for i, bcol in enumerate(basis):
            if bcol in art_cols:
                obj = [o - v for o, v in zip(obj, tab[i])]
        _run(tab, obj, basis, width)
        if obj[-1] != 0:
            raise Infeasible("constraints are infeasible")
        # drive artificials out of the basis, dropping redundant rows
        first_art = n + n_slack
        i = 0
        while i < len(tab):
            if basis[i] >= first_art:
                c = next((j for j in range(first_art) if tab[i][j] != 0), None)
                if c is None:
                    del tab[i], basis[i]
                    continue
                _pivot(tab, obj, i, c)
                basis[i] = c
            i += 1
        tab = [row[:first_art] + [row[-1]] for row in tab]
        width = first_art

    obj = [-Fraction(c) for c in p.objective] + [Fraction(0)] * (width - n + 1)
    for i, bcol in enumerate(basis):
        if obj[bcol] != 0:
            f = obj[bcol]
            obj = [o - f * v for o, v in zip(obj, tab[i])]
    _run(tab, obj, basis, width)
    x = [Fraction(0)] * n
    for i, bcol in enumerate(basis):
        if bcol < n:
            x[bcol] = tab[i][-1]
    value = sum((Fraction(c) * v for c, v in zip(p.objective, x)), Fraction(0))
    assert value == obj[-1]
    return LpSolution(tuple(x), value)
