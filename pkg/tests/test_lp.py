from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from secure121.lp import EQ, GE, LE, Infeasible, LpError, LpProblem, Unbounded, solve_lp_exact


def vertex_oracle(c, rows, rhs):
    """max c.x over {a.x <= b, x >= 0} in two variables, by checking every vertex."""
    lines = [(list(a), b) for a, b in zip(rows, rhs)] + [([-1, 0], 0), ([0, -1], 0)]
    best = None
    for (a1, b1), (a2, b2) in combinations(lines, 2):
        det = a1[0] * a2[1] - a1[1] * a2[0]
        if det == 0:
            continue
        x = Fraction(b1 * a2[1] - b2 * a1[1], det)
        y = Fraction(a1[0] * b2 - a2[0] * b1, det)
        if all(a[0] * x + a[1] * y <= b for a, b in lines):
            v = c[0] * x + c[1] * y
            best = v if best is None else max(best, v)
    return best


def test_random_2d_against_vertices():
    rng = np.random.default_rng(0)
    for _ in range(300):
        c = [Fraction(int(v)) for v in rng.integers(-5, 6, size=2)]
        m = int(rng.integers(1, 5))
        rows = [[Fraction(int(v)) for v in rng.integers(-3, 6, size=2)] for _ in range(m)]
        rhs = [Fraction(int(v)) for v in rng.integers(-2, 10, size=m)]
        # bounding box keeps it bounded
        rows += [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        rhs += [Fraction(7), Fraction(7)]
        p = LpProblem(list(c))
        for a, b in zip(rows, rhs):
            p.add(a, LE, b)
        expect = vertex_oracle(c, rows, rhs)
        if expect is None:
            with pytest.raises(Infeasible):
                solve_lp_exact(p)
            continue
        sol = solve_lp_exact(p)
        assert sol.value == expect
        assert sum(ci * xi for ci, xi in zip(c, sol.x)) == sol.value
        for a, b in zip(rows, rhs):
            assert sum(ai * xi for ai, xi in zip(a, sol.x)) <= b


def test_equality_and_ge():
    # max x + 2y  s.t.  x + y = 1,  y >= 1/3,  y <= 1/2
    p = LpProblem([1, 2])
    p.add([1, 1], EQ, 1)
    p.add([0, 1], GE, Fraction(1, 3))
    p.add([0, 1], LE, Fraction(1, 2))
    sol = solve_lp_exact(p)
    assert sol.value == Fraction(3, 2)
    assert sol.x == (Fraction(1, 2), Fraction(1, 2))


def test_redundant_equalities():
    p = LpProblem([1, 1])
    p.add([1, 1], EQ, 2)
    p.add([2, 2], EQ, 4)
    assert solve_lp_exact(p).value == 2


def test_unbounded_and_infeasible():
    p = LpProblem([1, 0])
    p.add([0, 1], LE, 1)
    with pytest.raises(Unbounded):
        solve_lp_exact(p)
    q = LpProblem([1])
    q.add([1], GE, 2)
    q.add([1], LE, 1)
    with pytest.raises(Infeasible):
        solve_lp_exact(q)


def test_bad_rows():
    p = LpProblem([1, 1])
    with pytest.raises(LpError):
        p.add([1], LE, 1)
    with pytest.raises(LpError):
        p.add([1, 1], "<", 1)
