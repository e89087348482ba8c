"""Secure capacity of single-beam diamond networks with per-path capacities.

With time fractions ``f`` on the N relay paths the secure rate is

    sum_i f_i C_i  -  (sum of the K largest loads f_i C_i)

and the capacity is its maximum over the probability simplex.  It is solved
exactly as the epigraph LP  max sum f_i C_i - t  s.t.  t >= sum_{i in S} f_i C_i
for every K-subset S,  sum f_i = 1,  f, t >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .coding import DEFAULT_PACKET_LEN, CodingScheme, Mode, linear_scheme
from .field import GF
from .lp import EQ, GE, LE, LpProblem, solve_lp_exact
from .netmodel import diamond_network

MAX_LP_SUBSETS = 10**5

__all__ = [
    "Allocation",
    "LpProblem",
    "diamond_capacity",
    "diamond_lp",
    "diamond_schedule",
    "equal_split_rate",
    "equalization_heuristic",
    "grid_optimum",
    "secure_rate",
    "solve_lp_exact",
]


class DiamondError(ValueError):
    pass


class KTooLarge(DiamondError):
    pass


class Blowup(DiamondError):
    pass


class SecrecyFailure(AssertionError):
    pass


def _caps(caps: Sequence) -> list[Fraction]:
    out = [Fraction(c) for c in caps]
    if not out:
        raise DiamondError("need at least one path")
    if any(c < 0 for c in out):
        raise DiamondError("capacities must be nonnegative")
    return out


def secure_rate(caps: Sequence, fractions: Sequence, k: int) -> Fraction:
    """Objective value: total load minus the K heaviest loads."""
    loads = sorted((Fraction(c) * Fraction(f) for c, f in zip(caps, fractions)), reverse=True)
    return sum(loads[k:], Fraction(0))


@dataclass(frozen=True)
class Allocation:
    caps: tuple[Fraction, ...]
    wiretap: int
    fractions: tuple[Fraction, ...]
    value: Fraction

    def __post_init__(self):
        if any(f < 0 for f in self.fractions) or sum(self.fractions) != 1:
            raise DiamondError(f"fractions {self.fractions} are not a distribution")
        if secure_rate(self.caps, self.fractions, self.wiretap) != self.value:
            raise DiamondError("allocation value does not match its fractions")

    @classmethod
    def of(cls, caps, k: int, fractions) -> "Allocation":
        caps = tuple(Fraction(c) for c in caps)
        fractions = tuple(Fraction(f) for f in fractions)
        return cls(caps, k, fractions, secure_rate(caps, fractions, k))


def diamond_lp(caps: Sequence, k: int) -> LpProblem:
    """Variables are ``f_0 .. f_{N-1}, t``."""
    caps = _caps(caps)
    n = len(caps)
    p = LpProblem(objective=caps + [Fraction(-1)])
    for s in combinations(range(n), k):
        row = [caps[i] if i in s else Fraction(0) for i in range(n)] + [Fraction(-1)]
        p.add(row, LE, 0)
    p.add([1] * n + [0], EQ, 1)
    return p


def _check_k(n: int, k: int):
    if k < 0:
        raise DiamondError("K must be >= 0")
    if k > n:
        raise KTooLarge(f"K = {k} > N = {n}")
    if math.comb(n, k) > MAX_LP_SUBSETS:
        raise Blowup(f"C({n}, {k}) = {math.comb(n, k)} subset constraints")


def diamond_capacity(caps: Sequence, k: int, tie_break: bool = True) -> Allocation:
    """Optimal allocation for the diamond capacity program.

    Among optimal allocations the one with lexicographically largest fractions
    on the highest-capacity paths is returned (paths ordered by capacity,
    descending, then by index).  Pass ``tie_break=False`` to take whatever
    vertex the simplex lands on.
    """
    caps = _caps(caps)
    n = len(caps)
    _check_k(n, k)
    p = diamond_lp(caps, k)
    sol = solve_lp_exact(p)
    f = list(sol.x[:n])
    if tie_break:
        best = sol.value
        fixed: list[tuple[int, Fraction]] = []
        for i in sorted(range(n), key=lambda i: (-caps[i], i)):
            q = diamond_lp(caps, k)
            q.objective = [Fraction(int(j == i)) for j in range(n + 1)]
            q.add(caps + [Fraction(-1)], GE, best)
            for j, v in fixed:
                q.add([int(c == j) for c in range(n + 1)], EQ, v)
            fi = solve_lp_exact(q).value
            fixed.append((i, fi))
        f = [dict(fixed)[i] for i in range(n)]
    alloc = Allocation.of(caps, k, f)
    if alloc.value != sol.value:
        raise AssertionError(f"tie-break changed the optimum: {alloc.value} != {sol.value}")
    return alloc


def equal_split_rate(caps: Sequence, k: int) -> Fraction:
    caps = _caps(caps)
    n = len(caps)
    return secure_rate(caps, [Fraction(1, n)] * n, k)


def equalization_heuristic(caps: Sequence, k: int) -> Allocation:
    """Best "equal load on the m strongest paths" allocation over all m > K.

    On a prefix of size m the common load is g = 1 / sum(1/C_i) and the rate
    is (m - K) g.
    """
    caps = _caps(caps)
    n = len(caps)
    if not 0 <= k < n:
        raise DiamondError(f"need 0 <= K < N, got K={k}, N={n}")
    order = [i for i in sorted(range(n), key=lambda i: (-caps[i], i)) if caps[i] > 0]
    best = None
    inv_sum = Fraction(0)
    for m, i in enumerate(order, start=1):
        inv_sum += 1 / caps[i]
        if m <= k:
            continue
        g = 1 / inv_sum
        rate = (m - k) * g
        if best is None or rate > best[0]:
            best = (rate, m, g)
    f = [Fraction(0)] * n
    if best is None:
        f[order[0] if order else 0] = Fraction(1)
    else:
        _, m, g = best
        for i in order[:m]:
            f[i] = g / caps[i]
    return Allocation.of(caps, k, f)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def grid_optimum(caps: Sequence, k: int, denominator: int = 64) -> tuple[Fraction, Fraction]:
    """Brute-force the objective over all ``f`` with the given denominator.

    Returns ``(best grid value, Lipschitz gap bound)``: the true optimum lies
    within the gap of the grid value, since rounding the optimal ``f`` onto
    the grid moves it by at most N/denominator in L1 and the objective is
    max(C)-Lipschitz in that norm.
    """
    caps = _caps(caps)
    n = len(caps)
    best = None
    for comp in _compositions(denominator, n):
        v = secure_rate(caps, [Fraction(c, denominator) for c in comp], k)
        if best is None or v > best:
            best = v
    return best, max(caps) * Fraction(n, denominator)


def diamond_schedule(
    caps: Sequence,
    k: int,
    alloc: Allocation,
    field: GF | None = None,
    packet_len: int = DEFAULT_PACKET_LEN,
    verify: bool = True,
) -> CodingScheme:
    """Time-share the relay paths according to ``alloc`` and wrap an MDS key scheme around it.

    The period n is the least integer making every n f_i and n f_i C_i
    integral.  Path i gets n f_i consecutive slots carrying n f_i C_i packets,
    spread so that after r of its slots it has sent floor(r C_i); with C_i < 1
    some of those slots hold the link without a packet.  The number
    of keys equals the K largest path loads, so any K edges see at most as
    many packets as there are keys.
    """
    caps = _caps(caps)
    n_paths = len(caps)
    if tuple(caps) != alloc.caps or k != alloc.wiretap:
        raise DiamondError("allocation was computed for different capacities or K")
    period = 1
    for f, c in zip(alloc.fractions, caps):
        period = math.lcm(period, f.denominator, (f * c).denominator)
    net = diamond_network(caps, beams=1)
    paths = [(2 * i, 2 * i + 1) for i in range(n_paths)]
    slot_map: list[list[tuple[int, int]]] = []
    active: list[set[int]] = []
    loads = []
    j = 0
    for i, (f, c) in enumerate(zip(alloc.fractions, caps)):
        slots = int(period * f)
        loads.append(int(period * f * c))
        for r in range(slots):
            count = math.floor((r + 1) * c) - math.floor(r * c)
            slot_map.append([(i, j + x) for x in range(count)])
            active.append({i})
            j += count
    num_keys = sum(sorted(loads, reverse=True)[:k])
    info = {"loads": loads, "slots_per_path": [int(period * f) for f in alloc.fractions]}
    scheme = linear_scheme(net, paths, slot_map, num_keys, k, field, packet_len, Mode.DIAMOND, info, active)
    if scheme.rate != alloc.value:
        raise SecrecyFailure(f"realised rate {scheme.rate} != allocation value {alloc.value}")
    if verify:
        from .adversary import verify_all_subsets

        verdict = verify_all_subsets(scheme, k)
        if not verdict.secure:
            raise SecrecyFailure(f"diamond schedule leaks on {verdict.witness}")
    return scheme

