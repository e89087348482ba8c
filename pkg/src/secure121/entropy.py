"""Shannon entropies of small explicit joint pmfs, and a brute-force checker for
the subset-entropy inequality

    for every m there is S with |S| = m and  H(X_{S^c} | X_S) <= (L - m)/L * H(X_[L]).

Variables are indexed from 0.  Entropies are in bits, computed in double
precision even when the table is rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

MAX_STATES = 10**6
LEMMA_TOL = 1e-9


class EntropyError(ValueError):
    pass


class TooLarge(EntropyError):
    pass


class LemmaViolation(AssertionError):
    """No subset satisfies the inequality: this is an implementation bug, not bad input."""


@dataclass(frozen=True, eq=False)
class JointPmf:
    probs: np.ndarray  # one axis per variable
    exact: tuple[Fraction, ...] | None = None  # flattened rational table, when known

    def __post_init__(self):
        if np.any(self.probs < 0):
            raise EntropyError("negative probability")
        if self.exact is not None:
            if sum(self.exact) != 1:
                raise EntropyError("rational table does not sum to 1")
        elif abs(float(self.probs.sum()) - 1.0) > 1e-12:
            raise EntropyError("probabilities do not sum to 1")

    @classmethod
    def from_fractions(cls, table) -> "JointPmf":
        arr = np.array(table, dtype=object)
        flat = tuple(Fraction(x) for x in arr.ravel())
        probs = np.array([float(x) for x in flat]).reshape(arr.shape)
        return cls(probs, flat)

    @classmethod
    def from_weights(cls, weights) -> "JointPmf":
        """Normalise nonnegative integer weights into an exact rational pmf."""
        w = np.asarray(weights)
        total = int(w.sum())
        if total <= 0:
            raise EntropyError("weights must have a positive sum")
        flat = tuple(Fraction(int(x), total) for x in w.ravel())
        return cls(np.array([float(x) for x in flat]).reshape(w.shape), flat)

    @property
    def num_vars(self) -> int:
        return self.probs.ndim

    @property
    def alphabet_sizes(self) -> tuple[int, ...]:
        return self.probs.shape

    def marginal(self, variables: Iterable[int]) -> np.ndarray:
        keep = set(variables)
        for v in keep:
            if not 0 <= v < self.num_vars:
                raise EntropyError(f"variable {v} out of range")
        drop = tuple(v for v in range(self.num_vars) if v not in keep)
        return self.probs.sum(axis=drop) if drop else self.probs


def _h(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def joint_entropy(p: JointPmf, variables: Iterable[int]) -> float:
    variables = set(variables)
    if not variables:
        return 0.0
    return _h(p.marginal(variables))


def conditional_entropy(p: JointPmf, a: Iterable[int], given: Iterable[int]) -> float:
    a, b = set(a), set(given)
    if a & b:
        raise EntropyError(f"overlapping variable sets {sorted(a & b)}")
    return joint_entropy(p, a | b) - joint_entropy(p, b)


def conditional_entropy_direct(p: JointPmf, a: Iterable[int], given: Iterable[int]) -> float:
    """H(A | B) as the average over b of H(A | B = b); independent of the chain rule."""
    a, b = sorted(set(a)), sorted(set(given))
    if set(a) & set(b):
        raise EntropyError("overlapping variable sets")
    if not a:
        return 0.0
    ab = p.marginal(a + b)
    # axes of the marginal follow increasing variable order
    order = sorted(a + b)
    ab = np.moveaxis(ab, [order.index(v) for v in b], list(range(len(b))))
    ab = ab.reshape(int(np.prod([p.alphabet_sizes[v] for v in b], dtype=int)) if b else 1, -1)
    total = 0.0
    for row in ab:
        pb = row.sum()
        if pb > 0:
            total += pb * _h(row / pb)
    return total


def colex_subsets(n: int, m: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(n), m), key=lambda c: c[::-1])


def verify_subset_lemma(p: JointPmf, m: int) -> tuple[tuple[int, ...], float]:
    """First subset S (colex order) of size m meeting the inequality, with its slack.

    The slack is ``(L - m)/L * H(all) - H(S^c | S)``; it is >= -1e-9 for the
    returned witness.
    """
    n = p.num_vars
    if not 0 <= m <= n:
        raise EntropyError(f"need 0 <= m <= L = {n}, got {m}")
    if p.probs.size > MAX_STATES:
        raise TooLarge(f"{p.probs.size} states > {MAX_STATES}")
    everything = set(range(n))
    h_all = joint_entropy(p, everything)
    bound = (n - m) / n * h_all
    for s in colex_subsets(n, m):
        rest = everything - set(s)
        margin = bound - conditional_entropy(p, rest, s)
        if margin >= -LEMMA_TOL:
            return s, margin
    raise LemmaViolation(f"no subset of size {m} satisfies the inequality")


def membership_count(n: int, m: int, i: int) -> int:
    """How many m-subsets of range(n) contain ``i`` (by enumeration)."""
    return sum(1 for s in combinations(range(n), m) if i in s)


# -- random pmfs ------------------------------------------------------------------


def random_pmf(rng: np.random.Generator, sizes: Sequence[int], kind: str = "dirichlet") -> JointPmf:
    """Random joint pmf over the product alphabet ``sizes``.

    ``kind`` is one of ``dirichlet`` (normalised exponentials), ``rational``
    (integer weights 0..9), ``sparse`` (a few random atoms), ``deterministic``,
    ``independent`` or ``correlated`` (all variables copy one uniform symbol).
    """
    sizes = tuple(sizes)
    total = int(np.prod(sizes))
    if total > MAX_STATES:
        raise TooLarge(f"{total} states > {MAX_STATES}")
    if kind == "dirichlet":
        w = rng.exponential(size=total)
        return JointPmf((w / w.sum()).reshape(sizes))
    if kind == "rational":
        w = rng.integers(0, 10, size=total)
        if w.sum() == 0:
            w[rng.integers(total)] = 1
        return JointPmf.from_weights(w.reshape(sizes))
    if kind == "sparse":
        w = np.zeros(total, dtype=np.int64)
        for _ in range(int(rng.integers(1, 5))):
            w[rng.integers(total)] += int(rng.integers(1, 4))
        return JointPmf.from_weights(w.reshape(sizes))
    if kind == "deterministic":
        w = np.zeros(total, dtype=np.int64)
        w[rng.integers(total)] = 1
        return JointPmf.from_weights(w.reshape(sizes))
    if kind == "independent":
        probs = np.ones(())
        for s in sizes:
            m = rng.exponential(size=s)
            probs = np.multiply.outer(probs, m / m.sum())
        return JointPmf(probs / probs.sum())
    if kind == "correlated":
        k = min(sizes)
        w = np.zeros(sizes, dtype=np.int64)
        for x in range(k):
            w[(x,) * len(sizes)] = 1
        return JointPmf.from_weights(w)
    raise EntropyError(f"unknown pmf kind {kind!r}")


PMF_KINDS = ("dirichlet", "rational", "sparse", "deterministic", "independent", "correlated")
