"""Passive edge eavesdroppers and perfect-secrecy verification.

Eve fixes a set S of K edges for the whole period and knows the scheme but not
the keys.  Her view is ``Z = A W + B X`` with ``A`` picking the message packets
she sees and ``B`` the key mixing of the same packets.  With uniform keys,
``I(W; Z) = 0`` exactly when ``rank([A | B]) == rank(B)``.  Linearity makes
every symbol position identical, so the check runs on one position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import field as ff
from .coding import CodingScheme

MAX_SUBSETS = 10**7
MAX_ORACLE_SYMBOLS = 20


class AdversaryError(ValueError):
    pass


class BadEdgeId(AdversaryError):
    pass


class SubsetBlowup(AdversaryError):
    pass


class TooLargeForExhaustive(AdversaryError):
    pass


@dataclass(frozen=True)
class EdgeSubset:
    edges: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.edges)) != len(self.edges):
            raise BadEdgeId(f"repeated edge in {self.edges}")

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True, eq=False)
class Transcript:
    # (slot, edge, coded index) per observation row
    observations: tuple[tuple[int, int, int], ...]
    a: np.ndarray  # observations x num_messages
    b: np.ndarray  # observations x num_keys


@dataclass(frozen=True)
class SecrecyVerdict:
    secure: bool
    witness: EdgeSubset | None = None
    leaked_dimension: int = 0
    subsets_checked: int = 0


def _subset(subset) -> EdgeSubset:
    return subset if isinstance(subset, EdgeSubset) else EdgeSubset(tuple(subset))


def observe(scheme: CodingScheme, subset) -> Transcript:
    subset = _subset(subset)
    ne = scheme.network.edge_count
    for e in subset.edges:
        if not 0 <= e < ne:
            raise BadEdgeId(f"edge {e} not in network (0..{ne - 1})")
    traffic = scheme.edge_traffic()
    obs = sorted((t, e, j) for e in subset.edges for t, j in traffic.get(e, ()))
    nm = scheme.num_messages
    a = np.zeros((len(obs), nm), dtype=np.int64)
    b = np.zeros((len(obs), scheme.num_keys), dtype=np.int64)
    for r, (_, _, j) in enumerate(obs):
        if j < nm:
            a[r, j] = 1
        b[r] = scheme.mds[:, j]
    return Transcript(tuple(obs), a, b)


def leaked_dimension(field: ff.GF, transcript: Transcript) -> int:
    ab = np.hstack([transcript.a, transcript.b])
    return ff.rank(field, ab) - ff.rank(field, transcript.b)


def check_perfect_secrecy(scheme: CodingScheme, subset) -> bool:
    return leaked_dimension(scheme.field, observe(scheme, subset)) == 0


def verify_all_subsets(scheme: CodingScheme, k: int | None = None) -> SecrecyVerdict:
    """Check every K-subset of edges in lexicographic order; the first leak is the witness."""
    k = scheme.wiretap if k is None else k
    ne = scheme.network.edge_count
    if not 0 <= k <= ne:
        raise AdversaryError(f"K = {k} outside [0, {ne}]")
    total = math.comb(ne, k)
    if total > MAX_SUBSETS:
        raise SubsetBlowup(f"C({ne}, {k}) = {total} subsets")
    traffic = scheme.edge_traffic()
    nm = scheme.num_messages
    checked = 0
    # Subsets with identical observed packet sets give identical verdicts.
    cache: dict[frozenset[int], int] = {}
    for edges in combinations(range(ne), k):
        checked += 1
        seen = frozenset(j for e in edges for _, j in traffic.get(e, ()))
        if not any(j < nm for j in seen):
            continue
        if seen not in cache:
            cols = sorted(seen)
            a = np.zeros((len(cols), nm), dtype=np.int64)
            for r, j in enumerate(cols):
                if j < nm:
                    a[r, j] = 1
            b = scheme.mds[:, cols].T
            cache[seen] = leaked_dimension(scheme.field, Transcript((), a, b))
        if cache[seen]:
            return SecrecyVerdict(False, EdgeSubset(edges), cache[seen], checked)
    return SecrecyVerdict(True, None, 0, checked)


def subsets_monotone(scheme: CodingScheme, subset: Sequence[int], extra: Iterable[int]) -> bool:
    """Property helper: an insecure subset stays insecure when edges are added."""
    if check_perfect_secrecy(scheme, subset):
        return True
    return not check_perfect_secrecy(scheme, tuple(subset) + tuple(e for e in extra if e not in subset))


def _entropy_from_counts(counts: Iterable[int], total: int) -> float:
    h = 0.0
    for c in counts:
        p = c / total
        h -= p * math.log2(p)
    return h


def _all_assignments(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return (idx[:, None] >> np.arange(n, dtype=np.int64)) & 1


def _pack(bits: np.ndarray) -> np.ndarray:
    """Little-endian integer code of each row of a 0/1 array (at most 62 columns)."""
    weights = np.left_shift(np.int64(1), np.arange(bits.shape[-1], dtype=np.int64))
    return bits.astype(np.int64) @ weights


def transcript_mutual_information(a: np.ndarray, b: np.ndarray) -> float:
    """Exact I(W; Z) in bits over GF(2) by enumerating every (W, X) assignment.

    ``W`` and ``X`` are uniform and independent; ``Z = A W + B X`` mod 2.  The
    joint table of (W, Z) is tallied directly and I = H(W) + H(Z) - H(W, Z).
    Repeated observation rows are dropped first: a copy of a coordinate of Z
    carries no information.
    """
    a = np.asarray(a, dtype=np.int64) & 1
    b = np.asarray(b, dtype=np.int64) & 1
    nw = a.shape[1]
    nx = b.shape[1]
    if nw + nx > MAX_ORACLE_SYMBOLS:
        raise TooLargeForExhaustive(f"{nw + nx} symbols > {MAX_ORACLE_SYMBOLS}")
    if a.shape[0] == 0 or nw == 0:
        return 0.0
    ab = np.unique(np.hstack([a, b]), axis=0)
    a, b = ab[:, :nw], ab[:, nw:]
    rows = ab.shape[0]
    if nw + rows > 62:  # (w, z) must pack into one int64
        raise TooLargeForExhaustive(f"{rows} distinct observation rows")
    ws = _all_assignments(nw)
    xs = _all_assignments(nx)
    zw = _pack((ws @ a.T) & 1)  # one code per w
    zx = _pack((xs @ b.T) & 1)  # one code per x
    z = (zw[:, None] ^ zx[None, :]).ravel()  # every (w, x) pair, w-major
    w = np.repeat(np.arange(len(ws), dtype=np.int64), len(xs))
    total = z.size
    _, z_counts = np.unique(z, return_counts=True)
    _, wz_counts = np.unique(w * (np.int64(1) << rows) + z, return_counts=True)
    h_w = float(nw)  # uniform messages
    h_z = _entropy_from_counts(z_counts.tolist(), total)
    h_wz = _entropy_from_counts(wz_counts.tolist(), total)
    return h_w + h_z - h_wz


def mutual_information_oracle(scheme: CodingScheme, subset) -> float:
    if scheme.field.order != 2:
        raise AdversaryError("the exhaustive oracle runs over GF(2) only")
    tr = observe(scheme, subset)
    if scheme.num_messages + scheme.num_keys > MAX_ORACLE_SYMBOLS:
        raise TooLargeForExhaustive(f"{scheme.num_messages + scheme.num_keys} symbols > {MAX_ORACLE_SYMBOLS}")
    return transcript_mutual_information(tr.a, tr.b)
