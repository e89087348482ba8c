"""MDS-key secure routing schemes and their 1-2-1 schedules.

A scheme mixes ``num_keys`` uniformly random key packets through a
``num_keys x num_coded`` MDS matrix ``G`` into coded key packets
``X_j = sum_k G[k, j] key_k``.  Coded packet ``j`` is sent as
``T_j = W_j + X_j`` for ``j < num_messages`` and as the pure key ``X_j``
otherwise.  ``slot_map[t]`` lists the ``(path, coded index)`` pairs sent in
slot ``t``; relays only forward, so packet ``j`` crosses every edge of its
path in its slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import field as ff
from .bounds import NonUnitCapacity
from .field import GF
from .netmodel import LinkState, Network, validate_link_state
from .paths import Path, max_edge_disjoint, max_vertex_disjoint

DEFAULT_PACKET_LEN = 64
MAX_SUBSET_SLOTS = 10**6
MDS_EXHAUSTIVE_LIMIT = 10**4


class SchemeError(ValueError):
    pass


class KTooLarge(SchemeError):
    pass


class FieldTooSmall(SchemeError):
    pass


class CombinatorialBlowup(SchemeError):
    pass


class WrongMessageCount(SchemeError):
    pass


class WrongPacketLen(SchemeError):
    pass


class IncompleteTranscript(SchemeError):
    pass


class InconsistentSystem(SchemeError):
    pass


class Mode(Enum):
    M1 = "M1"
    MGT1 = "MGt1"
    DIAMOND = "DiamondNonUniform"
    CUSTOM = "Custom"


# -- MDS matrices -------------------------------------------------------------


def build_mds(k: int, n: int, field: GF) -> np.ndarray:
    """A ``k x n`` matrix whose every ``k`` columns are linearly independent.

    Vandermonde on the points 1..n (row i holds point**i).  That needs
    ``q >= n + 1``; in smaller fields the always-MDS special cases still work:
    a single all-ones row (k = 1) and the single-parity matrix ``[I | 1]``
    (k = n - 1).
    """
    if not 0 <= k <= n:
        raise SchemeError(f"need 0 <= k <= n, got k={k}, n={n}")
    if k == 0:
        return np.zeros((0, n), dtype=np.int64)
    if k == n:
        return np.eye(n, dtype=np.int64)
    if field.order < n + 1:
        if k == 1:
            return np.ones((1, n), dtype=np.int64)
        if k == n - 1:
            return np.hstack([np.eye(k, dtype=np.int64), np.ones((k, 1), dtype=np.int64)])
        raise FieldTooSmall(f"{field!r} has {field.order} elements; a {k}x{n} MDS matrix needs {n + 1}")
    points = np.arange(1, n + 1, dtype=np.int64)
    g = np.empty((k, n), dtype=np.int64)
    g[0] = 1
    for i in range(1, k):
        g[i] = field.vmul(g[i - 1], points)
    return g


def verify_mds(field: GF, g: np.ndarray, rng: np.random.Generator | None = None, samples: int = 200) -> bool:
    """Check that every ``k`` columns of ``g`` are independent.

    Exhaustive when there are at most 10^4 column subsets, otherwise a random
    sample of ``samples`` subsets.
    """
    k, n = g.shape
    if k == 0:
        return True
    if math.comb(n, k) <= MDS_EXHAUSTIVE_LIMIT:
        subsets = combinations(range(n), k)
    else:
        rng = rng or np.random.default_rng(0)
        subsets = (sorted(rng.choice(n, size=k, replace=False)) for _ in range(samples))
    return all(ff.rank(field, g[:, list(cols)]) == k for cols in subsets)


def auto_field(num_coded: int, field: GF | None = None) -> GF:
    if field is not None:
        return field
    try:
        return ff.smallest_field(num_coded + 1)
    except ff.FieldError as exc:
        raise FieldTooSmall(str(exc)) from None


# -- schemes ------------------------------------------------------------------


def colex_subsets(n: int, r: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(n), r), key=lambda c: c[::-1])


@dataclass(frozen=True, eq=False)
class CodingScheme:
    network: Network
    field: GF
    packet_len: int
    wiretap: int
    paths: tuple[Path, ...]
    slot_map: tuple[tuple[tuple[int, int], ...], ...]
    mds: np.ndarray
    mode: Mode = Mode.CUSTOM
    info: dict = dc_field(default_factory=dict)
    # Paths switched on per slot even when they carry no packet (sub-unit
    # capacities need several uses per packet).  Empty means "those in slot_map".
    active: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        if self.packet_len < 1:
            raise SchemeError("packet_len must be >= 1")
        seen = sorted(j for slot in self.slot_map for _, j in slot)
        if seen != list(range(len(seen))):
            raise SchemeError("every coded packet index must appear exactly once in slot_map")
        if self.mds.shape[1] != len(seen):
            raise SchemeError(f"key matrix has {self.mds.shape[1]} columns for {len(seen)} coded packets")
        if self.num_messages < 0:
            raise SchemeError("more keys than coded packets")
        if self.active and len(self.active) != len(self.slot_map):
            raise SchemeError("active must list one path set per slot")
        for p in {p for t in range(self.period) for p in self.active_paths(t)}:
            if not 0 <= p < len(self.paths):
                raise SchemeError(f"slot_map refers to unknown path {p}")
        for t in range(self.period):
            bad = validate_link_state(self.network, self.link_state(t))
            if bad is not None:
                raise SchemeError(f"slot {t}: {bad}")
        self._check_capacities()

    def _check_capacities(self):
        caps = [e.capacity for e in self.network.edges]
        total = [0] * len(caps)
        active = [0] * len(caps)
        for t in range(self.period):
            counts = self.packets_per_path(t)
            for p in self.active_paths(t):
                count = counts.get(p, 0)
                for e in self.paths[p]:
                    if count > math.ceil(caps[e]):
                        raise SchemeError(f"slot {t}: edge {e} carries {count} packets, capacity {caps[e]}")
                    total[e] += count
                    active[e] += 1
        for e, c in enumerate(caps):
            if total[e] > c * active[e]:
                raise SchemeError(f"edge {e} carries {total[e]} packets in {active[e]} uses, capacity {c}")

    @property
    def num_keys(self) -> int:
        return self.mds.shape[0]

    @property
    def num_coded(self) -> int:
        return self.mds.shape[1]

    @property
    def num_messages(self) -> int:
        return self.num_coded - self.num_keys

    @property
    def period(self) -> int:
        return len(self.slot_map)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.num_messages, self.period)

    def packets_per_path(self, t: int) -> dict[int, int]:
        counts: dict[int, int] = {}
        for p, _ in self.slot_map[t]:
            counts[p] = counts.get(p, 0) + 1
        return counts

    def active_paths(self, t: int) -> frozenset[int]:
        carried = frozenset(p for p, _ in self.slot_map[t])
        return carried | self.active[t] if self.active else carried

    def link_state(self, t: int) -> LinkState:
        edges = set()
        for p in self.active_paths(t):
            edges.update(self.paths[p])
        return LinkState(t, frozenset(edges))

    def path_slots(self, p: int) -> list[int]:
        return [t for t in range(self.period) if p in self.active_paths(t)]

    def edge_traffic(self) -> dict[int, list[tuple[int, int]]]:
        """Edge id -> ``(slot, coded index)`` for every packet crossing it."""
        traffic: dict[int, list[tuple[int, int]]] = {}
        for t, slot in enumerate(self.slot_map):
            for p, j in slot:
                for e in self.paths[p]:
                    traffic.setdefault(e, []).append((t, j))
        return traffic

    def with_key_matrix(self, g: np.ndarray, field: GF | None = None) -> "CodingScheme":
        """Same routing, different key mixing (used to plant insecure variants)."""
        return CodingScheme(
            self.network, field or self.field, self.packet_len, self.wiretap,
            self.paths, self.slot_map, np.asarray(g, dtype=np.int64), self.mode, dict(self.info),
            self.active,
        )

    def with_zero_keys(self) -> "CodingScheme":
        return self.with_key_matrix(np.zeros_like(self.mds))


def linear_scheme(
    net: Network,
    paths: Sequence[Path],
    slot_map: Sequence[Sequence[tuple[int, int]]],
    num_keys: int,
    wiretap: int,
    field: GF | None = None,
    packet_len: int = DEFAULT_PACKET_LEN,
    mode: Mode = Mode.CUSTOM,
    info: dict | None = None,
    active: Sequence[Iterable[int]] | None = None,
) -> CodingScheme:
    num_coded = sum(len(s) for s in slot_map)
    if num_keys > num_coded:
        raise SchemeError(f"{num_keys} keys exceed {num_coded} coded packets")
    field = auto_field(num_coded, field)
    return CodingScheme(
        network=net,
        field=field,
        packet_len=packet_len,
        wiretap=wiretap,
        paths=tuple(tuple(p) for p in paths),
        slot_map=tuple(tuple((int(p), int(j)) for p, j in s) for s in slot_map),
        mds=build_mds(num_keys, num_coded, field),
        mode=mode,
        info=info or {},
        active=tuple(frozenset(a) for a in active) if active is not None else (),
    )


def _require_unit(net: Network):
    if not net.is_unit():
        raise NonUnitCapacity("MDS routing schemes need unit edge capacities")


def scheme_m1(net: Network, k: int, field: GF | None = None, packet_len: int = DEFAULT_PACKET_LEN) -> CodingScheme:
    """Single-beam scheme: cycle through the H_e edge-disjoint paths, one per slot."""
    _require_unit(net)
    if net.beams != 1:
        raise SchemeError(f"scheme_m1 needs M = 1, network has M = {net.beams}")
    paths = max_edge_disjoint(net).paths
    h_e = len(paths)
    if k < 0:
        raise SchemeError("wiretap size must be >= 0")
    if k >= h_e:
        raise KTooLarge(f"K = {k} >= H_e = {h_e}: zero secure rate")
    slot_map = [[(i, i)] for i in range(h_e)]
    return linear_scheme(net, paths, slot_map, k, k, field, packet_len, Mode.M1, {"h_e": h_e})


def scheme_mgt1(net: Network, k: int, field: GF | None = None, packet_len: int = DEFAULT_PACKET_LEN) -> CodingScheme:
    """Multi-beam scheme: one slot per M^-subset of the H_v vertex-disjoint paths.

    With M^ = min(M, H_v) there are C(H_v, M^) slots carrying M^ packets each,
    and K * C(H_v - 1, M^ - 1) of them are pure keys.
    """
    _require_unit(net)
    paths = max_vertex_disjoint(net).paths
    h_v = len(paths)
    if k < 0:
        raise SchemeError("wiretap size must be >= 0")
    if k >= h_v:
        raise KTooLarge(f"K = {k} >= H_v = {h_v}: zero secure rate")
    m_hat = min(net.beams, h_v)
    n_slots = math.comb(h_v, m_hat)
    if n_slots > MAX_SUBSET_SLOTS:
        raise CombinatorialBlowup(f"C({h_v}, {m_hat}) = {n_slots} slots")
    num_keys = k * math.comb(h_v - 1, m_hat - 1)
    slot_map = []
    j = 0
    for subset in colex_subsets(h_v, m_hat):
        slot_map.append([(p, j + r) for r, p in enumerate(subset)])
        j += m_hat
    info = {"h_v": h_v, "m_hat": m_hat}
    return linear_scheme(net, paths, slot_map, num_keys, k, field, packet_len, Mode.MGT1, info)


def build_scheme(net: Network, k: int, field: GF | None = None, packet_len: int = DEFAULT_PACKET_LEN) -> CodingScheme:
    """The applicable scheme for ``net``: :func:`scheme_m1` if M = 1, else :func:`scheme_mgt1`."""
    if net.beams == 1:
        return scheme_m1(net, k, field, packet_len)
    return scheme_mgt1(net, k, field, packet_len)


# -- schedules ----------------------------------------------------------------

Packet = tuple[int, ...]


@dataclass(frozen=True)
class ScheduledSlot:
    state: LinkState
    # edge id -> packets carried in this slot, in slot_map order
    payloads: dict[int, tuple[Packet, ...]] = dc_field(default_factory=dict)

    @property
    def slot(self) -> int:
        return self.state.slot


@dataclass(frozen=True)
class Schedule:
    slots: tuple[ScheduledSlot, ...]
    period: int


def scheme_unsecure(net: Network) -> Schedule:
    """One slot that runs min(M, H_v) vertex-disjoint paths at once."""
    _require_unit(net)
    paths = max_vertex_disjoint(net).paths[: net.beams]
    edges = frozenset(e for p in paths for e in p)
    return Schedule((ScheduledSlot(LinkState(0, edges)),), period=1)


@dataclass(frozen=True)
class KeyRecord:
    seed: int | None
    keys: np.ndarray  # num_keys x packet_len


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(seed))


def coded_packets(scheme: CodingScheme, messages: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """The ``num_coded x packet_len`` array of transmitted packets ``T``."""
    f = scheme.field
    if scheme.num_keys:
        t = ff.matmul(f, scheme.mds.T, keys)
    else:
        t = np.zeros((scheme.num_coded, scheme.packet_len), dtype=np.int64)
    t[: scheme.num_messages] ^= messages
    return t


def _as_messages(scheme: CodingScheme, messages) -> np.ndarray:
    w = np.asarray(messages, dtype=np.int64)
    if w.size == 0:
        w = w.reshape(0, scheme.packet_len)
    if w.ndim != 2 or w.shape[0] != scheme.num_messages:
        raise WrongMessageCount(f"expected {scheme.num_messages} message packets, got {w.shape[0] if w.ndim else 0}")
    if w.shape[1] != scheme.packet_len:
        raise WrongPacketLen(f"expected packets of {scheme.packet_len} symbols, got {w.shape[1]}")
    if np.any((w < 0) | (w >= scheme.field.order)):
        raise SchemeError("message symbol outside the field")
    return w


def encode(scheme: CodingScheme, messages, rng_seed=0) -> tuple[Schedule, KeyRecord]:
    w = _as_messages(scheme, messages)
    rng = make_rng(rng_seed)
    keys = scheme.field.random(rng, (scheme.num_keys, scheme.packet_len))
    t = coded_packets(scheme, w, keys)
    slots = []
    for s, entries in enumerate(scheme.slot_map):
        payloads: dict[int, list[Packet]] = {}
        for p, j in entries:
            pkt = tuple(int(x) for x in t[j])
            for e in scheme.paths[p]:
                payloads.setdefault(e, []).append(pkt)
        slots.append(ScheduledSlot(scheme.link_state(s), {e: tuple(v) for e, v in payloads.items()}))
    seed = rng_seed if isinstance(rng_seed, int) else None
    return Schedule(tuple(slots), scheme.period), KeyRecord(seed, keys)


def received_packets(scheme: CodingScheme, received: Schedule) -> np.ndarray:
    """Rebuild ``T`` from the sink-side edges, checking every hop agrees."""
    by_slot = {s.slot: s for s in received.slots}
    t = np.zeros((scheme.num_coded, scheme.packet_len), dtype=np.int64)
    for s, entries in enumerate(scheme.slot_map):
        if s not in by_slot:
            raise IncompleteTranscript(f"slot {s} missing from transcript")
        payloads = by_slot[s].payloads
        per_path: dict[int, list[int]] = {}
        for p, j in entries:
            per_path.setdefault(p, []).append(j)
        for p, js in per_path.items():
            path = scheme.paths[p]
            if path[-1] not in payloads:
                raise IncompleteTranscript(f"slot {s}: nothing received on edge {path[-1]}")
            last = payloads[path[-1]]
            if len(last) != len(js):
                raise IncompleteTranscript(f"slot {s}: edge {path[-1]} carries {len(last)} packets, expected {len(js)}")
            for e in path[:-1]:
                if e in payloads and payloads[e] != last:
                    raise InconsistentSystem(f"slot {s}: edges {e} and {path[-1]} disagree")
            for j, pkt in zip(js, last):
                if len(pkt) != scheme.packet_len:
                    raise WrongPacketLen(f"slot {s}: packet of {len(pkt)} symbols")
                t[j] = pkt
    return t


def decode(scheme: CodingScheme, received: Schedule) -> np.ndarray:
    """Recover the messages: solve the keys from the pure-key packets, then strip them."""
    t = received_packets(scheme, received)
    nm, nk, f = scheme.num_messages, scheme.num_keys, scheme.field
    if nk == 0:
        return t[:nm]
    pure = scheme.mds[:, nm:]
    try:
        keys = ff.solve(f, pure.T, t[nm:])
    except ff.NoSolution as exc:
        raise InconsistentSystem(str(exc)) from None
    x = ff.matmul(f, scheme.mds[:, :nm].T, keys) if nm else np.zeros((0, scheme.packet_len), dtype=np.int64)
    return t[:nm] ^ x


# -- dump format ----------------------------------------------------------------


def dump_schedule(schedule: Schedule, field: GF) -> str:
    """``slot <t> edge <id> payload <hex>`` lines, one per packet, fixed-width hex symbols."""
    width = (field.m + 3) // 4
    lines = []
    for s in sorted(schedule.slots, key=lambda s: s.slot):
        for e in sorted(s.payloads):
            for pkt in s.payloads[e]:
                hexs = "".join(f"{x:0{width}x}" for x in pkt)
                lines.append(f"slot {s.slot} edge {e} payload {hexs}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_schedule(text: str, field: GF, period: int | None = None) -> Schedule:
    width = (field.m + 3) // 4
    slots: dict[int, dict[int, list[Packet]]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 6 or parts[0] != "slot" or parts[2] != "edge" or parts[4] != "payload":
            raise ValueError(f"line {lineno}: malformed schedule line")
        t, e, hexs = int(parts[1]), int(parts[3]), parts[5]
        if len(hexs) % width:
            raise ValueError(f"line {lineno}: payload length is not a multiple of {width}")
        pkt = tuple(int(hexs[i : i + width], 16) for i in range(0, len(hexs), width))
        slots.setdefault(t, {}).setdefault(e, []).append(pkt)
    out = tuple(
        ScheduledSlot(LinkState(t, frozenset(p)), {e: tuple(v) for e, v in p.items()})
        for t, p in sorted(slots.items())
    )
    return Schedule(out, period if period is not None else len(out))
