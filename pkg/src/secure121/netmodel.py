"""1-2-1 network model: the graph, link-state constraints, and the ``.net`` file format.

File format (UTF-8, line based, ``#`` starts a comment)::

    nodes <int>
    source <node-id>
    sink <node-id>
    beams <int M>
    edge <tail> <head> <cap>    # cap is "p" or "p/q", nonnegative

Edges are numbered 0, 1, 2, ... in file order.  A direct source-to-sink edge
is rewritten into a two-hop path through a fresh virtual relay: the edge keeps
its id for the first hop and the second hop is appended at the end.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class NetworkError(ValueError):
    pass


class ParseError(NetworkError):
    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


class ValidationError(NetworkError):
    pass


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    capacity: Fraction = Fraction(1)


@dataclass(frozen=True)
class Network:
    """Validated, immutable 1-2-1 network.

    Build instances with :func:`make_network` (or :func:`parse_network`),
    which applies the virtual-relay rewrite before validation.
    """

    node_count: int
    source: int
    sink: int
    beams: int
    edges: tuple[Edge, ...]
    virtual_nodes: frozenset[int] = field(default_factory=frozenset, compare=False)

    def __post_init__(self):
        _validate(self)

    @property
    def destination(self) -> int:
        return self.sink

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def out_edges(self, v: int) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.tail == v]

    def in_edges(self, v: int) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.head == v]

    def is_unit(self) -> bool:
        return all(e.capacity == 1 for e in self.edges)

    def intermediate_nodes(self) -> list[int]:
        return [v for v in range(self.node_count) if v not in (self.source, self.sink)]

    def digest(self) -> str:
        return hashlib.sha256(serialize_network(self).encode()).hexdigest()


@dataclass(frozen=True)
class WiretapModel:
    k: int

    def check(self, net: Network):
        if not 0 <= self.k <= net.edge_count:
            raise ValidationError(f"wiretap size {self.k} outside [0, {net.edge_count}]")


@dataclass(frozen=True)
class LinkState:
    slot: int
    active_edges: frozenset[int]


@dataclass(frozen=True)
class Violation:
    node: int
    constraint: str  # "in-degree", "out-degree", "source-beams", "sink-beams"

    def __str__(self):
        return f"node {self.node} violates {self.constraint}"


def _topological_order(n: int, edges: Sequence[Edge]) -> list[int] | None:
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for e in edges:
        indeg[e.head] += 1
        succ[e.tail].append(e.head)
    order = [v for v in range(n) if indeg[v] == 0]
    i = 0
    while i < len(order):
        for w in succ[order[i]]:
            indeg[w] -= 1
            if indeg[w] == 0:
                order.append(w)
        i += 1
    return order if len(order) == n else None


def _validate(net: Network):
    n = net.node_count
    if n < 2:
        raise ValidationError("network needs at least two nodes")
    for name in ("source", "sink"):
        v = getattr(net, name)
        if not 0 <= v < n:
            raise ValidationError(f"{name} {v} is not a node id")
    if net.source == net.sink:
        raise ValidationError("source and sink coincide")
    if net.beams < 1:
        raise ValidationError("beams must be >= 1")
    for i, e in enumerate(net.edges):
        if not (0 <= e.tail < n and 0 <= e.head < n):
            raise ValidationError(f"edge {i} references a node outside [0, {n})")
        if e.tail == e.head:
            raise ValidationError(f"edge {i} is a self-loop")
        if e.capacity < 0:
            raise ValidationError(f"edge {i} has negative capacity")
        if e.head == net.source:
            raise ValidationError(f"edge {i} enters the source")
        if e.tail == net.sink:
            raise ValidationError(f"edge {i} leaves the sink")
        if e.tail == net.source and e.head == net.sink:
            raise ValidationError(f"edge {i} joins source and sink directly")
    if _topological_order(n, net.edges) is None:
        raise ValidationError("graph has a cycle")


def make_network(
    node_count: int,
    source: int,
    sink: int,
    beams: int,
    edges: Iterable,
) -> Network:
    """Build a validated network, inserting a virtual relay on direct source-sink edges.

    ``edges`` holds :class:`Edge` objects or ``(tail, head[, capacity])`` tuples.
    """
    norm: list[Edge] = []
    for e in edges:
        if not isinstance(e, Edge):
            e = Edge(int(e[0]), int(e[1]), Fraction(e[2]) if len(e) > 2 else Fraction(1))
        norm.append(e)
    extra: list[Edge] = []
    virtual = set()
    for i, e in enumerate(norm):
        if e.tail == source and e.head == sink:
            v = node_count + len(virtual)
            virtual.add(v)
            norm[i] = Edge(source, v, e.capacity)
            extra.append(Edge(v, sink, e.capacity))
    return Network(
        node_count=node_count + len(virtual),
        source=source,
        sink=sink,
        beams=beams,
        edges=tuple(norm + extra),
        virtual_nodes=frozenset(virtual),
    )


def _parse_int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {tok!r}") from None


def _parse_capacity(tok: str, lineno: int) -> Fraction:
    num, _, den = tok.partition("/")
    try:
        p = int(num)
        q = int(den) if den else 1
    except ValueError:
        raise ParseError(lineno, f"bad capacity {tok!r}") from None
    if q <= 0:
        raise ParseError(lineno, f"bad capacity denominator in {tok!r}")
    if p < 0:
        raise ParseError(lineno, f"negative capacity {tok!r}")
    return Fraction(p, q)


def parse_network(text: str | bytes) -> Network:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header: dict[str, int] = {}
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        key, args = line[0], line[1:]
        if key in ("nodes", "source", "sink", "beams"):
            if len(args) != 1:
                raise ParseError(lineno, f"'{key}' takes one argument")
            if key in header:
                raise ParseError(lineno, f"duplicate '{key}'")
            header[key] = _parse_int(args[0], lineno, key)
        elif key == "edge":
            if len(args) != 3:
                raise ParseError(lineno, "'edge' takes <tail> <head> <cap>")
            t = _parse_int(args[0], lineno, "tail")
            h = _parse_int(args[1], lineno, "head")
            if t == h:
                raise ParseError(lineno, f"self-loop on node {t}")
            edges.append(Edge(t, h, _parse_capacity(args[2], lineno)))
        else:
            raise ParseError(lineno, f"unknown directive {key!r}")
    for key in ("nodes", "source", "sink"):
        if key not in header:
            raise ParseError(0, f"missing '{key}'")
    return make_network(
        header["nodes"], header["source"], header["sink"], header.get("beams", 1), edges
    )


def _fmt_cap(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def serialize_network(net: Network) -> str:
    lines = [
        f"nodes {net.node_count}",
        f"source {net.source}",
        f"sink {net.sink}",
        f"beams {net.beams}",
    ]
    lines += [f"edge {e.tail} {e.head} {_fmt_cap(e.capacity)}" for e in net.edges]
    return "\n".join(lines) + "\n"


def validate_link_state(net: Network, state: LinkState) -> Violation | None:
    """Check the 1-2-1 constraints for one slot; ``None`` means the state is valid."""
    out_deg = [0] * net.node_count
    in_deg = [0] * net.node_count
    for i in sorted(state.active_edges):
        if not 0 <= i < net.edge_count:
            raise ValidationError(f"edge id {i} out of range")
        e = net.edges[i]
        out_deg[e.tail] += 1
        in_deg[e.head] += 1
    if out_deg[net.source] > net.beams:
        return Violation(net.source, "source-beams")
    if in_deg[net.sink] > net.beams:
        return Violation(net.sink, "sink-beams")
    for v in net.intermediate_nodes():
        if in_deg[v] > 1:
            return Violation(v, "in-degree")
        if out_deg[v] > 1:
            return Violation(v, "out-degree")
    return None


def diamond_network(caps: Sequence, beams: int = 1) -> Network:
    """N-relay diamond: node 0 is the source, relays are 1..N, node N+1 the sink.

    Path i uses edges 2i (source -> relay) and 2i+1 (relay -> sink), both of
    capacity ``caps[i]``.
    """
    caps = [Fraction(c) for c in caps]
    if not caps:
        raise ValidationError("diamond needs at least one relay")
    n = len(caps)
    edges = []
    for i, c in enumerate(caps):
        edges.append(Edge(0, i + 1, c))
        edges.append(Edge(i + 1, n + 1, c))
    return make_network(n + 2, 0, n + 1, beams, edges)


def unit_diamond(n: int, beams: int = 1) -> Network:
    return diamond_network([1] * n, beams)
