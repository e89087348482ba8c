"""Edge- and vertex-disjoint source-sink path families via unit max-flow.

Max-flow is plain shortest-augmenting-path (BFS) on integer capacities.
Flow decomposition always follows the lowest-numbered outgoing edge that
still carries flow, so path sets are deterministic.  Edges of capacity zero
are treated as absent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .netmodel import Network

Path = tuple[int, ...]  # edge ids from source to sink


class Disjointness(Enum):
    EDGE = "edge"
    VERTEX = "vertex"


@dataclass(frozen=True)
class PathSet:
    paths: tuple[Path, ...]
    disjointness: Disjointness
    # A cut of size len(paths): edge ids for EDGE, node ids for VERTEX.
    certificate: frozenset[int] = frozenset()

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def __getitem__(self, i):
        return self.paths[i]


class _FlowGraph:
    """Residual graph over integer-capacity arcs; arc ``2k+1`` is the reverse of ``2k``."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.tag: list[int | None] = []

    def add_arc(self, u: int, v: int, cap: int, tag: int | None = None) -> int:
        a = len(self.head)
        self.head += [v, u]
        self.cap += [cap, 0]
        self.tag += [tag, None]
        self.adj[u].append(a)
        self.adj[v].append(a + 1)
        return a

    def _bfs(self, s: int, t: int) -> list[int] | None:
        prev = [-1] * self.n
        prev[s] = -2
        q = deque([s])
        while q:
            u = q.popleft()
            for a in self.adj[u]:
                v = self.head[a]
                if self.cap[a] > 0 and prev[v] == -1:
                    prev[v] = a
                    if v == t:
                        return prev
                    q.append(v)
        return None

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            prev = self._bfs(s, t)
            if prev is None:
                return flow
            # walk back, find bottleneck
            arcs = []
            v = t
            while v != s:
                a = prev[v]
                arcs.append(a)
                v = self.head[a ^ 1]
            push = min(self.cap[a] for a in arcs)
            for a in arcs:
                self.cap[a] -= push
                self.cap[a ^ 1] += push
            flow += push

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            for a in self.adj[u]:
                v = self.head[a]
                if self.cap[a] > 0 and v not in seen:
                    seen.add(v)
                    q.append(v)
        return seen

    def flow_on(self, a: int) -> int:
        return self.cap[a ^ 1]


def _decompose(net: Network, flow: dict[int, int]) -> list[Path]:
    """Peel paths off an integral flow given as edge id -> units."""
    flow = dict(flow)
    out = {v: sorted(net.out_edges(v)) for v in range(net.node_count)}
    paths = []
    while any(flow.get(i, 0) > 0 for i in out[net.source]):
        v = net.source
        path = []
        while v != net.sink:
            i = next(i for i in out[v] if flow.get(i, 0) > 0)
            flow[i] -= 1
            path.append(i)
            v = net.edges[i].head
        paths.append(tuple(path))
    return paths


def max_edge_disjoint(net: Network) -> PathSet:
    g = _FlowGraph(net.node_count)
    arcs = {}
    for i, e in enumerate(net.edges):
        if e.capacity > 0:
            arcs[i] = g.add_arc(e.tail, e.head, 1, i)
    g.max_flow(net.source, net.sink)
    flow = {i: g.flow_on(a) for i, a in arcs.items()}
    side = g.reachable(net.source)
    cut = frozenset(
        i for i in arcs if net.edges[i].tail in side and net.edges[i].head not in side
    )
    return PathSet(tuple(_decompose(net, flow)), Disjointness.EDGE, cut)


def _split_graph(net: Network):
    n = net.node_count
    big = net.edge_count + 1
    g = _FlowGraph(2 * n)
    for v in range(n):
        inner = big if v in (net.source, net.sink) else 1
        g.add_arc(v, v + n, inner)
    # Edge arcs are uncapacitated so the min cut consists of node arcs only;
    # with no direct source-sink edge each edge still carries at most 1 unit.
    arcs = {}
    for i, e in enumerate(net.edges):
        if e.capacity > 0:
            arcs[i] = g.add_arc(e.tail + n, e.head, big, i)
    return g, arcs


def max_vertex_disjoint(net: Network) -> PathSet:
    """Vertex-disjoint paths by node splitting; the certificate is a min vertex cut."""
    n = net.node_count
    g, arcs = _split_graph(net)
    g.max_flow(net.source + n, net.sink)
    flow = {i: g.flow_on(a) for i, a in arcs.items()}
    side = g.reachable(net.source + n)
    cut = frozenset(v for v in net.intermediate_nodes() if v in side and v + n not in side)
    return PathSet(tuple(_decompose(net, flow)), Disjointness.VERTEX, cut)


def min_vertex_cut(net: Network) -> frozenset[int]:
    return max_vertex_disjoint(net).certificate


def edge_disjoint_count(net: Network) -> int:
    return len(max_edge_disjoint(net))


def vertex_disjoint_count(net: Network) -> int:
    return len(max_vertex_disjoint(net))


def path_nodes(net: Network, path: Path) -> list[int]:
    nodes = [net.edges[path[0]].tail]
    nodes += [net.edges[i].head for i in path]
    return nodes


def check_pathset(net: Network, ps: PathSet):
    """Raise ``AssertionError`` if ``ps`` is not a valid family of its kind."""
    used_edges: set[int] = set()
    used_nodes: set[int] = set()
    for p in ps:
        assert p, "empty path"
        nodes = path_nodes(net, p)
        assert nodes[0] == net.source and nodes[-1] == net.sink
        for a, b in zip(p, p[1:]):
            assert net.edges[a].head == net.edges[b].tail
        assert len(set(nodes)) == len(nodes), "path repeats a node"
        assert used_edges.isdisjoint(p), "paths share an edge"
        used_edges.update(p)
        if ps.disjointness is Disjointness.VERTEX:
            inner = set(nodes[1:-1])
            assert used_nodes.isdisjoint(inner), "paths share a node"
            used_nodes |= inner


def is_vertex_cut(net: Network, nodes) -> bool:
    """True when deleting ``nodes`` leaves no source-sink path."""
    blocked = set(nodes)
    if blocked & {net.source, net.sink}:
        raise ValueError("a vertex cut may not contain the source or sink")
    seen = {net.source}
    stack = [net.source]
    while stack:
        u = stack.pop()
        for i in net.out_edges(u):
            e = net.edges[i]
            if e.capacity > 0 and e.head not in seen and e.head not in blocked:
                seen.add(e.head)
                stack.append(e.head)
    return net.sink not in seen
