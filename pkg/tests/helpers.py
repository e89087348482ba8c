"""Shared generators and brute-force oracles for the test suite."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from secure121.netmodel import Network, make_network


def random_dag(rng: np.random.Generator, max_nodes: int = 10, beams: int | None = None,
               density: float | None = None) -> Network:
    """Random unit-capacity DAG; node 0 is the source and the last node the sink.

    Edges only go from lower to higher ids, so the graph is acyclic.  A direct
    source-sink edge may be drawn; make_network rewrites it through a virtual relay.
    """
    n = int(rng.integers(3, max_nodes + 1))
    p = density if density is not None else float(rng.uniform(0.25, 0.7))
    edges = [(u, v) for u in range(n - 1) for v in range(u + 1, n) if rng.random() < p]
    if beams is None:
        beams = int(rng.integers(1, 4))
    return make_network(n, 0, n - 1, beams, edges)


def simple_paths(net: Network) -> list[tuple[int, ...]]:
    """Every source-sink path as a tuple of edge ids (DFS; the graph is a DAG)."""
    out = []

    def walk(v, acc):
        if v == net.sink:
            out.append(tuple(acc))
            return
        for i in net.out_edges(v):
            walk(net.edges[i].head, acc + [i])

    walk(net.source, [])
    return out


def _inner_nodes(net: Network, path) -> frozenset[int]:
    return frozenset(net.edges[i].head for i in path[:-1])


def brute_max_family(items: list[frozenset]) -> int:
    """Largest pairwise-disjoint subfamily, by exhaustive branching."""
    best = 0

    def grow(start, used, size):
        nonlocal best
        best = max(best, size)
        if size + (len(items) - start) <= best:
            return
        for i in range(start, len(items)):
            if used.isdisjoint(items[i]):
                grow(i + 1, used | items[i], size + 1)

    grow(0, frozenset(), 0)
    return best


def brute_edge_disjoint(net: Network) -> int:
    return brute_max_family([frozenset(p) for p in simple_paths(net)])


def brute_vertex_disjoint(net: Network) -> int:
    # Internal nodes plus edges: two direct-ish paths sharing only an edge
    # cannot happen without a shared node, but keep the edges for safety.
    fams = [_inner_nodes(net, p) | frozenset(("e", i) for i in p) for p in simple_paths(net)]
    return brute_max_family(fams)


def brute_min_vertex_cut(net: Network) -> int:
    """Smallest set of intermediate nodes meeting every source-sink path."""
    paths = [_inner_nodes(net, p) for p in simple_paths(net)]
    if not paths:
        return 0
    inner = net.intermediate_nodes()
    for size in range(len(inner) + 1):
        for cut in combinations(inner, size):
            c = set(cut)
            if all(p & c for p in paths):
                return size
    raise AssertionError("unreachable: all intermediates always form a cut")
