import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    brute_edge_disjoint,
    brute_min_vertex_cut,
    brute_vertex_disjoint,
    random_dag,
    simple_paths,
)
from secure121.fixtures import fig1a, fig1b
from secure121.netmodel import diamond_network, make_network, unit_diamond
from secure121.paths import (
    Disjointness,
    check_pathset,
    is_vertex_cut,
    max_edge_disjoint,
    max_vertex_disjoint,
    min_vertex_cut,
    path_nodes,
)


def test_fig1_counts():
    for net in (fig1a(), fig1b()):
        assert len(max_edge_disjoint(net)) == 4
        assert len(max_vertex_disjoint(net)) == 2


def test_fig1a_paths_are_deterministic():
    ps = max_edge_disjoint(fig1a())
    nodes = [path_nodes(fig1a(), p) for p in ps]
    assert nodes == [[0, 1, 5, 7, 11], [0, 2, 5, 8, 11], [0, 3, 6, 9, 11], [0, 4, 6, 10, 11]]
    assert ps.disjointness is Disjointness.EDGE


def test_vertex_cuts_on_fixtures():
    a, b = fig1a(), fig1b()
    assert min_vertex_cut(a) == frozenset({5, 6})
    cut_b = min_vertex_cut(b)
    assert len(cut_b) == 2 and is_vertex_cut(b, cut_b)
    # the two middle nodes also form a minimum cut of fig1b
    assert is_vertex_cut(b, {5, 6})
    assert not is_vertex_cut(b, {5})


def test_edge_certificate_is_a_cut():
    net = fig1b()
    ps = max_edge_disjoint(net)
    assert len(ps.certificate) == len(ps)
    remaining = [e for i, e in enumerate(net.edges) if i not in ps.certificate]
    cut_net = make_network(net.node_count, net.source, net.sink, 1, remaining)
    assert not simple_paths(cut_net)


def test_unit_diamond():
    for n in range(1, 8):
        net = unit_diamond(n)
        assert len(max_edge_disjoint(net)) == n
        assert len(max_vertex_disjoint(net)) == n
        assert min_vertex_cut(net) == frozenset(range(1, n + 1))


def test_zero_capacity_edges_are_absent():
    net = diamond_network([1, 0, 1])
    assert len(max_edge_disjoint(net)) == 2
    assert len(max_vertex_disjoint(net)) == 2


def test_disconnected():
    net = make_network(4, 0, 3, 1, [(0, 1), (2, 3)])
    assert len(max_edge_disjoint(net)) == 0
    assert len(max_vertex_disjoint(net)) == 0
    assert min_vertex_cut(net) == frozenset()


def test_is_vertex_cut_rejects_terminals():
    with pytest.raises(ValueError):
        is_vertex_cut(fig1a(), {0})


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_dags_against_brute_force(seed):
    net = random_dag(np.random.default_rng(seed), max_nodes=8)
    pe, pv = max_edge_disjoint(net), max_vertex_disjoint(net)
    check_pathset(net, pe)
    check_pathset(net, pv)
    assert len(pe) == brute_edge_disjoint(net)
    assert len(pv) == brute_vertex_disjoint(net)
    assert len(pv) <= len(pe)
    cut = pv.certificate
    assert len(cut) == len(pv) == brute_min_vertex_cut(net)
    assert is_vertex_cut(net, cut)
    # edge certificate size matches too (max-flow = min-cut)
    assert len(pe.certificate) == len(pe)


def test_check_pathset_catches_sharing():
    net = fig1a()
    ps = max_edge_disjoint(net)
    bad = type(ps)(ps.paths, Disjointness.VERTEX)
    with pytest.raises(AssertionError):
        check_pathset(net, bad)
