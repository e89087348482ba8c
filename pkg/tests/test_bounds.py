from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_dag
from secure121.bounds import (
    NonUnitCapacity,
    SchemeTag,
    capacity_report,
    secure_lower_bound,
    secure_upper_bound,
    unsecure_capacity,
)
from secure121.fixtures import fig1a, fig1b
from secure121.netmodel import diamond_network, unit_diamond


def test_fig1a_report():
    r = capacity_report(fig1a(), 1)
    assert (r.h_e, r.h_v, r.beams) == (4, 2, 2)
    assert r.unsecure == 2
    assert r.secure_lower == 1
    assert r.secure_upper == Fraction(3, 2)
    assert not r.exact
    assert r.achievability_scheme is SchemeTag.MGT1


def test_report_lines():
    lines = capacity_report(unit_diamond(4), 1).lines()
    assert lines == [
        "h_e: 4", "h_v: 4", "beams: 1", "wiretap: 1", "unsecure: 1",
        "secure_lower: 3/4", "secure_upper: 3/4", "exact: yes", "capacity: 3/4", "scheme: M1Scheme",
    ]


def test_clamping():
    net = unit_diamond(3, 2)
    assert secure_upper_bound(net, 3) == 0
    assert secure_lower_bound(net, 5) == 0
    assert capacity_report(net, 3).achievability_scheme is SchemeTag.NONE
    with pytest.raises(ValueError):
        secure_lower_bound(net, -1)


def test_non_unit_rejected():
    net = diamond_network([2, 1])
    for fn in (unsecure_capacity, lambda n: secure_lower_bound(n, 0), lambda n: capacity_report(n, 0)):
        with pytest.raises(NonUnitCapacity):
            fn(net)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bound_invariants_random(seed):
    rng = np.random.default_rng(seed)
    net = random_dag(rng, max_nodes=10)
    prev = None
    for k in range(0, net.edge_count + 1):
        r = capacity_report(net, k)
        assert 0 <= r.secure_lower <= r.secure_upper <= r.unsecure
        if r.h_e == r.h_v:
            assert r.exact
        if k == r.h_e:
            assert r.secure_upper == 0
        if prev is not None:
            assert r.secure_lower <= prev.secure_lower
            assert r.secure_upper <= prev.secure_upper
        prev = r


def test_thousand_random_dags_lower_le_upper():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        net = random_dag(rng, max_nodes=10)
        k = int(rng.integers(0, 4))
        assert secure_lower_bound(net, k) <= secure_upper_bound(net, k)


def test_formulas_closed_form():
    # M = 1 uses H_e, M > 1 uses H_v
    net = fig1b()
    assert secure_lower_bound(net, 1) == 2 * (1 - Fraction(1, 2))
    assert secure_upper_bound(net, 1) == 2 * (1 - Fraction(1, 4))
    assert unsecure_capacity(net) == 2
