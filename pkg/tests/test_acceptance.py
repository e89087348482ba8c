"""Acceptance gate: one test per numbered criterion.

Run alone with ``pytest tests/test_acceptance.py -v``; the terminal summary
prints one PASS/FAIL line per criterion.
"""

import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from helpers import brute_edge_disjoint, brute_vertex_disjoint, random_dag
from secure121.adversary import (
    check_perfect_secrecy,
    mutual_information_oracle,
    verify_all_subsets,
)
from secure121.bounds import capacity_report
from secure121.coding import Mode, SchemeError, build_scheme, decode, encode
from secure121.diamond import (
    diamond_capacity,
    diamond_lp,
    diamond_schedule,
    equalization_heuristic,
    grid_optimum,
)
from secure121.entropy import PMF_KINDS, random_pmf, verify_subset_lemma
from secure121.field import gf
from secure121.fixtures import (
    EXAMPLE3_CAPS,
    FIG1B_TIGHT_UPPER_BOUND,
    example1_scheme,
    fig1a,
    fig1b,
)
from secure121.lp import solve_lp_exact
from secure121.netmodel import unit_diamond, validate_link_state
from secure121.paths import max_edge_disjoint, max_vertex_disjoint, path_nodes


@pytest.mark.criterion(1, "diamond 3,2,2,1 K=1: capacity 3/2, equal split 5/4, allocation 1/4,3/8,3/8,0, < 1 s")
def test_criterion_1_example3():
    t0 = time.perf_counter()
    r = subprocess.run(
        [sys.executable, "-m", "secure121", "diamond", "--caps", "3,2,2,1", "--wiretap", "1"],
        capture_output=True, text=True,
    )
    elapsed = time.perf_counter() - t0
    assert r.returncode == 0, r.stderr
    lines = r.stdout.splitlines()
    assert "capacity: 3/2" in lines
    assert "equal_split: 5/4" in lines
    assert "allocation: 1/4,3/8,3/8,0" in lines
    assert elapsed < 1.0, f"took {elapsed:.3f} s"
    # the library route agrees
    a = diamond_capacity(EXAMPLE3_CAPS, 1)
    assert a.value == Fraction(3, 2)


@pytest.mark.criterion(2, "unit diamonds N 2..10: lower = upper = min(M,N)(1-K/N) = realised scheme rate")
def test_criterion_2_uniform_diamonds():
    cases = 0
    for n in range(2, 11):
        for m in range(1, n + 1):
            net = unit_diamond(n, m)
            for k in range(0, n):
                expect = min(m, n) * (1 - Fraction(k, n))
                r = capacity_report(net, k)
                assert r.secure_lower == r.secure_upper == expect, (n, m, k)
                s = build_scheme(net, k, packet_len=1)
                assert s.mode is (Mode.M1 if m == 1 else Mode.MGT1)
                assert s.rate == expect, (n, m, k, s.rate)
                cases += 1
    assert cases == sum(n * n for n in range(2, 11))


@pytest.mark.criterion(3, "fig1a M=2 K=1: upper 3/2; two-slot p1+p4, p2+p3 schedule is valid, rate 3/2, secure")
def test_criterion_3_example1():
    net = fig1a()
    assert net.beams == 2
    assert capacity_report(net, 1).secure_upper == Fraction(3, 2)
    s = example1_scheme()
    assert s.period == 2
    slot_paths = [sorted(p for p, _ in slot) for slot in s.slot_map]
    assert slot_paths == [[0, 3], [1, 2]]
    # p1..p4 are the top-to-bottom edge-disjoint paths
    assert [path_nodes(net, p)[1] for p in s.paths] == [1, 2, 3, 4]
    for t in range(s.period):
        assert validate_link_state(net, s.link_state(t)) is None
    assert s.num_messages == 3
    assert s.rate == Fraction(3, 2)
    assert verify_all_subsets(s, 1).secure


@pytest.mark.criterion(4, "fig1b M=2 K=1: generic upper 3/2, MGt1 rate 1 and secure, equals the tight bound 1")
def test_criterion_4_example2():
    net = fig1b()
    r = capacity_report(net, 1)
    assert r.secure_upper == Fraction(3, 2)
    s = build_scheme(net, 1)
    assert s.mode is Mode.MGT1
    assert s.rate == 1
    assert verify_all_subsets(s, 1).secure
    assert FIG1B_TIGHT_UPPER_BOUND == 1
    assert s.rate == FIG1B_TIGHT_UPPER_BOUND


def _gf2_twin(scheme, rng):
    try:
        return build_scheme(scheme.network, scheme.wiretap, gf(1), 1)
    except SchemeError:
        return scheme.with_key_matrix(rng.integers(0, 2, size=scheme.mds.shape), gf(1))


def _oracle_agrees(scheme, k):
    """Every K-subset: rank verdict == (exhaustive I(W;Z) == 0); overall verdict consistent."""
    traffic = scheme.edge_traffic()
    by_seen = {}
    for sub in combinations(range(scheme.network.edge_count), k):
        seen = frozenset(j for e in sub for _, j in traffic.get(e, ()))
        by_seen.setdefault(seen, sub)
    all_zero = True
    for sub in by_seen.values():
        mi = mutual_information_oracle(scheme, sub)
        zero = abs(mi) < 1e-9
        assert zero == check_perfect_secrecy(scheme, sub), (sub, mi)
        all_zero &= zero
    assert verify_all_subsets(scheme, k).secure == all_zero


@pytest.mark.criterion(5, "500 random DAGs: schemes secure, zeroed keys insecure, exact agreement with GF(2) oracle")
def test_criterion_5_secrecy_soundness():
    rng = np.random.default_rng(5)
    done = oracle_runs = 0
    while done < 500:
        net = random_dag(rng, max_nodes=10)
        h = len(max_edge_disjoint(net)) if net.beams == 1 else len(max_vertex_disjoint(net))
        if h < 2:
            continue
        k = int(rng.integers(1, h))
        try:
            s = build_scheme(net, k, packet_len=1)
        except SchemeError:
            continue
        v = verify_all_subsets(s, k)
        assert v.secure, (v.witness, net)
        z = verify_all_subsets(s.with_zero_keys(), k)
        assert not z.secure and z.witness is not None and len(z.witness) == k
        assert not check_perfect_secrecy(s.with_zero_keys(), z.witness)
        done += 1
        if s.num_messages + s.num_keys <= 20 and oracle_runs < 60:
            twin = _gf2_twin(s, rng)
            _oracle_agrees(twin, k)
            _oracle_agrees(twin.with_zero_keys(), k)
            oracle_runs += 1
    assert oracle_runs >= 30


def _roundtrip_pool():
    pool = [example1_scheme, lambda f, n: build_scheme(fig1a(), 1, f, n),
            lambda f, n: build_scheme(fig1b(), 1, f, n)]
    for n in range(2, 6):
        for m in range(1, n + 1):
            for k in range(0, n):
                pool.append(lambda f, L, n=n, m=m, k=k: build_scheme(unit_diamond(n, m), k, f, L))
    alloc = diamond_capacity(EXAMPLE3_CAPS, 1)
    pool.append(lambda f, L: diamond_schedule(EXAMPLE3_CAPS, 1, alloc, f, L, verify=False))
    return pool


@pytest.mark.criterion(6, "1000 encode/decode round trips over GF(16) and GF(256), packet_len 1 and 64, exact")
def test_criterion_6_roundtrip():
    rng = np.random.default_rng(6)
    pool = _roundtrip_pool()
    cache = {}
    trials = 0
    per_field = {4: 0, 8: 0}
    while trials < 1000:
        idx = int(rng.integers(len(pool)))
        m = (4, 8)[trials % 2]
        plen = (1, 64)[(trials // 2) % 2]
        key = (idx, m, plen)
        if key not in cache:
            try:
                cache[key] = pool[idx](gf(m), plen)
            except SchemeError:
                cache[key] = None
        s = cache[key]
        if s is None:
            continue
        w = s.field.random(rng, (s.num_messages, plen))
        sched, _ = encode(s, w, rng)
        assert np.array_equal(decode(s, sched), w), key
        trials += 1
        per_field[m] += 1
    assert min(per_field.values()) == 500


@pytest.mark.criterion(7, "1000 random diamonds: equalization heuristic equals the exact LP value")
def test_criterion_7_lp_vs_heuristic():
    rng = np.random.default_rng(7)
    mismatches = []
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        caps = [Fraction(int(rng.integers(1, 17)), int(rng.integers(1, 17))) for _ in range(n)]
        k = int(rng.integers(0, n))
        lp = solve_lp_exact(diamond_lp(caps, k)).value
        heur = equalization_heuristic(caps, k).value
        if heur != lp:
            mismatches.append((caps, k, lp, heur))
            grid, gap = grid_optimum(caps, k, 64)
            assert grid <= lp <= grid + gap
    for caps, k, lp, heur in mismatches:
        print(f"mismatch caps={[str(c) for c in caps]} K={k} lp={lp} heuristic={heur}")
    assert not mismatches


@pytest.mark.criterion(8, "1000 random joint pmfs, L <= 4: subset-entropy witness within 1e-9, < 30 s")
def test_criterion_8_lemma():
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    for i in range(1000):
        n = int(rng.integers(1, 5))
        sizes = tuple(int(x) for x in rng.integers(2, 5, size=n))
        p = random_pmf(rng, sizes, PMF_KINDS[i % len(PMF_KINDS)])
        m = int(rng.integers(0, n + 1))
        s, margin = verify_subset_lemma(p, m)
        assert len(s) == m and margin >= -1e-9
    assert time.perf_counter() - t0 < 30.0


@pytest.mark.criterion(9, "200 random DAGs, <= 8 nodes: max-flow H_e, H_v match brute force; H_v <= H_e")
def test_criterion_9_path_counts():
    rng = np.random.default_rng(9)
    for _ in range(200):
        net = random_dag(rng, max_nodes=8, density=float(rng.uniform(0.35, 0.9)))
        he, hv = len(max_edge_disjoint(net)), len(max_vertex_disjoint(net))
        assert he == brute_edge_disjoint(net)
        assert hv == brute_vertex_disjoint(net)
        assert hv <= he


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
