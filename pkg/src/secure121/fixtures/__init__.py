"""Reference networks from the figure examples, shipped as ``.net`` files."""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from ..coding import DEFAULT_PACKET_LEN, CodingScheme, Mode, linear_scheme
from ..field import GF
from ..netmodel import Network, parse_network, serialize_network, unit_diamond
from ..paths import max_edge_disjoint

EXAMPLE3_CAPS = (Fraction(3), Fraction(2), Fraction(2), Fraction(1))

# Network-specific converse for fig1b with M = 2, K = 1: tapping the single
# out-edge of middle node 2 leaves only node 1's one symbol per use.
FIG1B_TIGHT_UPPER_BOUND = Fraction(1)


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def fig1a() -> Network:
    return parse_network(fixture_text("fig1a.net"))


def fig1b() -> Network:
    return parse_network(fixture_text("fig1b.net"))


def diamond_unit_text(n: int, beams: int = 1) -> str:
    """``.net`` text for the N-relay unit diamond."""
    return f"# unit diamond, N = {n}\n" + serialize_network(unit_diamond(n, beams))


def example1_scheme(field: GF | None = None, packet_len: int = DEFAULT_PACKET_LEN) -> CodingScheme:
    """Two-slot fig1a schedule: p1 and p4 together, then p2 and p3; one key.

    Four packets cross in two slots and Eve on any single edge sees exactly one
    of them, so three are messages.
    """
    net = fig1a()
    paths = max_edge_disjoint(net).paths  # p1..p4, top to bottom
    slot_map = [[(0, 0), (3, 1)], [(1, 2), (2, 3)]]
    return linear_scheme(net, paths, slot_map, num_keys=1, wiretap=1, field=field,
                         packet_len=packet_len, mode=Mode.CUSTOM)
