"""Closed-form capacities for unit-capacity 1-2-1 networks.

``unsecure_capacity`` is min(M, H_v).  The secure lower bound is
1 - K/H_e when M = 1 and min(M, H_v)(1 - K/H_v) otherwise; the secure upper
bound is min(M, H_e)(1 - K/H_e).  Everything is clamped at zero when K
reaches the relevant path count, and computed in exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .netmodel import Network
from .paths import edge_disjoint_count, vertex_disjoint_count


class NonUnitCapacity(ValueError):
    pass


class SchemeTag(Enum):
    M1 = "M1Scheme"
    MGT1 = "MGt1Scheme"
    NONE = "None"


def _require_unit(net: Network):
    if not net.is_unit():
        raise NonUnitCapacity("closed-form bounds need every edge capacity equal to 1")


def _check_k(k: int):
    if k < 0:
        raise ValueError(f"wiretap size must be >= 0, got {k}")


def _rate(width: int, paths: int, k: int) -> Fraction:
    # width * (1 - k/paths), clamped at 0
    if paths == 0 or k >= paths:
        return Fraction(0)
    return width * (1 - Fraction(k, paths))


def unsecure_capacity(net: Network) -> Fraction:
    _require_unit(net)
    return Fraction(min(net.beams, vertex_disjoint_count(net)))


def secure_lower_bound(net: Network, k: int, *, h_e: int | None = None, h_v: int | None = None) -> Fraction:
    _require_unit(net)
    _check_k(k)
    if net.beams == 1:
        h_e = edge_disjoint_count(net) if h_e is None else h_e
        return _rate(1, h_e, k)
    h_v = vertex_disjoint_count(net) if h_v is None else h_v
    return _rate(min(net.beams, h_v), h_v, k)


def secure_upper_bound(net: Network, k: int, *, h_e: int | None = None) -> Fraction:
    _require_unit(net)
    _check_k(k)
    h_e = edge_disjoint_count(net) if h_e is None else h_e
    return _rate(min(net.beams, h_e), h_e, k)


@dataclass(frozen=True)
class CapacityReport:
    h_e: int
    h_v: int
    beams: int
    wiretap: int
    unsecure: Fraction
    secure_lower: Fraction
    secure_upper: Fraction
    achievability_scheme: SchemeTag

    @property
    def exact(self) -> bool:
        return self.secure_lower == self.secure_upper

    def lines(self) -> list[str]:
        out = [
            f"h_e: {self.h_e}",
            f"h_v: {self.h_v}",
            f"beams: {self.beams}",
            f"wiretap: {self.wiretap}",
            f"unsecure: {self.unsecure}",
            f"secure_lower: {self.secure_lower}",
            f"secure_upper: {self.secure_upper}",
            f"exact: {'yes' if self.exact else 'no'}",
        ]
        if self.exact:
            out.append(f"capacity: {self.secure_lower}")
        out.append(f"scheme: {self.achievability_scheme.value}")
        return out


def capacity_report(net: Network, k: int) -> CapacityReport:
    _require_unit(net)
    _check_k(k)
    h_e = edge_disjoint_count(net)
    h_v = vertex_disjoint_count(net)
    unsecure = Fraction(min(net.beams, h_v))
    lower = secure_lower_bound(net, k, h_e=h_e, h_v=h_v)
    # The secure rate can never beat the unsecure capacity; only bites when
    # H_v < min(M, H_e) and K is small.
    upper = min(secure_upper_bound(net, k, h_e=h_e), unsecure)
    if lower == 0:
        tag = SchemeTag.NONE
    elif net.beams == 1:
        tag = SchemeTag.M1
    else:
        tag = SchemeTag.MGT1
    return CapacityReport(h_e, h_v, net.beams, k, unsecure, lower, upper, tag)
