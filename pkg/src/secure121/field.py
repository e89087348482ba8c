"""Arithmetic in the binary extension fields GF(2^m), m in {1, 4, 8, 16}.

Scalars are plain ints in ``[0, q)``.  Matrices are 2-D numpy integer arrays;
the vectorised helpers (:meth:`GF.vmul`, :func:`rank`, :func:`solve`, ...)
work on whole rows at once so the coding and secrecy layers stay fast enough
in pure Python.

Fields with m <= 8 multiply through log/antilog tables.  GF(2^16) uses a
carry-less shift-and-reduce loop, vectorised over numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SUPPORTED_DEGREES = (1, 4, 8, 16)

# Fixed per degree so transcripts are bit-reproducible.
DEFAULT_POLYNOMIALS = {
    1: 0b11,  # x + 1
    4: 0x13,  # x^4 + x + 1
    8: 0x11B,  # x^8 + x^4 + x^3 + x + 1
    16: 0x1002B,  # x^16 + x^5 + x^3 + x + 1
}


class FieldError(ValueError):
    pass


class FieldMismatch(FieldError):
    pass


class NoSolution(FieldError):
    """The linear system has no solution (inconsistent right-hand side)."""


def _poly_degree(p: int) -> int:
    return p.bit_length() - 1


def _poly_mod(a: int, b: int) -> int:
    db = _poly_degree(b)
    while a and _poly_degree(a) >= db:
        a ^= b << (_poly_degree(a) - db)
    return a


def is_irreducible(poly: int) -> bool:
    """Exhaustive trial division over GF(2)[x] by every polynomial of degree <= m/2."""
    m = _poly_degree(poly)
    if m < 1:
        return False
    if m == 1:
        return True
    for d in range(2, 1 << (m // 2 + 1)):
        if _poly_mod(poly, d) == 0:
            return False
    return True


def _clmul_reduce(a: int, b: int, m: int, poly: int) -> int:
    r = 0
    top = 1 << m
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return r


@dataclass(frozen=True)
class FieldSpec:
    m: int
    reduction_polynomial: int

    @property
    def order(self) -> int:
        return 1 << self.m


class GF:
    """The field GF(2^m) with a fixed reduction polynomial.

    Instances are cached per (m, poly) by :func:`gf`; construct through that
    helper so equal fields compare identical.
    """

    def __init__(self, m: int, poly: int | None = None):
        if m not in SUPPORTED_DEGREES:
            raise FieldError(f"unsupported extension degree {m}; use one of {SUPPORTED_DEGREES}")
        if poly is None:
            poly = DEFAULT_POLYNOMIALS[m]
        if _poly_degree(poly) != m or not is_irreducible(poly):
            raise FieldError(f"polynomial {poly:#x} is not irreducible of degree {m}")
        self.spec = FieldSpec(m, poly)
        self.m = m
        self.poly = poly
        self.order = 1 << m
        self._exp = self._log = None
        if 1 < m <= 8:
            self._build_tables()

    def _build_tables(self):
        q = self.order
        # 0x11B has no primitive x, so search for the smallest generator.
        for g in range(2, q):
            exp = [1] * (2 * q)
            x = 1
            seen = {1}
            ok = True
            for i in range(1, q - 1):
                x = _clmul_reduce(x, g, self.m, self.poly)
                if x in seen:
                    ok = False
                    break
                seen.add(x)
                exp[i] = x
            if ok:
                break
        else:  # pragma: no cover - impossible for an irreducible poly
            raise FieldError("no generator found")
        for i in range(q - 1, 2 * q):
            exp[i] = exp[i - (q - 1)]
        log = [0] * q
        for i in range(q - 1):
            log[exp[i]] = i
        self.generator = g
        self._exp = np.array(exp, dtype=np.int64)
        self._log = np.array(log, dtype=np.int64)
        self._exp_list = exp
        self._log_list = log

    def __repr__(self):
        return f"GF(2^{self.m}, poly={self.poly:#x})"

    def __call__(self, value: int) -> "Element":
        return Element(self, self.check(value))

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise FieldError(f"{a} is not an element of {self!r}")
        return a

    # -- scalar arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return 1
        if self._exp is not None:
            return self._exp_list[self._log_list[a] + self._log_list[b]]
        return _clmul_reduce(a, b, self.m, self.poly)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self._exp is not None:
            return self._exp_list[(self.order - 1 - self._log_list[a]) % (self.order - 1)]
        # a^(q-2) = a^-1 in the multiplicative group
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- vectorised arithmetic ---------------------------------------------

    def vmul(self, a, b) -> np.ndarray:
        """Elementwise product of broadcastable integer arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return a & b
        if self._exp is not None:
            a, b = np.broadcast_arrays(a, b)
            out = self._exp[self._log[a] + self._log[b]]
            return np.where((a == 0) | (b == 0), 0, out)
        a, b = np.broadcast_arrays(a, b)
        a = a.copy()
        b = b.copy()
        r = np.zeros(a.shape, dtype=np.int64)
        top = 1 << self.m
        for _ in range(self.m):
            r ^= np.where(b & 1, a, 0)
            b >>= 1
            a <<= 1
            a ^= np.where(a & top, self.poly, 0)
        return r

    def random(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.integers(0, self.order, size=size, dtype=np.int64)


@lru_cache(maxsize=None)
def gf(m: int, poly: int | None = None) -> GF:
    return GF(m, poly)


def smallest_field(min_order: int) -> GF:
    """Smallest supported field with at least ``min_order`` elements."""
    for m in SUPPORTED_DEGREES:
        if (1 << m) >= min_order:
            return gf(m)
    raise FieldError(f"no supported field has {min_order} elements")


@dataclass(frozen=True)
class Element:
    """A field element that refuses to mix with elements of another field."""

    field: GF
    value: int

    def _other(self, other: "Element") -> int:
        if not isinstance(other, Element):
            return NotImplemented
        if other.field is not self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return other.value

    def __add__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Element(self.field, self.value ^ v)

    __sub__ = __add__

    def __mul__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Element(self.field, self.field.mul(self.value, v))

    def __truediv__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Element(self.field, self.field.div(self.value, v))

    def inverse(self) -> "Element":
        return Element(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value


# -- matrices ---------------------------------------------------------------


def as_matrix(rows, cols: int | None = None) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(0, cols or 0)
    if a.ndim != 2:
        raise FieldError("matrix must be two-dimensional")
    return a


def matmul(field: GF, a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise FieldError(f"shape mismatch {a.shape} x {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out ^= field.vmul(a[:, k : k + 1], b[k : k + 1, :])
    return out


def row_reduce(field: GF, a, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; pivots are searched in the first ``ncols`` columns."""
    a = as_matrix(a).copy()
    rows, cols = a.shape
    if ncols is None:
        ncols = cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = int(a[r, c])
        if piv != 1:
            a[r] = field.vmul(field.inv(piv), a[r])
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] ^= field.vmul(col[mask][:, None], a[r][None, :])
        pivots.append(c)
        r += 1
    return a, pivots


def rank(field: GF, a) -> int:
    a = as_matrix(a)
    if a.size == 0:
        return 0
    return len(row_reduce(field, a)[1])


def solve(field: GF, a, b) -> np.ndarray:
    """Solve ``a @ x = b``; ``b`` may be a vector or a matrix of right-hand sides.

    Raises :class:`NoSolution` when the system is inconsistent or the solution
    is not unique (``a`` has a nontrivial kernel).
    """
    a = as_matrix(a)
    b_arr = np.asarray(b, dtype=np.int64)
    vector = b_arr.ndim == 1
    if vector:
        b_arr = b_arr[:, None]
    if a.shape[0] != b_arr.shape[0]:
        raise FieldError(f"shape mismatch {a.shape} vs {b_arr.shape}")
    n = a.shape[1]
    red, pivots = row_reduce(field, np.hstack([a, b_arr]), ncols=n)
    r = len(pivots)
    if np.any(red[r:, n:]):
        raise NoSolution("inconsistent system")
    if r < n:
        raise NoSolution(f"system is underdetermined (rank {r} < {n} unknowns)")
    x = red[:n, n:]
    return x[:, 0] if vector else x


def inverse(field: GF, a) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise FieldError("matrix is not square")
    return solve(field, a, np.eye(a.shape[0], dtype=np.int64))
