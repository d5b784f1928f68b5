"""Multiple harmonic sums H(lambda; n) and the elementary-symmetric family.

``H({1}^j; n)`` is the j-th elementary symmetric function of 1, 1/2, ..., 1/n.
Exact values use :class:`fractions.Fraction`; the mod p^m evaluation never
builds the exact rational, so it scales to large primes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .arith import PadicResidue, Poly
from .errors import ResourceLimit

__all__ = [
    "Composition",
    "MhsValue",
    "ElemMhsVectorMod",
    "DEFAULT_TUPLE_LIMIT",
    "mhs_exact",
    "elem_mhs_exact",
    "elem_mhs_row",
    "elem_mhs_mod",
    "elem_mhs_graded",
    "f_poly",
    "rep0_residual",
    "binomial_via_lehmer",
    "binomial_from_data",
]

DEFAULT_TUPLE_LIMIT = 10**7


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x < 1 for x in parts):
            raise ValueError(f"composition parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def repeat(cls, block: Sequence[int], a: int) -> "Composition":
        """The composition {block}^a: ``a`` concatenated copies of ``block``."""
        return cls(tuple(block) * a)

    @property
    def depth(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __str__(self):
        return "{" + ",".join(map(str, self.parts)) + "}"


@dataclass(frozen=True)
class MhsValue:
    composition: Composition
    upper_limit: int
    value: Fraction

    @classmethod
    def compute(cls, composition: Composition, n: int) -> "MhsValue":
        return cls(composition, n, mhs_exact(composition, n))


@lru_cache(maxsize=None)
def _mhs_suffix(parts: tuple[int, ...], n: int) -> Fraction:
    # sum over n >= i_1 > ... > i_j >= 1 of prod i_t^-parts[t]
    if not parts:
        return Fraction(1)
    j = len(parts)
    if n < j:
        return Fraction(0)
    head, tail = parts[0], parts[1:]
    total = Fraction(0)
    for i in range(j, n + 1):
        inner = _mhs_suffix(tail, i - 1)
        if inner:
            total += inner / i**head
    return total


def mhs_exact(composition: Composition | Sequence[int], n: int, *, limit: int = DEFAULT_TUPLE_LIMIT) -> Fraction:
    """Exact H(lambda; n) by nested summation.

    This is the reference oracle. It refuses inputs whose index-tuple count
    C(n, depth) exceeds ``limit``.
    """
    if not isinstance(composition, Composition):
        composition = Composition(tuple(composition))
    if n < 0:
        raise ValueError("upper limit must be non-negative")
    j = composition.depth
    if j == 0:
        return Fraction(1)
    if n < j:
        return Fraction(0)
    count = math.comb(n, j)
    if count > limit:
        raise ResourceLimit(f"H({composition}; {n}) sums {count} index tuples (limit {limit})")
    return _mhs_suffix(composition.parts, n)


def elem_mhs_exact(j: int, n: int) -> Fraction:
    """H({1}^j; n) via the truncated product prod_i (1 + T/i) mod T^(j+1)."""
    if j < 0 or j > n:
        return Fraction(0)
    e = [Fraction(1)] + [Fraction(0)] * j
    for i in range(1, n + 1):
        inv = Fraction(1, i)
        for t in range(min(i, j), 0, -1):
            e[t] += inv * e[t - 1]
    return e[j]


@lru_cache(maxsize=256)
def elem_mhs_row(n: int) -> tuple[Fraction, ...]:
    """All of H({1}^j; n) for j = 0..n, exactly.

    Uses the integer product prod_{i<=n} (1 + i*T) (unsigned Stirling numbers
    of the first kind): e_j(1/1..1/n) = e_{n-j}(1..n) / n!.
    """
    s = [1]
    for i in range(1, n + 1):
        nxt = s + [0]
        for t in range(len(s), 0, -1):
            nxt[t] += i * s[t - 1]
        s = nxt
    fact = math.factorial(n)
    return tuple(Fraction(s[n - j], fact) for j in range(n + 1))


@dataclass(frozen=True)
class ElemMhsVectorMod:
    """H({1}^j; p-1) mod p^m for j = 0..jmax."""

    p: int
    m: int
    values: tuple[int, ...]

    @property
    def jmax(self) -> int:
        return len(self.values) - 1

    @property
    def entries(self) -> tuple[PadicResidue, ...]:
        return tuple(PadicResidue(self.p, self.m, v) for v in self.values)

    def __getitem__(self, j: int) -> PadicResidue:
        return PadicResidue(self.p, self.m, self.values[j])


# widest vector computed so far per (p, m); narrower requests are slices
_widest: dict[tuple[int, int], tuple[int, ...]] = {}
_WIDEST_LIMIT = 4096


def elem_mhs_mod(p: int, m: int, jmax: int) -> ElemMhsVectorMod:
    """H({1}^j; p-1) mod p^m for j <= jmax in O(p * jmax) ring operations.

    Runs the recurrence e <- e + (1/i) * shift(e) for i = 1..p-1 in Z/p^m.
    Entries with j >= p are zero.
    """
    if jmax < 0:
        raise ValueError("jmax must be non-negative")
    width = min(jmax, p - 1)
    have = _widest.get((p, m))
    if have is None or len(have) <= width:
        have = _elem_mhs_vector(p, m, width)
        if len(_widest) >= _WIDEST_LIMIT:
            _widest.clear()
        _widest[(p, m)] = have
    values = have[: width + 1] + (0,) * (jmax - width)
    return ElemMhsVectorMod(p, m, values)


def _elem_mhs_vector(p: int, m: int, width: int) -> tuple[int, ...]:
    mod = p**m
    e = [1] + [0] * width
    if width == 1:
        # only the harmonic number: sum of inverses
        s = 0
        for i in range(1, p):
            s += pow(i, -1, mod)
        e[1] = s % mod
    elif width > 1:
        for i in range(1, p):
            inv = pow(i, -1, mod)
            for t in range(min(i, width), 0, -1):
                e[t] = (e[t] + inv * e[t - 1]) % mod
    return tuple(e)


@lru_cache(maxsize=1024)
def elem_mhs_graded(p: int, E: int, jmax: int) -> tuple[int, ...]:
    """H({1}^j; p-1) mod p^(E-j) for j <= jmax < E.

    This is the precision p^j H({1}^j; p-1) needs mod p^E, and it drops with
    j, so the wide entries are cheap. Entry j of the recurrence feeds only
    entries above it, which need no more precision than it has.
    """
    if not 0 <= jmax < E:
        raise ValueError(f"need 0 <= jmax < E, got jmax={jmax}, E={E}")
    width = min(jmax, p - 1)
    mods = [p ** (E - t) for t in range(width + 1)]
    e = [1] + [0] * width
    top_mod = mods[0]
    for i in range(1, p):
        inv = pow(i, -1, top_mod)
        for t in range(min(i, width), 0, -1):
            e[t] = (e[t] + inv * e[t - 1]) % mods[t]
    return tuple(e) + (0,) * (jmax - width)


def f_poly(n: int) -> Poly:
    """f_n(T) = C((n+1)(T+1) - 1, n), with coefficient of T^j = (n+1)^j H({1}^j; n)."""
    row = elem_mhs_row(n)
    return Poly((n + 1) ** j * row[j] for j in range(n + 1))


def rep0_residual(n: int, j: int) -> Fraction:
    """Left side of the linear relation among (n+1)^i H({1}^i; n); always 0."""
    if j > n:
        return Fraction(0)
    row = elem_mhs_row(n)
    total = (n + 1) ** j * row[j]
    for i in range(j, n + 1):
        sign = -1 if (n + i) % 2 == 0 else 1
        total += sign * math.comb(i, j) * (n + 1) ** i * row[i]
    return total


def binomial_via_lehmer(mm: int, kk: int) -> Fraction:
    """C(mm, kk) for any integer mm, via Lehmer's identity.

    The identity reads C(m-1, k) = (-1)^k sum_j (-1)^j m^j H({1}^j; k), so
    the sum is taken at m = mm + 1.
    """
    if kk < 0:
        raise ValueError("kk must be non-negative")
    row = elem_mhs_row(kk)
    m = Fraction(mm + 1)
    total = sum(((-1) ** j * m**j * row[j] for j in range(kk + 1)), Fraction(0))
    return total if kk % 2 == 0 else -total


def binomial_from_data(k, c: Sequence, n: int):
    """Right side of the identity C(k(n+1)-1, n) = sum_j b_j (n+1)^j H({1}^j; n).

    ``b_j = (k-1)^j + c_j + (-1)^(n+j+1) sum_{i<=j} C(j,i) c_i``. Works for
    rational ``k``/``c`` and for polynomial-valued ones alike.
    """
    row = elem_mhs_row(n)
    cs = list(c) + [0] * max(0, n + 1 - len(c))
    total = 0
    for j in range(n + 1):
        s = sum((math.comb(j, i) * cs[i] for i in range(j + 1)), 0)
        sign = -1 if (n + j) % 2 == 0 else 1
        b = (k - 1) ** j + cs[j] + sign * s
        total = total + b * (n + 1) ** j * row[j]
    return total
