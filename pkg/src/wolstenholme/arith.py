"""Exact arithmetic: rationals, residues mod p^m, polynomials, integer matrices.

Rationals are :class:`fractions.Fraction` throughout. Polynomials are dense,
immutable, ascending-degree coefficient tuples. Nothing in here uses floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import NotInvertible, NotPIntegral, NotUnimodular

__all__ = [
    "PadicResidue",
    "Poly",
    "IntegerMatrix",
    "mod_inverse",
    "padic_valuation",
    "int_valuation",
    "padic_reduce",
    "int_binomial",
    "poly_crt",
    "integer_matrix_solve",
    "integer_matrix_inverse",
    "bareiss_det",
    "primes_between",
    "is_prime",
]


# ---------------------------------------------------------------------------
# Z / p^m
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PadicResidue:
    """An element of Z/p^m with canonical representative in [0, p^m)."""

    p: int
    m: int
    value: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"exponent must be positive, got {self.m}")
        mod = self.p**self.m
        if not 0 <= self.value < mod:
            object.__setattr__(self, "value", self.value % mod)

    @classmethod
    def of(cls, x: int | Fraction, p: int, m: int) -> "PadicResidue":
        if isinstance(x, int):
            return cls(p, m, x % p**m)
        return padic_reduce(x, p, m)

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def _coerce(self, other) -> int:
        if isinstance(other, PadicResidue):
            if (other.p, other.m) != (self.p, self.m):
                raise ValueError(
                    f"residue ring mismatch: Z/{self.p}^{self.m} vs Z/{other.p}^{other.m}"
                )
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return padic_reduce(other, self.p, self.m).value
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return PadicResidue(self.p, self.m, (self.value + v) % self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return PadicResidue(self.p, self.m, (self.value - v) % self.modulus)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return PadicResidue(self.p, self.m, (v - self.value) % self.modulus)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return PadicResidue(self.p, self.m, (self.value * v) % self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicResidue(self.p, self.m, (-self.value) % self.modulus)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicResidue(self.p, self.m, pow(self.value, e, self.modulus))

    def inverse(self) -> "PadicResidue":
        return mod_inverse(self.value, self.p, self.m)

    def valuation(self) -> int:
        """v_p of the representative, saturated at m (zero residue gives m)."""
        if self.value == 0:
            return self.m
        return min(int_valuation(self.value, self.p), self.m)

    def is_zero(self) -> bool:
        return self.value == 0

    def reduce(self, m: int) -> "PadicResidue":
        if m > self.m:
            raise ValueError(f"cannot lift a residue mod {self.p}^{self.m} to exponent {m}")
        return PadicResidue(self.p, m, self.value % self.p**m)

    def __int__(self) -> int:
        return self.value


def mod_inverse(a: int, p: int, m: int) -> PadicResidue:
    """Inverse of ``a`` in Z/p^m."""
    if a % p == 0:
        raise NotInvertible(f"{a} is divisible by {p}")
    mod = p**m
    return PadicResidue(p, m, pow(a % mod, -1, mod))


def int_valuation(a: int, p: int) -> int | float:
    if a == 0:
        return math.inf
    a = abs(a)
    v = 0
    # strip large powers first; matters for p^m-sized inputs
    pk, step = p, 1
    while a % pk == 0:
        a //= pk
        v += step
        pk, step = pk * pk, step * 2
    while a % p == 0:
        a //= p
        v += 1
    return v


def padic_valuation(q: Rational | int, p: int) -> int | float:
    """v_p(q) = v_p(numerator) - v_p(denominator); ``math.inf`` for zero."""
    q = Fraction(q)
    if q == 0:
        return math.inf
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


def padic_reduce(q: Rational | int, p: int, m: int) -> PadicResidue:
    q = Fraction(q)
    mod = p**m
    den = q.denominator
    if den % p == 0:
        raise NotPIntegral(f"{q} has negative {p}-adic valuation")
    return PadicResidue(p, m, q.numerator * pow(den, -1, mod) % mod)


def int_binomial(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError("int_binomial takes non-negative arguments")
    return math.comb(a, b)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def _as_coeff(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"polynomial coefficient must be rational, got {type(x).__name__}")


class Poly:
    """Dense univariate polynomial with rational coefficients, ascending degree.

    Trailing zeros are stripped, so the zero polynomial has no coefficients and
    degree -1. Instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_coeff(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Poly":
        return cls([0] * degree + [c])

    @classmethod
    def var(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Rational)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.const(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        """Evaluate by Horner's rule; ``x`` may be a number or another Poly."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if isinstance(acc, int):
            return Fraction(acc)
        return acc

    def truncate(self, e: int) -> "Poly":
        """Reduce modulo T^e."""
        return Poly(self.coeffs[:e])

    def shift(self, a) -> "Poly":
        """Return f(T + a)."""
        out: list[Fraction] = []
        a = _as_coeff(a)
        # Horner with the linear polynomial (T + a), done on raw lists
        for c in reversed(self.coeffs):
            nxt = [Fraction(0)] * (len(out) + 1)
            for i, v in enumerate(out):
                nxt[i] += v * a
                nxt[i + 1] += v
            nxt[0] += c
            out = nxt
        return Poly(out)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.coeffs[-1]
        if len(rem) <= d:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            q = rem[i] / lead
            quot[i - d] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[i - d + j] -= q * b
        return Poly(quot), Poly(rem[:d])

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coefficients(self) -> list[int]:
        if not self.is_integral():
            raise ValueError(f"polynomial {self} has non-integer coefficients")
        return [c.numerator for c in self.coeffs]

    def format(self, var: str = "T") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self.format()})"

    __str__ = format


def poly_crt(r1: Poly, e1: int, r2: Poly, e2: int) -> Poly:
    """Solve f = r1 mod T^e1, f = r2 mod (T-1)^e2 with deg f < e1 + e2.

    ``r2`` is given in the shifted basis: its coefficient i multiplies (T-1)^i.
    """
    r1 = r1.truncate(e1)
    r2 = r2.truncate(e2)
    # f = r1 + T^e1 * g. In S = T - 1 this reads
    #   g(S+1) = (r2(S) - r1(S+1)) * (1+S)^(-e1)  mod S^e2
    rhs = (r2 - r1.shift(1)).truncate(e2)
    inv = Poly(Fraction(math.comb(e1 + i - 1, i) * (-1) ** i) for i in range(e2))
    h = (rhs * inv).truncate(e2)
    return r1 + Poly.monomial(e1) * h.shift(-1)


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def apply(self, v: Sequence):
        """Matrix-vector product; vector entries may be any ring elements."""
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} != {self.cols} columns")
        out = []
        for i in range(self.rows):
            acc = 0
            for j in range(self.cols):
                a = self[i, j]
                if a:
                    acc = acc + a * v[j]
            out.append(acc)
        return out

    def det(self) -> int:
        return bareiss_det(self)


def bareiss_det(M: IntegerMatrix) -> int:
    """Fraction-free Gaussian elimination determinant."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_matrix_inverse(M: IntegerMatrix) -> IntegerMatrix:
    """Inverse of a unimodular matrix, computed over Q and checked integral."""
    d = bareiss_det(M)
    if abs(d) != 1:
        raise NotUnimodular(f"determinant is {d}")
    n = M.rows
    aug = [[Fraction(x) for x in M.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise AssertionError("inverse of a unimodular matrix came out non-integral")
    return IntegerMatrix.from_rows([[x.numerator for x in row] for row in inv])


def integer_matrix_solve(M: IntegerMatrix, v: Sequence) -> list:
    """Solve M x = v exactly for unimodular M.

    Entries of ``v`` may be integers or any ring elements supporting integer
    scaling and addition (polynomials, for symbolic right-hand sides).
    """
    if M.rows != M.cols:
        raise NotUnimodular("matrix is not square")
    return integer_matrix_inverse(M).apply(v)


# ---------------------------------------------------------------------------
# Primes
# ---------------------------------------------------------------------------


def primes_between(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi (sieve of Eratosthenes)."""
    if hi < 2 or hi < lo:
        return []
    sieve = bytearray(b"\x01") * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for q in range(2, math.isqrt(hi) + 1):
        if sieve[q]:
            sieve[q * q :: q] = bytes(len(range(q * q, hi + 1, q)))
    return [q for q in range(max(lo, 2), hi + 1) if sieve[q]]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True
