"""Extremal polynomials b_{j,n}(T) and generalized Wolstenholme coefficients.

Two independent constructions are provided: the integer-matrix recipe
(:func:`extremal_polys_matrix`) and the Chinese-remainder characterization
(:func:`extremal_poly_crt`). The CRT route is the one other modules use.

``k`` may be an integer, a Fraction, or a :class:`Poly` in the variable k;
the same code serves numeric and symbolic evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .arith import IntegerMatrix, Poly, bareiss_det, integer_matrix_inverse, poly_crt
from .errors import DegreeAssertion

__all__ = [
    "WolstenholmeData",
    "CoefficientVector",
    "ExtremalPolynomial",
    "ExtensionPair",
    "coefficients_from_data",
    "coefficients_mod",
    "defb_matrix",
    "recipe_matrix",
    "extremal_polys_matrix",
    "extremal_poly_crt",
    "extremal_coefficients",
    "optimal_data",
    "extension_pair",
    "extension_pair_matrix",
    "matrix_Mnb",
    "matrix_Mnb_det",
]


def _strip(c: Sequence) -> tuple:
    out = list(c)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class WolstenholmeData:
    """Data [k, (c_0, c_1, ...), N]. Trailing zeros of ``c`` are implicit."""

    k: object
    c: tuple = ()
    N: int = 0

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be non-negative")
        cs = tuple(x if isinstance(x, Poly) else Fraction(x) for x in self.c)
        object.__setattr__(self, "c", _strip(cs))

    def c_at(self, i: int):
        return self.c[i] if i < len(self.c) else 0


@dataclass(frozen=True)
class CoefficientVector:
    b: tuple

    def __len__(self):
        return len(self.b)

    def __getitem__(self, j):
        return self.b[j]

    def __iter__(self):
        return iter(self.b)


@dataclass(frozen=True)
class ExtremalPolynomial:
    j: int
    n: int
    poly: Poly

    def __call__(self, k):
        return self.poly(k)

    def int_coefficients(self) -> list[int]:
        return self.poly.int_coefficients()


@dataclass(frozen=True)
class ExtensionPair:
    n: int
    k: object
    b_2n1: object
    b_2n2: object
    c_n_value: object = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "c_n_value", (self.n + 1) * self.b_2n1 + self.b_2n2)


def coefficients_from_data(data: WolstenholmeData, length: int | None = None) -> CoefficientVector:
    """b_j = (k-1)^j + c_j + (-1)^(j+1) sum_{i<=j} C(j,i) c_i for j < length.

    ``length`` defaults to N+1. Entries of ``c`` past index N are ignored, so
    b_j for j > N is computed as if c_{N+1} = c_{N+2} = ... = 0.
    """
    if length is None:
        length = data.N + 1
    k = data.k
    cs = [data.c_at(i) if i <= data.N else 0 for i in range(length)]
    out = []
    for j in range(length):
        s = 0
        for i in range(j + 1):
            if cs[i] != 0:
                s = s + math.comb(j, i) * cs[i]
        b = (k - 1) ** j + cs[j] + (s if j % 2 else -s)
        out.append(b)
    return CoefficientVector(tuple(out))


def coefficients_mod(data: WolstenholmeData, p: int, mod: int, length: int | None = None) -> list[int]:
    """b_j mod ``mod`` (a power of p) for j < length, without exact rationals.

    Every c_i up to N must be p-integral. Binomials come from Pascal rows
    reduced mod ``mod``, so the cost is O(length^2) small-integer operations.
    """
    if length is None:
        length = data.N + 1

    def red(x) -> int:
        x = Fraction(x)
        if x.denominator % p == 0:
            raise ValueError(f"{x} is not {p}-integral")
        return x.numerator * pow(x.denominator, -1, mod) % mod

    cs = [red(data.c_at(i)) if i <= data.N else 0 for i in range(length)]
    km1 = red(data.k) - 1
    row = [1]
    out = []
    for j in range(length):
        if j:
            row = [1] + [(row[i - 1] + row[i]) % mod for i in range(1, j)] + [1]
        s = sum(row[i] * cs[i] for i in range(j + 1) if cs[i])
        b = pow(km1, j, mod) + cs[j] + (s if j % 2 else -s)
        out.append(b % mod)
    return out


def defb_matrix(rows: range, cols: int) -> IntegerMatrix:
    """[(-1)^(i+1) C(i,j) + delta_ij] for i in ``rows``, 0 <= j < cols."""
    return IntegerMatrix.from_rows(
        [[(-1) ** (i + 1) * math.comb(i, j) + (i == j) for j in range(cols)] for i in rows]
    )


def recipe_matrix(n: int) -> IntegerMatrix:
    """M_n = [(-1)^(n+i) C(n+1+i, j)], 0 <= i, j < n."""
    return IntegerMatrix.from_rows(
        [[(-1) ** (n + i) * math.comb(n + 1 + i, j) for j in range(n)] for i in range(n)]
    )


@lru_cache(maxsize=None)
def _recipe_inverse(n: int) -> IntegerMatrix:
    return integer_matrix_inverse(recipe_matrix(n))


def _shifted_to_monomial(coeffs_in_s: Sequence) -> Poly:
    # sum a_i (T-1)^i -> monomial basis in T
    return Poly(coeffs_in_s).shift(-1)


def extremal_polys_matrix(n: int) -> list[ExtremalPolynomial]:
    """b_{0,n}, ..., b_{n,n} from the matrix recipe, computed in the (T-1)-power basis."""
    if n == 0:
        return [ExtremalPolynomial(0, 0, Poly.const(1))]
    minv = _recipe_inverse(n)
    D = defb_matrix(range(n + 1), n)
    # DM[j][l] multiplies S^(n+1+l), S = T - 1
    DM = [[sum(D[j, t] * minv[t, l] for t in range(n)) for l in range(n)] for j in range(n + 1)]
    out = []
    for j in range(n + 1):
        coeffs = [0] * (2 * n + 1)
        coeffs[j] += 1
        for l in range(n):
            coeffs[n + 1 + l] -= DM[j][l]
        poly = _shifted_to_monomial(coeffs)
        if not poly.is_integral():
            raise AssertionError(f"matrix recipe gave non-integral b_{j},{n}")
        out.append(ExtremalPolynomial(j, n, poly))
    return out


@lru_cache(maxsize=None)
def extremal_poly_crt(j: int, n: int) -> ExtremalPolynomial:
    """The unique polynomial with f = (T-1)^j mod (T-1)^(n+1) and f = (-T)^j mod T^(n+1).

    Solved with degree bound 2n+1; the top coefficient must vanish and all
    coefficients must be integers. For n < j <= 2n the answer is 0.
    """
    if j < 0 or j > 2 * n:
        raise ValueError(f"b_{{j,n}} is undefined for j={j}, n={n}")
    r1 = Poly.monomial(j, (-1) ** j).truncate(n + 1)
    r2 = Poly.monomial(j).truncate(n + 1)
    f = poly_crt(r1, n + 1, r2, n + 1)
    if f.degree > 2 * n:
        raise DegreeAssertion(f"b_{j},{n} has degree {f.degree} > {2 * n}")
    if not f.is_integral():
        raise DegreeAssertion(f"b_{j},{n} has non-integer coefficients: {f}")
    return ExtremalPolynomial(j, n, f)


def extremal_coefficients(n: int, k) -> list:
    """[b_{0,n}(k), ..., b_{n,n}(k)]; integers when ``k`` is an integer."""
    vals = [extremal_poly_crt(j, n).poly(k) for j in range(n + 1)]
    if isinstance(k, int):
        return [v.numerator for v in vals]
    return vals


def optimal_data(n: int, k) -> WolstenholmeData:
    """Integer data [k, (c_0..c_{n-1}), 2n] whose coefficients vanish at n+1..2n.

    c_i = 0 for i >= n; (c_0..c_{n-1}) solves M_n c = -((k-1)^(n+1), ..., (k-1)^(2n)).
    """
    if n == 0:
        return WolstenholmeData(k, (), 0)
    target = [-((k - 1) ** (n + 1 + i)) for i in range(n)]
    c = _recipe_inverse(n).apply(target)
    return WolstenholmeData(k, tuple(c), 2 * n)


def extension_pair(n: int, k) -> ExtensionPair:
    """b_{2n+1}, b_{2n+2} from the canonical optimal data extended by zeros."""
    data = optimal_data(n, k)
    b = coefficients_from_data(data, length=2 * n + 3)
    return ExtensionPair(n, k, b[2 * n + 1], b[2 * n + 2])


def extension_pair_matrix(n: int, k) -> ExtensionPair:
    """Same pair via (b_{2n+1}, b_{2n+2}) = v - A_n M_n^{-1} w."""
    v = [(k - 1) ** (2 * n + 1), (k - 1) ** (2 * n + 2)]
    if n == 0:
        return ExtensionPair(n, k, v[0], v[1])
    A = defb_matrix(range(2 * n + 1, 2 * n + 3), n)
    w = [(k - 1) ** (n + 1 + i) for i in range(n)]
    x = _recipe_inverse(n).apply(w)
    ax = A.apply(x)
    return ExtensionPair(n, k, v[0] - ax[0], v[1] - ax[1])


def matrix_Mnb(n: int, b: int) -> IntegerMatrix:
    return IntegerMatrix.from_rows([[math.comb(b + i, j) for j in range(n)] for i in range(n)])


def matrix_Mnb_det(n: int, b: int) -> int:
    return bareiss_det(matrix_Mnb(n, b))
