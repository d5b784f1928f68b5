import random
from fractions import Fraction

import pytest
import sympy

from wolstenholme.arith import Poly, padic_reduce
from wolstenholme.extremal import (
    WolstenholmeData,
    coefficients_from_data,
    coefficients_mod,
    extension_pair,
    extension_pair_matrix,
    extremal_coefficients,
    extremal_poly_crt,
    extremal_polys_matrix,
    matrix_Mnb_det,
    optimal_data,
)
from wolstenholme.mhs import binomial_from_data

T = Poly.var()

TABLE_1 = {
    (0, 0): Poly.const(1),
    (1, 1): T**2 - T,
    (2, 1): -T**4 + 2 * T**3 - T,
    (2, 2): T**4 - 2 * T**3 + T**2,
    (3, 2): -2 * T**6 + 6 * T**5 - 5 * T**4 + T**2,
    (3, 3): T**6 - 3 * T**5 + 3 * T**4 - T**3,
}


def _sympy_extremal(j, n):
    """Undetermined coefficients for conditions at T = 0 and T = 1."""
    x = sympy.Symbol("x")
    a = sympy.symbols(f"a0:{2 * n + 2}")
    f = sum(c * x**i for i, c in enumerate(a))
    g0 = sympy.expand((-x) ** j)
    g1 = sympy.expand((x - 1) ** j)
    eqs = []
    for i in range(n + 1):
        eqs.append(f.diff(x, i).subs(x, 0) - g0.diff(x, i).subs(x, 0))
        eqs.append(f.diff(x, i).subs(x, 1) - g1.diff(x, i).subs(x, 1))
    sol = sympy.solve(eqs, a, dict=True)[0]
    return Poly(int(sol[c]) for c in a)


def test_table_1_polynomials():
    for (n, j), poly in TABLE_1.items():
        assert extremal_poly_crt(j, n).poly == poly


def test_b13_corrected_entry():
    b = extremal_poly_crt(1, 3).poly
    assert b == 2 * T**6 - 6 * T**5 + 5 * T**4 - T
    assert b(2) == 14 and b(3) == 402


@pytest.mark.parametrize("n", range(0, 5))
def test_crt_against_sympy_oracle(n):
    for j in range(n + 1):
        assert extremal_poly_crt(j, n).poly == _sympy_extremal(j, n)


def test_zero_convention_beyond_n():
    for n in range(1, 6):
        for j in range(n + 1, 2 * n + 1):
            assert extremal_poly_crt(j, n).poly == Poly()
    with pytest.raises(ValueError):
        extremal_poly_crt(5, 2)


def test_matrix_examples():
    assert [e.poly for e in extremal_polys_matrix(0)] == [Poly.const(1)]
    assert [e.poly for e in extremal_polys_matrix(1)] == [Poly.const(1), T**2 - T]
    assert [e.poly for e in extremal_polys_matrix(2)] == [Poly.const(1), TABLE_1[2, 1], TABLE_1[2, 2]]


@pytest.mark.parametrize("n", range(0, 13))
def test_matrix_and_crt_agree(n):
    mat = extremal_polys_matrix(n)
    for j in range(n + 1):
        crt = extremal_poly_crt(j, n)
        assert mat[j].poly == crt.poly
        assert crt.poly.degree <= 2 * n and crt.poly.is_integral()


@pytest.mark.parametrize("n", range(0, 13))
def test_basic_properties(n):
    assert extremal_poly_crt(0, n).poly == Poly.const(1)
    assert extremal_poly_crt(n, n).poly == T**n * (T - 1) ** n
    for j in range(n + 1):
        _, r = extremal_poly_crt(j, n).poly.divmod(T**j * (T - 1) ** j)
        assert r == Poly()
    if n >= 1:
        assert extremal_poly_crt(1, n).poly + extremal_poly_crt(2, n).poly == T**2 - T


@pytest.mark.parametrize("n", range(1, 7))
def test_symmetric_combination(n):
    rng = random.Random(n)
    half = T + Fraction(1, 2)
    for _ in range(5):
        f = Poly()
        for i in range(n + 1):
            f = f + Fraction(rng.randint(-5, 5), rng.randint(1, 4)) * half ** (2 * i)
        assert f == f.shift(-1)(-T)  # f(T) = f(-1-T)
        g = Poly()
        for j in range(f.degree + 1):
            g = g + f[j] * extremal_poly_crt(j, n).poly
        assert g == f.shift(-1)


@pytest.mark.parametrize("n", range(0, 9))
def test_swap_symmetry(n):
    for k in range(-10, 11):
        assert extremal_coefficients(n, k) == extremal_coefficients(n, 1 - k)


def test_coefficients_from_data_examples():
    assert coefficients_from_data(WolstenholmeData(5, (), 3)).b == (1, 4, 16, 64)
    for k in range(-4, 6):
        b = coefficients_from_data(WolstenholmeData(k, ((k - 1) ** 2,), 2)).b
        assert b == (1, k * (k - 1), 0)
    b = coefficients_from_data(WolstenholmeData(2, (49, -18, 4), 6)).b
    assert b == (1, 14, -12, 8, 0, 0, 0)


def test_trailing_data_ignored():
    a = coefficients_from_data(WolstenholmeData(3, (1, 2), 1)).b
    b = coefficients_from_data(WolstenholmeData(3, (1, 2, 7, 9), 1)).b
    assert a == b and len(a) == 2


def test_optimal_data_examples():
    d = optimal_data(1, 2)
    assert [d.c_at(i) for i in range(3)] == [1, 0, 0]
    assert coefficients_from_data(d).b == (1, 2, 0)
    d = optimal_data(3, 2)
    assert [d.c_at(i) for i in range(5)] == [49, -18, 4, 0, 0]
    d = optimal_data(0, 7)
    assert d.c == () and coefficients_from_data(d).b == (1,)


@pytest.mark.parametrize("n", range(0, 8))
def test_optimal_data_reproduces_extremal_values(n):
    for k in (-3, 1, 2, 3, 10):
        d = optimal_data(n, k)
        assert all(Fraction(c).denominator == 1 for c in d.c)
        b = coefficients_from_data(d).b
        assert list(b[: n + 1]) == extremal_coefficients(n, k)
        assert all(x == 0 for x in b[n + 1 :])


def test_extension_pair_examples():
    for k in range(-5, 6):
        e = extension_pair(0, k)
        assert (e.b_2n1, e.b_2n2) == (k - 1, (k - 1) ** 2)
        assert e.c_n_value == k * (k - 1)
    assert extension_pair(1, 2).c_n_value == 4


@pytest.mark.parametrize("n", range(0, 9))
def test_extension_pair_symbolic(n):
    k = Poly.var()
    e = extension_pair(n, k)
    assert e.c_n_value == k ** (n + 1) * (k - 1) ** (n + 1)
    assert extension_pair_matrix(n, k) == e


def test_mnb_det_examples():
    assert matrix_Mnb_det(1, 7) == 1
    assert matrix_Mnb_det(4, 3) == 1
    assert matrix_Mnb_det(25, 25) == 1


def test_mnb_det_grid():
    for n in range(1, 26):
        for b in range(1, 26):
            assert matrix_Mnb_det(n, b) == 1


@pytest.mark.parametrize("n", range(0, 6))
def test_extremal_identity(n):
    k = Poly.var()
    d = optimal_data(n, k)
    assert binomial_from_data(k, [d.c_at(i) for i in range(n + 1)], n) == _binom_poly(n)


def _binom_poly(n):
    # C(k(n+1)-1, n) as a polynomial in k
    out = Poly.const(1)
    k = Poly.var()
    for i in range(n):
        out = out * (k * (n + 1) - 1 - i) * Fraction(1, i + 1)
    return out


def test_coefficients_mod_matches_exact_reduction():
    rng = random.Random(11)
    for p in (3, 5, 7, 13):
        for _ in range(20):
            N = rng.randint(0, 12)
            c = tuple(Fraction(rng.randint(-40, 40), rng.choice([1, 2, 4, 8])) for _ in range(N + 1))
            data = WolstenholmeData(rng.randint(-9, 9), c, N)
            exact = coefficients_from_data(data, length=N + 3).b
            got = coefficients_mod(data, p, p**4, length=N + 3)
            assert got == [padic_reduce(b, p, 4).value for b in exact]
