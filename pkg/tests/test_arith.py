import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from wolstenholme.arith import (
    IntegerMatrix,
    PadicResidue,
    Poly,
    bareiss_det,
    int_binomial,
    integer_matrix_solve,
    is_prime,
    mod_inverse,
    padic_reduce,
    padic_valuation,
    poly_crt,
    primes_between,
)
from wolstenholme.errors import NotInvertible, NotPIntegral, NotUnimodular
from wolstenholme.extremal import recipe_matrix

T = Poly.var()
SMALL_PRIMES = [3, 5, 7, 11]


def test_mod_inverse_examples():
    assert mod_inverse(1, 7, 3).value == 1
    r = mod_inverse(2, 5, 3)
    assert r.value == 63
    assert 2 * 63 % 125 == 1
    with pytest.raises(NotInvertible):
        mod_inverse(5, 5, 2)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_mod_inverse_all_units(p):
    for m in range(1, 9):
        mod = p**m
        for a in random.Random(p * 100 + m).sample(range(1, mod), min(200, mod - 1)):
            if a % p:
                assert a * mod_inverse(a, p, m).value % mod == 1


def _valuation_oracle(q: Fraction, p: int):
    f = sympy.factorint(q.numerator)
    g = sympy.factorint(q.denominator)
    return f.get(p, 0) - g.get(p, 0)


def test_padic_valuation_examples():
    assert padic_valuation(0, 7) == math.inf
    q = Fraction(35, 24)
    assert padic_valuation(q, 5) == 1 == _valuation_oracle(q, 5)
    assert padic_valuation(q, 2) == -3 == _valuation_oracle(q, 2)


@given(st.fractions().filter(lambda q: q != 0), st.sampled_from([2, 3, 5, 7]))
def test_padic_valuation_matches_factorization(q, p):
    assert padic_valuation(q, p) == _valuation_oracle(q, p)


def test_padic_reduce_examples():
    assert padic_reduce(1, 7, 4).value == 1
    r = padic_reduce(Fraction(35, 24), 5, 3)
    assert (24 * r.value - 35) % 125 == 0
    with pytest.raises(NotPIntegral):
        padic_reduce(Fraction(1, 5), 5, 2)


def _random_p_integral(rng, p):
    num = rng.randint(-10**6, 10**6)
    den = rng.randint(1, 10**4)
    while den % p == 0:
        den += 1
    return Fraction(num, den)


@pytest.mark.parametrize("p", SMALL_PRIMES)
@pytest.mark.parametrize("m", range(1, 7))
def test_padic_reduce_is_ring_homomorphism(p, m):
    rng = random.Random(p * 1000 + m)
    for _ in range(1000):
        a, b = _random_p_integral(rng, p), _random_p_integral(rng, p)
        ra, rb = padic_reduce(a, p, m), padic_reduce(b, p, m)
        assert padic_reduce(a + b, p, m) == ra + rb
        assert padic_reduce(a * b, p, m) == ra * rb


def test_residue_ring_mismatch():
    with pytest.raises(ValueError):
        PadicResidue(5, 2, 1) + PadicResidue(5, 3, 1)


def test_residue_valuation_saturates():
    assert PadicResidue(5, 3, 0).valuation() == 3
    assert PadicResidue(5, 3, 50).valuation() == 2


def test_int_binomial():
    assert int_binomial(10, 0) == 1
    assert int_binomial(9, 4) == 126 == 9 * 8 * 7 * 6 // 24
    assert int_binomial(3, 5) == 0


def test_poly_arithmetic_and_division():
    f = (T - 1) ** 3 * (T + 2)
    q, r = f.divmod((T - 1) ** 2)
    assert r == Poly()
    assert q == (T - 1) * (T + 2)
    assert f(2) == 4
    assert f.shift(1) == T**3 * (T + 3)
    assert str(Poly([0, -1, 0, 0, 5, -6, 2])) == "2*T^6 - 6*T^5 + 5*T^4 - T"


def _crt_oracle(r1, e1, r2, e2):
    """Undetermined coefficients solved by sympy."""
    x = sympy.Symbol("x")
    cs = sympy.symbols(f"a0:{e1 + e2}")
    f = sum(c * x**i for i, c in enumerate(cs))
    eqs = []
    for i in range(e1):
        eqs.append(sympy.Eq(f.diff(x, i).subs(x, 0) / math.factorial(i), sympy.Rational(r1[i])))
    for i in range(e2):
        eqs.append(sympy.Eq(f.diff(x, i).subs(x, 1) / math.factorial(i), sympy.Rational(r2[i])))
    sol = sympy.solve(eqs, cs, dict=True)[0]
    return Poly(Fraction(int(sympy.numer(sol[c])), int(sympy.denom(sol[c]))) for c in cs)


def test_poly_crt_examples():
    assert poly_crt(Poly.const(1), 4, Poly.const(1), 4) == Poly.const(1)
    assert poly_crt(-T, 2, T, 2) == T**2 - T
    expected = Poly([0, -1, 0, 0, 5, -6, 2])
    got = poly_crt(-T, 4, T, 4)
    assert got == expected == _crt_oracle(-T, 4, T, 4)
    assert got(2) == 14 and got(3) == 402


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 5),
    st.integers(1, 5),
    st.lists(st.fractions(max_denominator=20), min_size=5, max_size=5),
    st.lists(st.fractions(max_denominator=20), min_size=5, max_size=5),
)
def test_poly_crt_residues(e1, e2, c1, c2):
    r1, r2 = Poly(c1[:e1]), Poly(c2[:e2])
    f = poly_crt(r1, e1, r2, e2)
    assert f.degree < e1 + e2
    assert f.truncate(e1) == r1
    assert f.shift(1).truncate(e2) == r2


def test_integer_matrix_solve():
    v = [3, -4, 5]
    assert integer_matrix_solve(IntegerMatrix.identity(3), v) == v
    with pytest.raises(NotUnimodular):
        integer_matrix_solve(IntegerMatrix.from_rows([[2, 0], [0, 1]]), [1, 1])


@pytest.mark.parametrize("n", range(1, 9))
def test_recipe_matrix_solve_matches_rational_elimination(n):
    M = recipe_matrix(n)
    rng = random.Random(n)
    v = [rng.randint(-1000, 1000) for _ in range(n)]
    x = integer_matrix_solve(M, v)
    assert M.apply(x) == v
    sol = sympy.Matrix(M.to_rows()).LUsolve(sympy.Matrix(v))
    assert [int(s) for s in sol] == x and all(s.is_integer for s in sol)


def test_recipe_matrix_1_is_minus_one():
    # M_1 = [(-1)^1 C(2, 0)]
    assert recipe_matrix(1).to_rows() == [[-1]]
    assert integer_matrix_solve(recipe_matrix(1), [7]) == [-7]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_sympy(rows):
    assert bareiss_det(IntegerMatrix.from_rows(rows)) == sympy.Matrix(rows).det()


def test_primes():
    assert primes_between(1, 30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert all(is_prime(p) for p in primes_between(2, 2000))
    assert sum(is_prime(n) for n in range(2001)) == len(primes_between(0, 2000))
