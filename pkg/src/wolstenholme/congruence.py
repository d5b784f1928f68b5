"""Verification engine for binomial-coefficient congruences mod powers of p.

Every check computes both sides in Z/p^E with E a couple of powers above the
exponent the theorem promises, so the measured valuation of the difference
can exceed the requirement and exceptional congruences become visible.
Exact-equality cases are additionally evaluated over Q.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .arith import PadicResidue, int_valuation, padic_reduce, padic_valuation, primes_between
from .bernoulli import DEFAULT_INDEX_BOUND, bernoulli_exact, bernoulli_mod_p, is_exceptional_bernoulli
from .errors import (
    BadPrime,
    ClassificationMismatch,
    PrimeOutOfRange,
    PrimeTooSmall,
    UnsupportedPrime,
)
from .extremal import WolstenholmeData, coefficients_from_data, coefficients_mod, extremal_coefficients
from .mhs import elem_mhs_graded, elem_mhs_mod, elem_mhs_row

__all__ = [
    "DEFAULT_SLACK",
    "NAMED_TAGS",
    "CongruenceSpec",
    "CongruenceReport",
    "ErrorTermReport",
    "ExceptionalClass",
    "binom_kp_mod",
    "binom_kp_exact",
    "optimized_required_exponent",
    "general_required_exponent",
    "measure_optimized",
    "verify_optimized",
    "verify_general",
    "error_term",
    "error_term_case",
    "predicted_exceptional",
    "classify_exceptional",
    "verify_named",
    "uniqueness_search",
    "run_batch",
]

DEFAULT_SLACK = 2

NAMED_TAGS = (
    "wolstenholme",
    "glaisher",
    "van_hamme",
    "mestrovic",
    "easycong",
    "sc1",
    "sc2",
    "zhao",
    "propextra",
    "glaisher_H1",
)


@dataclass(frozen=True)
class CongruenceSpec:
    kind: str
    n: int | None = None
    k: int | None = None
    data: WolstenholmeData | None = None
    tag: str | None = None
    j: int | None = None

    @classmethod
    def optimized(cls, n: int, k: int) -> "CongruenceSpec":
        return cls("optimized", n=n, k=k)

    @classmethod
    def general(cls, data: WolstenholmeData) -> "CongruenceSpec":
        return cls("general", n=data.N, k=data.k, data=data)

    @classmethod
    def named(cls, tag: str, *, n: int | None = None, k: int | None = None, j: int | None = None) -> "CongruenceSpec":
        if tag not in NAMED_TAGS:
            raise ValueError(f"unknown congruence tag {tag!r}; choose from {', '.join(NAMED_TAGS)}")
        return cls("named", n=n, k=k, tag=tag, j=j)

    @property
    def label(self) -> str:
        if self.kind == "named":
            return self.tag
        return self.kind


@dataclass(frozen=True)
class CongruenceReport:
    """Outcome of one congruence check at one prime.

    ``required`` is None when the statement is an exact equality. ``achieved``
    is v_p of the difference of the two sides, measured mod p^``exponent``; it
    equals ``exponent`` when the difference vanishes there (saturated) and is
    ``math.inf`` when an exact evaluation found the difference to be zero.
    """

    spec: CongruenceSpec
    p: int
    required: int | None
    achieved: int | float
    exponent: int
    holds: bool
    exceptional: bool
    cls: str | None = None

    @property
    def saturated(self) -> bool:
        return self.achieved != math.inf and self.achieved >= self.exponent


@dataclass(frozen=True)
class ErrorTermReport:
    p: int
    N: int
    data: WolstenholmeData
    case: str
    predicted: PadicResidue
    actual: PadicResidue
    match: bool


class ExceptionalClass(str, enum.Enum):
    NOT_EXCEPTIONAL = "NotExceptional"
    EXCEPTIONAL_K = "ExceptionalK"
    EXCEPTIONAL_BERNOULLI = "ExceptionalBernoulli"
    EXCEPTIONAL_BOTH = "ExceptionalBoth"

    @property
    def exceptional(self) -> bool:
        return self is not ExceptionalClass.NOT_EXCEPTIONAL


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------


def _check_odd_prime(p: int):
    if p == 2:
        raise UnsupportedPrime("p = 2 is not supported")
    if p < 3:
        raise ValueError(f"{p} is not an odd prime")


def binom_kp_mod(k: int, p: int, m: int) -> PadicResidue:
    """C(kp-1, p-1) mod p^m as prod_{i<p} (kp - i) / i, without the exact integer.

    The product formula is a polynomial identity in k, so k <= 0 is accepted too.
    """
    mod = p**m
    kp = k * p
    num = den = 1
    for i in range(1, p):
        num = num * (kp - i) % mod
        den = den * i % mod
    return PadicResidue(p, m, num * pow(den, -1, mod) % mod)


def binom_kp_exact(k: int, p: int) -> int:
    """C(kp-1, p-1) as an exact integer (generalized binomial for k <= 0)."""
    if k >= 1:
        return math.comb(k * p - 1, p - 1)
    num = 1
    for i in range(1, p):
        num *= k * p - i
    return num // math.factorial(p - 1)


def _reduce_coeff(b, p: int, mod: int) -> int:
    if isinstance(b, int):
        return b % mod
    b = Fraction(b)
    if b.denominator % p == 0:
        raise BadPrime(f"coefficient {b} is not {p}-integral")
    return b.numerator * pow(b.denominator, -1, mod) % mod


def _rhs_mod(b: Sequence, p: int, E: int) -> int:
    """sum_j b_j p^j H({1}^j; p-1) mod p^E."""
    mod = p**E
    jmax = len(b) - 1
    # p^j H_j vanishes mod p^E once j >= E
    top = min(jmax, E - 1)
    if top < 0:
        return 0
    h = elem_mhs_graded(p, E, top)
    total = 0
    pj = 1
    for j in range(top + 1):
        if b[j] != 0:
            total += _reduce_coeff(b[j], p, mod) * pj * h[j]
        pj *= p
    return total % mod


def _rhs_exact(b: Sequence, p: int) -> Fraction:
    row = elem_mhs_row(p - 1)
    total = Fraction(0)
    for j, bj in enumerate(b):
        if j >= len(row):
            break
        if bj != 0:
            total += Fraction(bj) * p**j * row[j]
    return total


def _valuation_mod(x: int, p: int, E: int) -> int:
    x %= p**E
    if x == 0:
        return E
    return min(int_valuation(x, p), E)


def _binomial_check(
    spec: CongruenceSpec,
    k: int,
    b: Sequence,
    p: int,
    required: int | None,
    slack: int,
    exact_exponent: int | None = None,
) -> CongruenceReport:
    """Check C(kp-1, p-1) == sum b_j p^j H({1}^j; p-1) (mod p^required).

    ``required=None`` means exact equality: measured mod p^exact_exponent and
    confirmed over Q.
    """
    if required is None:
        E = exact_exponent if exact_exponent is not None else len(b) + 4
        diff_mod = (binom_kp_mod(k, p, E).value - _rhs_mod(b, p, E)) % p**E
        diff = binom_kp_exact(k, p) - _rhs_exact(b, p)
        if diff == 0 and diff_mod != 0:
            raise AssertionError(f"modular and exact routes disagree for {spec} at p={p}")
        achieved = math.inf if diff == 0 else padic_valuation(diff, p)
        return CongruenceReport(spec, p, None, achieved, E, diff == 0, False)
    E = required + slack
    diff = binom_kp_mod(k, p, E).value - _rhs_mod(b, p, E)
    achieved = _valuation_mod(diff, p, E)
    return CongruenceReport(spec, p, required, achieved, E, achieved >= required, achieved >= required + 1)


# ---------------------------------------------------------------------------
# Optimized and general congruences
# ---------------------------------------------------------------------------


def optimized_required_exponent(n: int, p: int) -> int | None:
    if p >= 2 * n + 5:
        return 2 * n + 3
    if p == 2 * n + 3:
        return 2 * n + 2
    return None


def measure_optimized(n: int, k: int, p: int, slack: int = DEFAULT_SLACK) -> CongruenceReport:
    """Like :func:`verify_optimized` but admits any integer k (no argument checks)."""
    spec = CongruenceSpec.optimized(n, k)
    b = extremal_coefficients(n, k)
    required = optimized_required_exponent(n, p)
    return _binomial_check(spec, k, b, p, required, slack, exact_exponent=2 * n + 6)


def verify_optimized(n: int, k: int, p: int, slack: int = DEFAULT_SLACK) -> CongruenceReport:
    """C(kp-1, p-1) against sum_{j<=n} b_{j,n}(k) p^j H({1}^j; p-1).

    Required exponent 2n+3 for p >= 2n+5, 2n+2 for p = 2n+3; exact equality
    for odd p <= 2n+1.
    """
    _check_odd_prime(p)
    if n < 0:
        raise ValueError("n must be non-negative")
    if k < 1:
        raise ValueError("the optimized congruence is stated for integers k >= 1")
    return measure_optimized(n, k, p, slack)


def general_required_exponent(N: int, p: int) -> int | None:
    if N <= p - 4:
        return N + 3 if N % 2 == 0 else N + 2
    if N == p - 3:
        return N + 2
    if N == p - 2:
        return N + 1
    return None


def _check_data_prime(data: WolstenholmeData, p: int):
    for i, c in enumerate(data.c[: data.N + 1]):
        if Fraction(c).denominator % p == 0:
            raise BadPrime(f"p={p} divides the denominator of c_{i} = {c}")


def verify_general(data: WolstenholmeData, p: int, slack: int = DEFAULT_SLACK) -> CongruenceReport:
    _check_odd_prime(p)
    _check_data_prime(data, p)
    b = coefficients_from_data(data).b
    required = general_required_exponent(data.N, p)
    return _binomial_check(CongruenceSpec.general(data), data.k, b, p, required, slack)


def error_term_case(N: int, p: int) -> str:
    if N <= p - 4:
        return "i-even" if N % 2 == 0 else "i-odd"
    if N == p - 3:
        return "ii"
    if N == p - 2:
        return "iii"
    return "iv"


def _bernoulli_mod(m: int, p: int) -> int:
    return bernoulli_mod_p(m, p).value


def error_term(data: WolstenholmeData, p: int) -> ErrorTermReport:
    """Measured E_N against the leading term predicted for its case."""
    _check_odd_prime(p)
    _check_data_prime(data, p)
    N = data.N
    k = data.k
    case = error_term_case(N, p)
    lead_exp = {"i-even": N + 3, "i-odd": N + 2, "ii": N + 2, "iii": N + 1, "iv": N + 1}[case]
    L = lead_exp + 1
    mod = p**L

    if case == "iv":
        b = coefficients_from_data(data).b
        exact = binom_kp_exact(k, p) - _rhs_exact(b, p)
        actual = PadicResidue(p, L, 0) if exact == 0 else padic_reduce(exact, p, L)
        predicted = PadicResidue(p, L, 0)
        return ErrorTermReport(p, N, data, case, predicted, actual, exact == 0)

    b = coefficients_mod(data, p, mod, length=N + 3)
    actual = PadicResidue(p, L, binom_kp_mod(k, p, L).value - _rhs_mod(b[: N + 1], p, L))

    def red(x) -> int:
        return _reduce_coeff(x, p, p)

    if case == "i-even":
        bern = _bernoulli_mod(p - 3 - N, p)
        inner = red(Fraction(N + 2, 2) * Fraction(b[N + 1]) + Fraction(b[N + 2]))
        coeff = -bern * inner * pow(N + 3, -1, p)
    elif case == "i-odd":
        bern = _bernoulli_mod(p - 2 - N, p)
        coeff = -bern * red(b[N + 1]) * pow(N + 2, -1, p)
    elif case == "ii":
        coeff = red(Fraction(b[N + 1]) / 2 - Fraction(b[N + 2]))
    else:
        coeff = -red(b[N + 1])
    predicted = PadicResidue(p, L, (coeff % p) * p**lead_exp % mod)
    return ErrorTermReport(p, N, data, case, predicted, actual, predicted == actual)


# ---------------------------------------------------------------------------
# Exceptional congruences
# ---------------------------------------------------------------------------


def predicted_exceptional(n: int, k: int, p: int, bernoulli_hit: bool | None = None) -> ExceptionalClass:
    """Exceptional class predicted from k mod p and p | B_{p-2n-3}."""
    if p < 2 * n + 3:
        raise PrimeTooSmall(f"need p >= 2n+3 = {2 * n + 3}, got {p}")
    k_hit = k % p in (0, 1)
    if p == 2 * n + 3:
        return ExceptionalClass.EXCEPTIONAL_K if k_hit else ExceptionalClass.NOT_EXCEPTIONAL
    if bernoulli_hit is None:
        # power sums, independent of the harmonic sums being measured
        bernoulli_hit = is_exceptional_bernoulli(n, p, method="power_sum")
    if k_hit and bernoulli_hit:
        return ExceptionalClass.EXCEPTIONAL_BOTH
    if k_hit:
        return ExceptionalClass.EXCEPTIONAL_K
    if bernoulli_hit:
        return ExceptionalClass.EXCEPTIONAL_BERNOULLI
    return ExceptionalClass.NOT_EXCEPTIONAL


def classify_exceptional(
    n: int,
    k: int,
    p: int,
    *,
    check: bool = True,
    bernoulli_hit: bool | None = None,
    report: CongruenceReport | None = None,
) -> ExceptionalClass:
    """Classify (k, n, p) and, with ``check``, confirm against the measured valuation.

    Raises :class:`ClassificationMismatch` if the measured extra power of p
    disagrees with the prediction. ``report`` may carry an existing
    measurement (from :func:`verify_optimized`) to avoid recomputing it.
    """
    _check_odd_prime(p)
    cls = predicted_exceptional(n, k, p, bernoulli_hit)
    if check:
        if report is None:
            report = measure_optimized(n, k, p, DEFAULT_SLACK)
        if report.exceptional != cls.exceptional:
            raise ClassificationMismatch(
                f"n={n}, k={k}, p={p}: predicted {cls.value}, measured valuation "
                f"{report.achieved} vs required {report.required}"
            )
    return cls


# ---------------------------------------------------------------------------
# Named congruences from the literature
# ---------------------------------------------------------------------------


def _bernoulli_rational_or_residue(m: int, p: int) -> Fraction | None:
    """Exact B_m when cheap enough, else None (callers fall back to B_m mod p)."""
    if m <= DEFAULT_INDEX_BOUND:
        return bernoulli_exact(m).value
    return None


def _bernoulli_check(spec: CongruenceSpec, p: int, lhs_mod: Callable[[int], int], factor: Fraction,
                     bern_index: int, p_power: int, required: int, slack: int) -> CongruenceReport:
    """Check lhs == factor * B_m * p^p_power (mod p^required); ``lhs_mod(E)`` gives lhs mod p^E."""
    B = _bernoulli_rational_or_residue(bern_index, p)
    if B is None:
        # only B mod p is known: measurement cannot exceed the requirement
        E = required
        rhs = _reduce_coeff(factor, p, p) * _bernoulli_mod(bern_index, p) * p**p_power
    else:
        E = required + slack
        rhs = _reduce_coeff(factor * B, p, p**E) * p**p_power
    achieved = _valuation_mod(lhs_mod(E) - rhs, p, E)
    return CongruenceReport(spec, p, required, achieved, E, achieved >= required, achieved >= required + 1)


def verify_named(tag: str, p: int, *, n: int | None = None, k: int | None = None, j: int | None = None,
                 slack: int = DEFAULT_SLACK) -> CongruenceReport:
    """Check one of the classical congruences at the prime p.

    Tags and parameters: ``wolstenholme``, ``glaisher`` (k), ``van_hamme``,
    ``mestrovic``, ``easycong`` (n, k), ``sc1`` (k), ``sc2``, ``zhao`` (j),
    ``propextra`` (j >= p-2), ``glaisher_H1``.
    """
    _check_odd_prime(p)
    spec = CongruenceSpec.named(tag, n=n, k=k, j=j)

    def gate(ok: bool, msg: str):
        if not ok:
            raise PrimeOutOfRange(f"{tag}: {msg}, got p={p}")

    if tag == "wolstenholme":
        gate(p >= 5, "needs p >= 5")
        return _binomial_check(spec, 2, [1], p, 3, slack)
    if tag == "glaisher":
        if k is None or k < 2:
            raise ValueError("glaisher needs an integer k >= 2")
        gate(p >= 5, "needs p >= 5")
        return _binomial_check(spec, k, [1], p, 3, slack)
    if tag == "van_hamme":
        gate(p >= 7, "needs p >= 7")
        return _binomial_check(spec, 2, [1, 2], p, 5, slack)
    if tag == "mestrovic":
        gate(p >= 11, "needs p >= 11")
        return _binomial_check(spec, 2, [1, -2, 4], p, 7, slack)
    if tag == "easycong":
        if n is None or k is None:
            raise ValueError("easycong needs n and k")
        gate(p >= 2 * n + 5, f"needs p >= 2n+5 = {2 * n + 5}")
        b = [(k - 1) ** t for t in range(2 * n + 1)]
        return _binomial_check(spec, k, b, p, 2 * n + 3, slack)
    if tag == "sc1":
        if k is None:
            raise ValueError("sc1 needs k")
        gate(p != 5, "excludes p = 5")
        return _binomial_check(spec, k, [1, k * (k - 1)], p, 5, slack)
    if tag == "sc2":
        return _binomial_check(spec, 2, [1, 14, -12, 8], p, 9, slack)

    if tag == "zhao":
        if j is None:
            raise ValueError("zhao needs j")
        gate(1 <= j <= p - 3, f"needs 1 <= j <= p-3 (j={j})")

        def h(E):
            return elem_mhs_mod(p, E, j).values[j]

        if j % 2 == 0:
            return _bernoulli_check(spec, p, h, Fraction(-1, j + 1), p - 1 - j, 1, 2, slack)
        return _bernoulli_check(spec, p, h, Fraction(-(j + 1), 2 * (j + 2)), p - 2 - j, 2, 3, slack)

    if tag == "glaisher_H1":
        gate(p >= 5, "needs p >= 5")
        return _bernoulli_check(spec, p, lambda E: elem_mhs_mod(p, E, 1).values[1],
                                Fraction(-1, 3), p - 3, 2, 3, slack)

    if tag == "propextra":
        if j is None:
            raise ValueError("propextra needs j")
        gate(j >= p - 2, f"needs j >= p-2 (j={j})")
        if j >= p:
            # defining sum is empty
            row = elem_mhs_row(p - 1)
            value = row[j] if j < len(row) else Fraction(0)
            achieved = math.inf if value == 0 else padic_valuation(value, p)
            return CongruenceReport(spec, p, None, achieved, 1, value == 0, False)
        required = 2 if j == p - 2 else 1
        target = Fraction(p, 2) if j == p - 2 else Fraction(-1)
        E = required + slack
        h = elem_mhs_mod(p, E, j).values[j]
        achieved = _valuation_mod(h - _reduce_coeff(target, p, p**E), p, E)
        return CongruenceReport(spec, p, required, achieved, E, achieved >= required, achieved >= required + 1)

    raise ValueError(f"unknown congruence tag {tag!r}")


# ---------------------------------------------------------------------------
# Uniqueness probe
# ---------------------------------------------------------------------------


def uniqueness_search(n: int, k: int, candidate: Sequence, p_min: int, p_max: int) -> int | None:
    """Smallest prime in [p_min, p_max] where the candidate coefficients fail mod p^(2n+2)."""
    if p_min < 2 * n + 5:
        raise ValueError(f"p_min must be >= 2n+5 = {2 * n + 5}")
    b = list(candidate)
    E = 2 * n + 2
    for p in primes_between(p_min, p_max):
        lhs = binom_kp_mod(k, p, E).value
        if (lhs - _rhs_mod(b, p, E)) % p**E:
            return p
    return None


# ---------------------------------------------------------------------------
# Batch execution
# ---------------------------------------------------------------------------


def _call(task):
    fn, args, kwargs = task
    return fn(*args, **kwargs)


def run_batch(tasks: Iterable[tuple[Callable, tuple, dict]], threads: int = 1) -> list:
    """Run independent ``(fn, args, kwargs)`` tasks; results come back in input order.

    ``fn`` must be a module-level function so it can be shipped to worker
    processes when ``threads > 1``.
    """
    tasks = list(tasks)
    if threads <= 1 or len(tasks) <= 1:
        return [_call(t) for t in tasks]
    chunk = max(1, len(tasks) // (threads * 4))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_call, tasks, chunksize=chunk))
