"""Bernoulli numbers: exact values and residues mod p by two independent routes.

* :func:`bernoulli_mod_p` uses power sums, sum_{a<p} a^m = p B_m (mod p^2).
* :func:`bernoulli_via_mhs` reads B_{p-3-2n} off H({1}^{2n+2}; p-1) mod p^2.

Keeping both lets exceptional-congruence checks avoid circular reasoning.
"""

from __future__ import annotations

import math
import os
import tempfile
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .arith import PadicResidue, padic_reduce
from .errors import PoleAtP, ResourceLimit
from .mhs import elem_mhs_mod

__all__ = [
    "BernoulliValue",
    "BernoulliResidue",
    "DEFAULT_INDEX_BOUND",
    "bernoulli_exact",
    "bernoulli_mod_p",
    "bernoulli_via_mhs",
    "is_exceptional_bernoulli",
    "staudt_denominator",
    "ResidueCache",
    "CACHE_ENV_VAR",
]

DEFAULT_INDEX_BOUND = 2000
CACHE_ENV_VAR = "WOLSTENHOLME_CACHE_DIR"


@dataclass(frozen=True)
class BernoulliValue:
    index: int
    value: Fraction


@dataclass(frozen=True)
class BernoulliResidue:
    index: int
    p: int
    residue: PadicResidue

    @property
    def value(self) -> int:
        return self.residue.value


# B_0, B_1, B_2, ... grown on demand
_exact: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
_exact_lock = threading.Lock()


def bernoulli_exact(m: int, bound: int = DEFAULT_INDEX_BOUND) -> BernoulliValue:
    """B_m from sum_{j<=m} C(m+1, j) B_j = 0, with B_1 = -1/2."""
    if m < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if m > bound:
        raise ResourceLimit(f"B_{m} exceeds the configured index bound {bound}")
    if m >= 3 and m % 2:
        return BernoulliValue(m, Fraction(0))
    with _exact_lock:
        while len(_exact) <= m:
            t = len(_exact)
            if t % 2:
                _exact.append(Fraction(0))
                continue
            # odd terms vanish except B_1
            s = Fraction(1) + (t + 1) * _exact[1]
            for j in range(2, t, 2):
                s += math.comb(t + 1, j) * _exact[j]
            _exact.append(-s / (t + 1))
        return BernoulliValue(m, _exact[m])


def staudt_denominator(m: int) -> int:
    """Product of primes q with (q-1) | m, for even m >= 2."""
    out = 1
    for d in range(1, m + 1):
        if m % d == 0:
            q = d + 1
            if q > 1 and all(q % r for r in range(2, math.isqrt(q) + 1)):
                out *= q
    return out


def bernoulli_mod_p(m: int, p: int) -> BernoulliResidue:
    """B_m mod p from the power sum sum_{a=1}^{p-1} a^m mod p^2 (even 2 <= m <= p-3)."""
    if p < 3:
        raise ValueError("p must be an odd prime")
    if m % (p - 1) == 0:
        raise PoleAtP(f"(p-1) | m: B_{m} is not {p}-integral")
    if m % 2 or not 2 <= m <= p - 3:
        raise ValueError(f"power-sum method needs even 2 <= m <= p-3, got m={m}, p={p}")
    mod = p * p
    s = 0
    for a in range(1, p):
        s += pow(a, m, mod)
    s %= mod
    if s % p:
        raise AssertionError(f"power sum for m={m} not divisible by p={p}")
    return BernoulliResidue(m, p, PadicResidue(p, 1, s // p))


def bernoulli_via_mhs(n: int, p: int) -> BernoulliResidue:
    """B_{p-3-2n} mod p as -(2n+3) * H({1}^{2n+2}; p-1) / p."""
    if p < 2 * n + 5:
        raise ValueError(f"need p >= 2n+5, got n={n}, p={p}")
    j = 2 * n + 2
    h = elem_mhs_mod(p, 2, j).values[j]
    if h % p:
        raise AssertionError(f"H({{1}}^{j}; {p - 1}) is not divisible by {p}")
    r = (-(2 * n + 3) * (h // p)) % p
    return BernoulliResidue(p - 3 - 2 * n, p, PadicResidue(p, 1, r))


def is_exceptional_bernoulli(n: int, p: int, method: str = "mhs") -> bool:
    """True iff p divides the numerator of B_{p-2n-3}."""
    if p < 2 * n + 5:
        raise ValueError(f"need p >= 2n+5, got n={n}, p={p}")
    if method == "mhs":
        res = bernoulli_via_mhs(n, p)
    elif method == "power_sum":
        res = bernoulli_mod_p(p - 2 * n - 3, p)
    elif method == "exact":
        res = BernoulliResidue(p - 2 * n - 3, p, padic_reduce(bernoulli_exact(p - 2 * n - 3).value, p, 1))
    else:
        raise ValueError(f"unknown method {method!r}")
    return res.value == 0


class ResidueCache:
    """On-disk cache of B_{p-3-2n} mod p, one ``p n residue`` record per line.

    Records are kept sorted by (p, n). Only one process should write; writes go
    through a temporary file and an atomic rename so readers never see a torn
    file.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._data: dict[tuple[int, int], int] = {}
        self._dirty = False
        if self.path.exists():
            self._load()

    @classmethod
    def from_env(cls) -> "ResidueCache | None":
        d = os.environ.get(CACHE_ENV_VAR)
        if not d:
            return None
        Path(d).mkdir(parents=True, exist_ok=True)
        return cls(Path(d) / "bernoulli_residues.txt")

    def _load(self):
        for lineno, line in enumerate(self.path.read_text().splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            try:
                p, n, r = (int(x) for x in line.split())
            except ValueError as exc:
                raise ValueError(f"{self.path}:{lineno}: malformed cache record {line!r}") from exc
            self._data[(p, n)] = r

    def get(self, p: int, n: int) -> int | None:
        return self._data.get((p, n))

    def put(self, p: int, n: int, residue: int):
        if self._data.get((p, n)) != residue:
            self._data[(p, n)] = residue
            self._dirty = True

    def __len__(self):
        return len(self._data)

    def flush(self):
        if not self._dirty:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        text = "".join(f"{p} {n} {r}\n" for (p, n), r in sorted(self._data.items()))
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".bern-", suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, self.path)
        self._dirty = False
