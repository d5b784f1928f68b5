"""Command-line front end.

Subcommands: ``tables``, ``mhs``, ``poly``, ``verify``, ``scan``, ``bernoulli``.
Scans shard work by prime, run it on a process pool, and merge results in
ascending-prime order so output does not depend on the worker count.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .arith import primes_between
from .bernoulli import ResidueCache, bernoulli_exact, bernoulli_mod_p, bernoulli_via_mhs
from .congruence import (
    DEFAULT_SLACK,
    NAMED_TAGS,
    classify_exceptional,
    measure_optimized,
    run_batch,
    verify_named,
)
from .errors import ClassificationMismatch, ConfigError, PrimeOutOfRange, ResumeMismatch, WolstenholmeError
from .extremal import extremal_coefficients, extremal_poly_crt
from .mhs import Composition, mhs_exact
from .report import ScanRecord, parse_records, serialize_records

log = logging.getLogger("wolstenholme")

CHECKPOINT_BATCH = 64
COMMANDS = ("tables", "mhs", "poly", "verify", "scan", "bernoulli")


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


@dataclass
class TableDocument:
    n_max: int
    k_set: tuple[int, ...]
    # polynomials[n][j] = b_{j,n}(T)
    polynomials: list[list] = field(default_factory=list)
    # values[k][n] = [b_{0,n}(k), ..., b_{n,n}(k)]
    values: dict[int, list[list[int]]] = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "n_max": self.n_max,
            "polynomials": [
                {
                    "n": n,
                    "j": j,
                    "poly": str(poly),
                    "coefficients": [str(c) for c in poly.int_coefficients()],
                }
                for n, row in enumerate(self.polynomials)
                for j, poly in enumerate(row)
            ],
            "values": {str(k): [[str(v) for v in row] for row in grid] for k, grid in self.values.items()},
            "notes": [
                "b_{1,3}(T) = 2T^6 - 6T^5 + 5T^4 - T; its constant term is 0 because "
                "b_{j,n}(T) = (-T)^j mod T^(n+1)."
            ]
            if self.n_max >= 3
            else [],
        }
        return json.dumps(doc, indent=1) + "\n"

    def to_csv(self) -> str:
        lines = ["table,k,n,j,value"]
        for n, row in enumerate(self.polynomials):
            for j, poly in enumerate(row):
                lines.append(f"poly,,{n},{j},{poly}")
        for k, grid in self.values.items():
            for n, row in enumerate(grid):
                for j, v in enumerate(row):
                    lines.append(f"value,{k},{n},{j},{v}")
        return "\n".join(lines) + "\n"


def emit_tables(n_max: int, k_set=(2, 3)) -> TableDocument:
    """Extremal polynomials b_{j,n}(T) for n <= n_max and their values at each k."""
    if not 0 <= n_max <= 12:
        raise ConfigError("tables are produced for 0 <= n_max <= 12")
    doc = TableDocument(n_max, tuple(k_set))
    doc.polynomials = [[extremal_poly_crt(j, n).poly for j in range(n + 1)] for n in range(n_max + 1)]
    for k in k_set:
        doc.values[k] = [extremal_coefficients(n, k) for n in range(n_max + 1)]
    return doc


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------


@dataclass
class ScanConfig:
    command: str = "scan"
    n_range: tuple[int, int] = (0, 0)
    k_set: tuple[int, ...] = (2,)
    prime_range: tuple[int, int] = (5, 100)
    exponent_slack: int = DEFAULT_SLACK
    output_path: str | None = None
    format: str = "json"
    threads: int = 1
    checkpoint_path: str | None = None
    named: str | None = None
    j: int | None = None
    classify: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        lo, hi = self.prime_range
        if lo < 3 or hi < 3:
            raise ConfigError("prime range bounds must be >= 3")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.named is not None and self.named not in NAMED_TAGS:
            raise ConfigError(f"unknown tag {self.named!r}; choose from {', '.join(NAMED_TAGS)}")
        if self.n_range[0] < 0 or self.n_range[1] < self.n_range[0]:
            raise ConfigError(f"bad n range {self.n_range}")
        if self.exponent_slack < 1:
            raise ConfigError("slack must be >= 1")
        if self.checkpoint_path and not self.output_path:
            raise ConfigError("--checkpoint needs --out")

    def config_hash(self) -> str:
        # the upper prime bound, worker count and paths do not affect records
        key = {
            "n_range": list(self.n_range),
            "k_set": list(self.k_set),
            "prime_lo": self.prime_range[0],
            "slack": self.exponent_slack,
            "format": self.format,
            "named": self.named,
            "j": self.j,
            "classify": self.classify,
        }
        return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()


@dataclass
class ScanCheckpoint:
    config_hash: str
    last_completed_prime: int
    partial_result_count: int

    @classmethod
    def load(cls, path) -> "ScanCheckpoint":
        obj = json.loads(Path(path).read_text())
        return cls(obj["config_hash"], int(obj["last_completed_prime"]), int(obj["partial_result_count"]))

    def save(self, path):
        _atomic_write(path, json.dumps(self.__dict__, sort_keys=True) + "\n")


def _atomic_write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _scan_task(p: int, n: int | None, k: int | None, named: str | None, j: int | None, slack: int,
               classify: bool, bernoulli_residue: int | None):
    """One (spec, p) check. Returns (record or None, freshly computed Bernoulli residue or None)."""
    if named is not None:
        try:
            report = verify_named(named, p, n=n, k=k, j=j, slack=slack)
        except PrimeOutOfRange:
            return None, None
        return ScanRecord.from_report(report), None

    report = measure_optimized(n, k, p, slack)
    klass = None
    fresh = None
    if classify and p >= 2 * n + 3:
        hit = None
        if p >= 2 * n + 5:
            if bernoulli_residue is None:
                bernoulli_residue = fresh = bernoulli_via_mhs(n, p).value
            hit = bernoulli_residue == 0
        try:
            klass = classify_exceptional(n, k, p, bernoulli_hit=hit, report=report).value
        except ClassificationMismatch:
            klass = "Mismatch"
    return ScanRecord.from_report(report, klass), fresh


def _tasks_for(config: ScanConfig, primes, cache: ResidueCache | None):
    n_lo, n_hi = config.n_range
    for p in primes:
        if config.named is not None:
            ns = range(n_lo, n_hi + 1) if config.named == "easycong" else [None]
            ks = config.k_set if config.named in ("glaisher", "easycong", "sc1") else [None]
            for n in ns:
                for k in ks:
                    yield (_scan_task, (p, n, k, config.named, config.j, config.exponent_slack, False, None), {})
            continue
        for n in range(n_lo, n_hi + 1):
            hint = cache.get(p, n) if cache is not None else None
            for k in config.k_set:
                yield (_scan_task, (p, n, k, None, None, config.exponent_slack, config.classify, hint), {})


def is_unexpected(record: ScanRecord) -> bool:
    return not record.holds or record.cls == "Mismatch"


def run_scan(config: ScanConfig) -> tuple[list[ScanRecord], int]:
    """Run a scan; returns (all records, exit code). Exit code 0 iff nothing unexpected.

    With a checkpoint path, the report and checkpoint are rewritten atomically
    after every 64 primes, and an existing checkpoint is resumed from.
    """
    config.validate()
    lo, hi = config.prime_range
    primes = primes_between(lo, hi)
    records: list[ScanRecord] = []
    h = config.config_hash()
    out_path = Path(config.output_path) if config.output_path else None

    if config.checkpoint_path and Path(config.checkpoint_path).exists():
        ck = ScanCheckpoint.load(config.checkpoint_path)
        if ck.config_hash != h:
            raise ResumeMismatch(
                f"checkpoint {config.checkpoint_path} was written for a different configuration"
            )
        if ck.partial_result_count:
            if out_path is None or not out_path.exists():
                raise ResumeMismatch("checkpoint refers to records but the report file is missing")
            existing = parse_records(out_path.read_text(encoding="utf-8"), config.format)
            if len(existing) < ck.partial_result_count:
                raise ResumeMismatch("report file has fewer records than the checkpoint claims")
            records = existing[: ck.partial_result_count]
        primes = [p for p in primes if p > ck.last_completed_prime]
        log.info("resuming after p=%d with %d records", ck.last_completed_prime, len(records))

    cache = ResidueCache.from_env() if config.classify else None
    n_new = 0
    for start in range(0, len(primes), CHECKPOINT_BATCH):
        chunk = primes[start : start + CHECKPOINT_BATCH]
        tasks = list(_tasks_for(config, chunk, cache))
        for task, (rec, fresh) in zip(tasks, run_batch(tasks, config.threads)):
            if rec is None:
                continue
            records.append(rec)
            n_new += 1
            if fresh is not None and cache is not None:
                p, n = task[1][0], task[1][1]
                cache.put(p, n, fresh)
        if config.checkpoint_path:
            _atomic_write(out_path, serialize_records(records, config.format))
            ScanCheckpoint(h, chunk[-1], len(records)).save(config.checkpoint_path)
            if cache is not None:
                cache.flush()
    if cache is not None:
        cache.flush()

    if out_path is not None:
        _atomic_write(out_path, serialize_records(records, config.format))
    bad = sum(is_unexpected(r) for r in records)
    log.info("%d records (%d new), %d unexpected", len(records), n_new, bad)
    return records, 0 if bad == 0 else 1


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def parse_range(text: str) -> tuple[int, int]:
    """``"A..B"`` or ``"A"``."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        v = int(text)
        return v, v
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or an integer, got {text!r}") from None


def parse_int_set(text: str) -> tuple[int, ...]:
    """``"2,3,7"`` or ``"1..10"`` or a mix of both."""
    out: list[int] = []
    for part in text.split(","):
        lo, hi = parse_range(part.strip())
        out.extend(range(lo, hi + 1))
    return tuple(out)


def _add_scan_args(sp: argparse.ArgumentParser, scan: bool):
    sp.add_argument("--n", type=parse_range, default=(0, 0), help="n or n range A..B")
    sp.add_argument("--k", type=parse_int_set, default=(2,), help="k values, e.g. 2,3 or 1..10")
    sp.add_argument("--j", type=int, default=None, help="index parameter for zhao/propextra")
    sp.add_argument("--primes", type=parse_range, required=True, help="prime range A..B")
    sp.add_argument("--slack", type=int, default=DEFAULT_SLACK, help="extra powers of p to measure")
    sp.add_argument("--named", choices=NAMED_TAGS, default=None)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default=None, help="report path (default: stdout)")
    sp.add_argument("--classify", action="store_true", help="add the exceptional class column")
    if scan:
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--checkpoint", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wolstenholme", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("tables", help="extremal polynomials and their values")
    sp.add_argument("--n", type=int, default=5, help="largest n")
    sp.add_argument("--k", type=parse_int_set, default=(2, 3))
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("mhs", help="exact multiple harmonic sum H(parts; n)")
    sp.add_argument("parts", help="composition, e.g. 1,2 (empty string for the empty composition)")
    sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("poly", help="extremal polynomial b_{j,n}(T)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--j", type=int, default=None, help="omit to print j = 0..n")
    sp.add_argument("--k", type=int, default=None, help="also evaluate at T = k")

    sp = sub.add_parser("verify", help="check congruences over a prime range")
    _add_scan_args(sp, scan=False)

    sp = sub.add_parser("scan", help="like verify, with threads and checkpoint/resume")
    _add_scan_args(sp, scan=True)

    sp = sub.add_parser("bernoulli", help="Bernoulli number B_m, exactly or mod p")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=int, default=None)
    return ap


def _emit(text: str, out: str | None):
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "tables":
            doc = emit_tables(args.n, args.k)
            _emit(doc.to_json() if args.format == "json" else doc.to_csv(), args.out)
            return 0
        if args.command == "mhs":
            parts = [int(x) for x in args.parts.split(",") if x.strip()]
            print(mhs_exact(Composition(tuple(parts)), args.n))
            return 0
        if args.command == "poly":
            js = range(args.n + 1) if args.j is None else [args.j]
            for j in js:
                poly = extremal_poly_crt(j, args.n).poly
                line = f"b_{j},{args.n}(T) = {poly}"
                if args.k is not None:
                    line += f"    [T={args.k}: {poly(args.k)}]"
                print(line)
            return 0
        if args.command == "bernoulli":
            if args.p is None:
                print(bernoulli_exact(args.m).value)
            else:
                print(bernoulli_mod_p(args.m, args.p).value)
            return 0
        config = ScanConfig(
            command=args.command,
            n_range=args.n,
            k_set=args.k,
            prime_range=args.primes,
            exponent_slack=args.slack,
            output_path=args.out,
            format=args.format,
            threads=getattr(args, "threads", 1),
            checkpoint_path=getattr(args, "checkpoint", None),
            named=args.named,
            j=args.j,
            classify=args.classify,
        )
        records, code = run_scan(config)
        if not args.out:
            sys.stdout.write(serialize_records(records, args.format))
        bad = sum(is_unexpected(r) for r in records)
        print(f"{len(records)} records, {bad} unexpected", file=sys.stderr)
        return code
    except (WolstenholmeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
