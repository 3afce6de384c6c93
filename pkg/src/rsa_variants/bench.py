"""Decryption speedups: the asymptotic model and a timing harness."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from math import gcd

from .errors import DomainError
from .primegen import Rng
from .variants import KeyGenParams, KeyPair, Variant, decrypt, encrypt, keygen

WARMUP = 2

COMPLEXITY = {
    Variant.ORIGINAL: "O(n^3)",
    Variant.CRT: "2*O((n/2)^3)",
    Variant.MULTI_PRIME: "r*O((n/r)^3)",
    Variant.MULTI_POWER: "2*O((n/r)^3)",
    Variant.REBALANCED: "2*O(w(n/2)^2)",
    Variant.R_PRIME: "r*O(w(n/r)^2)",
}

LABELS = {
    Variant.ORIGINAL: "Original",
    Variant.CRT: "CRT",
    Variant.MULTI_PRIME: "Multi-Prime",
    Variant.MULTI_POWER: "Multi-Power",
    Variant.REBALANCED: "Rebalanced",
    Variant.R_PRIME: "R-Prime",
}


@dataclass(frozen=True)
class SpeedupModel:
    variant: Variant
    n: int
    r: int | None = None
    w: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        for name in ("n", "r", "w"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise DomainError(f"{name} must be positive, got {value}")


def theoretical_speedup(model: SpeedupModel) -> float:
    """Decryption speedup over the original RSA, ignoring CRT recombination.

    A modular exponentiation with a t-bit exponent and a v-bit modulus
    costs O(t v^2), so the original costs n^3 and each variant divides that
    by its own sum of exponentiation costs.
    """
    v, n, r, w = model.variant, model.n, model.r, model.w
    if v.uses_r and r is None:
        raise DomainError(f"{v.value} needs r")
    if v.uses_w and w is None:
        raise DomainError(f"{v.value} needs w")
    if v is Variant.ORIGINAL:
        return 1.0
    if v is Variant.CRT:
        return 4.0
    if v is Variant.MULTI_PRIME:
        return float(r**2)
    if v is Variant.MULTI_POWER:
        return r**3 / 2
    if v is Variant.REBALANCED:
        return 2 * n / w
    return n * r / w


def speedup_table(n: int, r: int, w: int) -> list[tuple[Variant, str, float]]:
    return [(v, COMPLEXITY[v], theoretical_speedup(SpeedupModel(v, n, r, w))) for v in Variant]


def format_speedup_table(n: int, r: int, w: int) -> str:
    lines = [f"n = {n}, r = {r}, w = {w}", f"{'Variant':<12} {'Complexity':<16} {'Theo.':>6}"]
    for v, complexity, ratio in speedup_table(n, r, w):
        lines.append(f"{LABELS[v]:<12} {complexity:<16} {ratio:>6.1f}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TimingStats:
    samples: tuple[float, ...]  # milliseconds
    mean: float
    median: float
    min: float
    max: float

    @classmethod
    def from_samples(cls, samples) -> "TimingStats":
        samples = tuple(samples)
        if not samples:
            raise DomainError("no samples")
        return cls(samples, statistics.fmean(samples), statistics.median(samples), min(samples), max(samples))


@dataclass(frozen=True)
class BenchRow:
    variant: Variant
    dec: TimingStats
    actual: float
    theo: float
    enc: TimingStats | None = None


@dataclass(frozen=True)
class BenchReport:
    n: int
    r: int
    w: int
    reps: int
    seed: int
    rows: tuple[BenchRow, ...]
    backend: str = ""

    def row(self, variant: Variant) -> BenchRow:
        for row in self.rows:
            if row.variant is Variant(variant):
                return row
        raise KeyError(variant)


def build_report(n, r, w, reps, seed, dec_samples, enc_samples, backend="") -> BenchReport:
    """Assemble a report from raw millisecond samples keyed by variant."""
    base = TimingStats.from_samples(dec_samples[Variant.ORIGINAL]).mean
    rows = []
    for v in Variant:
        if v not in dec_samples:
            continue
        dec = TimingStats.from_samples(dec_samples[v])
        enc = TimingStats.from_samples(enc_samples[v]) if v in enc_samples else None
        actual = 1.0 if v is Variant.ORIGINAL else base / dec.mean
        theo = theoretical_speedup(SpeedupModel(v, n, r, w))
        rows.append(BenchRow(v, dec, actual, theo, enc))
    return BenchReport(n, r, w, reps, seed, tuple(rows), backend)


def generate_keys(n: int, r: int, w: int, seed: int, allow_insecure: bool = False) -> dict[Variant, KeyPair]:
    rng = Rng(seed)
    keys = {}
    for v in Variant:
        params = KeyGenParams(v, n, r if v.uses_r else None, w if v.uses_w else None,
                              seed=seed, allow_insecure=allow_insecure)
        keys[v] = keygen(params, rng)
    return keys


def pick_plaintexts(keys: dict[Variant, KeyPair], rng: Rng) -> dict[Variant, int]:
    """One random M, reduced modulo each key's N; redrawn until it is a unit for Multi-Power."""
    n = max(k.public.N.bit_length() for k in keys.values())
    while True:
        M = rng.getrandbits(n)
        plain = {v: M % k.public.N for v, k in keys.items()}
        mp = keys.get(Variant.MULTI_POWER)
        if mp is None or gcd(plain[Variant.MULTI_POWER], mp.public.N) == 1:
            return plain


def _time_ms(fn, arg) -> tuple[float, int]:
    start = time.perf_counter_ns()
    out = fn(arg)
    return (time.perf_counter_ns() - start) / 1e6, out


def run_benchmark(n: int = 1024, r: int = 3, w: int = 160, reps: int = 20, seed: int = 0,
                  allow_insecure: bool = False) -> BenchReport:
    """Time Original encryption and all six decryptions.

    Repetitions are interleaved round-robin across variants so that slow
    drift in machine speed lands on every variant alike. Every decryption
    is checked against the plaintext.
    """
    from .arith import backend

    if reps < 1:
        raise DomainError("reps must be >= 1")
    keys = generate_keys(n, r, w, seed, allow_insecure)
    plain = pick_plaintexts(keys, Rng(seed ^ 0x5EED))
    cipher = {v: encrypt(k.public, plain[v]) for v, k in keys.items()}
    orig_pub = keys[Variant.ORIGINAL].public

    def enc(M):
        return encrypt(orig_pub, M)

    decs = {v: (lambda C, priv=k.private: decrypt(priv, C)) for v, k in keys.items()}
    dec_samples = {v: [] for v in Variant}
    enc_samples = {Variant.ORIGINAL: []}
    for i in range(WARMUP + reps):
        for v in Variant:
            ms, out = _time_ms(decs[v], cipher[v])
            if out != plain[v]:
                raise AssertionError(f"{v.value} decryption mismatch")
            if i >= WARMUP:
                dec_samples[v].append(ms)
        ms, out = _time_ms(enc, plain[Variant.ORIGINAL])
        if out != cipher[Variant.ORIGINAL]:
            raise AssertionError("original encryption mismatch")
        if i >= WARMUP:
            enc_samples[Variant.ORIGINAL].append(ms)
    return build_report(n, r, w, reps, seed, dec_samples, enc_samples, backend())


def _decimals(report: BenchReport) -> int:
    means = [row.dec.mean for row in report.rows] + [row.enc.mean for row in report.rows if row.enc]
    # whole milliseconds unless that would print zeros
    return 0 if min(means) >= 10 else 3


def format_report(report: BenchReport, decimals: int | None = None) -> str:
    if decimals is None:
        decimals = _decimals(report)
    width = max(6, decimals + 6)
    head = f"{'Variant':<12} {'Enc.':>{width}} {'Dec.':>{width}} {'Actual':>7} {'Theo.':>7}"
    lines = [
        f"n = {report.n}, r = {report.r}, w = {report.w}, reps = {report.reps}, seed = {report.seed}"
        + (f", backend = {report.backend}" if report.backend else "")
        + " (times in ms)",
        head,
    ]
    for row in report.rows:
        enc = f"{row.enc.mean:.{decimals}f}" if row.enc else "-"
        lines.append(
            f"{LABELS[row.variant]:<12} {enc:>{width}} {row.dec.mean:>{width}.{decimals}f}"
            f" {row.actual:>7.1f} {row.theo:>7.1f}"
        )
    return "\n".join(lines) + "\n"


def format_records(report: BenchReport) -> str:
    """Flat ``variant.metric=value`` lines, one per cell."""
    out = [
        f"config.n={report.n}",
        f"config.r={report.r}",
        f"config.w={report.w}",
        f"config.reps={report.reps}",
        f"config.seed={report.seed}",
    ]
    if report.backend:
        out.append(f"config.backend={report.backend}")
    for row in report.rows:
        name = row.variant.value
        stats = [("dec", row.dec)] + ([("enc", row.enc)] if row.enc else [])
        for prefix, s in stats:
            for metric in ("mean", "median", "min", "max"):
                out.append(f"{name}.{prefix}_{metric}_ms={getattr(s, metric):.6f}")
        out.append(f"{name}.actual={row.actual:.6f}")
        out.append(f"{name}.theo={row.theo:.6f}")
    return "\n".join(out) + "\n"
