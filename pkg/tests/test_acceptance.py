"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line; the lines are
repeated in the terminal summary by conftest.py."""

import time
from math import gcd

import pytest

from rsa_variants.arith import hensel_lift_root, mod_pow_counting
from rsa_variants.cli import main
from rsa_variants.errors import LiftFailure
from rsa_variants.keyfile import parse_key, serialize_key
from rsa_variants.primegen import Rng
from rsa_variants.variants import (
    KeyGenParams,
    Variant,
    assemble_crt,
    assemble_original,
    decrypt,
    encrypt,
    keygen,
)

RESULTS = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of the calling test under its criterion number."""
    state = {}

    def start(number, title):
        state.update(number=number, title=title, t0=time.perf_counter())

    yield start
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
    elapsed = time.perf_counter() - state["t0"]
    line = f"criterion {state['number']}: {'FAIL' if failed else 'PASS'} - {state['title']} ({elapsed:.1f} s)"
    RESULTS[state["number"]] = line
    print(line)


def cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_1_theoretical_table(criterion, capsys):
    criterion(1, "speedup table 1.0/4.0/9.0/13.5/12.8/19.2")
    t0 = time.perf_counter()
    code, out, _ = cli(capsys, "speedup", "--bits", "1024", "--r", "3", "--w", "160")
    elapsed = time.perf_counter() - t0
    assert code == 0
    rows = {line.split()[0]: line.split()[-1] for line in out.splitlines()[2:]}
    assert rows == {"Original": "1.0", "CRT": "4.0", "Multi-Prime": "9.0",
                    "Multi-Power": "13.5", "Rebalanced": "12.8", "R-Prime": "19.2"}
    assert elapsed < 1.0


def test_2_round_trip(criterion):
    criterion(2, "round trip, 6 variants x n in {256, 512, 1024} x 100 plaintexts")
    t0 = time.perf_counter()
    rng = Rng(2024)
    failures = []
    for n in (256, 512, 1024):
        # at n = 256 the primes are too small for 160-bit exponents
        w = 160 if n >= 512 else 64
        for variant in Variant:
            params = KeyGenParams(variant, n, w=w if variant.uses_w else None, allow_insecure=n < 1024)
            pair = keygen(params, rng)
            N = pair.public.N
            assert N.bit_length() == n
            count = 0
            while count < 100:
                M = rng.randrange(N)
                if variant is Variant.MULTI_POWER and gcd(M, N) != 1:
                    continue
                count += 1
                if decrypt(pair.private, encrypt(pair.public, M)) != M:
                    failures.append((n, variant.value, M))
    assert failures == []
    assert time.perf_counter() - t0 < 120


def test_3_toy_oracle(criterion):
    criterion(3, "exhaustive (3, 11, 3) oracle")
    t0 = time.perf_counter()
    pub = assemble_original(3, 11, 3).public
    orig = assemble_original(3, 11, 3).private
    crt = assemble_crt(3, 11, 3).private
    brute = [M * M * M % 33 for M in range(33)]
    table = [encrypt(pub, M) for M in range(33)]
    assert table == brute
    assert sorted(table) == list(range(33))
    for C in range(33):
        assert decrypt(orig, C) == decrypt(crt, C) == table.index(C)
    assert time.perf_counter() - t0 < 1.0


def test_4_operation_counts(criterion):
    criterion(4, "op counts for 1000 exponents up to 2048 bits, e = 65537 -> (16, 1)")
    rng = Rng(4)
    modulus = (1 << 521) - 1
    for _ in range(1000):
        e = rng.getrandbits(rng.randrange(1, 2049)) | 1
        value, ops = mod_pow_counting(3, e, modulus)
        assert ops == (e.bit_length() - 1, bin(e).count("1") - 1)
    assert mod_pow_counting(3, 65537, modulus)[1] == (16, 1)
    assert mod_pow_counting(3, 65537, modulus)[0] == pow(3, 65537, modulus)


def _primes_below(n):
    return [p for p in range(2, n) if all(p % f for f in range(2, p))]


def test_5_hensel_oracle(criterion):
    criterion(5, "Hensel lifting vs exhaustive search, p < 30, k in {2, 3}, e < 20")
    t0 = time.perf_counter()
    checked = 0
    for p in _primes_below(30):
        for k in (2, 3):
            pk = p**k
            for e in range(1, 20):
                if gcd(e, p * (p - 1)) != 1:
                    continue
                # e is a unit mod p - 1, so every unit has exactly one e-th root mod p
                root_mod_p = {pow(x, e, p): x for x in range(1, p)}
                assert len(root_mod_p) == p - 1
                roots = {}
                for x in range(pk):
                    roots.setdefault(pow(x, e, pk), []).append(x)
                for C in range(1, pk):
                    if C % p == 0:
                        continue
                    (expected,) = roots[C]
                    x0 = root_mod_p[C % p]
                    assert expected % p == x0
                    assert hensel_lift_root(C, x0, e, p, k) == expected
                    checked += 1
                    if p > 2:
                        with pytest.raises(LiftFailure):
                            hensel_lift_root(C, x0 % (p - 1) + 1, e, p, k)
    assert checked > 10_000
    assert time.perf_counter() - t0 < 30


def test_6_measured_speedup(criterion, capsys):
    criterion(6, "bench --bits 1024 --r 3 --reps 20 orderings")
    t0 = time.perf_counter()
    code, out, _ = cli(capsys, "bench", "--bits", "1024", "--r", "3", "--reps", "20", "--records")
    assert code == 0
    rec = {k: float(v) for k, v in (line.split("=", 1) for line in out.splitlines()) if not k.startswith("config.")}
    dec = {v: rec[f"{v.value}.dec_mean_ms"] for v in Variant}
    actual = {v: rec[f"{v.value}.actual"] for v in Variant}
    summary = ", ".join(f"{v.value}={dec[v]:.2f}ms/{actual[v]:.2f}x" for v in Variant)
    summary += f", enc={rec['original.enc_mean_ms']:.2f}ms"
    print(summary)
    # (a) every variant beats Original
    assert all(dec[v] < dec[Variant.ORIGINAL] for v in Variant if v is not Variant.ORIGINAL), summary
    # (b) CRT speedup in [2.5, 4.5]
    assert 2.5 <= actual[Variant.CRT] <= 4.5, summary
    # (c) R-Prime fastest
    assert min(dec, key=dec.get) is Variant.R_PRIME, summary
    # (d) encryption at least 5x faster than the fastest decryption
    assert 5 * rec["original.enc_mean_ms"] <= min(dec.values()), summary
    assert time.perf_counter() - t0 < 180


def test_7_policy_gate(criterion, capsys):
    criterion(7, "policy gate exit codes")
    assert cli(capsys, "keygen", "--variant", "multi-prime", "--bits", "1024", "--r", "4")[0] == 2
    assert cli(capsys, "keygen", "--variant", "rebalanced", "--bits", "1024", "--w", "128")[0] == 2
    assert cli(capsys, "keygen", "--variant", "r-prime", "--bits", "1024", "--w", "128")[0] == 2
    code, _, err = cli(capsys, "keygen", "--variant", "multi-prime", "--bits", "1024", "--r", "4",
                       "--seed", "1", "--allow-insecure")
    assert code == 0 and "warning" in err
    code, _, err = cli(capsys, "keygen", "--variant", "rebalanced", "--bits", "1024", "--w", "128",
                       "--seed", "1", "--allow-insecure")
    assert code == 0 and "warning" in err


def test_8_serialization(criterion):
    criterion(8, "1000 random keys survive serialize -> parse")
    rng = Rng(8)
    variants = list(Variant)
    for i in range(1000):
        variant = variants[i % len(variants)]
        n = 1024 if i % 100 == 0 else rng.randrange(64, 257)
        r = rng.choice([3, 4]) if variant.uses_r and n < 1024 else (3 if variant.uses_r else None)
        count = r if variant is Variant.R_PRIME else 2
        w = -(-n // count) // 2 if variant.uses_w else None
        pair = keygen(KeyGenParams(variant, n, r, w if n < 1024 else None, allow_insecure=n < 1024), rng)
        for key in (pair.public, pair.private):
            text = serialize_key(key)
            parsed = parse_key(text)
            assert parsed == key and type(parsed) is type(key)
            assert serialize_key(parsed) == text
