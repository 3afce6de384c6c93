"""Compare the compiled kernel against the pure-Python fallback.

    python benchmarks/bench_backends.py [--reps 20] [--seed 0]

Part 1 times one full-length modular exponentiation per modulus size.
Part 2 runs the decryption benchmark once per backend on identical keys.
Times are best-of-reps in milliseconds.
"""

import argparse
import sys
import timeit

from rsa_variants import arith
from rsa_variants.bench import LABELS, run_benchmark
from rsa_variants.primegen import Rng
from rsa_variants.variants import Variant

SIZES = (32, 64, 128, 171, 342, 512, 1024, 2048)


def time_mod_pow(bits: int, reps: int, rng: Rng) -> dict[str, float]:
    m = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
    a, e = rng.getrandbits(bits) % m, rng.getrandbits(bits) | (1 << (bits - 1))
    number = max(1, 20_000 // bits)
    out = {}
    for name in sorted(arith.BACKENDS):
        with arith.using_backend(name):
            best = min(timeit.repeat(lambda: arith.mod_pow(a, e, m), number=number, repeat=reps))
        out[name] = best / number * 1e3
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--bits", type=int, default=1024, help="modulus size for part 2")
    args = parser.parse_args(argv)

    if "compiled" not in arith.BACKENDS:
        print("compiled extension not built; only the fallback is available", file=sys.stderr)
    names = sorted(arith.BACKENDS)
    rng = Rng(args.seed)

    print("mod_pow, full-length exponent (ms)")
    print(f"{'bits':>6} " + " ".join(f"{n:>10}" for n in names) + f" {'py/comp':>8}")
    for bits in SIZES:
        t = time_mod_pow(bits, args.reps, rng)
        ratio = f"{t['python'] / t['compiled']:8.2f}" if "compiled" in t else f"{'-':>8}"
        print(f"{bits:>6} " + " ".join(f"{t[n]:>10.4f}" for n in names) + f" {ratio}")

    print()
    print(f"decryption, n = {args.bits}, r = 3, w = 160, mean of {args.reps} (ms)")
    reports = {}
    for name in names:
        with arith.using_backend(name):
            reports[name] = run_benchmark(args.bits, 3, 160, args.reps, args.seed)
    print(f"{'Variant':<12} " + " ".join(f"{n:>10}" for n in names) + f" {'py/comp':>8}")
    for v in Variant:
        t = {n: reports[n].row(v).dec.mean for n in names}
        ratio = f"{t['python'] / t['compiled']:8.2f}" if "compiled" in t else f"{'-':>8}"
        print(f"{LABELS[v]:<12} " + " ".join(f"{t[n]:>10.3f}" for n in names) + f" {ratio}")
    t = {n: reports[n].row(Variant.ORIGINAL).enc.mean for n in names}
    ratio = f"{t['python'] / t['compiled']:8.2f}" if "compiled" in t else f"{'-':>8}"
    print(f"{'Enc. (orig)':<12} " + " ".join(f"{t[n]:>10.3f}" for n in names) + f" {ratio}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
