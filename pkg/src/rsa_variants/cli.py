"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 policy violation, 3 math or
validation error. Plaintexts and ciphertexts are hexadecimal integers.
"""

from __future__ import annotations

import argparse
import secrets
import sys
from pathlib import Path

from . import arith, bench
from .errors import KeyFileError, PolicyViolation, RsaVariantsError
from .keyfile import parse_key, serialize_key
from .variants import KeyGenParams, PublicKey, Variant, decrypt, encrypt, keygen, policy_violations

EXIT_OK, EXIT_USAGE, EXIT_POLICY, EXIT_MATH = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is our policy code
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _hex(text: str) -> int:
    body = text[2:] if text.lower().startswith("0x") else text
    try:
        value = int(body, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hexadecimal integer: {text!r}") from None
    if body.startswith(("-", "+")):
        raise argparse.ArgumentTypeError(f"not a hexadecimal integer: {text!r}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rsa-variants", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    kg = sub.add_parser("keygen", help="generate a key pair")
    kg.add_argument("--variant", required=True, choices=[v.value for v in Variant])
    kg.add_argument("--bits", type=int, default=1024)
    kg.add_argument("--r", type=int, help="prime count (multi-prime, multi-power, r-prime; default 3)")
    kg.add_argument("--w", type=int, help="small exponent bits (rebalanced, r-prime; default 160)")
    kg.add_argument("--e", type=int, help="public exponent (default 65537)")
    kg.add_argument("--seed", type=int, help="64-bit seed (default: random)")
    kg.add_argument("--pub", type=Path, help="public key output (default: stdout)")
    kg.add_argument("--priv", type=Path, help="private key output (default: stdout)")
    kg.add_argument("--allow-insecure", action="store_true")

    en = sub.add_parser("encrypt", help="encrypt a hex integer")
    en.add_argument("--key", required=True, type=Path)
    en.add_argument("--m", required=True, type=_hex)

    de = sub.add_parser("decrypt", help="decrypt a hex integer")
    de.add_argument("--key", required=True, type=Path)
    de.add_argument("--c", required=True, type=_hex)

    be = sub.add_parser("bench", help="time every variant")
    be.add_argument("--bits", type=int, default=1024)
    be.add_argument("--r", type=int, default=3)
    be.add_argument("--w", type=int, default=160)
    be.add_argument("--reps", type=int, default=20)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--records", action="store_true", help="key=value output instead of a table")
    be.add_argument("--backend", choices=sorted(arith.BACKENDS))
    be.add_argument("--allow-insecure", action="store_true")

    sp = sub.add_parser("speedup", help="print the theoretical speedup table")
    sp.add_argument("--bits", type=int, default=1024)
    sp.add_argument("--r", type=int, default=3)
    sp.add_argument("--w", type=int, default=160)
    return parser


def _warn_insecure(problems: list[str]) -> None:
    detail = "; ".join(problems) if problems else "no policy bound crossed"
    print(f"warning: --allow-insecure in effect ({detail})", file=sys.stderr)


def _read_key(path: Path):
    return parse_key(path.read_text(encoding="utf-8"))


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def _cmd_keygen(args) -> int:
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    params = KeyGenParams(Variant(args.variant), args.bits, args.r, args.w, args.e, seed, args.allow_insecure)
    if args.allow_insecure:
        _warn_insecure(policy_violations(params))
    pair = keygen(params)
    _write(args.pub, serialize_key(pair.public))
    _write(args.priv, serialize_key(pair.private))
    return EXIT_OK


def _cmd_encrypt(args) -> int:
    key = _read_key(args.key)
    if not isinstance(key, PublicKey):
        raise KeyFileError(f"{args.key} holds a {key.variant.value} private key; encrypt needs a public key")
    print(f"{encrypt(key, args.m):x}")
    return EXIT_OK


def _cmd_decrypt(args) -> int:
    key = _read_key(args.key)
    if isinstance(key, PublicKey):
        raise KeyFileError(f"{args.key} holds a public key; decrypt needs a private key")
    print(f"{decrypt(key, args.c):x}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.allow_insecure:
        problems = []
        for v in Variant:
            problems += policy_violations(KeyGenParams(v, args.bits, args.r if v.uses_r else None,
                                                       args.w if v.uses_w else None))
        _warn_insecure(sorted(set(problems)))
    with arith.using_backend(args.backend or arith.backend()):
        report = bench.run_benchmark(args.bits, args.r, args.w, args.reps, args.seed, args.allow_insecure)
    out = bench.format_records(report) if args.records else bench.format_report(report)
    sys.stdout.write(out)
    return EXIT_OK


def _cmd_speedup(args) -> int:
    sys.stdout.write(bench.format_speedup_table(args.bits, args.r, args.w))
    return EXIT_OK


COMMANDS = {
    "keygen": _cmd_keygen,
    "encrypt": _cmd_encrypt,
    "decrypt": _cmd_decrypt,
    "bench": _cmd_bench,
    "speedup": _cmd_speedup,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except PolicyViolation as exc:
        print(f"policy violation: {exc} (use --allow-insecure to override)", file=sys.stderr)
        return EXIT_POLICY
    except (RsaVariantsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
