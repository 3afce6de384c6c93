"""Plain-text key files.

Layout (LF line endings, every value lowercase hex without a 0x prefix)::

    rsa-variants-key v1
    kind = crt
    bits = 400
    p = ...
    q = ...
    d_p = ...
    d_q = ...

The parameter block follows ``kind``: ``bits`` (bit length of N) always,
``r`` for multi-prime, multi-power and r-prime, ``w`` (largest small
exponent bit length) for rebalanced and r-prime. Integer fields come next:

    public          N, e
    original        N, d
    crt/rebalanced  p, q, d_p, d_q
    multi-prime     p_1..p_r, d_1..d_r
    r-prime         p_1..p_r, d_1..d_r
    multi-power     p, q, d_p, d_q, e

Private key files are not encrypted. Primality is not re-checked on load.
"""

from __future__ import annotations

import re

from .errors import BadHex, BadMagic, DomainError, InvalidKey, MissingField, UnknownKind
from .variants import (
    CrtKey,
    MultiPowerKey,
    MultiPrimeKey,
    OriginalKey,
    PrivateKey,
    PublicKey,
    RebalancedKey,
    RPrimeKey,
)

MAGIC = "rsa-variants-key v1"
KINDS = ("public", "original", "crt", "multi-prime", "multi-power", "rebalanced", "r-prime")
_HEX = re.compile(r"[0-9a-f]+")


def _kind(key) -> str:
    if isinstance(key, PublicKey):
        return "public"
    return key.variant.value


def _params(key, kind: str) -> list[tuple[str, int]]:
    out = [("bits", key.N.bit_length())]
    if kind in ("multi-prime", "multi-power", "r-prime"):
        out.append(("r", key.r))
    if kind in ("rebalanced", "r-prime"):
        out.append(("w", max(d.bit_length() for d in key.exponents)))
    return out


def _fields(key, kind: str) -> list[tuple[str, int]]:
    if kind == "public":
        return [("N", key.N), ("e", key.e)]
    if kind == "original":
        return [("N", key.N), ("d", key.d)]
    if kind in ("crt", "rebalanced"):
        return [("p", key.p), ("q", key.q), ("d_p", key.d_p), ("d_q", key.d_q)]
    if kind == "multi-power":
        return [("p", key.p), ("q", key.q), ("d_p", key.d_p), ("d_q", key.d_q), ("e", key.e)]
    return ([(f"p_{i + 1}", p) for i, p in enumerate(key.primes)]
            + [(f"d_{i + 1}", d) for i, d in enumerate(key.exponents)])


def serialize_key(key: PublicKey | PrivateKey) -> str:
    kind = _kind(key)
    lines = [MAGIC, f"kind = {kind}"]
    lines += [f"{name} = {value:x}" for name, value in _params(key, kind) + _fields(key, kind)]
    return "\n".join(lines) + "\n"


class _Lines:
    """Sequential reader over ``name = value`` lines, tracking line numbers."""

    def __init__(self, text: str, first_lineno: int):
        self.rows = [(first_lineno + i, line) for i, line in enumerate(text.split("\n")) if line.strip()]
        self.pos = 0
        self.last = self.rows[-1][0] if self.rows else first_lineno - 1

    def take(self, name: str) -> tuple[int, str]:
        if self.pos >= len(self.rows):
            raise MissingField(f"missing field {name!r}", self.last + 1)
        lineno, line = self.rows[self.pos]
        key, sep, value = line.partition("=")
        if not sep or key.strip() != name:
            raise MissingField(f"expected field {name!r}, found {line.strip()!r}", lineno)
        self.pos += 1
        return lineno, value.strip()

    def hex(self, name: str) -> tuple[int, int]:
        lineno, value = self.take(name)
        if not _HEX.fullmatch(value):
            raise BadHex(f"{name}: {value!r} is not lowercase hexadecimal", lineno)
        return lineno, int(value, 16)


def parse_key(text: str) -> PublicKey | PrivateKey:
    first, _, rest = text.partition("\n")
    if first != MAGIC:
        raise BadMagic(f"expected {MAGIC!r}, found {first!r}", 1)
    lines = _Lines(rest, 2)
    kind_line, kind = lines.take("kind")
    if kind not in KINDS:
        raise UnknownKind(f"unknown key kind {kind!r}", kind_line)

    _, bits = lines.hex("bits")
    r = w = None
    if kind in ("multi-prime", "multi-power", "r-prime"):
        r_line, r = lines.hex("r")
        if r < 3:
            raise InvalidKey(f"r must be at least 3, got {r}", r_line)
    if kind in ("rebalanced", "r-prime"):
        _, w = lines.hex("w")

    if kind in ("multi-prime", "r-prime"):
        # generated lazily so a corrupt huge r fails at the first missing line
        names = (f"{c}_{i}" for c in "pd" for i in range(1, r + 1))
    else:
        names = {
            "public": ["N", "e"],
            "original": ["N", "d"],
            "crt": ["p", "q", "d_p", "d_q"],
            "rebalanced": ["p", "q", "d_p", "d_q"],
            "multi-power": ["p", "q", "d_p", "d_q", "e"],
        }[kind]
    values = [lines.hex(name)[1] for name in names]
    if lines.pos < len(lines.rows):
        lineno, line = lines.rows[lines.pos]
        raise InvalidKey(f"unexpected line {line.strip()!r}", lineno)

    try:
        key = _build(kind, values, r)
    except DomainError as exc:
        raise InvalidKey(str(exc), kind_line) from exc
    if key.N.bit_length() != bits:
        raise InvalidKey(f"bits = {bits:x} but N has {key.N.bit_length():x} bits", kind_line)
    if w is not None and max(d.bit_length() for d in key.exponents) != w:
        raise InvalidKey("w does not match the exponent sizes", kind_line)
    return key


def _build(kind: str, v: list[int], r: int | None):
    if kind == "public":
        return PublicKey(*v)
    if kind == "original":
        return OriginalKey(*v)
    if kind == "crt":
        return CrtKey(*v)
    if kind == "rebalanced":
        return RebalancedKey(*v)
    if kind == "multi-power":
        p, q, d_p, d_q, e = v
        return MultiPowerKey(p, q, d_p, d_q, r, e)
    cls = MultiPrimeKey if kind == "multi-prime" else RPrimeKey
    return cls(tuple(v[:r]), tuple(v[r:]))
