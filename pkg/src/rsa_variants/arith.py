"""Modular arithmetic primitives.

Exponentiation is left-to-right binary square-and-multiply throughout, so
an exponent of bit length t and Hamming weight h always costs exactly
t - 1 squarings and h - 1 multiplications. The inner loop runs in the
compiled ``_kernel`` extension when it is importable and falls back to
``_fallback`` otherwise; ``RSA_VARIANTS_PURE=1`` forces the fallback.
"""

from __future__ import annotations

import contextlib
import contextvars
import os
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Iterator, NamedTuple

from . import _fallback
from .errors import DomainError, Inconsistent, LiftFailure, NotInvertible

try:
    from . import _kernel
except ImportError:  # extension not built
    _kernel = None

BACKENDS = {"python": _fallback}
if _kernel is not None:
    BACKENDS["compiled"] = _kernel

_impl = _fallback if (_kernel is None or os.environ.get("RSA_VARIANTS_PURE") == "1") else _kernel

# moduli of every mod_pow call, while a recording is active
_recorder: contextvars.ContextVar[list[int] | None] = contextvars.ContextVar(
    "rsa_variants_recorder", default=None
)


class OpCount(NamedTuple):
    squarings: int
    multiplications: int


class Residue(NamedTuple):
    remainder: int
    modulus: int


def backend() -> str:
    """Name of the active exponentiation backend: ``compiled`` or ``python``."""
    return "compiled" if _impl is _kernel else "python"


def set_backend(name: str) -> None:
    global _impl
    try:
        _impl = BACKENDS[name]
    except KeyError:
        raise DomainError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


@contextlib.contextmanager
def using_backend(name: str) -> Iterator[None]:
    previous = backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


@contextlib.contextmanager
def record_moduli() -> Iterator[list[int]]:
    """Collect the modulus of every ``mod_pow`` call made inside the block."""
    calls: list[int] = []
    token = _recorder.set(calls)
    try:
        yield calls
    finally:
        _recorder.reset(token)


def _check_pow_args(base: int, exp: int, modulus: int) -> None:
    if modulus < 1:
        raise DomainError(f"modulus must be >= 1, got {modulus}")
    if base < 0 or exp < 0:
        raise DomainError("base and exponent must be nonnegative")


def mod_pow(base: int, exp: int, modulus: int) -> int:
    _check_pow_args(base, exp, modulus)
    calls = _recorder.get()
    if calls is not None:
        calls.append(modulus)
    return _impl.mod_pow(base, exp, modulus)


def mod_pow_counting(base: int, exp: int, modulus: int) -> tuple[int, OpCount]:
    """``mod_pow`` that also reports how many squarings and multiplications it did."""
    _check_pow_args(base, exp, modulus)
    calls = _recorder.get()
    if calls is not None:
        calls.append(modulus)
    value, squarings, multiplications = _impl.mod_pow_counting(base, exp, modulus)
    return value, OpCount(squarings, multiplications)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) = a*x + b*y``."""
    if a < 0 or b < 0:
        raise DomainError("ext_gcd takes nonnegative integers")
    if a == 0 and b == 0:
        raise DomainError("gcd(0, 0) is undefined")
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def mod_inv(a: int, m: int) -> int:
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    g, x, _ = ext_gcd(a % m, m)
    if g != 1:
        raise NotInvertible(f"gcd({a}, {m}) = {g}")
    return x % m


def _as_residues(residues: Iterable[Residue | tuple[int, int]]) -> list[Residue]:
    out = []
    for a, n in residues:
        if n < 2:
            raise DomainError(f"modulus must be >= 2, got {n}")
        if not 0 <= a < n:
            raise DomainError(f"remainder {a} not in [0, {n})")
        out.append(Residue(a, n))
    if not out:
        raise DomainError("need at least one congruence")
    return out


@lru_cache(maxsize=256)
def crt_basis(moduli: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Product N and coefficients N_i * (N_i^-1 mod n_i) for pairwise-coprime moduli.

    Cached, since decryption recombines over the same primes every call.
    """
    for a, b in combinations(moduli, 2):
        if gcd(a, b) != 1:
            raise DomainError(f"moduli {a} and {b} are not coprime")
    N = 1
    for n in moduli:
        N *= n
    coeffs = []
    for n in moduli:
        Ni = N // n
        coeffs.append(Ni * mod_inv(Ni % n, n))
    return N, tuple(coeffs)


def crt_combine(residues: Iterable[Residue | tuple[int, int]]) -> int:
    """Unique x in [0, N) with x = a_i (mod n_i), by x = sum(a_i N_i y_i) mod N."""
    rs = _as_residues(residues)
    N, coeffs = crt_basis(tuple(r.modulus for r in rs))
    return sum(r.remainder * c for r, c in zip(rs, coeffs)) % N


def crt_combine_noncoprime(a1: int, m1: int, a2: int, m2: int) -> int:
    """Solve x = a1 (mod m1), x = a2 (mod m2) for moduli that may share factors.

    Returns the unique solution in [0, lcm(m1, m2)).
    """
    if m1 < 1 or m2 < 1:
        raise DomainError("moduli must be positive")
    a1 %= m1
    a2 %= m2
    g, u, _ = ext_gcd(m1, m2)
    if (a2 - a1) % g:
        raise Inconsistent(f"{a1} mod {m1} and {a2} mod {m2} disagree modulo {g}")
    lcm = m1 // g * m2
    # x = a1 + m1 * t with m1 * t = a2 - a1 (mod m2)
    t = (a2 - a1) // g * u % (m2 // g)
    return (a1 + m1 * t) % lcm


def hensel_lift_root(C: int, x0: int, e: int, p: int, k: int) -> int:
    """Lift a root x0 of x^e = C (mod p) to the unique root mod p^k congruent to x0.

    Linear lifting, one power of p per step. Primality of p is the caller's
    responsibility and is not re-checked.
    """
    if k < 1:
        raise LiftFailure(f"k must be >= 1, got {k}")
    if p < 2 or e < 1:
        raise LiftFailure("need p >= 2 and e >= 1")
    x0 %= p
    if x0 == 0:
        raise LiftFailure("x0 is divisible by p")
    if e % p == 0:
        raise LiftFailure(f"e is divisible by p={p}")
    c_mod_p = C % p
    if c_mod_p == 0:
        raise LiftFailure("C is divisible by p")
    if k == 1:
        if mod_pow(x0, e, p) != c_mod_p:
            raise LiftFailure("x0 is not a root of x^e = C modulo p")
        return x0
    # f'(x) = e x^(e-1) = e C / x (mod p), and every lift keeps x = x0 (mod p)
    try:
        inv_slope = x0 * mod_inv(e * c_mod_p, p) % p
    except NotInvertible:
        raise LiftFailure(f"derivative not invertible modulo {p}") from None
    x = x0
    pj = p
    for _ in range(k - 1):
        pj1 = pj * p
        err = (C - mod_pow(x, e, pj1)) % pj1
        if err % pj:
            # only reachable on the first step, when x0 is not a root mod p
            raise LiftFailure("x0 is not a root of x^e = C modulo p")
        t = (err // pj) * inv_slope % p
        x += t * pj
        pj = pj1
    return x
