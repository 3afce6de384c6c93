"""Seeded prime generation for key construction."""

from __future__ import annotations

import hashlib
import random
from math import gcd

from .errors import DomainError, RetryNeeded

MAX_ATTEMPTS = 10_000
DEFAULT_ROUNDS = 64


def _small_primes(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


SMALL_PRIMES = _small_primes(1000)


class Rng(random.Random):
    """Deterministic random stream seeded with a 64-bit integer.

    SHA-256 in counter mode; every ``random.Random`` helper (``randrange``,
    ``choice``, ...) draws from it. Not safe to share between threads.
    """

    def __init__(self, seed: int = 0):
        super().__init__(seed)

    def seed(self, a=None, version=2):
        if not isinstance(a, int) or not 0 <= a < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {a!r}")
        self._seed = a
        self._key = hashlib.sha256(b"rsa-variants/rng" + a.to_bytes(8, "big")).digest()
        self._counter = 0
        self._buffer = b""

    def getstate(self):
        return (self._seed, self._counter, self._buffer)

    def setstate(self, state):
        self._seed, self._counter, self._buffer = state
        self._key = hashlib.sha256(b"rsa-variants/rng" + self._seed.to_bytes(8, "big")).digest()

    def _bytes(self, n: int) -> bytes:
        while len(self._buffer) < n:
            block = hashlib.sha256(self._key + self._counter.to_bytes(8, "big")).digest()
            self._counter += 1
            self._buffer += block
        out, self._buffer = self._buffer[:n], self._buffer[n:]
        return out

    def getrandbits(self, k: int) -> int:
        if k < 0:
            raise ValueError("number of bits must be nonnegative")
        if k == 0:
            return 0
        value = int.from_bytes(self._bytes((k + 7) // 8), "big")
        return value >> (-k % 8)

    def random(self) -> float:
        return self.getrandbits(53) / 2**53


def miller_rabin(n: int, rounds: int = DEFAULT_ROUNDS, rng: Rng | None = None) -> bool:
    """Probabilistic primality test preceded by trial division below 1000.

    Never rejects a prime; accepts a composite with probability at most
    4**-rounds.
    """
    if n < 2:
        raise DomainError(f"primality is defined for n >= 2, got {n}")
    if rounds < 1:
        raise DomainError("rounds must be >= 1")
    for sp in SMALL_PRIMES:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    if n < SMALL_PRIMES[-1] ** 2:
        return True
    if rng is None:
        rng = Rng(n % 2**64)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        # witness search is key-generation plumbing, so the builtin pow is fine
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(bits: int, rng: Rng) -> int:
    """A prime with exactly ``bits`` bits (top and bottom bit forced on)."""
    if bits < 4:
        raise DomainError(f"need at least 4 bits, got {bits}")
    top = 1 << (bits - 1)
    for _ in range(MAX_ATTEMPTS):
        candidate = rng.getrandbits(bits) | top | 1
        if miller_rabin(candidate, DEFAULT_ROUNDS, rng):
            return candidate
    raise RetryNeeded(f"no {bits}-bit prime found")


def gen_distinct_primes(count: int, bits: int, rng: Rng) -> list[int]:
    if count < 2:
        raise DomainError(f"need count >= 2, got {count}")
    primes: list[int] = []
    for _ in range(MAX_ATTEMPTS):
        p = random_prime(bits, rng)
        if p not in primes:
            primes.append(p)
            if len(primes) == count:
                return primes
    raise RetryNeeded(f"could not draw {count} distinct {bits}-bit primes")


def gen_primes_pairwise_gcd2(count: int, bits: int, rng: Rng) -> list[int]:
    """Distinct primes with gcd(p_i - 1, p_j - 1) = 2 for every pair."""
    if count < 2:
        raise DomainError(f"need count >= 2, got {count}")
    primes: list[int] = []
    for _ in range(MAX_ATTEMPTS):
        p = random_prime(bits, rng)
        if p not in primes and all(gcd(p - 1, q - 1) == 2 for q in primes):
            primes.append(p)
            if len(primes) == count:
                return primes
    raise RetryNeeded(f"could not draw {count} {bits}-bit primes with pairwise gcd(p-1, q-1) = 2")
