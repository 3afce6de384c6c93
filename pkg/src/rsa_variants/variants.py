"""The original RSA cryptosystem and five fast-decryption variants.

Each variant is split into a deterministic ``assemble_*`` function that
builds a key pair from given primes (usable with toy primes) and the
``keygen`` driver, which draws primes, enforces the security policy and
retries until every structural constraint holds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Union

from . import arith
from .arith import crt_basis, crt_combine, crt_combine_noncoprime, hensel_lift_root, mod_inv, mod_pow
from .errors import (
    CiphertextTooLarge,
    DomainError,
    Inconsistent,
    MessageTooLarge,
    NotInvertible,
    PolicyViolation,
    RetryNeeded,
)
from .primegen import MAX_ATTEMPTS, Rng, gen_distinct_primes, gen_primes_pairwise_gcd2, random_prime

DEFAULT_E = 65537
MIN_W = 160
MIN_SECURE_BITS = 1024
MAX_BITS = 8192
# largest safe prime count per modulus size
MAX_R_BY_SIZE = {1024: 3, 2048: 3, 4096: 4, 8192: 4}


class Variant(str, enum.Enum):
    ORIGINAL = "original"
    CRT = "crt"
    MULTI_PRIME = "multi-prime"
    MULTI_POWER = "multi-power"
    REBALANCED = "rebalanced"
    R_PRIME = "r-prime"

    @property
    def uses_r(self) -> bool:
        return self in (Variant.MULTI_PRIME, Variant.MULTI_POWER, Variant.R_PRIME)

    @property
    def uses_w(self) -> bool:
        return self in (Variant.REBALANCED, Variant.R_PRIME)


@dataclass(frozen=True)
class PublicKey:
    N: int
    e: int

    def __post_init__(self):
        if not 1 < self.e < self.N:
            raise DomainError(f"need 1 < e < N, got e={self.e}")


@dataclass(frozen=True)
class OriginalKey:
    N: int
    d: int

    variant = Variant.ORIGINAL

    def __post_init__(self):
        if not 0 < self.d < self.N:
            raise DomainError("need 0 < d < N")


def _check_crt_exponents(primes, exponents):
    if len(primes) != len(exponents):
        raise DomainError(f"{len(primes)} primes but {len(exponents)} exponents")
    if len(set(primes)) != len(primes):
        raise DomainError("primes must be distinct")
    for p, d in zip(primes, exponents):
        if p < 2:
            raise DomainError(f"bad prime {p}")
        if not 0 < d < max(p - 1, 2):
            raise DomainError(f"exponent {d} not in (0, {p - 1})")


@dataclass(frozen=True)
class CrtKey:
    p: int
    q: int
    d_p: int
    d_q: int

    variant = Variant.CRT

    def __post_init__(self):
        _check_crt_exponents((self.p, self.q), (self.d_p, self.d_q))

    @property
    def N(self) -> int:
        return self.p * self.q

    @property
    def primes(self) -> tuple[int, ...]:
        return (self.p, self.q)

    @property
    def exponents(self) -> tuple[int, ...]:
        return (self.d_p, self.d_q)


@dataclass(frozen=True)
class RebalancedKey(CrtKey):
    variant = Variant.REBALANCED


@dataclass(frozen=True)
class MultiPrimeKey:
    primes: tuple[int, ...]
    exponents: tuple[int, ...]

    variant = Variant.MULTI_PRIME

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(self.primes))
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if len(self.primes) < 3:
            raise DomainError(f"need r >= 3 primes, got {len(self.primes)}")
        _check_crt_exponents(self.primes, self.exponents)

    @property
    def r(self) -> int:
        return len(self.primes)

    @property
    def N(self) -> int:
        return prod(self.primes)


@dataclass(frozen=True)
class RPrimeKey(MultiPrimeKey):
    variant = Variant.R_PRIME


@dataclass(frozen=True)
class MultiPowerKey:
    """Modulus p^(r-1) q. Decryption lifts through e, so the key carries it."""

    p: int
    q: int
    d_p: int
    d_q: int
    r: int
    e: int

    variant = Variant.MULTI_POWER

    def __post_init__(self):
        if self.r < 3:
            raise DomainError(f"need r >= 3, got {self.r}")
        _check_crt_exponents((self.p, self.q), (self.d_p, self.d_q))
        if self.e < 2:
            raise DomainError("need e >= 2")

    @property
    def N(self) -> int:
        return self.p ** (self.r - 1) * self.q


PrivateKey = Union[OriginalKey, CrtKey, MultiPrimeKey, MultiPowerKey, RebalancedKey, RPrimeKey]


@dataclass(frozen=True)
class KeyPair:
    public: PublicKey
    private: PrivateKey

    @property
    def variant(self) -> Variant:
        return self.private.variant


@dataclass(frozen=True)
class KeyGenParams:
    variant: Variant
    n: int = 1024
    r: int | None = None
    w: int | None = None
    e: int | None = None  # None: 65537 where e is free, derived for rebalanced/r-prime
    seed: int = 0
    allow_insecure: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))


def max_prime_count(n: int) -> int:
    """Largest recommended prime count for an n-bit modulus."""
    sizes = [size for size in MAX_R_BY_SIZE if size <= n]
    if not sizes:
        return 2
    return MAX_R_BY_SIZE[max(sizes)]


def policy_violations(params: KeyGenParams) -> list[str]:
    problems = []
    if params.n < MIN_SECURE_BITS:
        problems.append(f"modulus of {params.n} bits is below {MIN_SECURE_BITS}")
    if params.variant.uses_r and params.r is not None and params.r > max_prime_count(params.n):
        problems.append(f"r={params.r} exceeds the maximum of {max_prime_count(params.n)} for n={params.n}")
    if params.variant.uses_w and params.w is not None and params.w < MIN_W:
        problems.append(f"w={params.w} is below {MIN_W}")
    return problems


def check_policy(params: KeyGenParams) -> None:
    problems = policy_violations(params)
    if problems and not params.allow_insecure:
        raise PolicyViolation("; ".join(problems))


# -- assembly from given primes ---------------------------------------------


def _inverse_or_retry(e: int, phi: int) -> int:
    if not 1 < e < phi:
        raise RetryNeeded(f"e={e} not in (1, {phi})")
    try:
        return mod_inv(e, phi)
    except NotInvertible:
        raise RetryNeeded(f"gcd(e, phi) = {gcd(e, phi)}") from None


def assemble_original(p: int, q: int, e: int) -> KeyPair:
    if p == q:
        raise DomainError("p and q must differ")
    phi = (p - 1) * (q - 1)
    d = _inverse_or_retry(e, phi)
    N = p * q
    return KeyPair(PublicKey(N, e), OriginalKey(N, d))


def assemble_crt(p: int, q: int, e: int) -> KeyPair:
    d = assemble_original(p, q, e).private.d
    return KeyPair(PublicKey(p * q, e), CrtKey(p, q, d % (p - 1), d % (q - 1)))


def assemble_multiprime(primes: list[int], e: int) -> KeyPair:
    primes = tuple(primes)
    if len(primes) < 3:
        raise DomainError(f"need r >= 3 primes, got {len(primes)}")
    if len(set(primes)) != len(primes):
        raise DomainError("primes must be distinct")
    d = _inverse_or_retry(e, prod(p - 1 for p in primes))
    exps = tuple(d % (p - 1) for p in primes)
    return KeyPair(PublicKey(prod(primes), e), MultiPrimeKey(primes, exps))


def assemble_multipower(p: int, q: int, e: int, r: int) -> KeyPair:
    if p == q:
        raise DomainError("p and q must differ")
    if r < 3:
        raise DomainError(f"need r >= 3, got {r}")
    if e % p == 0:
        # the lift inverts e modulo p
        raise RetryNeeded(f"e={e} is divisible by p={p}")
    d = _inverse_or_retry(e, (p - 1) * (q - 1))
    N = p ** (r - 1) * q
    if e >= N:
        raise RetryNeeded(f"e={e} not below N={N}")
    return KeyPair(PublicKey(N, e), MultiPowerKey(p, q, d % (p - 1), d % (q - 1), r, e))


def _combine_exponents(primes, small_exps) -> tuple[int, int]:
    """d with d = d_i (mod p_i - 1) for all i, and phi(N)."""
    d, lcm = small_exps[0] % (primes[0] - 1), primes[0] - 1
    for p, dp in zip(primes[1:], small_exps[1:]):
        try:
            d = crt_combine_noncoprime(d, lcm, dp, p - 1)
        except Inconsistent as exc:
            raise RetryNeeded(str(exc)) from None
        lcm = lcm // gcd(lcm, p - 1) * (p - 1)
    return d, prod(p - 1 for p in primes)


def _check_small_exps(primes, small_exps) -> None:
    if len(primes) != len(small_exps):
        raise DomainError(f"{len(primes)} primes but {len(small_exps)} exponents")
    if len(set(primes)) != len(primes):
        raise DomainError("primes must be distinct")
    for p, dp in zip(primes, small_exps):
        if gcd(dp, p - 1) != 1:
            raise RetryNeeded(f"gcd({dp}, {p - 1}) != 1")
        if not 0 < dp < p - 1:
            raise DomainError(f"exponent {dp} not in (0, {p - 1})")


def _assemble_rebalanced_family(primes, small_exps) -> tuple[PublicKey, int]:
    _check_small_exps(primes, small_exps)
    d, phi = _combine_exponents(primes, small_exps)
    # d is odd and coprime to every p_i - 1, so it is a unit mod phi
    try:
        e = mod_inv(d, phi)
    except NotInvertible:
        raise RetryNeeded(f"d={d} not invertible modulo phi") from None
    N = prod(primes)
    if not 1 < e < N:
        raise RetryNeeded(f"derived e={e} out of range")
    return PublicKey(N, e), d


def assemble_rebalanced(p: int, q: int, d_p: int, d_q: int) -> KeyPair:
    if gcd(p - 1, q - 1) != 2:
        raise RetryNeeded(f"gcd(p-1, q-1) = {gcd(p - 1, q - 1)}, need 2")
    pub, _ = _assemble_rebalanced_family((p, q), (d_p, d_q))
    return KeyPair(pub, RebalancedKey(p, q, d_p, d_q))


def assemble_rprime(primes: list[int], small_exps: list[int]) -> KeyPair:
    primes, small_exps = tuple(primes), tuple(small_exps)
    if len(primes) < 3:
        raise DomainError(f"need r >= 3 primes, got {len(primes)}")
    for i, p in enumerate(primes):
        for q in primes[i + 1 :]:
            if gcd(p - 1, q - 1) != 2:
                raise RetryNeeded(f"gcd({p - 1}, {q - 1}) != 2")
    pub, _ = _assemble_rebalanced_family(primes, small_exps)
    return KeyPair(pub, RPrimeKey(primes, small_exps))


def recover_d(key: PrivateKey) -> int:
    """The full private exponent behind a key's CRT exponents."""
    if isinstance(key, OriginalKey):
        return key.d
    if isinstance(key, MultiPowerKey):
        return crt_combine_noncoprime(key.d_p, key.p - 1, key.d_q, key.q - 1)
    return _combine_exponents(key.primes, key.exponents)[0]


# -- key generation -----------------------------------------------------------


def _prime_bits(n: int, count: int) -> int:
    # ceil, so that count such primes can still reach an n-bit product
    return -(-n // count)


def _small_exponent(w: int, modulus: int, rng: Rng) -> int:
    """Odd w-bit integer coprime to ``modulus``."""
    top = 1 << (w - 1)
    for _ in range(MAX_ATTEMPTS):
        d = rng.getrandbits(w) | top | 1
        if gcd(d, modulus) == 1:
            return d
    raise RetryNeeded(f"no {w}-bit exponent coprime to the prime")


def _validate_params(params: KeyGenParams) -> tuple[int, int | None, int]:
    v = params.variant
    if not 16 <= params.n <= MAX_BITS:
        raise DomainError(f"modulus size must be in [16, {MAX_BITS}] bits, got {params.n}")
    r = params.r
    if v.uses_r:
        r = 3 if r is None else r
        if r < 3:
            raise DomainError(f"{v.value} needs r >= 3, got {r}")
    w = params.w if params.w is not None else MIN_W
    if v.uses_w:
        if params.e is not None:
            raise DomainError(f"{v.value} derives e; a fixed e is not allowed")
        count = r if v is Variant.R_PRIME else 2
        if not 2 <= w < _prime_bits(params.n, count):
            raise DomainError(f"w={w} must be below the prime size {_prime_bits(params.n, count)}")
    elif params.e is not None and params.e < 3:
        raise DomainError(f"e must be >= 3, got {params.e}")
    check_policy(KeyGenParams(v, params.n, r, w if v.uses_w else None, params.e, params.seed, params.allow_insecure))
    return params.n, r, w


def _draw(params: KeyGenParams, n: int, r: int | None, w: int, rng: Rng) -> KeyPair:
    v = params.variant
    e = params.e if params.e is not None else DEFAULT_E
    if v in (Variant.ORIGINAL, Variant.CRT):
        p, q = gen_distinct_primes(2, _prime_bits(n, 2), rng)
        return (assemble_original if v is Variant.ORIGINAL else assemble_crt)(p, q, e)
    if v is Variant.MULTI_PRIME:
        return assemble_multiprime(gen_distinct_primes(r, _prime_bits(n, r), rng), e)
    if v is Variant.MULTI_POWER:
        p, q = gen_distinct_primes(2, _prime_bits(n, r), rng)
        return assemble_multipower(p, q, e, r)
    count = 2 if v is Variant.REBALANCED else r
    primes = gen_primes_pairwise_gcd2(count, _prime_bits(n, count), rng)
    exps = [_small_exponent(w, p - 1, rng) for p in primes]
    if v is Variant.REBALANCED:
        return assemble_rebalanced(primes[0], primes[1], exps[0], exps[1])
    return assemble_rprime(primes, exps)


def keygen(params: KeyGenParams, rng: Rng | None = None) -> KeyPair:
    """Generate a key pair whose modulus has exactly ``params.n`` bits."""
    n, r, w = _validate_params(params)
    if rng is None:
        rng = Rng(params.seed)
    for _ in range(MAX_ATTEMPTS):
        try:
            pair = _draw(params, n, r, w, rng)
        except RetryNeeded:
            continue
        if pair.public.N.bit_length() == n:
            return pair
    raise RetryNeeded(f"gave up after {MAX_ATTEMPTS} draws for {params}")


# -- encryption and decryption ------------------------------------------------


def encrypt(pub: PublicKey, M: int) -> int:
    if M < 0:
        raise DomainError("message must be nonnegative")
    if M >= pub.N:
        raise MessageTooLarge(f"message needs {M.bit_length()} bits, modulus has {pub.N.bit_length()}")
    return mod_pow(M, pub.e, pub.N)


def decrypt_crt_family(primes, exps, C: int, N: int) -> int:
    """One exponentiation per prime, then CRT recombination.

    Shared by CRT, Multi-Prime, Rebalanced and R-Prime keys.
    """
    primes = tuple(primes)
    if len(primes) != len(exps):
        raise DomainError("one exponent per prime required")
    product, _ = crt_basis(primes)
    if product != N:
        raise DomainError("primes do not multiply to N")
    return crt_combine([(mod_pow(C % p, d, p), p) for p, d in zip(primes, exps)])


def decrypt_multipower(key: MultiPowerKey, C: int) -> int:
    """M_q by one exponentiation mod q; M_p by one mod p lifted to p^(r-1)."""
    p, q = key.p, key.q
    k = key.r - 1
    pk = p**k
    m_q = mod_pow(C % q, key.d_q, q)
    x0 = mod_pow(C % p, key.d_p, p)
    m_p = hensel_lift_root(C % pk, x0, key.e, p, k)
    return crt_combine([(m_p, pk), (m_q, q)])


def decrypt(priv: PrivateKey, C: int) -> int:
    N = priv.N
    if not 0 <= C < N:
        raise CiphertextTooLarge(f"ciphertext must lie in [0, N)")
    if isinstance(priv, OriginalKey):
        return mod_pow(C, priv.d, N)
    if isinstance(priv, MultiPowerKey):
        return decrypt_multipower(priv, C)
    return decrypt_crt_family(priv.primes, priv.exponents, C, N)
