"""Original RSA and five fast-decryption variants, with a benchmark harness."""

from .arith import (
    OpCount,
    Residue,
    backend,
    crt_combine,
    crt_combine_noncoprime,
    ext_gcd,
    hensel_lift_root,
    mod_inv,
    mod_pow,
    mod_pow_counting,
    set_backend,
)
from .bench import BenchReport, SpeedupModel, TimingStats, format_report, run_benchmark, theoretical_speedup
from .errors import (
    BadHex,
    BadMagic,
    CiphertextTooLarge,
    DomainError,
    Inconsistent,
    InvalidKey,
    KeyFileError,
    LiftFailure,
    MessageTooLarge,
    MissingField,
    NotInvertible,
    PolicyViolation,
    RetryNeeded,
    RsaVariantsError,
    UnknownKind,
)
from .keyfile import parse_key, serialize_key
from .primegen import Rng, miller_rabin, random_prime
from .variants import (
    CrtKey,
    KeyGenParams,
    KeyPair,
    MultiPowerKey,
    MultiPrimeKey,
    OriginalKey,
    PublicKey,
    RebalancedKey,
    RPrimeKey,
    Variant,
    decrypt,
    encrypt,
    keygen,
)

__version__ = "0.1.0"
