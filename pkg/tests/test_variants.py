from math import gcd, prod

import pytest

from rsa_variants.arith import mod_inv, record_moduli
from rsa_variants.errors import (
    CiphertextTooLarge,
    DomainError,
    LiftFailure,
    MessageTooLarge,
    PolicyViolation,
    RetryNeeded,
)
from rsa_variants.primegen import Rng
from rsa_variants.variants import (
    CrtKey,
    KeyGenParams,
    MultiPowerKey,
    MultiPrimeKey,
    OriginalKey,
    PublicKey,
    Variant,
    assemble_crt,
    assemble_multipower,
    assemble_multiprime,
    assemble_original,
    assemble_rebalanced,
    assemble_rprime,
    decrypt,
    decrypt_crt_family,
    decrypt_multipower,
    encrypt,
    max_prime_count,
    keygen,
    recover_d,
)


class TestAssemble:
    def test_original(self):
        pair = assemble_original(3, 11, 3)
        assert pair.public == PublicKey(33, 3)
        assert pair.private == OriginalKey(33, 7)

    def test_original_self_inverse(self):
        phi = 4 * 6
        assert assemble_original(5, 7, phi - 1).private.d == phi - 1

    def test_original_retry(self):
        assert assemble_original(5, 7, 5).private.d == 5
        with pytest.raises(RetryNeeded):
            assemble_original(5, 7, 6)

    def test_crt(self):
        assert assemble_crt(3, 11, 3).private == CrtKey(3, 11, 1, 7)
        assert assemble_crt(5, 7, 7).private == CrtKey(5, 7, 3, 1)

    def test_multiprime(self):
        pair = assemble_multiprime([3, 5, 7], 5)
        assert pair.public.N == 105
        assert pair.private == MultiPrimeKey((3, 5, 7), (1, 1, 5))
        assert 5 * 29 % 48 == 1 and recover_d(pair.private) % 24 == 29 % 24
        with pytest.raises(RetryNeeded):
            assemble_multiprime([3, 5, 7], 2)

    def test_multiprime_needs_three(self):
        with pytest.raises(DomainError):
            assemble_multiprime([3, 5], 5)

    def test_multipower(self):
        pair = assemble_multipower(5, 7, 7, 3)
        assert pair.public == PublicKey(175, 7)
        assert pair.private == MultiPowerKey(5, 7, 3, 1, 3, 7)
        assert recover_d(pair.private) == 7
        with pytest.raises(RetryNeeded):
            assemble_multipower(5, 7, 5, 3)

    def test_rebalanced(self):
        pair = assemble_rebalanced(5, 7, 3, 5)
        assert pair.public == PublicKey(35, 11)
        assert recover_d(pair.private) == 11

    def test_rebalanced_needs_gcd2(self):
        # gcd(6, 12) = 6
        with pytest.raises(RetryNeeded):
            assemble_rebalanced(7, 13, 5, 5)

    def test_rprime(self):
        pair = assemble_rprime([5, 7, 11], [3, 5, 3])
        assert pair.public == PublicKey(385, 167)
        assert recover_d(pair.private) == 23
        C = encrypt(pair.public, 2)
        assert C == pow(2, 167, 385)
        assert decrypt(pair.private, C) == 2

    def test_rprime_pairwise(self):
        # gcd(4, 6) = 2 but gcd(6, 12) = 6
        with pytest.raises(RetryNeeded):
            assemble_rprime([5, 7, 13], [3, 5, 5])


class TestEncryptDecrypt:
    def test_encrypt(self):
        pub = PublicKey(33, 3)
        assert encrypt(pub, 2) == 8
        assert encrypt(pub, 0) == 0 and encrypt(pub, 1) == 1
        with pytest.raises(MessageTooLarge):
            encrypt(pub, 40)
        with pytest.raises(DomainError):
            encrypt(pub, -1)

    def test_decrypt_examples(self):
        assert decrypt(OriginalKey(33, 7), 8) == 2
        assert decrypt(assemble_crt(3, 11, 3).private, 8) == 2
        assert decrypt(assemble_multipower(5, 7, 7, 3).private, 128) == 2

    def test_crt_family(self):
        assert decrypt_crt_family([3, 5, 7], [1, 1, 5], 32, 105) == 2
        assert decrypt_crt_family([5, 7], [3, 5], 18, 35) == 2
        assert decrypt_crt_family([5, 7], [3, 5], 0, 35) == 0
        with pytest.raises(DomainError):
            decrypt_crt_family([5, 7], [3, 5], 3, 36)

    def test_multipower(self):
        key = assemble_multipower(5, 7, 7, 3).private
        assert decrypt_multipower(key, 128) == 2
        assert decrypt_multipower(key, 1) == 1
        with pytest.raises(LiftFailure):
            decrypt_multipower(key, 125)

    def test_multipower_collision_rejected(self):
        # 5 and 110 encrypt to the same value mod 175
        pub = PublicKey(175, 7)
        assert encrypt(pub, 5) == encrypt(pub, 110)
        with pytest.raises(LiftFailure):
            decrypt(assemble_multipower(5, 7, 7, 3).private, encrypt(pub, 5))

    def test_multipower_all_units(self):
        pair = assemble_multipower(5, 7, 7, 3)
        for M in range(175):
            if gcd(M, 175) == 1:
                assert decrypt(pair.private, encrypt(pair.public, M)) == M

    def test_ciphertext_range(self):
        with pytest.raises(CiphertextTooLarge):
            decrypt(OriginalKey(33, 7), 33)
        with pytest.raises(CiphertextTooLarge):
            decrypt(assemble_crt(3, 11, 3).private, -1)

    def test_original_crt_agree_exhaustive(self):
        for p, q, e in [(3, 11, 3), (5, 7, 5), (11, 13, 7), (47, 53, 17), (89, 97, 5)]:
            orig = assemble_original(p, q, e).private
            crt = assemble_crt(p, q, e).private
            for C in range(p * q):
                assert decrypt(orig, C) == decrypt(crt, C)

    def test_multipower_one_exponentiation_mod_p(self):
        pair = keygen(KeyGenParams(Variant.MULTI_POWER, 1024, 3), Rng(11))
        key = pair.private
        M = 0xC0FFEE
        C = encrypt(pair.public, M)
        with record_moduli() as seen:
            assert decrypt(key, C) == M
        assert seen.count(key.p) == 1
        assert key.q in seen


class TestKeyInvalid:
    def test_crt_exponent_range(self):
        with pytest.raises(DomainError):
            CrtKey(5, 7, 0, 1)
        with pytest.raises(DomainError):
            CrtKey(5, 5, 1, 1)

    def test_public_exponent_range(self):
        with pytest.raises(DomainError):
            PublicKey(33, 1)
        with pytest.raises(DomainError):
            PublicKey(33, 33)


class TestKeygen:
    def test_policy(self):
        with pytest.raises(PolicyViolation):
            keygen(KeyGenParams(Variant.MULTI_PRIME, 1024, r=4))
        with pytest.raises(PolicyViolation):
            keygen(KeyGenParams(Variant.REBALANCED, 1024, w=128))
        with pytest.raises(PolicyViolation):
            keygen(KeyGenParams(Variant.CRT, 512))

    def test_max_prime_count(self):
        assert [max_prime_count(n) for n in (1024, 2048, 4096, 8192)] == [3, 3, 4, 4]

    def test_allow_insecure(self):
        pair = keygen(KeyGenParams(Variant.MULTI_PRIME, 256, r=4, allow_insecure=True), Rng(2))
        assert pair.private.r == 4 and pair.public.N.bit_length() == 256

    def test_crt_default(self):
        pair = keygen(KeyGenParams(Variant.CRT, 1024, seed=7))
        assert pair.public.N.bit_length() == 1024 and pair.public.e == 65537

    def test_deterministic(self):
        params = KeyGenParams(Variant.R_PRIME, 512, allow_insecure=True, seed=3)
        assert keygen(params) == keygen(params)

    def test_fixed_e_rejected_for_rebalanced(self):
        with pytest.raises(DomainError):
            keygen(KeyGenParams(Variant.REBALANCED, 1024, e=65537))

    def test_w_too_large(self):
        with pytest.raises(DomainError):
            keygen(KeyGenParams(Variant.R_PRIME, 256, w=100, allow_insecure=True))

    @pytest.mark.parametrize("variant", list(Variant))
    def test_key_consistency(self, variant):
        pair = keygen(KeyGenParams(variant, 1024, seed=21))
        pub, key = pair.public, pair.private
        assert pub.N.bit_length() == 1024 == key.N.bit_length()
        assert pub.N == key.N
        if isinstance(key, MultiPowerKey):
            phi = (key.p - 1) * (key.q - 1)
            assert key.e == pub.e
        elif isinstance(key, OriginalKey):
            return
        else:
            phi = prod(p - 1 for p in key.primes)
        d = mod_inv(pub.e, phi)
        if variant.uses_w:
            assert recover_d(key) * pub.e % phi == 1
        primes = (key.p, key.q) if isinstance(key, MultiPowerKey) else key.primes
        exps = (key.d_p, key.d_q) if isinstance(key, MultiPowerKey) else key.exponents
        assert all(d % (p - 1) == dp for p, dp in zip(primes, exps))
        if variant.uses_w:
            assert all(dp.bit_length() == 160 for dp in exps)
        if variant is Variant.REBALANCED:
            assert pub.e.bit_length() >= 1024 - 2
