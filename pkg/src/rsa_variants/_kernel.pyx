# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled left-to-right binary exponentiation.

Same algorithm and operation counts as ``_fallback``. Each step is one
schoolbook product and one schoolbook remainder, so the
per-step cost grows with the square of the modulus length.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport calloc, free
from libc.string cimport memcpy

cdef extern from "_schoolbook.h" nogil:
    ctypedef uint64_t limb_t  # actual width comes from SB_LIMB_BITS
    int SB_LIMB_BITS
    void sb_mul(limb_t *r, const limb_t *a, const limb_t *b, int n)
    void sb_sqr(limb_t *r, const limb_t *a, int n)
    limb_t sb_mulmod1(limb_t a, limb_t b, limb_t m)
    int sb_shift_of(limb_t top)
    void sb_shl(limb_t *out, const limb_t *inp, int n, int s)
    limb_t sb_reciprocal(limb_t d)
    void sb_mod(limb_t *rem, const limb_t *u, const limb_t *vn, int n, int s, limb_t vinv, limb_t *un)

LIMB_BITS = SB_LIMB_BITS
cdef Py_ssize_t LIMB_BYTES = SB_LIMB_BITS // 8


cdef tuple _run_small(limb_t base, object exp, limb_t m):
    cdef limb_t acc = base % m
    cdef limb_t b = acc
    cdef unsigned long squarings = 0, multiplications = 0
    cdef Py_ssize_t i
    for i in range(exp.bit_length() - 2, -1, -1):
        acc = sb_mulmod1(acc, acc, m)
        squarings += 1
        if (exp >> i) & 1:
            acc = sb_mulmod1(acc, b, m)
            multiplications += 1
    return acc, squarings, multiplications


cdef tuple _run(object base, object exp, object modulus):
    cdef int n, s
    cdef limb_t vinv
    cdef Py_ssize_t t, i
    cdef limb_t *buf
    cdef limb_t *b
    cdef limb_t *acc
    cdef limb_t *vn
    cdef limb_t *prod
    cdef limb_t *scratch
    cdef const unsigned char *ebits
    cdef bytes raw, eraw
    cdef unsigned long squarings = 0, multiplications = 0
    if modulus == 1:
        return 0, 0, 0
    if exp == 0:
        return 1, 0, 0
    if modulus.bit_length() <= LIMB_BITS:
        return _run_small(base % modulus, exp, modulus)

    n = (modulus.bit_length() + LIMB_BITS - 1) // LIMB_BITS
    t = exp.bit_length()
    eraw = exp.to_bytes((t + 7) // 8, "little")
    ebits = <const unsigned char *>eraw

    # b | acc | vn | prod (2n) | scratch (2n + 1)
    buf = <limb_t *>calloc(7 * n + 1, sizeof(limb_t))
    if buf == NULL:
        raise MemoryError()
    b = buf
    acc = b + n
    vn = acc + n
    prod = vn + n
    scratch = prod + 2 * n
    try:
        raw = (base % modulus).to_bytes(n * LIMB_BYTES, "little")
        memcpy(b, <const char *>raw, n * LIMB_BYTES)
        raw = modulus.to_bytes(n * LIMB_BYTES, "little")
        memcpy(acc, <const char *>raw, n * LIMB_BYTES)
        s = sb_shift_of(acc[n - 1])
        sb_shl(vn, acc, n, s)
        vinv = sb_reciprocal(vn[n - 1])
        memcpy(acc, b, n * LIMB_BYTES)
        with nogil:
            for i in range(t - 2, -1, -1):
                sb_sqr(prod, acc, n)
                sb_mod(acc, prod, vn, n, s, vinv, scratch)
                squarings += 1
                if (ebits[i >> 3] >> (i & 7)) & 1:
                    sb_mul(prod, acc, b, n)
                    sb_mod(acc, prod, vn, n, s, vinv, scratch)
                    multiplications += 1
        return int.from_bytes((<const char *>acc)[:n * LIMB_BYTES], "little"), squarings, multiplications
    finally:
        free(buf)


def mod_pow(base, exp, modulus):
    """``base ** exp % modulus`` by binary square-and-multiply (modulus >= 1)."""
    return _run(base, exp, modulus)[0]


def mod_pow_counting(base, exp, modulus):
    """As ``mod_pow``, returning ``(value, squarings, multiplications)``."""
    return _run(base, exp, modulus)
