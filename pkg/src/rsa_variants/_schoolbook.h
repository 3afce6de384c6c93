/* Schoolbook multi-precision arithmetic on little-endian limbs.
 *
 * Products and remainders are the textbook O(n^2) algorithms: no
 * Karatsuba, no Montgomery or Barrett reduction.  Division is Knuth's
 * Algorithm D with a divisor normalised once per exponentiation.
 */
#ifndef RSA_VARIANTS_SCHOOLBOOK_H
#define RSA_VARIANTS_SCHOOLBOOK_H

#include <stdint.h>
#include <string.h>

/* 32-bit limbs track odd modulus sizes (342 bits -> 11 limbs) more
 * closely than 64-bit ones (342 bits -> 6 limbs = 384 bits). */
#ifndef SB_LIMB_BITS
#define SB_LIMB_BITS 32
#endif

#if SB_LIMB_BITS == 64
typedef uint64_t limb_t;
typedef unsigned __int128 dlimb_t;
#define SB_CLZ(x) __builtin_clzll(x)
#elif SB_LIMB_BITS == 32
typedef uint32_t limb_t;
typedef uint64_t dlimb_t;
#define SB_CLZ(x) __builtin_clz(x)
#else
#error "SB_LIMB_BITS must be 32 or 64"
#endif
#define LB SB_LIMB_BITS

/* r[0 .. 2n) = a[0 .. n) * b[0 .. n); r must not alias a or b. */
static inline void sb_mul(limb_t *r, const limb_t *a, const limb_t *b, int n)
{
    limb_t carry = 0;
    for (int j = 0; j < n; j++) {
        dlimb_t t = (dlimb_t)a[0] * b[j] + carry;
        r[j] = (limb_t)t;
        carry = (limb_t)(t >> LB);
    }
    r[n] = carry;
    for (int i = 1; i < n; i++) {
        limb_t ai = a[i];
        carry = 0;
        for (int j = 0; j < n; j++) {
            dlimb_t t = (dlimb_t)ai * b[j] + r[i + j] + carry;
            r[i + j] = (limb_t)t;
            carry = (limb_t)(t >> LB);
        }
        r[i + n] = carry;
    }
}

/* r[0 .. 2n) = a[0 .. n)^2: each cross product once, doubled, plus the
 * squares on the diagonal. r must not alias a. */
static inline void sb_sqr(limb_t *r, const limb_t *a, int n)
{
    memset(r, 0, 2 * n * sizeof(limb_t));
    for (int i = 0; i < n - 1; i++) {
        limb_t ai = a[i], carry = 0;
        for (int j = i + 1; j < n; j++) {
            dlimb_t t = (dlimb_t)ai * a[j] + r[i + j] + carry;
            r[i + j] = (limb_t)t;
            carry = (limb_t)(t >> LB);
        }
        r[i + n] = carry;
    }
    limb_t top = 0;
    for (int i = 0; i < 2 * n; i++) {
        limb_t x = r[i];
        r[i] = (x << 1) | top;
        top = x >> (LB - 1);
    }
    limb_t carry = 0;
    for (int i = 0; i < n; i++) {
        dlimb_t sq = (dlimb_t)a[i] * a[i];
        dlimb_t lo = (dlimb_t)r[2 * i] + (limb_t)sq + carry;
        r[2 * i] = (limb_t)lo;
        dlimb_t hi = (dlimb_t)r[2 * i + 1] + (limb_t)(sq >> LB) + (limb_t)(lo >> LB);
        r[2 * i + 1] = (limb_t)hi;
        carry = (limb_t)(hi >> LB);
    }
}

/* a * b mod m for single-limb operands. */
static inline limb_t sb_mulmod1(limb_t a, limb_t b, limb_t m)
{
    return (limb_t)((dlimb_t)a * b % m);
}

/* Reciprocal of a normalised limb d: floor((B^2 - 1) / d) - B, B = 2^LB. */
static inline limb_t sb_reciprocal(limb_t d)
{
    return (limb_t)((((dlimb_t)~d) << LB | ~(limb_t)0) / d);
}

/* (hi:lo) / d for normalised d and hi < d, using its reciprocal
 * (Moller and Granlund, "Improved division by invariant integers"). */
static inline limb_t sb_div21(limb_t hi, limb_t lo, limb_t d, limb_t dinv,
                              limb_t *rem)
{
    dlimb_t q = (dlimb_t)dinv * hi;
    q += ((dlimb_t)(hi + 1) << LB) | lo;
    limb_t q1 = (limb_t)(q >> LB), q0 = (limb_t)q;
    limb_t r = lo - q1 * d;
    limb_t mask = -(limb_t)(r > q0);
    q1 += mask;
    r += mask & d;
    if (__builtin_expect(r >= d, 0)) {
        q1++;
        r -= d;
    }
    *rem = r;
    return q1;
}

static inline int sb_shift_of(limb_t top)
{
    return top ? SB_CLZ(top) : 0;
}

/* out[0 .. n) = in[0 .. n) << s, dropping overflow; 0 <= s < LB. */
static inline void sb_shl(limb_t *out, const limb_t *in, int n, int s)
{
    if (s == 0) {
        memcpy(out, in, n * sizeof(limb_t));
        return;
    }
    for (int i = n - 1; i > 0; i--)
        out[i] = (in[i] << s) | (in[i - 1] >> (LB - s));
    out[0] = in[0] << s;
}

/* rem[0 .. n) = u[0 .. 2n) mod v, where vn = v << s is the normalised
 * divisor (vn[n-1] has its top bit set), vinv = sb_reciprocal(vn[n-1]),
 * n >= 2, and un is scratch space of 2n + 1 limbs. */
static inline void sb_mod(limb_t *rem, const limb_t *u, const limb_t *vn,
                          int n, int s, limb_t vinv, limb_t *un)
{
    const limb_t vtop = vn[n - 1], vnext = vn[n - 2];
    int m = 2 * n;

    if (s == 0) {
        memcpy(un, u, m * sizeof(limb_t));
        un[m] = 0;
    } else {
        un[m] = u[m - 1] >> (LB - s);
        for (int i = m - 1; i > 0; i--)
            un[i] = (u[i] << s) | (u[i - 1] >> (LB - s));
        un[0] = u[0] << s;
    }

    for (int j = m - n; j >= 0; j--) {
        /* leading digit of the running remainder is below the divisor */
        if (un[j + n] == 0 && un[j + n - 1] < vtop)
            continue;
        limb_t qhat, rhat;
        int rhat_overflow = 0;
        if (un[j + n] >= vtop) {
            /* the true quotient digit is at most B - 1 */
            qhat = ~(limb_t)0;
            dlimb_t r = (((dlimb_t)un[j + n] << LB) | un[j + n - 1])
                        - (dlimb_t)qhat * vtop;
            rhat_overflow = (r >> LB) != 0;
            rhat = (limb_t)r;
        } else {
            qhat = sb_div21(un[j + n], un[j + n - 1], vtop, vinv, &rhat);
        }
        while (!rhat_overflow
               && (dlimb_t)qhat * vnext > (((dlimb_t)rhat << LB) | un[j + n - 2])) {
            qhat--;
            limb_t prev = rhat;
            rhat += vtop;
            rhat_overflow = rhat < prev;
        }

        /* un -= qhat * vn, with the product carry and the subtraction
         * borrow kept in separate chains */
        limb_t carry = 0, borrow = 0;
        for (int i = 0; i < n; i++) {
            dlimb_t p = (dlimb_t)qhat * vn[i] + carry;
            carry = (limb_t)(p >> LB);
            dlimb_t d = (dlimb_t)un[i + j] - (limb_t)p - borrow;
            un[i + j] = (limb_t)d;
            borrow = (limb_t)(d >> (2 * LB - 1));
        }
        dlimb_t top = (dlimb_t)un[j + n] - carry - borrow;
        un[j + n] = (limb_t)top;
        if (top >> (2 * LB - 1)) {
            limb_t c = 0;
            for (int i = 0; i < n; i++) {
                dlimb_t w = (dlimb_t)un[i + j] + vn[i] + c;
                un[i + j] = (limb_t)w;
                c = (limb_t)(w >> LB);
            }
            un[j + n] += c;
        }
    }

    if (s == 0) {
        memcpy(rem, un, n * sizeof(limb_t));
    } else {
        for (int i = 0; i < n - 1; i++)
            rem[i] = (un[i] >> s) | (un[i + 1] << (LB - s));
        rem[n - 1] = un[n - 1] >> s;
    }
}

#endif
