"""Pure-Python left-to-right binary exponentiation.

Used when the compiled ``_kernel`` extension is unavailable, or when
``RSA_VARIANTS_PURE=1`` is set in the environment.
"""


def mod_pow_counting(base: int, exp: int, modulus: int) -> tuple[int, int, int]:
    if modulus == 1:
        return 0, 0, 0
    if exp == 0:
        return 1, 0, 0
    base %= modulus
    acc = base
    squarings = multiplications = 0
    for i in range(exp.bit_length() - 2, -1, -1):
        acc = acc * acc % modulus
        squarings += 1
        if (exp >> i) & 1:
            acc = acc * base % modulus
            multiplications += 1
    return acc, squarings, multiplications


def mod_pow(base: int, exp: int, modulus: int) -> int:
    if modulus == 1:
        return 0
    if exp == 0:
        return 1
    base %= modulus
    acc = base
    # walking a bit string is cheaper than shifting a long exponent each step
    for bit in bin(exp)[3:]:
        acc = acc * acc % modulus
        if bit == "1":
            acc = acc * base % modulus
    return acc
