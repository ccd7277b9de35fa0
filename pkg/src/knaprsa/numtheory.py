"""Modular arithmetic and prime generation.

Everything here works on plain Python ints.  Randomness is always supplied
by the caller as a :class:`random.Random`-compatible object so that key
generation can be replayed under a fixed seed.
"""

import math
import random

from .errors import InvalidModulusError, NoInverseError, ParameterError, PrimeGenerationTimeout

KEYGEN_ROUNDS = 64

# n below TRIAL_LIMIT is decided exactly by trial division.
TRIAL_LIMIT = 1 << 20


def _small_primes(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


SMALL_PRIMES = _small_primes(math.isqrt(TRIAL_LIMIT))
_SIEVE_PRIMES = SMALL_PRIMES[1:400]


def mod_pow(base, exp, modulus):
    """Return ``base**exp % modulus``.

    Delegates to the builtin three-argument :func:`pow`, which is a
    square-and-multiply ladder over arbitrary-precision ints.
    """
    if modulus < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise ParameterError("exponent must be nonnegative")
    return pow(base, exp, modulus)


def egcd(a, b):
    """Extended Euclid: return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b)``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_r, old_x, old_y


def mod_inverse(a, m):
    """Return the inverse of ``a`` modulo ``m`` as an integer in ``[1, m-1]``.

    Raises :class:`InvalidModulusError` for ``m < 2`` and
    :class:`NoInverseError` when ``gcd(a, m) != 1``.
    """
    if m < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {m}")
    g, x, _ = egcd(a % m, m)
    if g != 1:
        raise NoInverseError(f"{a} has no inverse modulo {m} (gcd {g})")
    return x % m


def _miller_rabin_witness(n, d, r, base):
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_probable_prime(n, rounds=KEYGEN_ROUNDS, rng=None):
    """Primality test.

    Exact for ``n < TRIAL_LIMIT`` (trial division).  Otherwise runs
    ``rounds`` Miller-Rabin rounds with uniformly random bases, so a
    composite survives with probability at most ``4**-rounds``.  Bases come
    from ``rng``; by default a generator seeded with ``n`` keeps the answer
    reproducible.
    """
    if rounds < 1:
        raise ParameterError("rounds must be >= 1")
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if p * p > n:
            return True
        if n % p == 0:
            return n == p
    # n > TRIAL_LIMIT here: every prime below sqrt(TRIAL_LIMIT) was tried.
    d, r = n - 1, 0
    while not d & 1:
        d >>= 1
        r += 1
    if rng is None:
        rng = random.Random(n)
    for _ in range(rounds):
        if _miller_rabin_witness(n, d, r, rng.randrange(2, n - 1)):
            return False
    return True


def _passes_sieve(n):
    for p in _SIEVE_PRIMES:
        if n % p == 0:
            return n == p
    return True


def _random_odd(bits, rng):
    # exact bit length: top bit forced
    if bits == 1:
        return 1
    return rng.getrandbits(bits - 1) | (1 << (bits - 1)) | 1


def gen_prime(bits, safe=False, rng=None, max_tries=None):
    """Return a uniformly drawn prime with exactly ``bits`` bits.

    With ``safe=True`` the result ``p`` additionally has ``(p - 1) / 2``
    prime.  Candidates are drawn until one passes; after ``max_tries``
    candidates :class:`PrimeGenerationTimeout` is raised.
    """
    if rng is None:
        rng = random.SystemRandom()
    if bits < 3 or (safe and bits < 4):
        raise ParameterError(f"cannot generate a {'safe ' if safe else ''}prime of {bits} bits")
    if max_tries is None:
        max_tries = 200 * bits * (bits if safe else 1) + 1000
    for _ in range(max_tries):
        if safe:
            q = _random_odd(bits - 1, rng)
            p = 2 * q + 1
            if not (_passes_sieve(q) and _passes_sieve(p)):
                continue
            # cheap single-round screens before the full test
            if not is_probable_prime(q, 1, rng) or pow(2, p - 1, p) != 1:
                continue
            if is_probable_prime(q, KEYGEN_ROUNDS, rng) and is_probable_prime(p, KEYGEN_ROUNDS, rng):
                return p
        else:
            p = _random_odd(bits, rng)
            if _passes_sieve(p) and is_probable_prime(p, KEYGEN_ROUNDS, rng):
                return p
    raise PrimeGenerationTimeout(f"no {bits}-bit {'safe ' if safe else ''}prime after {max_tries} candidates")
