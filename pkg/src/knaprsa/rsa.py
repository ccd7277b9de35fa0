"""Textbook RSA over safe (or, in test mode, ordinary) primes."""

import math
import random
from dataclasses import dataclass

from .errors import DomainError, ParameterError, PrimeGenerationTimeout
from .numtheory import gen_prime, mod_inverse, mod_pow


@dataclass(frozen=True)
class RsaPublic:
    n: int
    e: int

    @property
    def n_bits(self):
        return self.n.bit_length()


@dataclass(frozen=True)
class RsaPrivate:
    p: int
    q: int
    d: int

    @property
    def phi(self):
        return (self.p - 1) * (self.q - 1)


def smallest_exponent(phi):
    """Smallest odd ``e >= 3`` coprime to ``phi`` (and below it)."""
    e = 3
    while math.gcd(e, phi) != 1:
        e += 2
    if e >= phi:
        raise ParameterError(f"no public exponent below phi={phi}")
    return e


def rsa_keypair(p, q, e=None):
    """Assemble a keypair from known primes; ``e=None`` picks the smallest valid exponent."""
    if p == q:
        raise ParameterError("p and q must be distinct")
    phi = (p - 1) * (q - 1)
    if e is None:
        e = smallest_exponent(phi)
    if not 1 < e < phi:
        raise ParameterError("e must lie in (1, phi)")
    d = mod_inverse(e, phi)
    return RsaPublic(p * q, e), RsaPrivate(p, q, d)


def gen_rsa(n_bits, e=None, safe=True, rng=None, max_tries=64):
    """Generate ``(RsaPublic, RsaPrivate)`` with an exactly ``n_bits``-bit modulus.

    ``p`` gets ``ceil(n_bits/2)`` bits and ``q`` gets ``floor(n_bits/2)``;
    pairs whose product falls one bit short, or that share a factor with a
    fixed ``e``, are redrawn up to ``max_tries`` times.
    """
    if n_bits < 8:
        raise ParameterError(f"RSA modulus must have at least 8 bits, got {n_bits}")
    if e is not None and (e < 3 or not e & 1):
        raise ParameterError("fixed e must be odd and >= 3")
    if rng is None:
        rng = random.SystemRandom()
    p_bits, q_bits = (n_bits + 1) // 2, n_bits // 2
    for _ in range(max_tries):
        p = gen_prime(p_bits, safe, rng)
        q = gen_prime(q_bits, safe, rng)
        if p == q or (p * q).bit_length() != n_bits:
            continue
        phi = (p - 1) * (q - 1)
        if e is not None and (math.gcd(e, phi) != 1 or e >= phi):
            continue
        try:
            return rsa_keypair(p, q, e)
        except ParameterError:
            continue
    raise PrimeGenerationTimeout(f"could not build a {n_bits}-bit RSA modulus in {max_tries} attempts")


def rsa_encrypt(pub, y):
    if not 0 <= y < pub.n:
        raise DomainError("plaintext must lie in [0, n)")
    return mod_pow(y, pub.e, pub.n)


def rsa_decrypt(priv, pub, c1):
    if not 0 <= c1 < pub.n:
        raise DomainError("ciphertext must lie in [0, n)")
    return mod_pow(c1, priv.d, pub.n)
