"""The hybrid RSA + knapsack public-key scheme.

Encryption draws a weight-``h`` mask ``X``, precodes the message with it,
RSA-encrypts the processed message into ``c1`` and knapsack-encodes ``X``
into ``c2``.  Decryption recovers ``X`` from ``c2`` first (cheap, and the
point where forged ciphertexts are usually rejected), then ``m'`` from
``c1``, and finally strips the confuse data.
"""

import enum
import random
from dataclasses import dataclass, field

from . import knapsack as ks
from . import precoder
from .bitstring import BitString
from .errors import ParameterError
from .numtheory import KEYGEN_ROUNDS, is_probable_prime
from .rsa import RsaPrivate, RsaPublic, gen_rsa, rsa_decrypt, rsa_encrypt


def default_h(k):
    """``k/2`` for even ``k``, else the largest proper divisor of ``k``."""
    if k % 2 == 0:
        return k // 2
    for d in range(3, k):
        if k % d == 0:
            return k // d
    return 1


@dataclass(frozen=True)
class SystemParams:
    k: int
    n_bits: int
    h: int = None
    # keygen option only; not recorded in key files
    safe_primes: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.k < 3:
            raise ParameterError(f"k must be >= 3, got {self.k}")
        if self.k >= self.n_bits:
            raise ParameterError(f"need k < n_bits, got k={self.k}, n_bits={self.n_bits}")
        if self.h is None:
            object.__setattr__(self, "h", default_h(self.k))
        precoder.block_params(self.k, self.h, self.n_bits)

    @classmethod
    def for_modulus(cls, n_bits, safe_primes=True):
        """Default sizing ``k = n_bits / 2`` with ``h = k / 2``."""
        return cls(k=n_bits // 2, n_bits=n_bits, safe_primes=safe_primes)

    def layout(self, h=None):
        return precoder.block_params(self.k, self.h if h is None else h, self.n_bits)


@dataclass(frozen=True)
class PublicKey:
    knapsack: ks.KnapsackPublic
    rsa: RsaPublic
    params: SystemParams

    def validate(self):
        if self.knapsack.k != self.params.k:
            raise ParameterError("knapsack length differs from k")
        if self.rsa.n_bits != self.params.n_bits:
            raise ParameterError("modulus bit length differs from n_bits")
        if not 1 < self.rsa.e < self.rsa.n or not self.rsa.e & 1:
            raise ParameterError("e must be odd and in (1, n)")


@dataclass(frozen=True)
class PrivateKey:
    knapsack: ks.KnapsackPrivate
    rsa: RsaPrivate
    rsa_public: RsaPublic
    params: SystemParams

    def public(self):
        return PublicKey(self.knapsack.public(), self.rsa_public, self.params)

    def validate(self, rounds=KEYGEN_ROUNDS):
        """Check every component invariant and their mutual consistency."""
        self.knapsack.validate()
        if self.knapsack.k != self.params.k:
            raise ParameterError("knapsack length differs from k")
        p, q, d = self.rsa.p, self.rsa.q, self.rsa.d
        n, e = self.rsa_public.n, self.rsa_public.e
        if p == q or p * q != n:
            raise ParameterError("n must be the product of two distinct primes p, q")
        if n.bit_length() != self.params.n_bits:
            raise ParameterError("modulus bit length differs from n_bits")
        phi = self.rsa.phi
        if not 1 < e < phi or not 1 < d < phi or e * d % phi != 1:
            raise ParameterError("e, d are not inverse exponents mod phi(n)")
        if not (is_probable_prime(p, rounds) and is_probable_prime(q, rounds)):
            raise ParameterError("p and q must be prime")


@dataclass(frozen=True)
class Ciphertext:
    c1: int
    c2: int


class Reason(str, enum.Enum):
    RANGE = "range-invalid"
    KNAPSACK = "knapsack-invalid"
    WEIGHT = "weight-invalid"
    PAYLOAD = "payload-overflow"


@dataclass(frozen=True)
class Rejected:
    """Decryption failure (the scheme's reject symbol) with its cause."""

    reason: Reason

    def __bool__(self):
        return False


def keygen(params, rng=None, e=None):
    """Generate ``(PublicKey, PrivateKey)``: knapsack first, then RSA."""
    if rng is None:
        rng = random.SystemRandom()
    kpriv, _ = ks.gen_knapsack(params.k, rng)
    rpub, rpriv = gen_rsa(params.n_bits, e=e, safe=params.safe_primes, rng=rng)
    sk = PrivateKey(kpriv, rpriv, rpub, params)
    return sk.public(), sk


def encrypt(pk, m, rng=None, *, h=None, mask=None, confuse=None):
    """Encrypt the ``k``-bit message ``m``.

    ``h`` overrides the key's default mask weight for this message.
    ``mask`` and ``confuse`` pin the randomness (mask vector and confuse
    blocks) and exist for reproducible test vectors.
    """
    params = pk.params
    if len(m) != params.k:
        raise ParameterError(f"message has {len(m)} bits, key expects {params.k}")
    if rng is None:
        rng = random.SystemRandom()
    if mask is None:
        mask = precoder.gen_mask(params.k, params.h if h is None else h, rng)
    layout = params.layout(mask.weight)
    m_prime = precoder.encode_message(m, mask, layout, rng, confuse)
    c1 = rsa_encrypt(pk.rsa, m_prime.value)
    c2 = ks.knapsack_encode(pk.knapsack, mask)
    return Ciphertext(c1, c2)


def decrypt(sk, c):
    """Return the plaintext :class:`BitString` or a :class:`Rejected`.

    Never raises on well-typed input: every malformed ciphertext maps to a
    rejection reason.
    """
    n = sk.rsa_public.n
    if not (0 <= c.c1 < n and c.c2 >= 0):
        return Rejected(Reason.RANGE)
    X = ks.knapsack_decode(sk.knapsack, c.c2)
    if X is None:
        return Rejected(Reason.KNAPSACK)
    try:
        layout = sk.params.layout(X.weight)
    except ParameterError:
        return Rejected(Reason.WEIGHT)
    y = rsa_decrypt(sk.rsa, sk.rsa_public, c.c1)
    if y >> layout.L:
        return Rejected(Reason.PAYLOAD)
    return precoder.decode_message(BitString(y, layout.L), X, layout)
