"""Disguised 2-adic knapsack.

The private weights are ``b_i = 2**(i-1) * c_i`` with odd ``c_i``, which
makes any subset sum decodable bit by bit from its parity profile.  The
public weights hide that structure behind a modular multiplication
``a_i = b_i * w mod M``.
"""

import math
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import compress

from .bitstring import BitString, MaskVector
from .errors import ParameterError
from .numtheory import mod_inverse

# knapsack_encode switches to byte-window tables from this length on; below
# it the one-off table build costs more than it saves
WINDOW_MIN_K = 128


@dataclass(frozen=True)
class KnapsackPublic:
    k: int
    a: tuple

    def __post_init__(self):
        if len(self.a) != self.k:
            raise ParameterError(f"expected {self.k} weights, got {len(self.a)}")

    @cached_property
    def byte_tables(self):
        """Subset sums of each consecutive group of 8 weights, indexed by mask byte.

        The weights are left-padded with zeros to a multiple of 8 so that
        group ``j`` lines up with byte ``j`` of the big-endian mask.
        """
        padded = [0] * (-self.k % 8) + list(self.a)
        tables = []
        for j in range(0, len(padded), 8):
            group = padded[j : j + 8]
            table = [0] * 256
            for byte in range(1, 256):
                low = byte & -byte
                table[byte] = table[byte ^ low] + group[7 - (low.bit_length() - 1)]
            tables.append(table)
        return tables


@dataclass(frozen=True)
class KnapsackPrivate:
    k: int
    c: tuple
    b: tuple
    M: int
    w: int
    w_inv: int

    @classmethod
    def from_seeds(cls, c, M, w):
        """Build the private key from odd seeds ``c``, modulus and multiplier."""
        c = tuple(c)
        b = tuple(ci << i for i, ci in enumerate(c))
        key = cls(len(c), c, b, M, w, mod_inverse(w, M))
        key.validate()
        return key

    def validate(self):
        """Raise :class:`ParameterError` on the first broken invariant."""
        k = self.k
        if len(self.c) != k or len(self.b) != k:
            raise ParameterError("seed/weight count does not match k")
        for i, (ci, bi) in enumerate(zip(self.c, self.b), start=1):
            if ci <= 0 or not ci & 1:
                raise ParameterError(f"c_{i} must be a positive odd integer")
            want = 1 if i == k else k - i
            if ci.bit_length() != want:
                raise ParameterError(f"c_{i} must have exactly {want} bits")
            if bi != ci << (i - 1):
                raise ParameterError(f"b_{i} != 2^{i - 1} * c_{i}")
        if self.c[-1] != 1:
            raise ParameterError("c_k must be 1")
        if self.M <= sum(self.b):
            raise ParameterError("M must exceed the sum of the private weights")
        if not 0 < self.w < self.M or math.gcd(self.w, self.M) != 1:
            raise ParameterError("w must be a unit in (0, M)")
        if self.w * self.w_inv % self.M != 1:
            raise ParameterError("w_inv is not the inverse of w mod M")

    def public(self):
        return KnapsackPublic(self.k, tuple(bi * self.w % self.M for bi in self.b))


def gen_knapsack(k, rng=None):
    """Draw a fresh ``(KnapsackPrivate, KnapsackPublic)`` pair of length ``k``.

    ``c_i`` is uniform over odd integers with exactly ``k - i`` bits
    (``c_k = 1``), ``M`` is uniform in ``(sum b, 2 * sum b]`` and ``w`` is
    uniform over units in ``[2, M - 1]``.
    """
    if k < 3:
        raise ParameterError(f"knapsack length must be >= 3, got {k}")
    if rng is None:
        rng = random.SystemRandom()
    c = []
    for i in range(1, k + 1):
        bits = k - i
        if bits <= 1:
            c.append(1)
        else:
            c.append(rng.getrandbits(bits - 2) << 1 | (1 << (bits - 1)) | 1)
    total = sum(ci << i for i, ci in enumerate(c))
    M = total + 1 + rng.randrange(total)
    while True:
        w = rng.randrange(2, M)
        if math.gcd(w, M) == 1:
            break
    priv = KnapsackPrivate.from_seeds(c, M, w)
    return priv, priv.public()


def knapsack_encode(pub, X):
    """Return ``sum(a_i for x_i == 1)``."""
    if X.k != pub.k:
        raise ParameterError(f"mask has length {X.k}, knapsack has {pub.k}")
    if pub.k >= WINDOW_MIN_K:
        mask_bytes = X.bits.value.to_bytes((pub.k + 7) // 8, "big")
        return sum(map(list.__getitem__, pub.byte_tables, mask_bytes))
    return sum(compress(pub.a, X.bits.flags()))


def peel(priv, r):
    """Bit-peel ``r`` against the 2-adic weights without verifying.

    Returns the candidate bits as a list, or ``None`` as soon as the running
    remainder goes negative (no subset can then sum to ``r``).
    """
    bits = []
    rem = r
    for i, bi in enumerate(priv.b):
        x = (rem >> i) & 1
        bits.append(x)
        if x:
            rem -= bi
            if rem < 0:
                return None
    return bits


def knapsack_decode(priv, c2):
    """Recover the mask from ``c2``; ``None`` if ``c2`` is not a subset sum.

    ``r = c2 * w_inv mod M`` is peeled one bit at a time and the result is
    accepted only if its weights add back up to ``r`` exactly.
    """
    r = c2 * priv.w_inv % priv.M
    bits = peel(priv, r)
    if bits is None:
        return None
    if sum(compress(priv.b, bits)) != r:
        return None
    return MaskVector(BitString.from_bits(bits))


def is_superincreasing(seq):
    seq = list(seq)
    if not seq:
        raise ParameterError("sequence must be non-empty")
    total = seq[0]
    for x in seq[1:]:
        if x <= total:
            return False
        total += x
    return True


def density(pub):
    """Knapsack density ``k / log2(max a_i)``."""
    top = max(pub.a, default=0)
    if pub.k < 2 or top < 2:
        raise ParameterError("density needs k >= 2 and a weight >= 2")
    return pub.k / math.log2(top)
