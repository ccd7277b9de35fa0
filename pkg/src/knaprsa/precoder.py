"""Mask, split and interleave transform applied to a message before RSA.

``m ^ X`` is cut into ``h`` data blocks of ``v = k/h`` bits.  The processed
message ``m'`` has one slot per mask bit: slot ``i`` carries the next data
block when ``x_i = 1`` and an ``s``-bit block of random confuse data when
``x_i = 0``.  ``m'`` is always exactly ``L = k + (k - h) * s`` bits long and
``L < n_bits``, so its integer value is below the RSA modulus.
"""

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bitstring import BitString, MaskVector
from .errors import MalformedPayloadError, ModulusTooSmallError, ParameterError

# rejection sampling on popcount is used when at least this fraction of
# uniform k-bit strings has the requested weight
_MIN_ACCEPT = 1 / 64


@dataclass(frozen=True)
class BlockLayout:
    k: int
    h: int
    v: int
    s: int
    L: int
    n_bits: int


def check_weight(k, h):
    if not 0 < h < k:
        raise ParameterError(f"mask weight must satisfy 0 < h < k, got h={h}, k={k}")
    if k % h:
        raise ParameterError(f"mask weight {h} does not divide k={k}")


@lru_cache(maxsize=1024)
def block_params(k, h, n_bits):
    """Compute the slot layout for a weight-``h`` mask under an ``n_bits`` modulus.

    The confuse block length is ``(n_bits - 1 - k) // (k - h)``, one bit
    shorter than a literal reading of ``n - k`` would give, so that ``m'``
    never reaches the top bit of ``n``.
    """
    check_weight(k, h)
    if n_bits <= k:
        raise ParameterError(f"need k < n_bits, got k={k}, n_bits={n_bits}")
    s = (n_bits - 1 - k) // (k - h)
    if s < 1:
        raise ModulusTooSmallError(f"{n_bits}-bit modulus leaves no room for confuse blocks (k={k}, h={h})")
    return BlockLayout(k=k, h=h, v=k // h, s=s, L=k + (k - h) * s, n_bits=n_bits)


@lru_cache(maxsize=256)
def _rejection_ok(k, h):
    return math.comb(k, h) >= _MIN_ACCEPT * (1 << k)


def gen_mask(k, h, rng=None):
    """Draw a uniformly random ``k``-bit mask of weight exactly ``h``."""
    check_weight(k, h)
    if rng is None:
        rng = random.SystemRandom()
    if _rejection_ok(k, h):
        while True:
            x = rng.getrandbits(k)
            if x.bit_count() == h:
                return MaskVector(BitString(x, k))
    x = 0
    for pos in rng.sample(range(k), h):
        x |= 1 << pos
    return MaskVector(BitString(x, k))


def _bits(value, width):
    """``value`` as a uint8 array of 0/1, most significant first."""
    nbytes = (width + 7) // 8
    raw = np.frombuffer(value.to_bytes(nbytes, "big"), dtype=np.uint8)
    return np.unpackbits(raw)[nbytes * 8 - width :]


def _from_bits(arr):
    # packbits pads the tail with zeros up to a whole byte
    return int.from_bytes(np.packbits(arr).tobytes(), "big") >> (-len(arr) % 8)


@lru_cache(maxsize=256)
def _slot_terms(count, width, step, shift):
    # per-layout constants: rank * step (+ shift) and the within-slot offsets tiled per slot
    return np.arange(count) * step + shift, np.tile(np.arange(width), count)


def _slot_offsets(X, layout, which, shift=0):
    """Offsets in m' of every bit belonging to the mask's ``which`` (1 or 0) slots.

    Slot ``i`` starts at ``i*s + (v - s) * (number of ones before i)``;
    ``shift`` is added to every offset.
    """
    flags = _bits(X.bits.value, X.k)
    idx = (flags if which else flags ^ 1).nonzero()[0]
    diff = layout.v - layout.s
    if which:
        width = layout.v
        ranks, inner = _slot_terms(layout.h, width, diff, shift)
        starts = idx * layout.s + ranks
    else:
        # ones before zero slot i = i - rank, so start = i*v - rank*(v - s)
        width = layout.s
        ranks, inner = _slot_terms(layout.k - layout.h, width, -diff, shift)
        starts = idx * layout.v + ranks
    return np.repeat(starts, width) + inner


def _check_layout(X, layout):
    if X.k != layout.k or X.weight != layout.h:
        raise ParameterError(f"mask (k={X.k}, h={X.weight}) does not match layout (k={layout.k}, h={layout.h})")


def encode_message(m, X, layout, rng=None, confuse=None):
    """Return the processed message ``m'`` as an ``L``-bit :class:`BitString`.

    ``confuse`` optionally pins the ``k - h`` confuse blocks (each an
    ``s``-bit :class:`BitString`, in slot order); otherwise they are drawn
    from ``rng``.
    """
    _check_layout(X, layout)
    if len(m) != layout.k:
        raise ParameterError(f"message has {len(m)} bits, expected {layout.k}")
    L = layout.L
    # m' is assembled in a whole number of bytes with ``pad`` leading zero bits
    nbytes = (L + 7) // 8
    pad = nbytes * 8 - L
    if confuse is None:
        if rng is None:
            rng = random.SystemRandom()
        # every bit not overwritten by data below is uniform confuse data
        buf = _bits(rng.getrandbits(L), nbytes * 8)
    else:
        confuse = list(confuse)
        n_confuse = layout.k - layout.h
        if len(confuse) != n_confuse or any(len(blk) != layout.s for blk in confuse):
            raise ParameterError(f"need {n_confuse} confuse blocks of {layout.s} bits")
        filler = 0
        for blk in confuse:
            filler = (filler << layout.s) | blk.value
        buf = np.zeros(nbytes * 8, dtype=np.uint8)
        buf[_slot_offsets(X, layout, 0, pad)] = _bits(filler, n_confuse * layout.s)
    buf[_slot_offsets(X, layout, 1, pad)] = _bits(m.value ^ X.bits.value, layout.k)
    return BitString(int.from_bytes(np.packbits(buf).tobytes(), "big"), L)


def decode_message(m_prime, X, layout):
    """Strip the confuse blocks from ``m'`` and unmask: the inverse of :func:`encode_message`."""
    _check_layout(X, layout)
    if len(m_prime) != layout.L:
        raise MalformedPayloadError(f"payload has {len(m_prime)} bits, layout needs {layout.L}")
    data = _bits(m_prime.value, layout.L)[_slot_offsets(X, layout, 1)]
    return BitString(_from_bits(data) ^ X.bits.value, layout.k)
