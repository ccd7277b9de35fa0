"""Fixed-length bit strings and weighted mask vectors.

A :class:`BitString` keeps its length explicitly, so ``0011`` and ``11``
are different values.  Bits are numbered 1..len from the left, and the
leftmost bit is the most significant one when the string is read as an
integer.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import ParameterError

# maps the ASCII digits of format(v, "b") onto 0x00/0x01 selector bytes
_ASCII_TO_FLAG = bytes.maketrans(b"01", b"\x00\x01")


@dataclass(frozen=True)
class BitString:
    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ParameterError("length must be nonnegative")
        if not 0 <= self.value < (1 << self.length):
            raise ParameterError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def from_bits(cls, bits):
        bits = list(bits)
        value = 0
        for b in bits:
            if b not in (0, 1):
                raise ParameterError(f"not a bit: {b!r}")
            value = (value << 1) | b
        return cls(value, len(bits))

    @classmethod
    def from_str(cls, text):
        """Parse a string of ``0``/``1`` characters, e.g. ``"1011"``."""
        if text and set(text) - {"0", "1"}:
            raise ParameterError(f"not a bit string: {text!r}")
        return cls(int(text, 2) if text else 0, len(text))

    @classmethod
    def zeros(cls, length):
        return cls(0, length)

    def __len__(self):
        return self.length

    def __str__(self):
        return format(self.value, f"0{self.length}b") if self.length else ""

    def __iter__(self):
        return iter(self.flags())

    def ascii(self):
        """The bits as ASCII ``b"0"``/``b"1"`` bytes, leftmost first."""
        return self._ascii

    def flags(self):
        """The bits as a ``bytes`` of 0x00/0x01 values, leftmost first."""
        return self._flags

    @cached_property
    def _ascii(self):
        return str(self).encode()

    @cached_property
    def _flags(self):
        return self._ascii.translate(_ASCII_TO_FLAG)

    def bit(self, i):
        """Return bit ``i`` (1-based, counted from the left)."""
        if not 1 <= i <= self.length:
            raise IndexError(i)
        return (self.value >> (self.length - i)) & 1

    def weight(self):
        return self.value.bit_count()

    def __xor__(self, other):
        if not isinstance(other, BitString):
            return NotImplemented
        if other.length != self.length:
            raise ParameterError(f"length mismatch: {self.length} vs {other.length}")
        return BitString(self.value ^ other.value, self.length)

    def __add__(self, other):
        # concatenation
        if not isinstance(other, BitString):
            return NotImplemented
        return BitString((self.value << other.length) | other.value, self.length + other.length)

    def slice(self, start, stop):
        """Bits ``start+1 .. stop`` as a new string (0-based half-open like ``s[start:stop]``)."""
        if not 0 <= start <= stop <= self.length:
            raise IndexError((start, stop))
        width = stop - start
        return BitString((self.value >> (self.length - stop)) & ((1 << width) - 1), width)


@dataclass(frozen=True)
class MaskVector:
    """The mask ``X = (x_1..x_k)``; its weight selects the data slots."""

    bits: BitString

    @classmethod
    def from_str(cls, text):
        return cls(BitString.from_str(text))

    @classmethod
    def from_bits(cls, bits):
        return cls(BitString.from_bits(bits))

    @property
    def k(self):
        return self.bits.length

    @property
    def weight(self):
        return self.bits.weight()

    def positions(self):
        """1-based indices i with x_i = 1, ascending."""
        return [i + 1 for i, f in enumerate(self.bits.flags()) if f]

    def __str__(self):
        return str(self.bits)

    def __iter__(self):
        return iter(self.bits)
