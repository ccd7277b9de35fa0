"""Hybrid RSA + disguised knapsack public-key encryption with CCA2 experiments."""

from .bitstring import BitString, MaskVector
from .errors import (
    DomainError,
    FormatError,
    InvalidModulusError,
    KnapRsaError,
    MalformedPayloadError,
    ModulusTooSmallError,
    NoInverseError,
    ParameterError,
    PrimeGenerationTimeout,
)
from .keyfile import parse_ciphertext, parse_key, parse_message, serialize_ciphertext, serialize_key, serialize_message
from .pke import Ciphertext, PrivateKey, PublicKey, Reason, Rejected, SystemParams, decrypt, encrypt, keygen

__version__ = "0.1.0"
