"""Exception hierarchy shared by every layer of the package."""


class KnapRsaError(Exception):
    """Base class for all errors raised by knaprsa."""


class ParameterError(KnapRsaError, ValueError):
    """A caller supplied parameters outside an operation's precondition."""


class InvalidModulusError(ParameterError):
    pass


class NoInverseError(KnapRsaError, ValueError):
    """The operand is not a unit modulo the requested modulus."""


class DomainError(ParameterError):
    """An RSA input does not lie in [0, n)."""


class ModulusTooSmallError(ParameterError):
    """The RSA modulus leaves no room for confuse blocks."""


class PrimeGenerationTimeout(KnapRsaError, RuntimeError):
    pass


class MalformedPayloadError(KnapRsaError, ValueError):
    pass


class FormatError(KnapRsaError, ValueError):
    """A serialized key, ciphertext or message failed to parse or validate.

    ``field`` names the offending line key (``None`` for structural errors).
    """

    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field
