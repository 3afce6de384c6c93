"""Exception hierarchy shared by every module."""


class RsaVariantsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RsaVariantsError, ValueError):
    """An argument lies outside the domain of the operation."""


class NotInvertible(DomainError):
    """No modular inverse exists (gcd(a, m) != 1)."""


class Inconsistent(DomainError):
    """A pair of congruences has no common solution."""


class LiftFailure(DomainError):
    """Hensel lifting preconditions do not hold."""


class RetryNeeded(RsaVariantsError):
    """Key material failed a structural constraint; redraw and try again."""


class PolicyViolation(RsaVariantsError):
    """Parameters are below the recommended security bounds."""


class MessageTooLarge(DomainError):
    pass


class CiphertextTooLarge(DomainError):
    pass


class KeyFileError(RsaVariantsError, ValueError):
    """A key file could not be parsed. ``lineno`` is 1-based, or None."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class BadMagic(KeyFileError):
    pass


class UnknownKind(KeyFileError):
    pass


class MissingField(KeyFileError):
    pass


class BadHex(KeyFileError):
    pass


class InvalidKey(KeyFileError):
    """Fields parse but violate a structural key invariant."""
