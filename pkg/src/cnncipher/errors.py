"""Exception types shared across the package."""


class CipherError(Exception):
    """Base class for all cnncipher errors."""


class InvalidKeyError(CipherError, ValueError):
    """A secret key failed its validation bounds."""


class StateInvariantError(CipherError):
    """The evolving cipher state broke a structural invariant."""


class ResidualError(CipherError, ArithmeticError):
    """A value that must be an integer missed one by more than the tolerance.

    Signals a mismatched key, a misaligned position, or corrupted input.
    """


class DegenerateDeltaError(CipherError, ValueError):
    """An observed ciphertext difference rounded to 0 or 256."""


class FormatError(CipherError, ValueError):
    """Malformed key, ciphertext, equivalent-key, or image file."""
