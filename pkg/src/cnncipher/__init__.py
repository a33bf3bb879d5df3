"""CNN chaotic stream cipher, and the chosen-plaintext attack that breaks it.

Library surface:

    cipher   the stream cipher itself (keys, keystream, streams)
    attack   equivalent-key recovery from one complementary plaintext pair
    oracles  brute-force verifiers for the identities the attack rests on
    formats  key / ciphertext / equivalent-key / PGM files
    cli      the ``cnncipher`` command

Keystream generation runs on a compiled core when available and falls
back to pure Python otherwise; ``BACKEND`` names the active one.
"""

from ._backend import BACKEND
from .attack import (
    EquivalentKey,
    EquivalentKeyRecord,
    decrypt_with_equivalent,
    derive_equivalent_key,
    make_chosen_pair,
)
from .cipher import (
    CipherState,
    KeystreamElement,
    SecretKey,
    decrypt_stream,
    encrypt_stream,
    keystream_init,
    keystream_next,
    random_key,
    validated_run,
)
from .errors import (
    CipherError,
    DegenerateDeltaError,
    FormatError,
    InvalidKeyError,
    ResidualError,
    StateInvariantError,
)

__version__ = "1.0.0"

__all__ = [
    "BACKEND",
    "__version__",
    "CipherError",
    "CipherState",
    "DegenerateDeltaError",
    "EquivalentKey",
    "EquivalentKeyRecord",
    "FormatError",
    "InvalidKeyError",
    "KeystreamElement",
    "ResidualError",
    "SecretKey",
    "StateInvariantError",
    "decrypt_stream",
    "decrypt_with_equivalent",
    "derive_equivalent_key",
    "encrypt_stream",
    "keystream_init",
    "keystream_next",
    "make_chosen_pair",
    "random_key",
    "validated_run",
]
