"""Chosen-plaintext break of the CNN chaotic cipher.

Encrypting a plaintext together with its bytewise complement exposes, at
every position, the difference between the two masked bytes.  Because the
two plain bytes are complementary, that difference pins the XOR mask down
to exactly two candidates which differ only in the top bit, and each
candidate then yields a matching additive mask read straight off the
ciphertext.  The two candidate sequences decrypt *any* ciphertext
produced under the same key equally well, so either one is a working
replacement for the secret key, even though only one of them carries the
values the key actually generated.
"""

from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from .cipher import RESIDUAL_TOL
from .errors import DegenerateDeltaError, ResidualError

__all__ = [
    "EquivalentKeyRecord",
    "EquivalentKey",
    "make_chosen_pair",
    "extract_delta",
    "solve_xor_diff",
    "derive_mask_candidates",
    "derive_additive_mask",
    "derive_equivalent_key",
    "decrypt_with_equivalent",
]

_COMPLEMENT = bytes(b ^ 0xFF for b in range(256))


class EquivalentKeyRecord(NamedTuple):
    xor_mask: int
    add_mask: float  # in [0, 256); plays the role of 256 * tent state


@dataclass
class EquivalentKey:
    """Positional masking-pair sequence recovered by the attack.

    A drop-in replacement for the secret key at each covered position.
    The two variants recovered from one chosen pair satisfy, position by
    position: xor masks differ by 128 (top bit), additive masks differ by
    128 mod 256.
    """

    xor_masks: np.ndarray  # uint8[n]
    add_masks: np.ndarray  # float64[n], each in [0, 256)
    variant: int  # 1 or 2

    def __post_init__(self):
        self.xor_masks = np.asarray(self.xor_masks, dtype=np.uint8)
        self.add_masks = np.asarray(self.add_masks, dtype=np.float64)
        if self.xor_masks.shape != self.add_masks.shape or self.xor_masks.ndim != 1:
            raise ValueError("mask arrays must be 1-d and of equal length")
        if len(self.add_masks) and not (
            (self.add_masks >= 0.0).all() and (self.add_masks < 256.0).all()
        ):
            raise ValueError("additive masks must lie in [0, 256)")
        if self.variant not in (1, 2):
            raise ValueError(f"variant must be 1 or 2, got {self.variant!r}")

    def __len__(self):
        return len(self.xor_masks)

    def record(self, i: int) -> EquivalentKeyRecord:
        return EquivalentKeyRecord(int(self.xor_masks[i]), float(self.add_masks[i]))


def make_chosen_pair(plaintext) -> bytes:
    """Second plaintext of the chosen pair: the bytewise complement."""
    return bytes(plaintext).translate(_COMPLEMENT)


def extract_delta(c1: float, c2: float) -> Tuple[int, bool]:
    """Integer difference 256*(c_high - c_low) of two same-position ciphertexts.

    Returns (delta, swapped) where swapped records that c2 was the larger
    one.  The scaled difference must land on an integer in 1..255; a
    degenerate 0 or 256 means the plain bytes were equal or the inputs are
    corrupt.
    """
    for v in (c1, c2):
        if not 0.0 <= v < 1.0:
            raise ValueError(f"ciphertext value outside [0, 1): {v!r}")
    swapped = c1 < c2
    hi, lo = (c2, c1) if swapped else (c1, c2)
    raw = 256.0 * (hi - lo)
    delta = int(round(raw))
    if abs(raw - delta) > RESIDUAL_TOL:
        raise ResidualError(f"difference residual {abs(raw - delta):.3g} exceeds {RESIDUAL_TOL}")
    if delta in (0, 256):
        raise DegenerateDeltaError(f"degenerate difference {delta}")
    return delta, swapped


def solve_xor_diff(a: int, c: int) -> int:
    """The x with (a ^ x) - ((a ^ 255) ^ x) = c, for bytes a and c > 0.

    Closed form: set the top bit and copy the high seven bits of c shifted
    down, x = a ^ (128 | (c >> 1)).  For odd c this is the unique
    solution; even c admit none (the oracle suite verifies both facts by
    exhaustion).
    """
    if not 0 <= a <= 255:
        raise ValueError(f"a must be a byte, got {a!r}")
    if not 0 < c < 256:
        raise ValueError(f"c must lie in 1..255, got {c!r}")
    return a ^ (128 | (c >> 1))


def derive_mask_candidates(p1_byte: int, p2_byte: int, delta: int,
                           swapped: bool) -> Tuple[int, int]:
    """Both XOR-mask candidates for one position of a complementary pair.

    Orientation follows the swap flag from extract_delta: the plain byte
    whose ciphertext was larger plays the role of a.  Candidate 2 always
    equals candidate 1 with the top bit flipped.
    """
    if p1_byte ^ p2_byte != 255:
        raise ValueError(f"plain bytes {p1_byte} and {p2_byte} are not complementary")
    if delta % 2 == 0:
        raise ValueError(
            f"even difference {delta}: not produced by one key on a complementary pair"
        )
    a = p2_byte if swapped else p1_byte
    b1 = solve_xor_diff(a, delta)
    b2 = solve_xor_diff(a ^ 255, 256 - delta)
    return b1, b2


def derive_additive_mask(p_byte: int, c: float, xor_mask: int) -> float:
    """Additive mask in [0, 256) consistent with one known (plain, cipher) pair.

    Congruent to 256 times the tent state that masked this position
    whenever xor_mask is the value the key generated.
    """
    return (256.0 * c - (p_byte ^ xor_mask)) % 256.0


def _first_index(condition: np.ndarray):
    idx = np.nonzero(condition)[0]
    return int(idx[0]) if len(idx) else None


def derive_equivalent_key(p1, c1, p2, c2) -> Tuple[EquivalentKey, EquivalentKey]:
    """Recover both equivalent-key variants from a chosen complementary pair.

    p1/p2 are byte strings with p2 the bytewise complement of p1; c1/c2
    are their ciphertexts under one secret key.  Works position by
    position (vectorised); the first offending position is named when a
    precondition fails.
    """
    a1 = np.frombuffer(bytes(p1), dtype=np.uint8)
    a2 = np.frombuffer(bytes(p2), dtype=np.uint8)
    v1 = np.asarray(c1, dtype=np.float64)
    v2 = np.asarray(c2, dtype=np.float64)
    if not len(a1) == len(a2) == len(v1) == len(v2):
        raise ValueError("plaintexts and ciphertexts must all have equal length")

    i = _first_index((a1 ^ a2) != 255)
    if i is not None:
        raise ValueError(f"position {i}: bytes {a1[i]} and {a2[i]} are not complementary")

    diff = v1 - v2
    swapped = diff < 0
    raw = 256.0 * np.abs(diff)
    delta = np.rint(raw)
    residuals = np.abs(raw - delta)
    i = _first_index(residuals > RESIDUAL_TOL)
    if i is not None:
        raise ResidualError(
            f"position {i}: difference residual {residuals[i]:.3g} exceeds {RESIDUAL_TOL}"
        )
    delta = delta.astype(np.int64)
    i = _first_index((delta == 0) | (delta == 256))
    if i is not None:
        raise DegenerateDeltaError(f"position {i}: degenerate difference {delta[i]}")
    i = _first_index(delta % 2 == 0)
    if i is not None:
        raise ValueError(f"position {i}: even difference {delta[i]}, inputs look corrupt")

    a = np.where(swapped, a2, a1).astype(np.int64)
    b1 = a ^ (128 | (delta >> 1))
    b2 = (a ^ 255) ^ (128 | ((256 - delta) >> 1))
    p1i = a1.astype(np.int64)
    x1 = (256.0 * v1 - (p1i ^ b1)) % 256.0
    x2 = (256.0 * v1 - (p1i ^ b2)) % 256.0
    return (
        EquivalentKey(b1.astype(np.uint8), x1, variant=1),
        EquivalentKey(b2.astype(np.uint8), x2, variant=2),
    )


def decrypt_with_equivalent(cipher, key: EquivalentKey) -> bytes:
    """Decrypt a same-key ciphertext with a recovered equivalent key.

    The key is positional, so the ciphertext may cover at most the
    positions the key was derived for; a shorter ciphertext uses a
    prefix.  Both variants produce identical output.
    """
    c = np.asarray(cipher, dtype=np.float64)
    if len(c) > len(key):
        raise ValueError(
            f"ciphertext has {len(c)} positions but the equivalent key covers only {len(key)}"
        )
    y = (256.0 * c - key.add_masks[: len(c)]) % 256.0
    nearest = np.rint(y)
    residuals = np.abs(y - nearest)
    i = _first_index(residuals > RESIDUAL_TOL)
    if i is not None:
        raise ResidualError(
            f"position {i}: residual {residuals[i]:.3g} exceeds {RESIDUAL_TOL}"
        )
    out = (nearest.astype(np.int64) % 256).astype(np.uint8) ^ key.xor_masks[: len(c)]
    return out.tobytes()
