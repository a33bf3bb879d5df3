"""Clipped-neural-network chaotic stream cipher.

The keystream pairs an XOR mask with an additive mask for every plaintext
byte.  The XOR mask packs the eight +-1 cells of a small clipped
Hopfield-style network (cell 0 is the most significant bit).  The
additive mask is the tent-map state after eight iterations.  Per byte the
network advances one synchronous step, the tent map advances eight steps,
and the signs of the three non-zero weights of every cell that disagrees
with a tent-derived control bit are flipped, which couples the network's
future to the chaotic orbit.

Encrypting byte f with mask byte m and tent state x gives a double in
[0, 1):

    c = ((f XOR m) / 256 + x) mod 1

A fresh state is warmed up by sixteen silent rounds (128 tent iterations)
before the first byte is masked.  The keystream depends only on the key,
never on the plaintext.
"""

import random
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import _backend
from ._purepy import NEIGHBOURS
from .errors import InvalidKeyError, ResidualError, StateInvariantError

__all__ = [
    "RESIDUAL_TOL",
    "SecretKey",
    "CipherState",
    "KeystreamElement",
    "RunStats",
    "random_key",
    "initial_weights",
    "tent_step",
    "extract_bit",
    "cnn_evolve",
    "cnn_weight_update",
    "keystream_init",
    "keystream_next",
    "encrypt_byte",
    "decrypt_byte",
    "encrypt_stream",
    "decrypt_stream",
    "validated_run",
]

# Tolerance for values the algebra promises to be integers: decryption,
# ciphertext differences, equivalent-key decryption.  Binary64 cancellation
# error in those places is far below 1e-9; 1e-6 leaves margin while still
# catching a wrong key or a misaligned ciphertext.
RESIDUAL_TOL = 1e-6

R_MIN = 1.9
R_MAX = 2.0

WARMUP_ROUNDS = 16  # consumes exactly 128 tent iterations


@dataclass(frozen=True)
class SecretKey:
    """Tent-map control parameter, tent-map seed, and eight initial cells."""

    r: float
    x0: float
    cells: Tuple[int, ...]

    def __post_init__(self):
        if not R_MIN <= self.r < R_MAX:
            raise InvalidKeyError(f"r must lie in [{R_MIN}, {R_MAX}), got {self.r!r}")
        if not 0.0 < self.x0 < 1.0:
            raise InvalidKeyError(f"x0 must lie in (0, 1), got {self.x0!r}")
        cells = tuple(int(c) for c in self.cells)
        if len(cells) != 8 or any(c not in (-1, 1) for c in cells):
            raise InvalidKeyError("cells must be eight values, each -1 or +1")
        object.__setattr__(self, "cells", cells)


def random_key(seed: Optional[int] = None) -> SecretKey:
    """Sample a valid key: r in [1.9, 2.0), x0 in (0.01, 0.99), random cells."""
    rng = random.Random(seed)
    return SecretKey(
        r=1.9 + 0.1 * rng.random(),
        x0=0.01 + 0.98 * rng.random(),
        cells=tuple(rng.choice((-1, 1)) for _ in range(8)),
    )


def initial_weights() -> np.ndarray:
    """Public starting weight matrix.

    Non-zeros sit at column offsets +1, -1 and +4 (mod 8) of every row,
    all +1 initially: a symmetric, zero-diagonal circulant with exactly
    three non-zeros per row.  Only the signs change afterwards.
    """
    w = np.zeros((8, 8), dtype=np.int8)
    for i in range(8):
        for j in NEIGHBOURS[i]:
            w[i, j] = 1
    return w


@dataclass
class CipherState:
    """Evolving cipher state; a plain value that can be cloned freely."""

    r: float
    x: float
    cells: np.ndarray  # int8[8], values in {-1, +1}
    weights: np.ndarray  # int8[8, 8]
    byte_index: int = 0

    def clone(self) -> "CipherState":
        return CipherState(self.r, self.x, self.cells.copy(), self.weights.copy(),
                           self.byte_index)

    def __eq__(self, other):
        if not isinstance(other, CipherState):
            return NotImplemented
        return (self.r == other.r and self.x == other.x
                and self.byte_index == other.byte_index
                and np.array_equal(self.cells, other.cells)
                and np.array_equal(self.weights, other.weights))


class KeystreamElement(NamedTuple):
    """Per-byte masking pair plus the control bits that drove the round."""

    xor_mask: int  # cells packed MSB-first
    x_last: float  # tent state after the round's eighth iteration
    control_bits: Tuple[int, ...]  # eight values in {-1, +1}


@dataclass(frozen=True)
class RunStats:
    """Extrema gathered by a fully invariant-checked run."""

    rounds: int
    x_min: float
    x_max: float
    sum_abs_min: int
    sum_abs_max: int


def tent_step(x: float, r: float) -> float:
    """One tent-map iteration: r*x on (0, 0.5], r*(1-x) on (0.5, 1)."""
    if not 0.0 < x < 1.0:
        raise ValueError(f"tent state outside (0, 1): {x!r}")
    return r * x if x <= 0.5 else r * (1.0 - x)


def extract_bit(x: float) -> int:
    """4th bit of the binary fractional expansion of x: floor(x * 16) mod 2."""
    if not 0.0 < x < 1.0:
        raise ValueError(f"value outside (0, 1): {x!r}")
    return int(x * 16.0) & 1


def cnn_evolve(cells, weights) -> np.ndarray:
    """Advance all eight cells one synchronous step.

    Each new cell is the sign of the weighted sum of the *old* cells.
    With three odd terms per row the sum is odd, hence never zero; a zero
    sum means the state is corrupt and raises.
    """
    c = np.asarray(cells, dtype=np.int64)
    w = np.asarray(weights, dtype=np.int64)
    sums = w @ c
    if np.any(sums == 0):
        raise StateInvariantError("zero weighted sum in cell update")
    return np.where(sums > 0, 1, -1).astype(np.int8)


def cnn_weight_update(weights, cells, control_bits) -> np.ndarray:
    """Flip weight signs for every cell that disagrees with its control bit.

    Applied for i = 0..7 in order: both w[i][j] and w[j][i] are negated
    for the three non-zero columns j of row i.  An edge between two
    disagreeing cells is negated twice and therefore survives unchanged.
    Symmetry, the sparsity pattern and the zero diagonal are preserved.
    """
    w = np.array(weights, dtype=np.int8, copy=True)
    for i in range(8):
        if cells[i] != control_bits[i]:
            for j in NEIGHBOURS[i]:
                w[i, j] = -w[i, j]
                w[j, i] = -w[j, i]
    return w


def _fresh_state(key: SecretKey) -> CipherState:
    return CipherState(key.r, key.x0, np.array(key.cells, dtype=np.int8),
                       initial_weights(), 0)


def _advance(state: CipherState, n: int, validate: bool = False):
    """Run n rounds through the selected backend.

    Returns (mask bytes, last tent states, advanced state, stats).  The
    input state is not mutated.
    """
    cells = state.cells.copy()
    weights = state.weights.copy()
    masks = np.empty(n, dtype=np.uint8)
    xs = np.empty(n, dtype=np.float64)
    x, stats = _backend.run_rounds(state.r, state.x, cells, weights, masks, xs, validate)
    advanced = CipherState(state.r, x, cells, weights, state.byte_index + n)
    return masks, xs, advanced, stats


def keystream_init(key: SecretKey) -> CipherState:
    """Warm up a fresh state: sixteen silent rounds, 128 tent iterations."""
    _, _, state, _ = _advance(_fresh_state(key), WARMUP_ROUNDS)
    state.byte_index = 0  # warm-up rounds are not keystream positions
    return state


def keystream_next(state: CipherState) -> Tuple[KeystreamElement, CipherState]:
    """Produce the next masking pair and the advanced state.

    Step-by-step reference composition of the public operations; the
    stream functions go through the selected backend and must agree with
    this exactly.  The element depends only on the state, never on any
    plaintext.
    """
    cells = cnn_evolve(state.cells, state.weights)
    x = state.x
    bits = []
    for _ in range(8):
        x = tent_step(x, state.r)
        bits.append(extract_bit(x))
    control = tuple(2 * b - 1 for b in bits)
    mask = 0
    for c in cells:
        mask = (mask << 1) | (1 if c > 0 else 0)
    weights = cnn_weight_update(state.weights, cells, control)
    element = KeystreamElement(mask, x, control)
    return element, CipherState(state.r, x, cells, weights, state.byte_index + 1)


def encrypt_byte(f: int, xor_mask: int, x_last: float) -> float:
    """Mask one byte into a double in [0, 1)."""
    return ((f ^ xor_mask) / 256.0 + x_last) % 1.0


def decrypt_byte(c: float, xor_mask: int, x_last: float, strict: bool = True) -> int:
    """Invert encrypt_byte.

    The unmasked value is an integer up to floating-point noise; it is
    rounded to the nearest integer and, in strict mode, rejected if it
    misses by more than RESIDUAL_TOL (wrong key or wrong position).
    """
    y = 256.0 * ((c - x_last) % 1.0)
    nearest = round(y)
    if strict and abs(y - nearest) > RESIDUAL_TOL:
        raise ResidualError(f"residual {abs(y - nearest):.3g} exceeds {RESIDUAL_TOL}")
    return (int(nearest) % 256) ^ xor_mask


def encrypt_stream(key: SecretKey, plaintext, with_elements: bool = False):
    """Encrypt a byte string into a float64 array of equal length.

    With ``with_elements=True`` also returns the keystream log: the
    per-byte XOR mask bytes and final tent states.
    """
    data = np.frombuffer(bytes(plaintext), dtype=np.uint8)
    state = keystream_init(key)
    masks, xs, _, _ = _advance(state, len(data))
    cipher = ((data ^ masks) / 256.0 + xs) % 1.0
    if with_elements:
        return cipher, masks, xs
    return cipher


def decrypt_stream(key: SecretKey, cipher, strict: bool = True) -> bytes:
    """Exact inverse of encrypt_stream under the same key.

    ``strict=False`` skips the integer-residual check and returns the
    nearest-integer reconstruction, which is only useful for measuring
    how badly a wrong key scrambles the output.
    """
    c = np.asarray(cipher, dtype=np.float64)
    state = keystream_init(key)
    masks, xs, _, _ = _advance(state, len(c))
    y = 256.0 * ((c - xs) % 1.0)
    nearest = np.rint(y)
    if strict:
        residuals = np.abs(y - nearest)
        bad = np.nonzero(residuals > RESIDUAL_TOL)[0]
        if len(bad):
            i = int(bad[0])
            raise ResidualError(
                f"byte {i}: residual {residuals[i]:.3g} exceeds {RESIDUAL_TOL}"
            )
    out = (nearest.astype(np.int64) % 256).astype(np.uint8) ^ masks
    return out.tobytes()


def validated_run(key: SecretKey, nbytes: int) -> RunStats:
    """Run warm-up plus nbytes keystream rounds with every invariant checked.

    Each round asserts the tent state stays inside (0, 1), every weighted
    sum has magnitude 1 or 3, and the weight matrix keeps its symmetric
    three-per-row shape.  Raises StateInvariantError on the first
    violation, otherwise reports the observed extrema.
    """
    rounds = WARMUP_ROUNDS + nbytes
    _, _, _, stats = _advance(_fresh_state(key), rounds, validate=True)
    x_min, x_max, s_min, s_max = stats
    return RunStats(rounds, x_min, x_max, s_min, s_max)
