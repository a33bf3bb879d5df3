"""On-disk formats: key files, ciphertexts, equivalent keys, P5 images.

Key file (text, one assignment per line, order free, no repeats):

    r=1.99
    x0=0.41
    cells=+-+-+-+-

Ciphertext file (binary):

    magic   b"CNNC1"
    mode    1 byte: 0 = raw bytes, 1 = grayscale image
    dims    image mode only: ASCII "<width> <height>\\n"
    count   unsigned 64-bit little-endian
    values  count IEEE-754 binary64 little-endian, each in [0, 1)

Equivalent-key file (binary):

    magic   b"EQKY1"
    variant 1 byte: 1 or 2
    count   unsigned 64-bit little-endian
    records count * (unsigned byte xor mask, binary64 little-endian
            additive mask in [0, 256))

Images are 8-bit binary PGM (P5), maxval 255 only.  All writers go
through a temporary file and an atomic rename.
"""

import os
import struct
from dataclasses import dataclass

import numpy as np

from .attack import EquivalentKey
from .cipher import SecretKey
from .errors import FormatError

__all__ = [
    "ImageBuffer",
    "read_key_file",
    "write_key_file",
    "read_cipher_file",
    "write_cipher_file",
    "read_equiv_key_file",
    "write_equiv_key_file",
    "read_pgm",
    "write_pgm",
    "parse_pgm",
    "atomic_write_bytes",
]

CIPHER_MAGIC = b"CNNC1"
EQUIV_MAGIC = b"EQKY1"
MODE_RAW = 0
MODE_PGM = 1

_RECORD_DTYPE = np.dtype([("xor", "u1"), ("add", "<f8")])


@dataclass(frozen=True)
class ImageBuffer:
    """8-bit grayscale image, row-major pixels."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise FormatError(f"bad image dimensions {self.width}x{self.height}")
        if len(self.pixels) != self.width * self.height:
            raise FormatError(
                f"pixel count {len(self.pixels)} does not match "
                f"{self.width}x{self.height}"
            )


def atomic_write_bytes(path, data: bytes):
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


# -- key files ---------------------------------------------------------------

def write_key_file(path, key: SecretKey):
    cells = "".join("+" if c > 0 else "-" for c in key.cells)
    atomic_write_bytes(path, f"r={key.r!r}\nx0={key.x0!r}\ncells={cells}\n".encode())


def read_key_file(path) -> SecretKey:
    fields = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            name, sep, value = line.partition("=")
            if not sep or name not in ("r", "x0", "cells"):
                raise FormatError(f"{path}:{lineno}: unknown line {line!r}")
            if name in fields:
                raise FormatError(f"{path}:{lineno}: duplicate {name!r}")
            fields[name] = value
    missing = {"r", "x0", "cells"} - set(fields)
    if missing:
        raise FormatError(f"{path}: missing {', '.join(sorted(missing))}")
    try:
        r = float(fields["r"])
        x0 = float(fields["x0"])
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    cells_text = fields["cells"]
    if len(cells_text) != 8 or set(cells_text) - {"+", "-"}:
        raise FormatError(f"{path}: cells must be eight '+'/'-' characters")
    return SecretKey(r=r, x0=x0, cells=tuple(1 if ch == "+" else -1 for ch in cells_text))


# -- ciphertext files --------------------------------------------------------

def write_cipher_file(path, values, image_size=None):
    """Serialise a ciphertext; image_size=(width, height) marks image mode."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("ciphertext must be a flat sequence")
    if len(arr) and not ((arr >= 0.0).all() and (arr < 1.0).all()):
        raise ValueError("ciphertext values must lie in [0, 1)")
    parts = [CIPHER_MAGIC]
    if image_size is None:
        parts.append(bytes([MODE_RAW]))
    else:
        w, h = image_size
        if w * h != len(arr):
            raise ValueError(f"{w}x{h} does not match {len(arr)} values")
        parts.append(bytes([MODE_PGM]))
        parts.append(b"%d %d\n" % (w, h))
    parts.append(struct.pack("<Q", len(arr)))
    parts.append(arr.astype("<f8", copy=False).tobytes())
    atomic_write_bytes(path, b"".join(parts))


def read_cipher_file(path):
    """Returns (values, image_size) where image_size is None in raw mode."""
    data = open(path, "rb").read()
    if data[: len(CIPHER_MAGIC)] != CIPHER_MAGIC:
        raise FormatError(f"{path}: not a ciphertext file (bad magic)")
    pos = len(CIPHER_MAGIC)
    if len(data) < pos + 1:
        raise FormatError(f"{path}: truncated before mode byte")
    mode = data[pos]
    pos += 1
    image_size = None
    if mode == MODE_PGM:
        end = data.find(b"\n", pos, pos + 64)
        if end < 0:
            raise FormatError(f"{path}: missing image dimensions")
        try:
            w, h = (int(t) for t in data[pos:end].split())
        except ValueError:
            raise FormatError(f"{path}: bad image dimensions") from None
        image_size = (w, h)
        pos = end + 1
    elif mode != MODE_RAW:
        raise FormatError(f"{path}: unknown mode byte {mode}")
    if len(data) < pos + 8:
        raise FormatError(f"{path}: truncated before length")
    (count,) = struct.unpack_from("<Q", data, pos)
    pos += 8
    if len(data) - pos != 8 * count:
        raise FormatError(
            f"{path}: payload is {len(data) - pos} bytes, expected {8 * count}"
        )
    values = np.frombuffer(data, dtype="<f8", count=count, offset=pos).astype(
        np.float64, copy=True
    )
    if len(values) and not ((values >= 0.0).all() and (values < 1.0).all()):
        raise FormatError(f"{path}: ciphertext values outside [0, 1)")
    if image_size is not None and image_size[0] * image_size[1] != count:
        raise FormatError(f"{path}: image dimensions do not match value count")
    return values, image_size


# -- equivalent-key files ----------------------------------------------------

def write_equiv_key_file(path, key: EquivalentKey):
    records = np.empty(len(key), dtype=_RECORD_DTYPE)
    records["xor"] = key.xor_masks
    records["add"] = key.add_masks
    atomic_write_bytes(
        path,
        EQUIV_MAGIC + bytes([key.variant]) + struct.pack("<Q", len(key))
        + records.tobytes(),
    )


def read_equiv_key_file(path) -> EquivalentKey:
    data = open(path, "rb").read()
    if data[: len(EQUIV_MAGIC)] != EQUIV_MAGIC:
        raise FormatError(f"{path}: not an equivalent-key file (bad magic)")
    pos = len(EQUIV_MAGIC)
    if len(data) < pos + 9:
        raise FormatError(f"{path}: truncated header")
    variant = data[pos]
    if variant not in (1, 2):
        raise FormatError(f"{path}: bad variant byte {variant}")
    (count,) = struct.unpack_from("<Q", data, pos + 1)
    pos += 9
    if len(data) - pos != _RECORD_DTYPE.itemsize * count:
        raise FormatError(
            f"{path}: payload is {len(data) - pos} bytes, expected "
            f"{_RECORD_DTYPE.itemsize * count}"
        )
    records = np.frombuffer(data, dtype=_RECORD_DTYPE, count=count, offset=pos)
    add = records["add"].astype(np.float64, copy=True)
    if len(add) and not ((add >= 0.0).all() and (add < 256.0).all()):
        raise FormatError(f"{path}: additive masks outside [0, 256)")
    return EquivalentKey(records["xor"].copy(), add, variant=variant)


# -- PGM images --------------------------------------------------------------

def _pgm_tokens(data: bytes, count: int, pos: int):
    """Read whitespace/comment-separated header tokens starting at pos."""
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos] == ord("#"):
            end = data.find(b"\n", pos)
            pos = n if end < 0 else end + 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError("truncated image header")
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pgm(data: bytes) -> ImageBuffer:
    if data[:2] != b"P5":
        raise FormatError("only binary P5 images are supported")
    try:
        (w_tok, h_tok, maxval_tok), pos = _pgm_tokens(data, 3, 2)
        width, height, maxval = int(w_tok), int(h_tok), int(maxval_tok)
    except (ValueError, FormatError) as exc:
        raise FormatError(f"bad image header: {exc}") from None
    if maxval != 255:
        raise FormatError(f"only maxval 255 is supported, got {maxval}")
    pos += 1  # exactly one whitespace byte separates header and pixels
    pixels = data[pos:]
    if len(pixels) != width * height:
        raise FormatError(
            f"expected {width * height} pixel bytes, found {len(pixels)}"
        )
    return ImageBuffer(width, height, bytes(pixels))


def read_pgm(path) -> ImageBuffer:
    try:
        return parse_pgm(open(path, "rb").read())
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_pgm(path, image: ImageBuffer):
    header = b"P5\n%d %d\n255\n" % (image.width, image.height)
    atomic_write_bytes(path, header + image.pixels)
