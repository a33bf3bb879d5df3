import struct

import numpy as np
import pytest

from cnncipher.attack import EquivalentKey
from cnncipher.cipher import SecretKey
from cnncipher.errors import FormatError, InvalidKeyError
from cnncipher.formats import (
    ImageBuffer,
    parse_pgm,
    read_cipher_file,
    read_equiv_key_file,
    read_key_file,
    read_pgm,
    write_cipher_file,
    write_equiv_key_file,
    write_key_file,
    write_pgm,
)

KEY = SecretKey(1.99, 0.41, (1, -1, 1, -1, 1, -1, 1, -1))


class TestKeyFile:
    def test_round_trip_exact(self, tmp_path):
        path = tmp_path / "k.key"
        write_key_file(path, KEY)
        loaded = read_key_file(path)
        assert loaded == KEY
        assert loaded.r == KEY.r and loaded.x0 == KEY.x0  # bit-exact floats

    def test_round_trip_awkward_floats(self, tmp_path):
        key = SecretKey(1.9 + 0.1 / 3.0, 1.0 / 3.0, (1,) * 8)
        path = tmp_path / "k.key"
        write_key_file(path, key)
        assert read_key_file(path) == key

    def test_expected_layout(self, tmp_path):
        path = tmp_path / "k.key"
        write_key_file(path, KEY)
        assert path.read_text() == "r=1.99\nx0=0.41\ncells=+-+-+-+-\n"

    def test_unknown_line_rejected(self, tmp_path):
        path = tmp_path / "k.key"
        path.write_text("r=1.99\nx0=0.41\ncells=+-+-+-+-\nnote=hello\n")
        with pytest.raises(FormatError, match="unknown line"):
            read_key_file(path)

    def test_duplicate_rejected(self, tmp_path):
        path = tmp_path / "k.key"
        path.write_text("r=1.99\nr=1.98\nx0=0.41\ncells=+-+-+-+-\n")
        with pytest.raises(FormatError, match="duplicate"):
            read_key_file(path)

    def test_missing_field(self, tmp_path):
        path = tmp_path / "k.key"
        path.write_text("r=1.99\ncells=+-+-+-+-\n")
        with pytest.raises(FormatError, match="missing x0"):
            read_key_file(path)

    def test_bad_cells(self, tmp_path):
        path = tmp_path / "k.key"
        path.write_text("r=1.99\nx0=0.41\ncells=+-+-\n")
        with pytest.raises(FormatError):
            read_key_file(path)

    def test_bounds_enforced_at_parse(self, tmp_path):
        path = tmp_path / "k.key"
        path.write_text("r=2.5\nx0=0.41\ncells=+-+-+-+-\n")
        with pytest.raises(InvalidKeyError):
            read_key_file(path)

    def test_blank_lines_tolerated(self, tmp_path):
        path = tmp_path / "k.key"
        path.write_text("\nr=1.99\n\nx0=0.41\ncells=+-+-+-+-\n\n")
        assert read_key_file(path) == KEY


class TestCipherFile:
    def test_raw_round_trip_bit_exact(self, tmp_path):
        values = np.random.default_rng(0).random(1000)
        path = tmp_path / "c.ct"
        write_cipher_file(path, values)
        loaded, size = read_cipher_file(path)
        assert size is None
        assert np.array_equal(loaded, values)

    def test_image_mode_carries_dimensions(self, tmp_path):
        values = np.random.default_rng(1).random(12)
        path = tmp_path / "c.ct"
        write_cipher_file(path, values, image_size=(4, 3))
        loaded, size = read_cipher_file(path)
        assert size == (4, 3)
        assert np.array_equal(loaded, values)

    def test_empty(self, tmp_path):
        path = tmp_path / "c.ct"
        write_cipher_file(path, [])
        loaded, size = read_cipher_file(path)
        assert len(loaded) == 0 and size is None

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "c.ct"
        path.write_bytes(b"NOPE!" + bytes(9))
        with pytest.raises(FormatError, match="magic"):
            read_cipher_file(path)

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "c.ct"
        write_cipher_file(path, [0.5, 0.25])
        data = path.read_bytes()
        path.write_bytes(data[:-4])
        with pytest.raises(FormatError, match="payload"):
            read_cipher_file(path)

    def test_trailing_garbage_rejected(self, tmp_path):
        path = tmp_path / "c.ct"
        write_cipher_file(path, [0.5])
        path.write_bytes(path.read_bytes() + b"x")
        with pytest.raises(FormatError, match="payload"):
            read_cipher_file(path)

    def test_unknown_mode_byte(self, tmp_path):
        path = tmp_path / "c.ct"
        path.write_bytes(b"CNNC1" + bytes([9]) + struct.pack("<Q", 0))
        with pytest.raises(FormatError, match="mode"):
            read_cipher_file(path)

    def test_out_of_range_value_rejected(self, tmp_path):
        path = tmp_path / "c.ct"
        payload = struct.pack("<d", 1.5)
        path.write_bytes(b"CNNC1" + bytes([0]) + struct.pack("<Q", 1) + payload)
        with pytest.raises(FormatError, match="outside"):
            read_cipher_file(path)

    def test_writer_rejects_out_of_range(self, tmp_path):
        with pytest.raises(ValueError):
            write_cipher_file(tmp_path / "c.ct", [1.0])

    def test_dimension_mismatch_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_cipher_file(tmp_path / "c.ct", [0.5] * 5, image_size=(2, 3))


class TestEquivKeyFile:
    def make_key(self, n=100, variant=1):
        rng = np.random.default_rng(42)
        return EquivalentKey(
            rng.integers(0, 256, n, dtype=np.uint8),
            rng.random(n) * 256.0,
            variant,
        )

    def test_round_trip_bit_exact(self, tmp_path):
        key = self.make_key()
        path = tmp_path / "e.k1"
        write_equiv_key_file(path, key)
        loaded = read_equiv_key_file(path)
        assert loaded.variant == 1
        assert np.array_equal(loaded.xor_masks, key.xor_masks)
        assert np.array_equal(loaded.add_masks, key.add_masks)

    def test_empty(self, tmp_path):
        path = tmp_path / "e.k2"
        write_equiv_key_file(path, self.make_key(0, variant=2))
        loaded = read_equiv_key_file(path)
        assert len(loaded) == 0 and loaded.variant == 2

    def test_bad_variant_byte(self, tmp_path):
        path = tmp_path / "e.k1"
        write_equiv_key_file(path, self.make_key(3))
        data = bytearray(path.read_bytes())
        data[5] = 7
        path.write_bytes(bytes(data))
        with pytest.raises(FormatError, match="variant"):
            read_equiv_key_file(path)

    def test_truncated(self, tmp_path):
        path = tmp_path / "e.k1"
        write_equiv_key_file(path, self.make_key(3))
        path.write_bytes(path.read_bytes()[:-1])
        with pytest.raises(FormatError, match="payload"):
            read_equiv_key_file(path)

    def test_out_of_range_mask_rejected(self, tmp_path):
        path = tmp_path / "e.k1"
        body = struct.pack("<Q", 1) + bytes([5]) + struct.pack("<d", 300.0)
        path.write_bytes(b"EQKY1" + bytes([1]) + body)
        with pytest.raises(FormatError, match="additive"):
            read_equiv_key_file(path)


class TestPgm:
    def test_round_trip(self, tmp_path):
        img = ImageBuffer(5, 3, bytes(range(15)))
        path = tmp_path / "i.pgm"
        write_pgm(path, img)
        assert read_pgm(path) == img

    def test_written_header(self, tmp_path):
        path = tmp_path / "i.pgm"
        write_pgm(path, ImageBuffer(2, 2, bytes(4)))
        assert path.read_bytes() == b"P5\n2 2\n255\n" + bytes(4)

    def test_comments_and_whitespace(self):
        data = b"P5 # format\n# a comment line\n  4\n# another\n2 255\n" + bytes(8)
        img = parse_pgm(data)
        assert (img.width, img.height) == (4, 2)

    def test_rejects_p2(self):
        with pytest.raises(FormatError, match="P5"):
            parse_pgm(b"P2\n2 2\n255\n0 0 0 0")

    def test_rejects_p6(self):
        with pytest.raises(FormatError, match="P5"):
            parse_pgm(b"P6\n1 1\n255\n" + bytes(3))

    def test_rejects_wrong_maxval(self):
        with pytest.raises(FormatError, match="maxval"):
            parse_pgm(b"P5\n2 2\n127\n" + bytes(4))

    def test_rejects_short_pixels(self):
        with pytest.raises(FormatError, match="pixel"):
            parse_pgm(b"P5\n2 2\n255\n" + bytes(3))

    def test_rejects_extra_pixels(self):
        with pytest.raises(FormatError, match="pixel"):
            parse_pgm(b"P5\n2 2\n255\n" + bytes(5))

    def test_rejects_truncated_header(self):
        with pytest.raises(FormatError):
            parse_pgm(b"P5\n2")

    def test_image_buffer_validation(self):
        with pytest.raises(FormatError):
            ImageBuffer(2, 2, bytes(3))
        with pytest.raises(FormatError):
            ImageBuffer(0, 2, b"")


def test_atomic_write_leaves_no_temp_files(tmp_path):
    path = tmp_path / "out.bin"
    write_cipher_file(path, [0.5])
    assert sorted(p.name for p in tmp_path.iterdir()) == ["out.bin"]
