"""Command-line workbench: run the cipher, break it, verify the math.

The break is reproducible as shell commands::

    cnncipher keygen --seed 7 --out secret.key
    cnncipher encrypt --key secret.key --in f1.pgm --out f1.ct --format pgm
    cnncipher complement --in f1.pgm --out f2.pgm --format pgm
    cnncipher encrypt --key secret.key --in f2.pgm --out f2.ct --format pgm
    cnncipher attack derive f1.pgm f1.ct f2.pgm f2.ct --out equiv
    cnncipher encrypt --key secret.key --in f3.pgm --out f3.ct --format pgm
    cnncipher attack decrypt --equiv equiv.k1 --in f3.ct --out recovered.pgm
"""

import argparse
import json
import sys

from . import attack, cipher, formats, oracles
from .errors import CipherError

RAW = "raw"
PGM = "pgm"


def _read_plaintext(path, fmt):
    """Returns (bytes, image_size or None)."""
    if fmt == PGM:
        img = formats.read_pgm(path)
        return img.pixels, (img.width, img.height)
    return open(path, "rb").read(), None


def _write_plaintext(path, data, image_size):
    if image_size is not None:
        w, h = image_size
        formats.write_pgm(path, formats.ImageBuffer(w, h, data))
    else:
        formats.atomic_write_bytes(path, data)


def cmd_keygen(args):
    explicit = [args.r, args.x0, args.cells]
    given = sum(v is not None for v in explicit)
    if given == 3:
        if len(args.cells) != 8 or set(args.cells) - {"+", "-"}:
            raise CipherError("--cells must be eight '+'/'-' characters")
        key = cipher.SecretKey(
            r=args.r, x0=args.x0,
            cells=tuple(1 if ch == "+" else -1 for ch in args.cells),
        )
    elif given == 0:
        key = cipher.random_key(args.seed)
    else:
        raise CipherError("give all of --r/--x0/--cells, or none of them")
    formats.write_key_file(args.out, key)
    return 0


def cmd_encrypt(args):
    key = formats.read_key_file(args.key)
    data, image_size = _read_plaintext(args.inp, args.format)
    values = cipher.encrypt_stream(key, data)
    formats.write_cipher_file(args.out, values, image_size)
    return 0


def cmd_decrypt(args):
    key = formats.read_key_file(args.key)
    values, image_size = formats.read_cipher_file(args.inp)
    data = cipher.decrypt_stream(key, values)
    _write_plaintext(args.out, data, image_size)
    return 0


def cmd_complement(args):
    data, image_size = _read_plaintext(args.inp, args.format)
    _write_plaintext(args.out, attack.make_chosen_pair(data), image_size)
    return 0


def _print_equiv_table(key1, key2, limit=10):
    n = min(limit, len(key1))
    print(f"first {n} of {len(key1)} recovered masking pairs:")
    rows = [
        ("i", [str(i) for i in range(n)]),
        ("xor1", [str(int(v)) for v in key1.xor_masks[:n]]),
        ("xor2", [str(int(v)) for v in key2.xor_masks[:n]]),
        ("add1", [f"{v:.2f}" for v in key1.add_masks[:n]]),
        ("add2", [f"{v:.2f}" for v in key2.add_masks[:n]]),
    ]
    width = max((len(c) for _, cells in rows for c in cells), default=1)
    for label, cells in rows:
        print("  ".join([f"{label:<5}"] + [f"{c:>{width}}" for c in cells]))


def cmd_attack_derive(args):
    values1, size1 = formats.read_cipher_file(args.cipher1)
    values2, size2 = formats.read_cipher_file(args.cipher2)
    if size1 != size2:
        raise CipherError("the two ciphertexts disagree about image mode")
    fmt = RAW if size1 is None else PGM
    plain1, _ = _read_plaintext(args.plain1, fmt)
    plain2, _ = _read_plaintext(args.plain2, fmt)
    key1, key2 = attack.derive_equivalent_key(plain1, values1, plain2, values2)
    formats.write_equiv_key_file(args.out + ".k1", key1)
    formats.write_equiv_key_file(args.out + ".k2", key2)
    _print_equiv_table(key1, key2)
    print(f"wrote {args.out}.k1 and {args.out}.k2")
    return 0


def cmd_attack_decrypt(args):
    key = formats.read_equiv_key_file(args.equiv)
    if args.variant is not None and key.variant != args.variant:
        raise CipherError(
            f"{args.equiv} holds variant {key.variant}, not {args.variant}"
        )
    values, image_size = formats.read_cipher_file(args.inp)
    data = attack.decrypt_with_equivalent(values, key)
    _write_plaintext(args.out, data, image_size)
    return 0


def cmd_verify(args):
    reports = oracles.run_all(samples=args.samples)
    for report in reports:
        print(report.summary())
    if args.out:
        summary = {
            r.name: {
                "cases_checked": r.cases_checked,
                "counterexamples": [list(c) for c in r.counterexamples],
                "passed": r.passed,
            }
            for r in reports
        }
        formats.atomic_write_bytes(args.out, json.dumps(summary, indent=2).encode())
    return 0 if all(r.passed for r in reports) else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cnncipher",
        description="CNN chaotic stream cipher and its chosen-plaintext break",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="write a key file")
    p.add_argument("--out", required=True, help="key file to write")
    p.add_argument("--seed", type=int, help="RNG seed for sampled keys")
    p.add_argument("--r", type=float, help="tent parameter in [1.9, 2.0)")
    p.add_argument("--x0", type=float, help="tent seed in (0, 1)")
    p.add_argument("--cells", help="eight '+'/'-' characters")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt raw bytes or a P5 image")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=(RAW, PGM), default=RAW)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a ciphertext file")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("complement", help="write the bytewise complement")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=(RAW, PGM), default=RAW)
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("attack", help="chosen-plaintext attack")
    attack_sub = p.add_subparsers(dest="attack_command", required=True)

    d = attack_sub.add_parser(
        "derive", help="derive both equivalent keys from a chosen pair"
    )
    d.add_argument("plain1")
    d.add_argument("cipher1")
    d.add_argument("plain2")
    d.add_argument("cipher2")
    d.add_argument("--out", required=True, help="prefix for the .k1/.k2 files")
    d.set_defaults(func=cmd_attack_derive)

    d = attack_sub.add_parser("decrypt", help="decrypt with an equivalent key")
    d.add_argument("--equiv", required=True, help="equivalent-key file")
    d.add_argument("--variant", type=int, choices=(1, 2),
                   help="require the file to hold this variant")
    d.add_argument("--in", dest="inp", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_attack_decrypt)

    p = sub.add_parser("verify", help="run the exhaustive identity checks")
    p.add_argument("--samples", type=int, default=100_000,
                   help="sample count for the real-valued identities")
    p.add_argument("--out", help="also write a JSON summary")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CipherError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
