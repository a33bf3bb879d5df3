"""Brute-force verifiers for the arithmetic identities behind the attack.

Every verifier enumerates (or, for the real-valued identities, samples
with a fixed seed) its whole input domain and returns an OracleReport; an
empty counterexample list means the statement held everywhere.  The
verifiers deliberately avoid the closed-form solver in attack.py so they
stay independent of what they check; the one exception is
verify_xor_diff_unique, which compares its brute-force solutions against
solve_xor_diff as its final assertion.
"""

import random
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .attack import solve_xor_diff

__all__ = [
    "OracleReport",
    "verify_mod_scaling",
    "verify_mod_difference",
    "verify_top_bit_shift",
    "verify_xor_diff_unique",
    "verify_orientation_pairing",
    "verify_candidate_equivalence",
    "run_all",
]

_MAX_RECORDED = 10  # keep the report small; any entry at all means failure


@dataclass
class OracleReport:
    name: str
    cases_checked: int
    counterexamples: List[Tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{self.name}: {status} ({self.cases_checked} cases, "
                f"{len(self.counterexamples)} counterexamples)")


def _record(report, item):
    if len(report.counterexamples) < _MAX_RECORDED:
        report.counterexamples.append(item)


def verify_mod_scaling(samples: int = 100_000, seed: int = 20250810) -> OracleReport:
    """Scaling a real modulus: a = b mod c implies a*n = (b*n) mod (c*n).

    This is what justifies rewriting the byte-masking equation in
    [0, 256) instead of [0, 1).  Continuous domain, so seeded random
    triples plus hand-picked boundary cases; n is a positive integer and
    c is bounded away from zero.
    """
    report = OracleReport("mod_scaling", 0)
    fixed = [
        (7.0, 3.0, 2),
        (0.0, 5.0, 9),
        (-7.25, 3.0, 10),
        (10.0, 2.5, 4),
        (1000.0, 0.125, 1000),
        (5.0, 5.0, 3),
        (-0.3, 0.7, 17),
        (3.0, -2.0, 5),
    ]
    rng = random.Random(seed)

    def gen():
        for case in fixed:
            yield case
        for _ in range(samples):
            b = rng.uniform(-1000.0, 1000.0)
            c = rng.uniform(0.1, 100.0) * rng.choice((-1.0, 1.0))
            n = rng.randint(1, 1000)
            yield b, c, n

    for b, c, n in gen():
        a = b % c
        lhs = a * n
        rhs = (b * n) % (c * n)
        tol = 1e-9 * max(1.0, abs(c * n))
        if abs(lhs - rhs) > tol:
            _record(report, (b, c, n))
        report.cases_checked += 1
    return report


def verify_mod_difference(samples: int = 100_000, seed: int = 20250810) -> OracleReport:
    """For 0 <= a, b < n: c = (a-b) mod n forces a-b to be c or c-n.

    The dichotomy behind the two candidate orientations of an observed
    ciphertext difference.
    """
    report = OracleReport("mod_difference", 0)
    fixed = [
        (3.0, 5.0, 8.0),
        (2.5, 2.5, 7.0),
        (0.0, 4.0, 9.0),
        (6.999999, 0.0, 7.0),
        (0.0, 6.999999, 7.0),
        (0.25, 0.75, 1.0),
    ]
    rng = random.Random(seed)

    def gen():
        for case in fixed:
            yield case
        for _ in range(samples):
            n = rng.uniform(0.5, 1000.0)
            yield rng.uniform(0.0, n), rng.uniform(0.0, n), n

    for a, b, n in gen():
        c = (a - b) % n
        if min(abs(a - b - c), abs(a - b - (c - n))) > 1e-9:
            _record(report, (a, b, n))
        report.cases_checked += 1
    return report


def verify_top_bit_shift() -> OracleReport:
    """Flipping a byte's top bit equals adding 128 mod 256; all 256 bytes."""
    report = OracleReport("top_bit_shift", 0)
    for b in range(256):
        a = b ^ 128
        if a % 256 != (b + 128) % 256:
            _record(report, (b,))
        report.cases_checked += 1
    return report


def verify_xor_diff_unique() -> OracleReport:
    """Exhaustive check of the byte-difference equation (a^x) - ((a^255)^x) = c.

    For every a and every c in 1..255, enumerate all 256 values of x.
    Whenever solutions exist there must be exactly one, it must equal the
    closed form from attack.solve_xor_diff, and solvable c must be
    exactly the odd ones.
    """
    report = OracleReport("xor_diff_uniqueness", 0)
    X = np.arange(256, dtype=np.int64)
    for a in range(256):
        b = a ^ 255
        diff = (a ^ X) - (b ^ X)
        offset = diff + 255  # values into 0..510
        counts = np.bincount(offset, minlength=511)
        sol_at = np.full(511, -1, dtype=np.int64)
        sol_at[offset] = X  # unambiguous wherever counts == 1
        for c in range(1, 256):
            report.cases_checked += 1
            cnt = int(counts[c + 255])
            if c % 2 == 1:
                if cnt != 1:
                    _record(report, (a, c, "solutions", cnt))
                    continue
                x = int(sol_at[c + 255])
                if (a ^ x) - (b ^ x) != c:
                    _record(report, (a, c, "bad solution", x))
                elif x != solve_xor_diff(a, c):
                    _record(report, (a, c, "formula mismatch", x))
            elif cnt != 0:
                _record(report, (a, c, "even c solvable", cnt))
    return report


def verify_orientation_pairing() -> OracleReport:
    """Pairing of the two oriented difference equations.

    For every a and odd c, brute-force the solution x of
    (a^x) - ((a^255)^x) = c and the solution x' of the reversed equation
    with difference 256-c; they must satisfy x' = x ^ 128.  This is why
    the two derived mask candidates always sit 128 apart.
    """
    report = OracleReport("orientation_pairing", 0)
    X = np.arange(256, dtype=np.int64)
    for a in range(256):
        b = a ^ 255
        diff = (a ^ X) - (b ^ X)
        offset = diff + 255
        counts = np.bincount(offset, minlength=511)
        sol_at = np.full(511, -1, dtype=np.int64)
        sol_at[offset] = X
        for c in range(1, 256, 2):
            report.cases_checked += 1
            # (b^x') - (a^x') = 256-c  <=>  diff[x'] = c - 256
            cnt = int(counts[c + 255])
            cnt_rev = int(counts[c - 1])
            if cnt != 1 or cnt_rev != 1:
                _record(report, (a, c, "solutions", cnt, cnt_rev))
                continue
            x = int(sol_at[c + 255])
            x_rev = int(sol_at[c - 1])
            if x_rev != x ^ 128:
                _record(report, (a, c, x, x_rev))
    return report


def verify_candidate_equivalence(tol: float = 1e-9) -> OracleReport:
    """Candidate interchangeability over the full 256 x 256 x 256 grid.

    For every byte f, every mask b1 and 256 additive masks spread over
    [0, 256) at half-integer offsets: with b2 = b1 ^ 128 and the additive
    mask shifted by 128 mod 256, the two masked sums must be congruent
    mod 256, which is exactly why either recovered candidate decrypts.
    """
    report = OracleReport("candidate_equivalence", 0)
    F = np.arange(256, dtype=np.int64)[:, None]
    B1 = np.arange(256, dtype=np.int64)[None, :]
    y1 = (F ^ B1).astype(np.float64)
    y2 = (F ^ (B1 ^ 128)).astype(np.float64)
    for k in range(256):
        xh1 = k + 0.5
        xh2 = (xh1 + 128.0) % 256.0
        lhs = (y1 + xh1) % 256.0
        rhs = (y2 + xh2) % 256.0
        d = np.abs(lhs - rhs)
        bad = (d > tol) & (256.0 - d > tol)
        report.cases_checked += bad.size
        if bad.any():
            for f, b1 in zip(*np.nonzero(bad)):
                _record(report, (int(f), int(b1), xh1))
    return report


def run_all(samples: int = 100_000) -> List[OracleReport]:
    """Run every verifier, simplest statement first."""
    return [
        verify_mod_scaling(samples),
        verify_mod_difference(samples),
        verify_top_bit_shift(),
        verify_xor_diff_unique(),
        verify_orientation_pairing(),
        verify_candidate_equivalence(),
    ]
