from cnncipher import oracles
from cnncipher.oracles import (
    OracleReport,
    run_all,
    verify_candidate_equivalence,
    verify_mod_difference,
    verify_mod_scaling,
    verify_orientation_pairing,
    verify_top_bit_shift,
    verify_xor_diff_unique,
)


def test_mod_scaling_hand_cases():
    # a = 7 mod 3 = 1, scaled by 2: 2 == 14 mod 6
    assert (7.0 % 3.0) * 2 == (7.0 * 2) % (3.0 * 2) == 2.0
    # zero case
    assert (0.0 % 5.0) * 9 == (0.0 * 9) % (5.0 * 9) == 0.0


def test_mod_scaling_sweep():
    report = verify_mod_scaling(samples=100_000)
    assert report.passed
    assert report.cases_checked >= 100_000


def test_mod_difference_hand_cases():
    # a=3, b=5, n=8: c = 6 and a-b = -2 = c-n
    c = (3.0 - 5.0) % 8.0
    assert c == 6.0 and 3.0 - 5.0 == c - 8.0
    # equality case
    assert (2.5 - 2.5) % 7.0 == 0.0


def test_mod_difference_sweep():
    report = verify_mod_difference(samples=100_000)
    assert report.passed
    assert report.cases_checked >= 100_000


def test_top_bit_shift_hand_cases():
    assert 0 ^ 128 == 128 == (0 + 128) % 256
    assert 200 ^ 128 == 72 == (200 + 128) % 256


def test_top_bit_shift_exhaustive():
    report = verify_top_bit_shift()
    assert report.passed
    assert report.cases_checked == 256


def test_xor_diff_unique_exhaustive():
    report = verify_xor_diff_unique()
    assert report.passed
    assert report.cases_checked == 256 * 255


def test_xor_diff_spot_cases():
    # unique brute-force solution for a=0, c=255 is x=255
    sols = [x for x in range(256) if (0 ^ x) - (255 ^ x) == 255]
    assert sols == [255]
    # even c has no solution
    assert [x for x in range(256) if (0 ^ x) - (255 ^ x) == 100] == []


def test_orientation_pairing_exhaustive():
    report = verify_orientation_pairing()
    assert report.passed
    assert report.cases_checked == 256 * 128


def test_orientation_pairing_spot_case():
    # c=255 pairs with c'=1: brute-force both equations for a=146
    a, b = 146, 109
    x = [v for v in range(256) if (a ^ v) - (b ^ v) == 255]
    x_rev = [v for v in range(256) if (b ^ v) - (a ^ v) == 1]
    assert x == [a ^ 255]
    assert x_rev == [x[0] ^ 128]


def test_candidate_equivalence_exhaustive():
    report = verify_candidate_equivalence()
    assert report.passed
    assert report.cases_checked == 256 ** 3


def test_candidate_equivalence_spot_cases():
    # both sides 0 versus (128 + 128) mod 256
    assert ((0 ^ 0) + 0.0) % 256.0 == ((0 ^ 128) + 128.0) % 256.0
    # fractional additive mask
    lhs = ((170 ^ 85) + 100.5) % 256.0
    rhs = ((170 ^ (85 ^ 128)) + (100.5 + 128.0) % 256.0) % 256.0
    assert lhs == rhs == 99.5


def test_run_all_order_and_pass():
    reports = run_all(samples=2_000)
    assert [r.name for r in reports] == [
        "mod_scaling",
        "mod_difference",
        "top_bit_shift",
        "xor_diff_uniqueness",
        "orientation_pairing",
        "candidate_equivalence",
    ]
    assert all(r.passed for r in reports)


def test_report_summary_format():
    report = OracleReport("demo", 12, [])
    assert "PASS" in report.summary() and "12" in report.summary()
    report.counterexamples.append((1, 2))
    assert "FAIL" in report.summary()
    assert not report.passed


def test_injected_fault_is_detected(monkeypatch):
    # break the closed form the uniqueness check compares against: the
    # brute-force side must immediately disagree
    monkeypatch.setattr(oracles, "solve_xor_diff", lambda a, c: (a + c) & 0xFF)
    report = verify_xor_diff_unique()
    assert not report.passed
    assert len(report.counterexamples) > 0
