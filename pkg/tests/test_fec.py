import numpy as np
import pytest

from mccdma import fec, sysmodel
from mccdma.fec import TOY_CODE, ConvCode, umts_cc


def reference_encode(bits, code: ConvCode):
    """Independent bit-by-bit shift-register trace (oracle)."""
    taps = [[(gen >> s) & 1 for s in range(code.constraint_length - 1, -1, -1)]
            for gen in code.generators]
    register = [0] * code.constraint_length
    out = []
    for b in list(bits) + [0] * (code.constraint_length - 1):
        register = [int(b)] + register[:-1]
        for tap in taps:
            out.append(sum(t * r for t, r in zip(tap, register)) % 2)
    return np.array(out, dtype=np.int8)


def reference_puncture(mother, pattern):
    pattern = np.asarray(pattern, dtype=bool)
    period, streams = pattern.shape
    kept = []
    for i, bit in enumerate(mother):
        t, j = divmod(i, streams)
        if pattern[t % period, j]:
            kept.append(bit)
    return np.array(kept, dtype=mother.dtype)


def exhaustive_ml(llrs, code: ConvCode):
    """Brute-force ML over all messages (k <= 12), same metric as decoder."""
    n_steps = llrs.size // code.n_streams
    k = n_steps - code.tail_bits
    best, best_metric = None, np.inf
    for m in range(1 << k):
        msg = np.array([(m >> (k - 1 - i)) & 1 for i in range(k)])
        coded = reference_encode(msg, code).astype(np.float64)
        metric = float(np.sum(llrs * (2 * coded - 1)) / 2)
        if metric < best_metric:
            best_metric, best = metric, msg
    return best


def test_all_zero_input_maps_to_all_zero():
    out = fec.conv_encode(np.zeros(40, dtype=int), umts_cc("1/2"))
    assert not out.any()


def test_impulse_response_equals_generator_taps():
    # single 1 followed by zeros on the (7,5) code: interleaved impulse
    # responses 11, 10, 11 then the all-zero tail
    out = fec.conv_encode(np.array([1, 0, 0]), ConvCode(3, (0o7, 0o5)))
    assert out.tolist() == [1, 1, 1, 0, 1, 1, 0, 0, 0, 0]


def test_umts_code_matches_shift_register_oracle():
    rng = np.random.default_rng(7)
    bits = rng.integers(0, 2, 32)
    code = umts_cc("1/2")
    mother = reference_encode(bits, code)
    expected = reference_puncture(mother, code.puncture_pattern)
    assert np.array_equal(fec.conv_encode(bits, code), expected)


def test_encoder_linearity():
    rng = np.random.default_rng(3)
    code = umts_cc("1/3")
    for _ in range(10):
        a = rng.integers(0, 2, 25)
        b = rng.integers(0, 2, 25)
        ca, cb = fec.conv_encode(a, code), fec.conv_encode(b, code)
        assert np.array_equal(fec.conv_encode(a ^ b, code), ca ^ cb)


def test_identity_pattern_is_passthrough():
    x = np.arange(12)
    pattern = np.ones((1, 3), dtype=bool)
    assert np.array_equal(fec.puncture(x, pattern), x)


def test_rate_13_to_12_bookkeeping():
    pattern = umts_cc("1/2").puncture_pattern
    mother = np.arange(6)
    kept = fec.puncture(mother, pattern)
    assert kept.tolist() == [0, 1, 3, 4]
    llrs = np.array([5.0, 6.0, 7.0, 8.0])
    rebuilt = fec.depuncture(llrs, pattern, 6)
    assert rebuilt.tolist() == [5.0, 6.0, 0.0, 7.0, 8.0, 0.0]


def test_depuncture_positions_oracle():
    rng = np.random.default_rng(11)
    pattern = umts_cc("3/4").puncture_pattern
    mother_len = 300
    mask = np.array([pattern[(i // 3) % 3, i % 3] for i in range(mother_len)])
    llrs = rng.standard_normal(int(mask.sum())) + 3.0  # strictly nonzero
    rebuilt = fec.depuncture(llrs, pattern, mother_len)
    assert np.array_equal(rebuilt != 0, mask)


def test_pattern_keeps_at_least_one_bit_per_row():
    with pytest.raises(ValueError, match="keep"):
        ConvCode(3, (0o7, 0o5), puncture_pattern=np.array([[1, 1], [0, 0]]))


def test_interleaver_roundtrip_and_determinism():
    rng = np.random.default_rng(0)
    perm = fec.make_interleaver(10_000, seed=42)
    assert np.array_equal(np.sort(perm), np.arange(10_000))  # bijection
    x = rng.integers(0, 2, 10_000)
    assert np.array_equal(fec.deinterleave(fec.interleave(x, perm), perm), x)
    assert np.array_equal(perm, fec.make_interleaver(10_000, seed=42))
    assert not np.array_equal(perm, fec.make_interleaver(10_000, seed=43))


def test_identity_permutation_is_noop():
    x = np.arange(8)
    assert np.array_equal(fec.interleave(x, np.arange(8)), x)


def test_interleave_size_mismatch():
    with pytest.raises(ValueError, match="size"):
        fec.interleave(np.zeros(5), np.arange(6))


@pytest.mark.parametrize("code_rate", ["1/3", "1/2", "3/4"])
def test_noiseless_decode_recovers_message(code_rate):
    rng = np.random.default_rng(5)
    code = umts_cc(code_rate)
    plain = umts_cc("1/3")
    for _ in range(5):
        bits = rng.integers(0, 2, 60)
        coded = fec.conv_encode(bits, code)
        llrs = 1.0 - 2.0 * coded
        if code.puncture_pattern is not None:
            llrs = fec.depuncture(llrs, code.puncture_pattern,
                                  (60 + 8) * 3)
        assert np.array_equal(fec.viterbi_decode(llrs, plain), bits)


def test_single_flip_corrected_and_matches_exhaustive_ml():
    rng = np.random.default_rng(9)
    code = TOY_CODE
    bits = rng.integers(0, 2, 8)
    coded = fec.conv_encode(bits, code)
    coded_flip = coded.copy()
    coded_flip[7] ^= 1
    llrs = 1.0 - 2.0 * coded_flip
    decoded = fec.viterbi_decode(llrs, code)
    assert np.array_equal(decoded, bits)
    assert np.array_equal(exhaustive_ml(llrs, code), bits)


def test_viterbi_equals_exhaustive_ml_on_noisy_inputs():
    # exact-match oracle: 200 random soft sequences, k = 10 info bits
    rng = np.random.default_rng(2024)
    code = TOY_CODE
    k = 10
    for _ in range(200):
        bits = rng.integers(0, 2, k)
        coded = fec.conv_encode(bits, code).astype(np.float64)
        llrs = (1.0 - 2.0 * coded) + rng.standard_normal(coded.size) * 1.2
        assert np.array_equal(fec.viterbi_decode(llrs, code),
                              exhaustive_ml(llrs, code))


def test_all_zero_llrs_decode_to_zero_under_tie_break():
    llrs = np.zeros(2 * 12)
    assert not fec.viterbi_decode(llrs, TOY_CODE).any()


def test_decode_encode_roundtrip_random_messages():
    rng = np.random.default_rng(77)
    code = umts_cc("1/2")
    plain = umts_cc("1/3")
    for _ in range(20):
        n = int(rng.integers(10, 120))
        bits = rng.integers(0, 2, n)
        coded = fec.conv_encode(bits, code)
        llrs = fec.depuncture(1.0 - 2.0 * coded, code.puncture_pattern,
                              (n + 8) * 3)
        assert np.array_equal(fec.viterbi_decode(llrs, plain), bits)


def test_viterbi_rejects_inconsistent_length():
    with pytest.raises(ValueError):
        fec.viterbi_decode(np.zeros(7), TOY_CODE)  # not a stream multiple
    with pytest.raises(ValueError):
        fec.viterbi_decode(np.zeros(2), TOY_CODE)  # shorter than the tail


def test_frame_layout_fills_capacity_exactly_on_desk_preset():
    lay = fec.frame_layout(sysmodel.desk_preset())
    assert lay.capacity == 64
    assert lay.n_info == 24 and lay.pad == 0
    assert lay.n_kept == 64 and lay.n_mother == 96
    lay34 = fec.frame_layout(sysmodel.desk_preset(modulation="QAM16",
                                                  code_rate="3/4"))
    assert lay34.capacity == 128
    assert lay34.n_info == 88 and lay34.pad == 0


def test_frame_layout_uncoded():
    lay = fec.frame_layout(sysmodel.desk_preset(code_rate="uncoded"))
    assert lay.n_info == lay.capacity == 64
    assert not lay.coded
