import numpy as np
import pytest
from scipy import stats

from mccdma import channel, sysmodel
from mccdma.channel import (ChannelRealization, PowerDelayProfile, add_awgn,
                            apply, chip_snr, desk4_profile, ebn0_to_noisevar,
                            flat_profile, realize, resolve_profile,
                            urban17_profile)


def test_profile_normalization_and_validation():
    pdp = PowerDelayProfile(np.array([0, 4]), np.array([2.0, 2.0]))
    assert pdp.powers.sum() == pytest.approx(1.0)
    with pytest.raises(ValueError, match="increasing"):
        PowerDelayProfile(np.array([4, 0]), np.array([0.5, 0.5]))
    with pytest.raises(ValueError, match="positive"):
        PowerDelayProfile(np.array([0, 1]), np.array([1.0, 0.0]))


def test_profile_file_roundtrip(tmp_path):
    path = tmp_path / "pdp.txt"
    path.write_text("# delay power\n0 0.5\n3 0.25\n7 0.25\n")
    pdp = PowerDelayProfile.from_file(str(path))
    assert pdp.delays.tolist() == [0, 3, 7]
    np.testing.assert_allclose(pdp.powers, [0.5, 0.25, 0.25])
    assert resolve_profile(str(path)).delays.tolist() == [0, 3, 7]


def test_builtin_profiles():
    assert flat_profile().n_taps == 1
    assert desk4_profile().max_delay == 12
    urban = urban17_profile()
    assert urban.n_taps == 17
    assert urban.max_delay < 216
    # RMS delay spread close to 250 ns at 57.6 MHz sampling
    mean = np.sum(urban.powers * urban.delays)
    rms = np.sqrt(np.sum(urban.powers * urban.delays ** 2) - mean ** 2)
    assert rms / 57.6e6 == pytest.approx(250e-9, rel=0.15)


def test_single_unit_tap_is_flat():
    real = realize(flat_profile(), 10.0, 4, seed=0, symbol_duration=1e-4)
    h = real.freq_response(64, check=True)
    flat = np.broadcast_to(np.abs(h[:, :1]), h.shape)
    np.testing.assert_allclose(np.abs(h), flat, atol=1e-12)


def test_two_path_analytic_magnitude():
    # |H_k|^2 = 1 + cos(2 pi k D / N) for equal-power taps at delays 0 and D
    delay = 4
    pdp = PowerDelayProfile(np.array([0, delay]), np.array([0.5, 0.5]))
    real = realize(pdp, 0.0, 1, seed=1, fading="none")
    h = real.freq_response(64)
    k = np.arange(64)
    np.testing.assert_allclose(np.abs(h[0]) ** 2,
                               1 + np.cos(2 * np.pi * k * delay / 64),
                               atol=1e-12)


def test_tap_statistics_and_rayleigh_envelope():
    """Monte-Carlo oracle: per-tap sample power within 2 percent, unit-power
    envelope consistent with a Rayleigh fit over independent realizations."""
    pdp = desk4_profile()
    n = 100_000
    taps = np.empty((n, pdp.n_taps), dtype=np.complex128)
    for i in range(n):
        taps[i] = realize(pdp, 30.0, 1, seed=i, symbol_duration=1e-4).taps[0]
    power = np.mean(np.abs(taps) ** 2, axis=0)
    np.testing.assert_allclose(power, pdp.powers, rtol=0.02)
    env = np.abs(taps[:, 0]) / np.sqrt(pdp.powers[0])
    ks = stats.kstest(env, stats.rayleigh(scale=np.sqrt(0.5)).cdf)
    assert ks.statistic < 0.01
    assert abs(np.mean(taps[:, 0])) < 0.01


def test_jakes_autocorrelation_tracks_bessel():
    from scipy.special import j0
    pdp = flat_profile()
    fd, ts = 200.0, 1e-3
    lags = np.arange(6)
    acc = np.zeros(len(lags), dtype=complex)
    n = 4000
    for i in range(n):
        t = realize(pdp, fd, 6, seed=10_000 + i, symbol_duration=ts).taps[:, 0]
        acc += t[0].conj() * t
    acc /= n
    expected = j0(2 * np.pi * fd * ts * lags)
    np.testing.assert_allclose(acc.real, expected, atol=0.05)


def test_fading_none_is_deterministic_sqrt_power():
    pdp = desk4_profile()
    real = realize(pdp, 100.0, 3, seed=5, fading="none")
    np.testing.assert_allclose(real.taps,
                               np.tile(np.sqrt(pdp.powers), (3, 1)))


def test_realize_deterministic_per_seed():
    pdp = desk4_profile()
    a = realize(pdp, 50.0, 4, seed=9, symbol_duration=1e-4)
    b = realize(pdp, 50.0, 4, seed=9, symbol_duration=1e-4)
    c = realize(pdp, 50.0, 4, seed=10, symbol_duration=1e-4)
    np.testing.assert_array_equal(a.taps, b.taps)
    assert not np.array_equal(a.taps, c.taps)


def test_identity_channel_passthrough():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((2, 80)) + 1j * rng.standard_normal((2, 80))
    real = ChannelRealization(np.array([0]), np.ones((2, 1), dtype=complex))
    np.testing.assert_allclose(apply(x, real), x)


def test_apply_matches_full_linear_convolution_oracle():
    rng = np.random.default_rng(1)
    pdp = desk4_profile()
    real = realize(pdp, 0.0, 3, seed=2, fading="none")
    x = rng.standard_normal((3, 40)) + 1j * rng.standard_normal((3, 40))
    y = apply(x, real)
    ir = np.zeros(pdp.max_delay + 1, dtype=complex)
    ir[pdp.delays] = real.taps[0]
    ref = np.convolve(x.reshape(-1), ir)[: x.size].reshape(x.shape)
    np.testing.assert_allclose(y, ref, atol=1e-12)


def test_apply_noise_variance():
    rng = np.random.default_rng(3)
    real = ChannelRealization(np.array([0]), np.ones((1, 1), dtype=complex),
                              noise_var=0.25)
    y = apply(np.zeros((1, 1_000_000), dtype=complex), real, rng)
    assert np.mean(np.abs(y) ** 2) == pytest.approx(0.25, rel=0.02)
    # circular symmetry: real/imag parts uncorrelated
    corr = np.mean(y.real * y.imag) / 0.125
    assert abs(corr) < 0.01


def test_awgn_zero_variance_is_identity():
    x = np.ones(10, dtype=complex)
    np.testing.assert_array_equal(add_awgn(x, 0.0), x)
    with pytest.raises(ValueError):
        add_awgn(x, -1.0)


def test_apply_rejects_wrong_cover():
    real = ChannelRealization(np.array([0]), np.ones((2, 1), dtype=complex))
    with pytest.raises(ValueError, match="cover"):
        apply(np.zeros((3, 8), dtype=complex), real)


def test_power_conservation_through_fading_channel():
    rng = np.random.default_rng(4)
    pdp = desk4_profile()
    x = rng.standard_normal((1, 4000)) + 1j * rng.standard_normal((1, 4000))
    x /= np.sqrt(np.mean(np.abs(x) ** 2))
    acc = 0.0
    n = 400
    for i in range(n):
        real = realize(pdp, 0.0, 1, seed=i).with_noise(0.1)
        y = apply(x, real, np.random.default_rng(1000 + i))
        acc += np.mean(np.abs(y) ** 2)
    assert acc / n == pytest.approx(1.0 + 0.1, rel=0.05)


def test_freq_response_check_mode():
    real = realize(desk4_profile(), 10.0, 2, seed=0, symbol_duration=1e-4)
    real.freq_response(64, bins=np.arange(1, 33), check=True)


def test_ebn0_bookkeeping_qpsk_uncoded_no_guard():
    # noise_var = 1 / (2 * 10**(EbN0/10)) in the calibration configuration
    p = sysmodel.desk_preset(code_rate="uncoded", guard_len=0)
    for db in (0.0, 4.0, 10.0):
        assert ebn0_to_noisevar(db, p) == pytest.approx(
            1.0 / (2 * 10 ** (db / 10)))


def test_ebn0_3db_halves_noise():
    p = sysmodel.desk_preset()
    assert ebn0_to_noisevar(3.0103, p) == pytest.approx(
        ebn0_to_noisevar(0.0, p) / 2, rel=1e-4)


def test_code_rate_shifts_noise_var_by_rate_ratio():
    uncoded = sysmodel.desk_preset(code_rate="uncoded")
    half = sysmodel.desk_preset(code_rate="1/2")
    db = 5.0
    assert ebn0_to_noisevar(db, half) == pytest.approx(
        2 * ebn0_to_noisevar(db, uncoded))


def test_guard_overhead_enters_eb():
    no_guard = sysmodel.desk_preset(guard_len=0)
    guarded = sysmodel.desk_preset(guard_len=16)
    assert ebn0_to_noisevar(0.0, guarded) == pytest.approx(
        ebn0_to_noisevar(0.0, no_guard) * (1 + 16 / 64))


def test_chip_snr_convention():
    p = sysmodel.desk_preset(n_users=4)
    nv = 0.1
    assert chip_snr(p, nv) == pytest.approx((4 / 8) / nv)
    assert chip_snr(p, 0.0) == np.inf
