import numpy as np
import pytest

from mondegreen.audio import AudioBuffer, I16_MAX, I16_MIN
from mondegreen.errors import DegenerateInputError, WavFormatError
from mondegreen.separation import (
    PEAK_TARGET,
    cancel_center,
    correlation,
    fastica2,
    rescale_component,
    whiten,
)

RATE = 8000


def stereo(left, right, rate=RATE):
    return AudioBuffer(
        rate, (np.asarray(left, dtype=np.int16), np.asarray(right, dtype=np.int16))
    )


def sources(seed=7, seconds=1.0):
    """A sine and uniform noise, unit-ish scale floats."""
    n = int(RATE * seconds)
    t = np.arange(n) / RATE
    rng = np.random.default_rng(seed)
    return 0.6 * np.sin(2 * np.pi * 440 * t), rng.uniform(-0.6, 0.6, size=n)


def mix(s1, s2, a):
    mixed = np.asarray(a, dtype=np.float64) @ np.vstack([s1, s2])
    return stereo(np.rint(mixed[0] * 20000), np.rint(mixed[1] * 20000))


def matched_correlations(result, s1, s2):
    """Best |corr| per source over the two components (order is arbitrary)."""
    comps = (result.vocals_est.samples, result.instrumental_est.samples)
    table = [[abs(correlation(c, s)) for s in (s1, s2)] for c in comps]
    straight = min(table[0][0], table[1][1])
    swapped = min(table[0][1], table[1][0])
    return max(straight, swapped)


# -------------------------------------------------------------- correlation


def test_correlation_basics():
    x = np.array([1.0, 2.0, 4.0, -1.0])
    assert correlation(x, x) == pytest.approx(1.0)
    assert correlation(x, -3.0 * x) == pytest.approx(-1.0)
    assert correlation(x, np.full(4, 9.0)) == 0.0
    assert correlation(np.zeros(4), x) == 0.0
    with pytest.raises(ValueError):
        correlation(x, x[:2])


# ----------------------------------------------------------- center cancel


def test_cancel_center_identical_channels_null_out():
    vals = np.array([100, -200, 32767, -32768, 0], dtype=np.int16)
    res = cancel_center(stereo(vals, vals))
    assert res.method == "center_cancel"
    assert not res.instrumental_est.samples.any()
    np.testing.assert_array_equal(res.vocals_est.samples, vals)


def test_cancel_center_recovers_mid_and_side_exactly():
    rng = np.random.default_rng(11)
    v = rng.integers(-8000, 8000, size=2000)  # center-panned "vocal"
    n = rng.integers(-8000, 8000, size=2000)  # side content
    res = cancel_center(stereo(v + n, v - n))
    np.testing.assert_array_equal(res.vocals_est.samples, v.astype(np.int16))
    np.testing.assert_array_equal(res.instrumental_est.samples, (2 * n).astype(np.int16))
    assert correlation(res.vocals_est.samples, v) >= 0.99
    assert correlation(res.instrumental_est.samples, n) >= 0.99


def test_cancel_center_saturates_wide_side():
    res = cancel_center(stereo([30000], [-30000]))
    assert res.instrumental_est.samples[0] == I16_MAX
    res = cancel_center(stereo([-30000], [30000]))
    assert res.instrumental_est.samples[0] == I16_MIN


def test_cancel_center_requires_stereo():
    with pytest.raises(WavFormatError):
        cancel_center(AudioBuffer(RATE, (np.zeros(8, dtype=np.int16),)))


# ----------------------------------------------------------------- whitening


def test_whiten_produces_identity_covariance():
    rng = np.random.default_rng(3)
    x = np.vstack([rng.normal(5.0, 2.0, 5000), rng.normal(-1.0, 0.5, 5000)])
    x[1] += 0.7 * x[0]  # correlate the channels
    z, w, means = whiten(x)
    cov = z @ z.T / z.shape[1]
    np.testing.assert_allclose(cov, np.eye(2), atol=1e-10)
    np.testing.assert_allclose(means, x.mean(axis=1))
    # w is invertible and z really is w @ centered
    np.testing.assert_allclose(np.linalg.inv(w) @ z + means[:, None], x, atol=1e-8)


@pytest.mark.parametrize(
    "x, excerpt",
    [
        (np.vstack([np.full(100, 3.0), np.arange(100.0)]), "constant"),
        (np.vstack([np.arange(100.0), 3 * np.arange(100.0)]), "dependent"),
        (np.arange(10.0), "2xN"),
        (np.zeros((3, 10)), "2xN"),
        (np.zeros((2, 1)), "2xN"),
    ],
)
def test_whiten_rejects_degenerate_input(x, excerpt):
    with pytest.raises(DegenerateInputError, match=excerpt):
        whiten(x)


# ------------------------------------------------------------------ fastica


def test_fastica_unmixes_a_proper_mixture():
    s1, s2 = sources()
    res = fastica2(mix(s1, s2, [[1.0, 0.5], [0.5, 1.0]]), seed=3)
    assert res.method == "fastica"
    assert res.diagnostics.converged
    assert matched_correlations(res, s1, s2) >= 0.95
    assert res.diagnostics.component_correlation <= 0.1
    assert res.mixing is not None
    np.testing.assert_allclose(res.mixing.unmixing @ res.mixing.unmixing.T,
                               np.eye(2), atol=1e-8)


def test_fastica_identity_mixture_is_easy():
    s1, s2 = sources()
    res = fastica2(mix(s1, s2, np.eye(2)), seed=3)
    assert matched_correlations(res, s1, s2) >= 0.99


def test_fastica_cube_contrast_also_works():
    s1, s2 = sources()
    res = fastica2(mix(s1, s2, [[1.0, 0.5], [0.5, 1.0]]), seed=3, contrast="cube")
    assert matched_correlations(res, s1, s2) >= 0.95


def test_fastica_is_deterministic_per_seed():
    s1, s2 = sources()
    buf = mix(s1, s2, [[1.0, 0.5], [0.5, 1.0]])
    a, b = fastica2(buf, seed=42), fastica2(buf, seed=42)
    np.testing.assert_array_equal(a.vocals_est.samples, b.vocals_est.samples)
    np.testing.assert_array_equal(a.instrumental_est.samples, b.instrumental_est.samples)
    assert a.diagnostics.iterations == b.diagnostics.iterations
    np.testing.assert_array_equal(a.mixing.unmixing, b.mixing.unmixing)


def test_fastica_reports_nonconvergence_and_still_returns():
    s1, s2 = sources()
    res = fastica2(mix(s1, s2, [[1.0, 0.5], [0.5, 1.0]]), max_iter=1, tol=1e-15, seed=3)
    assert not res.diagnostics.converged
    assert res.diagnostics.iterations == 1
    assert res.vocals_est.samples.dtype == np.int16
    assert len(res.vocals_est.samples) == len(s1)


def test_fastica_rejects_dependent_channels():
    vals = np.arange(-500, 500, dtype=np.int16)
    with pytest.raises(DegenerateInputError):
        fastica2(stereo(vals, vals))


def test_fastica_rejects_unknown_contrast():
    s1, s2 = sources(seconds=0.01)
    with pytest.raises(ValueError, match="contrast"):
        fastica2(mix(s1, s2, np.eye(2)), contrast="quartic")


def test_fastica_gain100_rescale_saturates():
    s1, s2 = sources()
    res = fastica2(mix(s1, s2, [[1.0, 0.5], [0.5, 1.0]]), seed=3, rescale="gain100")
    # 100x full-scale gain slams both rails
    assert res.vocals_est.samples.max() == I16_MAX
    assert res.vocals_est.samples.min() == I16_MIN


# ------------------------------------------------------------------ rescale


def test_rescale_peak_hits_target():
    out = rescale_component(np.array([0.5, -0.25, 0.1]), mode="peak")
    assert int(np.abs(out.samples).max()) == int(round(PEAK_TARGET)) == 29195
    assert out.samples[0] == 29195 and out.samples[0] > 0
    np.testing.assert_array_equal(
        out.samples, np.rint(np.array([0.5, -0.25, 0.1]) * (PEAK_TARGET / 0.5))
    )


def test_rescale_peak_of_negative_peak():
    out = rescale_component(np.array([-0.5, 0.2]), mode="peak")
    assert out.samples[0] == -29195


def test_rescale_silence_stays_silent():
    out = rescale_component(np.zeros(16), mode="peak")
    assert not out.samples.any()
    assert len(rescale_component(np.array([]), mode="peak").samples) == 0


def test_rescale_gain100_truncates_then_saturates():
    out = rescale_component(np.array([0.001, -0.001, 0.5, -0.5]), mode="gain100")
    np.testing.assert_array_equal(out.samples, [3276, -3276, I16_MAX, I16_MIN])


def test_rescale_rejects_bad_input():
    with pytest.raises(DegenerateInputError):
        rescale_component(np.array([0.1, np.nan]))
    with pytest.raises(DegenerateInputError):
        rescale_component(np.array([np.inf]))
    with pytest.raises(ValueError, match="rescale mode"):
        rescale_component(np.array([0.1]), mode="loud")


def test_rescale_carries_sample_rate():
    assert rescale_component(np.array([0.3]), sample_rate=22050).sample_rate == 22050
