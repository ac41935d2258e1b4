import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcmkit.errors import InvalidArgument, MissingData
from pcmkit.noise import (COLORS, NoiseSpec, bin_magnitudes, generate, imaginary_residual, manifest,
                          noise_spectrum)
from pcmkit.spectral import forward, slope_db_per_octave

N = 2 ** 17


class TestSpectrum:
    def test_white_flat(self):
        mag = np.abs(noise_spectrum(NoiseSpec("white", 64, seed=3)))
        assert mag[0] == 0
        np.testing.assert_allclose(mag[1:], 1.0)

    def test_white_nyquist_real(self):
        c = noise_spectrum(NoiseSpec("white", 64, seed=3))
        assert c[32] == 1.0

    def test_pink_octave_ratio(self):
        spec = NoiseSpec("pink", 44100, 44100)
        mag = bin_magnitudes(spec)
        assert mag[200] / mag[100] == pytest.approx(10 ** (-3 / 20))

    @pytest.mark.parametrize("color", ["pink", "brown", "blue", "violet", "black"])
    def test_below_f_min_empty(self, color):
        spec = NoiseSpec(color, 44100, 44100, f_min=40)
        mag = bin_magnitudes(spec)
        assert np.all(mag[:40] == 0) and mag[40] > 0

    @pytest.mark.parametrize("color", ["blue", "violet"])
    def test_above_f_max_empty(self, color):
        mag = bin_magnitudes(NoiseSpec(color, 44100, 44100, f_max=8000))
        assert np.all(mag[8001:] == 0) and mag[8000] > 0

    def test_hermitian(self):
        c = noise_spectrum(NoiseSpec("brown", 101, seed=1))
        np.testing.assert_allclose(c[1:], np.conj(c[1:][::-1]))

    def test_gray(self):
        spec = NoiseSpec("gray", 44100, 44100, loudness_curve=[(100, -10), (1000, 0), (10000, 10)])
        mag = bin_magnitudes(spec)
        assert 20 * np.log10(mag[1000]) == pytest.approx(0)
        assert 20 * np.log10(mag[3162]) == pytest.approx(5, abs=0.01)
        assert 20 * np.log10(mag[20]) == pytest.approx(-10)

    def test_gray_needs_curve(self):
        with pytest.raises(MissingData):
            generate(NoiseSpec("gray", 100))


class TestValidation:
    @pytest.mark.parametrize("kw", [dict(color="plaid"), dict(length=1), dict(length=2.5), dict(f_min=0),
                                    dict(f_min=30000), dict(f_max=10), dict(color="black", beta=6),
                                    dict(rate=1)])
    def test_invalid(self, kw):
        with pytest.raises(InvalidArgument):
            generate(NoiseSpec(**{"length": 100, **kw}))


class TestGenerate:
    def test_deterministic(self):
        a = generate(NoiseSpec("pink", 1000, seed=5)).samples
        b = generate(NoiseSpec("pink", 1000, seed=5)).samples
        np.testing.assert_array_equal(a, b)

    def test_seed_changes_phase_only(self):
        a = generate(NoiseSpec("brown", 4096, seed=1))
        b = generate(NoiseSpec("brown", 4096, seed=2))
        assert not np.allclose(a.samples, b.samples)
        np.testing.assert_allclose(forward(a).magnitudes, forward(b).magnitudes, atol=1e-8)

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([c for c in COLORS if c != "gray"]), st.integers(2, 3000), st.integers(0, 2 ** 31))
    def test_real_zero_mean(self, color, n, seed):
        spec = NoiseSpec(color, n, seed=seed)
        raw = np.fft.ifft(noise_spectrum(spec))
        assert imaginary_residual(raw) <= 1e-9
        assert abs(generate(spec).samples.mean()) <= 1e-9 * n

    def test_residual_examples(self):
        assert imaginary_residual(np.zeros(8, dtype=complex)) == 0
        assert imaginary_residual(np.zeros(0)) == 0
        c = noise_spectrum(NoiseSpec("white", 64, seed=0))
        c[3] *= 1.5
        assert imaginary_residual(np.fft.ifft(c)) > 1e-3

    @pytest.mark.parametrize("color,slope,tol", [("white", 0.0, 0.1), ("pink", -3.01, 0.1), ("brown", -6.02, 0.1),
                                                 ("blue", 3.01, 0.1), ("violet", 6.02, 0.1), ("black", -12, 0.2)])
    def test_slopes(self, color, slope, tol):
        buf = generate(NoiseSpec(color, N, 44100, seed=0))
        s = slope_db_per_octave(forward(buf, method="fft"), 100, 10000)
        assert s == pytest.approx(slope, abs=tol)

    def test_manifest(self):
        m = manifest(NoiseSpec("black", 10, seed=4, beta=9))
        assert m["slope_db_per_octave"] == -9 and m["seed"] == 4 and "PCG64" in m["rng"]
