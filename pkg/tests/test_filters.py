import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.signal import lfilter

from pcmkit.core import SampleBuffer
from pcmkit.errors import InvalidArgument
from pcmkit.filters import (IIRCoefficients, ImpulseResponse, apply_iir, convolve, convolve_direct, delay,
                            design_iir, probe_magnitude)

finite = st.floats(-5, 5, allow_nan=False)


def lfilter_oracle(x, c):
    # scipy's denominator convention subtracts feedback terms
    return lfilter(c.feedforward, (1.0,) + tuple(-b for b in c.feedback), x)


class TestConvolve:
    def test_identity(self, rng):
        x = SampleBuffer(rng.standard_normal(50))
        np.testing.assert_array_equal(convolve(x, [1.0]).samples, x.samples)

    def test_shift(self, rng):
        x = rng.standard_normal(20)
        out = convolve(SampleBuffer(x), [0, 0, 0, 1]).samples
        np.testing.assert_array_equal(out, np.concatenate([np.zeros(3), x]))

    def test_small(self):
        assert convolve(SampleBuffer([1, 2]), [1, 1]).samples.tolist() == [1, 3, 2]

    def test_length(self, rng):
        assert len(convolve(SampleBuffer(rng.standard_normal(17)), rng.standard_normal(9))) == 25

    def test_against_numpy(self, rng):
        x, h = rng.standard_normal(300), rng.standard_normal(40)
        np.testing.assert_allclose(convolve_direct(x, h), np.convolve(x, h), atol=1e-12)
        np.testing.assert_allclose(convolve_direct(h, x), np.convolve(x, h), atol=1e-12)

    def test_fft_agrees(self, rng):
        x = SampleBuffer(rng.standard_normal(5000))
        h = rng.standard_normal(700)
        a = convolve(x, h, method="direct").samples
        b = convolve(x, h, method="fft").samples
        assert np.max(np.abs(a - b)) < 1e-6

    def test_stereo(self, rng):
        x = rng.standard_normal((2, 30))
        out = convolve(SampleBuffer(x), [0.5, 0.25])
        for ch in range(2):
            np.testing.assert_allclose(out.channel(ch), np.convolve(x[ch], [0.5, 0.25]))

    def test_errors(self):
        with pytest.raises(InvalidArgument):
            convolve(SampleBuffer(np.zeros(0)), [1])
        with pytest.raises(InvalidArgument):
            ImpulseResponse([])
        with pytest.raises(InvalidArgument):
            ImpulseResponse([1, np.nan])
        with pytest.raises(InvalidArgument):
            convolve(SampleBuffer([1.0]), [1], method="magic")

    @settings(max_examples=30, deadline=None)
    @given(arrays(np.float64, 20, elements=finite), arrays(np.float64, 20, elements=finite),
           arrays(np.float64, st.integers(1, 8), elements=finite), finite, finite)
    def test_linear(self, x, y, h, a, b):
        lhs = convolve(SampleBuffer(a * x + b * y), h).samples
        rhs = a * convolve(SampleBuffer(x), h).samples + b * convolve(SampleBuffer(y), h).samples
        np.testing.assert_allclose(lhs, rhs, atol=1e-9)

    @settings(max_examples=30, deadline=None)
    @given(arrays(np.float64, st.integers(1, 30), elements=finite),
           arrays(np.float64, st.integers(1, 8), elements=finite), st.integers(0, 10))
    def test_delay_commutes(self, x, h, d):
        a = convolve(delay(SampleBuffer(x), d), h).samples
        b = delay(convolve(SampleBuffer(x), h), d).samples
        np.testing.assert_array_equal(a, b)

    def test_negative_delay(self):
        with pytest.raises(InvalidArgument):
            delay(SampleBuffer([1.0]), -1)


class TestIIR:
    def test_identity(self, rng):
        x = rng.standard_normal(40)
        np.testing.assert_array_equal(apply_iir(SampleBuffer(x), IIRCoefficients([1])).samples, x)

    def test_geometric(self):
        x = np.zeros(6)
        x[0] = 1
        out = apply_iir(SampleBuffer(x), IIRCoefficients([1], [0.5])).samples
        assert out.tolist() == [1, 0.5, 0.25, 0.125, 0.0625, 0.03125]

    def test_lowpass_dc(self):
        out = apply_iir(SampleBuffer(np.full(2000, 0.7)), design_iir("lowpass", 0.05)).samples
        assert out[-1] == pytest.approx(0.7, abs=1e-9)

    @pytest.mark.parametrize("order", [0, 1, 2, 3, 5])
    def test_against_lfilter(self, rng, order):
        x = rng.standard_normal(500)
        a = rng.standard_normal(3)
        b = 0.3 * rng.uniform(-1, 1, order) / max(order, 1)
        c = IIRCoefficients(a, b)
        np.testing.assert_allclose(apply_iir(SampleBuffer(x), c).samples, lfilter_oracle(x, c), atol=1e-10)

    @pytest.mark.parametrize("kind,fc,bw", [("lowpass", 0.1, None), ("highpass", 0.2, None),
                                            ("bandpass", 0.25, 0.05), ("bandreject", 0.1, 0.02)])
    def test_designs_against_lfilter(self, rng, kind, fc, bw):
        x = rng.standard_normal(2000)
        c = design_iir(kind, fc, bw)
        np.testing.assert_allclose(apply_iir(SampleBuffer(x), c).samples, lfilter_oracle(x, c), atol=1e-9)

    def test_length_and_stereo(self, rng):
        x = rng.standard_normal((2, 100))
        out = apply_iir(SampleBuffer(x), design_iir("lowpass", 0.1))
        assert out.data.shape == (2, 100)
        np.testing.assert_allclose(out.channel(1), lfilter_oracle(x[1], design_iir("lowpass", 0.1)))

    def test_empty(self):
        assert len(apply_iir(SampleBuffer(np.zeros(0)), IIRCoefficients([1], [0.5]))) == 0

    def test_coefficient_checks(self):
        with pytest.raises(InvalidArgument):
            IIRCoefficients([])
        with pytest.raises(InvalidArgument):
            IIRCoefficients([1], [math.inf])


class TestDesign:
    def test_lowpass_values(self):
        c = design_iir("lowpass", 0.1)
        assert c.feedforward == (pytest.approx(1 - math.exp(-0.2 * math.pi)),)
        assert c.feedback == (pytest.approx(math.exp(-0.2 * math.pi)),)

    def test_highpass_structure(self):
        c = design_iir("highpass", 0.1)
        x = math.exp(-0.2 * math.pi)
        assert c.feedforward[0] == -c.feedforward[1] == pytest.approx((1 + x) / 2)
        assert c.feedback == (pytest.approx(x),)

    def test_band_radius(self):
        c = design_iir("bandpass", 0.25, 0.05)
        R = 0.85
        assert c.feedback[1] == pytest.approx(-R * R)
        assert c.feedback[0] == pytest.approx(2 * R * math.cos(math.pi / 2), abs=1e-15)

    def test_band_recipe(self):
        fc, bw = 0.1, 0.03
        R = 1 - 3 * bw
        cw = math.cos(2 * math.pi * fc)
        K = (1 - 2 * R * cw + R * R) / (2 - 2 * cw)
        bp = design_iir("bandpass", fc, bw)
        br = design_iir("bandreject", fc, bw)
        np.testing.assert_allclose(bp.feedforward, [1 - K, 2 * (K - R) * cw, R * R - K])
        np.testing.assert_allclose(br.feedforward, [K, -2 * K * cw, K])
        assert bp.feedback == br.feedback

    @pytest.mark.parametrize("args", [("lowpass", 0), ("lowpass", 0.5), ("lowpass", 0.1, 0.01),
                                      ("bandpass", 0.2), ("bandpass", 0.2, 0.6), ("comb", 0.1)])
    def test_errors(self, args):
        with pytest.raises(InvalidArgument):
            design_iir(*args)

    @pytest.mark.parametrize("fc", [0.01, 0.05, 0.1])
    def test_lowpass_minus_3db(self, fc):
        g = probe_magnitude(design_iir("lowpass", fc), fc)
        assert 20 * math.log10(g) == pytest.approx(-3.0, abs=1.0)

    def test_probe_matches_analytic(self):
        c = design_iir("bandpass", 0.25, 0.05)
        for f in (0.2, 0.25, 0.3):
            assert probe_magnitude(c, f) == pytest.approx(abs(c.response(f)), rel=1e-2)

    def test_bandreject_notch(self):
        c = design_iir("bandreject", 0.25, 0.05)
        passband = probe_magnitude(c, 0.05)
        assert probe_magnitude(c, 0.25) <= 0.05 * passband

    @pytest.mark.parametrize("bw", [0.02, 0.05])
    def test_bandpass_half_power_at_half_bandwidth(self, bw):
        # with R = 1 - 3 bw, bw is the full -3 dB width
        c = design_iir("bandpass", 0.25, bw)
        centre = probe_magnitude(c, 0.25)
        for f in (0.25 - bw / 2, 0.25 + bw / 2):
            assert probe_magnitude(c, f) / centre == pytest.approx(0.707, abs=0.1)
