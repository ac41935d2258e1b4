"""FIR convolution and simple IIR designs.

IIR filters follow the difference equation

    y[i] = sum_j a[j] x[i-j] + sum_k b[k] y[i-k]

with ``b`` indexed from 1 and zero initial state.  Note the sign: the
feedback terms are *added*, so a one-pole lowpass has ``b1 = +x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_RATE, SampleBuffer, as_buffer
from .errors import InvalidArgument

# direct convolution above this many multiply-adds goes through the FFT
FFT_THRESHOLD = 2_000_000


@dataclass(frozen=True, eq=False)
class ImpulseResponse:
    samples: np.ndarray

    def __post_init__(self):
        h = np.array(self.samples, dtype=np.float64, copy=True).ravel()
        if h.size < 1:
            raise InvalidArgument("impulse response must have at least one sample")
        if not np.all(np.isfinite(h)):
            raise InvalidArgument("impulse response must be finite")
        h.setflags(write=False)
        object.__setattr__(self, "samples", h)

    def __len__(self):
        return self.samples.size


@dataclass(frozen=True)
class IIRCoefficients:
    """Feedforward ``a[0..J]`` and feedback ``b[1..K]`` (``b[0] = 1`` implied)."""

    feedforward: tuple
    feedback: tuple = ()

    def __post_init__(self):
        a = tuple(float(v) for v in self.feedforward)
        b = tuple(float(v) for v in self.feedback)
        if not a:
            raise InvalidArgument("feedforward coefficients cannot be empty")
        if not all(math.isfinite(v) for v in a + b):
            raise InvalidArgument("coefficients must be finite")
        object.__setattr__(self, "feedforward", a)
        object.__setattr__(self, "feedback", b)

    def response(self, f) -> complex:
        """Complex frequency response at ``f`` (fraction of the rate)."""
        z = np.exp(-2j * np.pi * f)
        num = sum(a * z ** j for j, a in enumerate(self.feedforward))
        den = 1 - sum(b * z ** (k + 1) for k, b in enumerate(self.feedback))
        return num / den


def convolve_direct(x, h) -> np.ndarray:
    """Full linear convolution by shifted multiply-add."""
    x = np.asarray(x, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    # loop over the shorter operand
    if h.size > x.size:
        x, h = h, x
    out = np.zeros(x.size + h.size - 1)
    for j, hj in enumerate(h):
        if hj != 0.0:
            out[j : j + x.size] += hj * x
    return out


def _convolve_fft(x, h):
    from scipy.signal import fftconvolve

    return fftconvolve(x, h)


def convolve(x, h, method="auto") -> SampleBuffer:
    """Convolve every channel of ``x`` with impulse response ``h``.

    Output length is ``len(x) + len(h) - 1``.  ``method`` picks the
    direct sum, the FFT route, or (``auto``) the direct sum unless the
    product of lengths is large.
    """
    x = as_buffer(x)
    if not isinstance(h, ImpulseResponse):
        h = ImpulseResponse(h)
    if len(x) == 0:
        raise InvalidArgument("cannot convolve an empty buffer")
    if method == "auto":
        method = "direct" if len(x) * len(h) <= FFT_THRESHOLD else "fft"
    if method == "direct":
        fn = convolve_direct
    elif method == "fft":
        fn = _convolve_fft
    else:
        raise InvalidArgument(f"unknown method {method!r}")
    out = np.vstack([fn(ch, h.samples) for ch in x.data])
    return SampleBuffer(out, x.rate)


def delay(x: SampleBuffer, d: int) -> SampleBuffer:
    """Prepend ``d`` zero samples."""
    if d < 0:
        raise InvalidArgument("delay must be >= 0")
    pad = np.zeros((x.channels, d))
    return SampleBuffer(np.hstack([pad, x.data]), x.rate)


def _iir_channel(x, a, b):
    # feedforward part is a plain FIR; only the recursion needs a loop
    y = convolve_direct(x, a)[: x.size] if x.size else np.zeros(0)
    if not b:
        return y
    K = len(b)
    out = y.tolist()
    # unrolled versions of the general loop below for the usual orders
    if K == 1:
        b1 = b[0]
        y1 = 0.0
        for i, v in enumerate(out):
            y1 = v + b1 * y1
            out[i] = y1
        return np.array(out)
    if K == 2:
        b1, b2 = b
        y1 = y2 = 0.0
        for i, v in enumerate(out):
            y1, y2 = v + b1 * y1 + b2 * y2, y1
            out[i] = y1
        return np.array(out)
    hist = [0.0] * K  # hist[0] is y[i-1]
    for i in range(len(out)):
        acc = out[i]
        for k in range(K):
            acc += b[k] * hist[k]
        out[i] = acc
        hist.insert(0, acc)
        hist.pop()
    return np.array(out)


def apply_iir(x, c: IIRCoefficients) -> SampleBuffer:
    """Run the difference equation over every channel of ``x``."""
    x = as_buffer(x)
    a = np.array(c.feedforward)
    out = np.vstack([_iir_channel(ch, a, c.feedback) for ch in x.data])
    return SampleBuffer(out, x.rate)


def design_iir(kind, fc, bw=None) -> IIRCoefficients:
    """Coefficients for a one-pole or two-pole filter.

    Parameters
    ----------
    kind : {"lowpass", "highpass", "bandpass", "bandreject"}
    fc : float
        Cutoff or centre frequency as a fraction of the sample rate,
        in (0, 0.5).
    bw : float, optional
        Bandwidth as a fraction of the rate.  Required for the band
        kinds, rejected for the others.
    """
    if not 0 < fc < 0.5:
        raise InvalidArgument(f"fc must be in (0, 0.5), got {fc}")
    if kind in ("lowpass", "highpass"):
        if bw is not None:
            raise InvalidArgument(f"{kind} takes no bandwidth")
        x = math.exp(-2 * math.pi * fc)
        if kind == "lowpass":
            return IIRCoefficients((1 - x,), (x,))
        return IIRCoefficients(((1 + x) / 2, -(1 + x) / 2), (x,))
    if kind in ("bandpass", "bandreject"):
        if bw is None or not 0 < bw < 0.5:
            raise InvalidArgument(f"{kind} needs bw in (0, 0.5), got {bw}")
        R = 1 - 3 * bw
        cw = math.cos(2 * math.pi * fc)
        K = (1 - 2 * R * cw + R * R) / (2 - 2 * cw)
        fb = (2 * R * cw, -R * R)
        if kind == "bandpass":
            return IIRCoefficients((1 - K, 2 * (K - R) * cw, R * R - K), fb)
        return IIRCoefficients((K, -2 * K * cw, K), fb)
    raise InvalidArgument(f"unknown filter kind {kind!r}")


def probe_magnitude(c: IIRCoefficients, f, rate=DEFAULT_RATE, seconds=1.0, skip=0.1) -> float:
    """Measured gain of a filter at ``f`` (fraction of the rate).

    A sine probe of ``seconds`` is filtered; the first ``skip`` fraction
    is dropped as transient and the RMS of output and input compared.
    """
    n = int(seconds * rate)
    i = np.arange(n)
    x = np.sin(2 * np.pi * f * i)
    y = apply_iir(SampleBuffer(x, rate), c).data[0]
    s = int(skip * n)
    return float(np.sqrt(np.mean(y[s:] ** 2) / np.mean(x[s:] ** 2)))
