"""Fourier analysis used as the measuring instrument for everything else.

Conventions: the forward transform is unnormalized,

    c_k = sum_i t_i exp(-2j pi k i / n)

and reconstruction carries the ``1/n``,

    t_i = (1/n) sum_k c_k exp(+2j pi k i / n).

:func:`reconstruct_real` rebuilds a real signal from the first half of
the spectrum only, pairing each bin with its mirror image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_RATE, SampleBuffer, as_buffer, check_rate
from .errors import InvalidArgument

# above this length forward() switches from the direct sum to numpy's FFT
DIRECT_LIMIT = 4096


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Complex Fourier coefficients of a buffer of length ``n``."""

    coeffs: np.ndarray
    rate: int = DEFAULT_RATE

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128, copy=True).ravel()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "rate", check_rate(self.rate))

    def __len__(self):
        return self.coeffs.size

    @property
    def freqs(self) -> np.ndarray:
        """Bin frequencies ``k * rate / n`` in Hz."""
        n = len(self)
        return np.arange(n) * self.rate / n

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.coeffs)

    @property
    def phases(self) -> np.ndarray:
        # arctan2(0, 0) is already 0, which is the value we want for empty bins
        return np.arctan2(self.coeffs.imag, self.coeffs.real)

    def hermitian_error(self) -> float:
        """Largest deviation from the symmetry every real signal has."""
        c = self.coeffs
        n = c.size
        if n == 0:
            return 0.0
        err = abs(c[0].imag)
        if n > 1:
            err = max(err, float(np.max(np.abs(c[1:] - np.conj(c[1:][::-1])))))
        if n % 2 == 0:
            err = max(err, abs(c[n // 2].imag))
        return float(err)

    def is_hermitian(self, tol=1e-9) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.coeffs)))) if len(self) else 1.0
        return self.hermitian_error() <= tol * scale


def dft_direct(x) -> np.ndarray:
    """Unnormalized DFT by explicit summation, O(n^2).

    Rows of the kernel are built a block at a time to keep memory flat.
    """
    x = np.asarray(x, dtype=np.complex128).ravel()
    n = x.size
    out = np.empty(n, dtype=np.complex128)
    i = np.arange(n)
    block = max(1, min(n, 2 ** 22 // max(n, 1)))
    for k0 in range(0, n, block):
        k = np.arange(k0, min(n, k0 + block))[:, None]
        # reduce k*i mod n first so large products keep full precision
        kernel = np.exp(-2j * np.pi * ((k * i) % n) / n)
        out[k0 : k0 + k.shape[0]] = kernel @ x
    return out


def inverse_direct(coeffs) -> np.ndarray:
    """Complex reconstruction ``(1/n) sum_k c_k e^{+2j pi k i/n}`` by summation."""
    c = np.asarray(coeffs, dtype=np.complex128).ravel()
    n = c.size
    if n == 0:
        return np.zeros(0, dtype=np.complex128)
    return np.conj(dft_direct(np.conj(c))) / n


def forward(buf, method="auto") -> Spectrum:
    """Spectrum of a mono buffer.

    ``method`` is ``direct`` (explicit sum), ``fft`` (numpy) or ``auto``,
    which uses the direct sum up to ``DIRECT_LIMIT`` samples.
    """
    buf = as_buffer(buf)
    if buf.channels != 1:
        raise InvalidArgument("forward() takes mono buffers; analyze channels separately")
    if len(buf) < 1:
        raise InvalidArgument("cannot transform an empty buffer")
    x = buf.data[0]
    if method == "auto":
        method = "direct" if x.size <= DIRECT_LIMIT else "fft"
    if method == "direct":
        c = dft_direct(x)
    elif method == "fft":
        c = np.fft.fft(x)
    else:
        raise InvalidArgument(f"unknown method {method!r}")
    return Spectrum(c, buf.rate)


def paired_count(n) -> int:
    """Number of conjugate bin pairs ``(k, n-k)`` with ``1 <= k < n-k``."""
    n = int(n)
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    return (n - n % 2) // 2 + n % 2 - 1


def reconstruct_real(spec: Spectrum, tol=1e-9) -> SampleBuffer:
    """Real signal from its spectrum as a sum of phased cosines.

    Each paired bin ``k`` contributes ``(2/n)|c_k| cos(2 pi k i/n + phase_k)``
    where the phase is the full-circle angle of ``c_k``.  Bias and, for
    even ``n``, the Nyquist bin are added once.
    """
    if not spec.is_hermitian(tol):
        raise InvalidArgument("spectrum is not Hermitian; it does not describe a real signal")
    c = spec.coeffs
    n = c.size
    if n == 0:
        return SampleBuffer(np.zeros(0), spec.rate)
    i = np.arange(n, dtype=np.float64)
    out = np.full(n, c[0].real / n)
    tau = paired_count(n)
    mags = np.abs(c)
    phases = np.arctan2(c.imag, c.real)
    idx = np.arange(n)
    for k in range(1, tau + 1):
        # k*i is reduced mod n before scaling so the angle stays small
        arg = 2.0 * np.pi * ((k * idx) % n) / n
        out += (2.0 / n) * mags[k] * np.cos(arg + phases[k])
    if n % 2 == 0:
        out += (c[n // 2].real / n) * np.cos(np.pi * i)
    return SampleBuffer(out, spec.rate)


def slope_db_per_octave(spec: Spectrum, f_lo, f_hi) -> float:
    """Least-squares slope of bin level (dB) against log2(frequency).

    Bins with zero magnitude are skipped since their level is -inf.
    """
    nyq = spec.rate / 2
    if not 0 < f_lo < f_hi <= nyq:
        raise InvalidArgument(f"band ({f_lo}, {f_hi}) must satisfy 0 < f_lo < f_hi <= {nyq}")
    if f_hi / f_lo < 4:
        raise InvalidArgument("band must span at least two octaves")
    n = len(spec)
    k = np.arange(n // 2 + 1)
    f = k * spec.rate / n
    mag = np.abs(spec.coeffs[: k.size])
    sel = (f >= f_lo) & (f <= f_hi) & (mag > 0)
    if np.count_nonzero(sel) < 2:
        raise InvalidArgument("band holds fewer than two non-empty bins")
    x = np.log2(f[sel])
    y = 20.0 * np.log10(mag[sel])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def nearest_bin(spec: Spectrum, f) -> int:
    return int(round(f * len(spec) / spec.rate))


def harmonic_magnitudes(spec: Spectrum, f0, n_harmonics) -> list:
    """Magnitude at the bin nearest each multiple ``(m+1) * f0``."""
    if not f0 > 0:
        raise InvalidArgument(f"fundamental must be > 0, got {f0}")
    top = n_harmonics * f0
    if top >= spec.rate / 2:
        raise InvalidArgument(f"harmonic {n_harmonics} of {f0} Hz is not below Nyquist")
    mags = np.abs(spec.coeffs)
    return [float(mags[nearest_bin(spec, (m + 1) * f0)]) for m in range(n_harmonics)]


def peak_frequency(buf, f_min=0.0, refine=True) -> float:
    """Frequency of the strongest bin above ``f_min`` (FFT, rectangular window).

    With ``refine`` the peak is interpolated with a parabola through the
    log magnitudes of the neighbouring bins.
    """
    buf = as_buffer(buf)
    x = buf.data.mean(axis=0)
    n = x.size
    if n < 4:
        raise InvalidArgument("need at least 4 samples")
    mag = np.abs(np.fft.rfft(x))
    k0 = max(1, int(np.ceil(f_min * n / buf.rate)))
    if k0 >= mag.size:
        raise InvalidArgument("f_min above Nyquist")
    k = k0 + int(np.argmax(mag[k0:]))
    shift = 0.0
    if refine and 0 < k < mag.size - 1 and np.all(mag[k - 1 : k + 2] > 0):
        a, b, c = np.log(mag[k - 1 : k + 2])
        den = a - 2 * b + c
        if den != 0:
            shift = 0.5 * (a - c) / den
    return float((k + shift) * buf.rate / n)


def window_peak_frequency(buf, center, width, pad=8) -> float:
    """Dominant frequency inside a rectangular window.

    ``center`` and ``width`` are in samples.  The window is zero padded
    ``pad`` times before the FFT to get a finer bin grid.
    """
    buf = as_buffer(buf)
    x = buf.data.mean(axis=0)
    lo = max(0, int(center - width // 2))
    hi = min(x.size, lo + int(width))
    seg = x[lo:hi]
    if seg.size < 4:
        raise InvalidArgument("window too short")
    m = seg.size * pad
    mag = np.abs(np.fft.rfft(seg - seg.mean(), m))
    k = int(np.argmax(mag[1:])) + 1
    shift = 0.0
    if 0 < k < mag.size - 1 and np.all(mag[k - 1 : k + 2] > 0):
        a, b, c = np.log(mag[k - 1 : k + 2])
        den = a - 2 * b + c
        if den != 0:
            shift = 0.5 * (a - c) / den
    return float((k + shift) * buf.rate / m)


def zero_crossing_frequency(buf):
    """Instantaneous frequency from rising zero crossings.

    Returns ``(times, freqs)``: each entry is the reciprocal of the gap
    between two consecutive rising crossings, stamped at the midpoint.
    Crossing times are linearly interpolated between samples.
    """
    buf = as_buffer(buf)
    x = buf.data.mean(axis=0)
    idx = np.nonzero((x[:-1] < 0) & (x[1:] >= 0))[0]
    if idx.size < 2:
        return np.zeros(0), np.zeros(0)
    frac = -x[idx] / (x[idx + 1] - x[idx])
    t = (idx + frac) / buf.rate
    period = np.diff(t)
    return 0.5 * (t[1:] + t[:-1]), 1.0 / period
