"""Wavetable oscillators, glides and amplitude transitions.

Synthesis reads a single stored period (a :class:`WaveTable`) through a
phase accumulator.  Sample ``i`` of a note at frequency ``f`` is

    table[floor(i * f * L / rate) % L]

with ``L`` the table length.  Lookup truncates; there is no
interpolation between table entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_RATE, SampleBuffer, check_rate, duration_to_samples
from .errors import InvalidArgument

DEFAULT_TABLE_LEN = 1024
SHAPES = ("sine", "sawtooth", "triangle", "square")


@dataclass(frozen=True, eq=False)
class WaveTable:
    """One period of a waveform.

    Attributes
    ----------
    samples : ndarray
        Read-only float64 array of length >= 2.
    shape : str
        ``sine``, ``sawtooth``, ``triangle``, ``square`` or ``sampled``.
    """

    samples: np.ndarray
    shape: str = "sampled"

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64, copy=True).ravel()
        if arr.size < 2:
            raise InvalidArgument(f"a wavetable needs at least 2 samples, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise InvalidArgument("wavetable samples must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self):
        return self.samples.size

    def natural_frequency(self, rate=DEFAULT_RATE) -> float:
        """Pitch heard when the period is played back one sample per step."""
        return rate / len(self)


def _period(shape, n):
    i = np.arange(n, dtype=np.float64)
    lam = float(n)
    if shape == "sine":
        return np.sin(2.0 * np.pi * i / lam)
    if shape == "sawtooth":
        return 2.0 * (i % lam) / lam - 1.0
    if shape == "triangle":
        return 1.0 - np.abs(2.0 - 4.0 * (i % lam) / lam)
    if shape == "square":
        return np.where((i % lam) < lam / 2.0, 1.0, -1.0)
    raise InvalidArgument(f"unknown waveform shape {shape!r}; expected one of {', '.join(SHAPES)}")


def build_wavetable(shape="sine", table_len=DEFAULT_TABLE_LEN) -> WaveTable:
    """Exact single period of a basic waveform.

    Examples
    --------
    >>> build_wavetable("square", 4).samples.tolist()
    [1.0, 1.0, -1.0, -1.0]
    """
    if int(table_len) != table_len or table_len < 2:
        raise InvalidArgument(f"table length must be an integer >= 2, got {table_len}")
    table_len = int(table_len)
    data = _period(shape, table_len)
    if shape == "sine":
        # sin(pi) and friends come out as 1e-16 rather than 0
        data = np.where(np.abs(data) < 1e-15, 0.0, data)
    return WaveTable(data, shape)


def from_sampled_period(samples) -> WaveTable:
    """Wrap a recorded period as-is (no resampling, no DC removal)."""
    return WaveTable(samples, "sampled")


def _check_freq(f, rate, what="frequency"):
    if not (isinstance(f, (int, float, np.floating, np.integer)) and math.isfinite(f)):
        raise InvalidArgument(f"{what} must be a finite number, got {f!r}")
    if not 0 < f < rate / 2:
        raise InvalidArgument(f"{what} {f} Hz outside (0, {rate / 2}) Hz")


def lut_read(table: WaveTable, base_freq, rate, n, deviation=None) -> np.ndarray:
    """Read ``n`` samples from ``table`` through a phase accumulator.

    The instantaneous frequency of sample ``i`` is ``base_freq +
    deviation[i]``.  Phase starts at zero, so the index of sample ``i``
    is ``floor((i * base_freq + sum(deviation[:i])) * L / rate)``.
    Keeping the constant part as an exact product means a zero
    deviation reproduces plain note synthesis bit for bit.
    """
    L = len(table)
    i = np.arange(n, dtype=np.float64)
    phase = i * base_freq
    if deviation is not None:
        dev = np.asarray(deviation, dtype=np.float64)
        if dev.shape != (n,):
            raise InvalidArgument("deviation must have one value per sample")
        acc = np.zeros(n)
        if n > 1:
            np.cumsum(dev[:-1], out=acc[1:])
        phase = phase + acc
    gamma = np.floor(phase * L / rate).astype(np.int64)
    return table.samples[gamma % L]


def synth_note(table: WaveTable, f, delta, rate=DEFAULT_RATE) -> SampleBuffer:
    """Note of ``delta`` seconds at ``f`` Hz from a wavetable."""
    rate = check_rate(rate)
    _check_freq(f, rate)
    n = duration_to_samples(delta, rate)
    return SampleBuffer(lut_read(table, f, rate, n), rate)


@dataclass(frozen=True)
class GlideSpec:
    f_start: float
    f_end: float
    mode: str = "exponential"

    def __post_init__(self):
        if self.mode not in ("linear", "exponential"):
            raise InvalidArgument(f"glide mode must be linear or exponential, got {self.mode!r}")

    def frequencies(self, n) -> np.ndarray:
        """Per-sample frequency track of length ``n``."""
        if n == 1:
            return np.array([float(self.f_start)])
        i = np.arange(n, dtype=np.float64)
        frac = i / (n - 1)
        if self.mode == "linear":
            return self.f_start + (self.f_end - self.f_start) * frac
        return self.f_start * (self.f_end / self.f_start) ** frac


def synth_glide(table: WaveTable, glide: GlideSpec, delta, rate=DEFAULT_RATE) -> SampleBuffer:
    """Note whose pitch moves from ``glide.f_start`` to ``glide.f_end``.

    ``linear`` moves the frequency in equal Hz steps; ``exponential``
    moves it in equal ratios, which is heard as a straight pitch line.
    """
    rate = check_rate(rate)
    _check_freq(glide.f_start, rate, "start frequency")
    _check_freq(glide.f_end, rate, "end frequency")
    n = duration_to_samples(delta, rate)
    freqs = glide.frequencies(n) if n else np.zeros(0)
    data = lut_read(table, glide.f_start, rate, n, freqs - glide.f_start)
    return SampleBuffer(data, rate)


def _ramp_positions(n):
    if n < 2:
        raise InvalidArgument(f"amplitude transitions need at least 2 samples, got {n}")
    return np.arange(n, dtype=np.float64) / (n - 1)


def amp_transition(buf: SampleBuffer, v, alpha=1.0) -> SampleBuffer:
    """Fade by ``v`` dB over the buffer, shaped by ``alpha``.

    Gain at sample ``i`` is ``10**((v/20) * (i/(n-1))**alpha)``; ``alpha=1``
    is a straight line in dB.
    """
    if not alpha > 0:
        raise InvalidArgument(f"alpha must be > 0, got {alpha}")
    if not math.isfinite(v):
        raise InvalidArgument("v must be finite")
    x = _ramp_positions(len(buf))
    gain = 10.0 ** ((v / 20.0) * x ** alpha)
    return buf.with_data(buf.data * gain)


def amp_transition_linear(buf: SampleBuffer, a_start, a_end) -> SampleBuffer:
    """Straight-line gain ramp from ``a_start`` to ``a_end``."""
    x = _ramp_positions(len(buf))
    gain = a_start + (a_end - a_start) * x
    return buf.with_data(buf.data * gain)
