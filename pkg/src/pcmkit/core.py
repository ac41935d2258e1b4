"""PCM buffers, duration accounting and decibel algebra.

A :class:`SampleBuffer` is a rate tagged block of float64 samples with one
or two channels.  Everything else in the package consumes and produces
these buffers.  Buffers are immutable: the sample array is copied on
construction and flagged read-only.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSignal, InvalidArgument

DEFAULT_RATE = 44100


def default_rate() -> int:
    """Sample rate used when none is given.

    ``PCMKIT_RATE`` in the environment overrides 44100.
    """
    value = os.environ.get("PCMKIT_RATE")
    if not value:
        return DEFAULT_RATE
    try:
        return check_rate(int(value))
    except (ValueError, InvalidArgument):
        raise InvalidArgument(f"PCMKIT_RATE must be an integer >= 2, got {value!r}")


def check_rate(rate) -> int:
    """Validate a sample rate and return it as ``int``."""
    if isinstance(rate, (bool, np.bool_)):
        raise InvalidArgument("sample rate must be an integer")
    if isinstance(rate, float) and not rate.is_integer():
        raise InvalidArgument(f"sample rate must be an integer, got {rate}")
    try:
        r = int(rate)
    except (TypeError, ValueError):
        raise InvalidArgument(f"sample rate must be an integer, got {rate!r}")
    if r < 2:
        raise InvalidArgument(f"sample rate must be >= 2, got {r}")
    return r


@dataclass(frozen=True, eq=False)
class SampleBuffer:
    """Rate tagged audio samples.

    Parameters
    ----------
    data : array_like
        1-D array for mono or ``(channels, n)`` with 1 or 2 channels.
    rate : int
        Samples per second.

    Notes
    -----
    ``data`` is always stored as a read-only ``(channels, n)`` float64
    array.  Use :attr:`samples` for the natural shape (1-D when mono).
    """

    data: np.ndarray
    rate: int = DEFAULT_RATE

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, copy=True)
        if arr.ndim == 1:
            arr = arr[np.newaxis, :]
        if arr.ndim != 2 or arr.shape[0] not in (1, 2):
            raise InvalidArgument(f"expected 1 or 2 channels, got shape {np.shape(self.data)}")
        if not np.all(np.isfinite(arr)):
            raise InvalidArgument("samples must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "rate", check_rate(self.rate))

    @classmethod
    def stereo(cls, left, right, rate=DEFAULT_RATE):
        left = np.asarray(left, dtype=np.float64)
        right = np.asarray(right, dtype=np.float64)
        if left.shape != right.shape or left.ndim != 1:
            raise InvalidArgument("left and right must be 1-D with equal length")
        return cls(np.vstack([left, right]), rate)

    @classmethod
    def silence(cls, n, rate=DEFAULT_RATE, channels=1):
        return cls(np.zeros((channels, int(n))), rate)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def samples(self) -> np.ndarray:
        """Samples as 1-D (mono) or ``(2, n)`` (stereo) read-only array."""
        return self.data[0] if self.channels == 1 else self.data

    @property
    def duration(self) -> float:
        return len(self) / self.rate

    def __len__(self):
        return self.data.shape[1]

    def channel(self, k) -> np.ndarray:
        return self.data[k]

    def with_data(self, data) -> "SampleBuffer":
        """New buffer at the same rate."""
        return SampleBuffer(data, self.rate)

    def scaled(self, k) -> "SampleBuffer":
        return SampleBuffer(self.data * k, self.rate)

    def peak(self) -> float:
        return float(np.max(np.abs(self.data))) if len(self) else 0.0

    def __repr__(self):
        return f"SampleBuffer(channels={self.channels}, n={len(self)}, rate={self.rate})"


def as_buffer(x, rate=None) -> SampleBuffer:
    """Accept a SampleBuffer or a plain array."""
    if isinstance(x, SampleBuffer):
        return x
    return SampleBuffer(x, default_rate() if rate is None else rate)


def duration_to_samples(delta, rate=DEFAULT_RATE) -> int:
    """Number of samples covering ``delta`` seconds, ``floor(delta * rate)``."""
    rate = check_rate(rate)
    if not math.isfinite(delta) or delta < 0:
        raise InvalidArgument(f"duration must be a finite value >= 0, got {delta}")
    return int(math.floor(delta * rate))


def power(buf):
    """Mean squared amplitude.

    Returns a float for mono buffers and a ``(left, right)`` tuple for
    stereo ones.
    """
    buf = as_buffer(buf)
    if len(buf) == 0:
        raise InvalidArgument("power of an empty buffer is undefined")
    p = np.sum(buf.data ** 2, axis=1) / len(buf)
    if buf.channels == 1:
        return float(p[0])
    return (float(p[0]), float(p[1]))


def db_difference(a, b):
    """Level of ``a`` relative to ``b`` in dB, ``10 log10(power(a)/power(b))``.

    Stereo pairs are compared channel by channel.
    """
    pa = np.atleast_1d(power(a))
    pb = np.atleast_1d(power(b))
    if pa.shape != pb.shape:
        raise InvalidArgument("buffers must have the same channel count")
    if np.any(pb == 0):
        raise DegenerateSignal("reference buffer has zero power")
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(pa / pb)
    return float(out[0]) if out.size == 1 else tuple(float(v) for v in out)


def db_to_gain(v) -> float:
    """Amplitude factor for a level change of ``v`` dB."""
    if not math.isfinite(v):
        raise InvalidArgument(f"decibel value must be finite, got {v}")
    return 10.0 ** (v / 20.0)


def gain_to_db(g) -> float:
    if g <= 0:
        raise InvalidArgument("gain must be positive")
    return 20.0 * math.log10(g)


def _common_layout(bufs):
    rates = {b.rate for b in bufs}
    chans = {b.channels for b in bufs}
    if len(rates) > 1:
        raise InvalidArgument(f"sample rates differ: {sorted(rates)}")
    if len(chans) > 1:
        raise InvalidArgument(f"channel counts differ: {sorted(chans)}")
    return rates.pop(), chans.pop()


def mix(bufs) -> SampleBuffer:
    """Sum buffers sample by sample, zero padding the shorter ones."""
    bufs = [as_buffer(b) for b in bufs]
    if not bufs:
        return SampleBuffer(np.zeros(0), default_rate())
    rate, chans = _common_layout(bufs)
    n = max(len(b) for b in bufs)
    out = np.zeros((chans, n))
    for b in bufs:
        out[:, : len(b)] += b.data
    return SampleBuffer(out, rate)


def concat(bufs) -> SampleBuffer:
    """Place buffers one after the other."""
    bufs = [as_buffer(b) for b in bufs]
    if not bufs:
        return SampleBuffer(np.zeros(0), default_rate())
    rate, _ = _common_layout(bufs)
    return SampleBuffer(np.concatenate([b.data for b in bufs], axis=1), rate)


def normalize(buf, peak=1.0) -> SampleBuffer:
    """Scale so that the largest absolute sample equals ``peak``."""
    buf = as_buffer(buf)
    if len(buf) == 0:
        raise InvalidArgument("cannot normalize an empty buffer")
    m = buf.peak()
    if m == 0:
        raise DegenerateSignal("cannot normalize a silent buffer")
    if m == peak:
        return buf
    return buf.scaled(peak / m)


def pad_to(buf: SampleBuffer, n: int, offset: int = 0) -> SampleBuffer:
    """Place ``buf`` at ``offset`` inside ``n`` samples of silence."""
    if offset < 0 or offset + len(buf) > n:
        raise InvalidArgument("buffer does not fit")
    out = np.zeros((buf.channels, n))
    out[:, offset : offset + len(buf)] = buf.data
    return SampleBuffer(out, buf.rate)


def to_stereo(buf: SampleBuffer) -> SampleBuffer:
    """Duplicate a mono buffer into two channels; stereo passes through."""
    if buf.channels == 2:
        return buf
    return SampleBuffer(np.vstack([buf.data[0], buf.data[0]]), buf.rate)
