"""Stereo placement, Doppler rendering and reverberation impulses.

Geometry is head-centred: ``x`` points to the listener's right ear and
``y`` straight ahead, both in metres.  Stereo buffers are
``[left, right]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_RATE, SampleBuffer, check_rate, duration_to_samples
from .errors import InvalidArgument
from .filters import ImpulseResponse
from .noise import NoiseSpec, generate
from .oscillator import WaveTable, lut_read

SPEED_OF_SOUND = 343.2
EAR_SPACING = 0.215


@dataclass(frozen=True)
class SourcePosition:
    x: float
    y: float
    ear_spacing: float = EAR_SPACING

    def __post_init__(self):
        if not self.ear_spacing > 0:
            raise InvalidArgument("ear spacing must be > 0")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidArgument("position must be finite")

    def ear_distances(self):
        """Distances ``(right, left)`` from the source to each ear."""
        h = self.ear_spacing / 2
        right = math.hypot(self.x - h, self.y)
        left = math.hypot(self.x + h, self.y)
        if right == 0 or left == 0:
            raise InvalidArgument("source sits on an ear")
        return right, left


def itd_iid(pos: SourcePosition):
    """Interaural time difference (s) and intensity difference (dB).

    Positive ITD means the sound reaches the right ear first.  IID is the
    level at the left ear relative to the right one, so it is negative
    for sources on the right.
    """
    d_right, d_left = pos.ear_distances()
    itd = (d_left - d_right) / SPEED_OF_SOUND
    # difference of logs so mirrored sources give exactly opposite values
    iid = 20 * (math.log10(d_right) - math.log10(d_left))
    return itd, iid


def azimuth(pos: SourcePosition) -> float:
    """Horizontal angle in radians, 0 to the right, pi/2 straight ahead."""
    if pos.x == 0 and pos.y == 0:
        raise InvalidArgument("azimuth is undefined at the origin")
    return math.atan2(pos.y, pos.x)


def localize(buf: SampleBuffer, pos: SourcePosition) -> SampleBuffer:
    """Place a mono sound at ``pos``.

    The far ear gets the signal late by ``floor(ITD * rate)`` samples and
    scaled by the ratio of ear distances; the near ear is untouched.
    Output length grows by the delay.
    """
    if buf.channels != 1:
        raise InvalidArgument("localize takes a mono buffer")
    d_right, d_left = pos.ear_distances()
    itd, _ = itd_iid(pos)
    lag = math.floor(itd * buf.rate)
    x = buf.data[0]
    n = x.size + abs(lag)
    near = np.zeros(n)
    far = np.zeros(n)
    near[: x.size] = x
    if lag >= 0:
        # source on the right: left ear is far
        far[lag : lag + x.size] = x * (d_right / d_left)
        left, right = far, near
    else:
        far[-lag : -lag + x.size] = x * (d_left / d_right)
        left, right = near, far
    return SampleBuffer(np.vstack([left, right]), buf.rate)


def doppler_shift(f0, v_s, v_r) -> float:
    """Frequency heard for source speed ``v_s`` and receiver speed ``v_r``.

    Speeds are along the line from source to receiver, positive meaning
    the receiver approaches / the source moves away.
    """
    for v in (v_s, v_r):
        if abs(v) >= SPEED_OF_SOUND:
            raise InvalidArgument(f"speed {v} m/s is not subsonic")
    return f0 * (SPEED_OF_SOUND + v_r) / (SPEED_OF_SOUND + v_s)


@dataclass(frozen=True)
class DopplerPath:
    """Straight pass of a source beside the listener.

    ``y0`` is the starting offset along the path and ``z0`` the fixed
    perpendicular distance.
    """

    y0: float
    z0: float
    v_s: float
    v_r: float
    f0: float

    def __post_init__(self):
        if not self.z0 > 0 or not math.isfinite(self.z0):
            raise InvalidArgument("z0 must be a finite distance > 0")
        for v in (self.v_s, self.v_r):
            if abs(v) >= SPEED_OF_SOUND:
                raise InvalidArgument(f"speed {v} m/s is not subsonic")
        if (self.v_r - self.v_s) / SPEED_OF_SOUND + 1 < 0:
            raise InvalidArgument("closing speed too large for the amplitude model")

    def track(self, n, rate=DEFAULT_RATE):
        """Per-sample offsets, distances, frequencies and amplitudes."""
        c = SPEED_OF_SOUND
        t = np.arange(n) / rate
        y = self.y0 + (self.v_s - self.v_r) * t
        d = np.sqrt(y * y + self.z0 * self.z0)
        cosang = y / d
        freq = (c + self.v_r * cosang) / (c + self.v_s * cosang) * self.f0
        amp = (self.z0 / d) * math.sqrt((self.v_r - self.v_s) / c + 1)
        return y, d, freq, amp


def doppler_render(path: DopplerPath, table: WaveTable, delta, rate=DEFAULT_RATE) -> SampleBuffer:
    rate = check_rate(rate)
    n = duration_to_samples(delta, rate)
    _, _, freq, amp = path.track(n, rate)
    if n and np.max(freq) >= rate / 2:
        raise InvalidArgument("shifted frequency reaches Nyquist")
    x = lut_read(table, path.f0, rate, n, freq - path.f0)
    return SampleBuffer(x * amp, rate)


@dataclass(frozen=True)
class ReverbSpec:
    first_period: float = 0.1
    total: float = 1.9
    decay_db: float = -60.0
    color: str = "brown"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.first_period < self.total:
            raise InvalidArgument("need 0 < first_period < total")
        if not self.decay_db < 0:
            raise InvalidArgument("decay must be negative dB")
        if self.color not in ("brown", "pink", "white", "black"):
            raise InvalidArgument(f"unsupported tail color {self.color!r}")


def reverb_impulse(spec: ReverbSpec, rate=DEFAULT_RATE) -> ImpulseResponse:
    """Statistical room response.

    Sample 0 is the direct sound (1.0).  Early reflections are sparse
    impulses whose odds grow as ``(i/n1)**2``; the tail is colored noise
    scaled to unit peak.  Both follow one exponential decay that reaches
    ``decay_db`` at the last sample.
    """
    rate = check_rate(rate)
    n1 = duration_to_samples(spec.first_period, rate)
    nr = duration_to_samples(spec.total, rate)
    if n1 < 1 or nr < 2:
        raise InvalidArgument("reverb periods are shorter than one sample at this rate")
    i = np.arange(nr, dtype=np.float64)
    decay = 10.0 ** ((spec.decay_db / 20.0) * i / (nr - 1))
    rng = np.random.default_rng(spec.seed)
    r = np.zeros(nr)
    if n1 > 1:
        early = np.arange(1, n1)
        hits = rng.uniform(size=early.size) < (early / n1) ** 2
        r[early] = np.where(hits, decay[early], 0.0)
    tail_len = nr - n1
    if tail_len >= 2:
        tail = generate(NoiseSpec(spec.color, tail_len, rate, seed=spec.seed + 1)).data[0]
        peak = np.max(np.abs(tail))
        if peak > 0:
            tail = tail / peak
        r[n1:] = tail * decay[n1:]
    r[0] = 1.0
    return ImpulseResponse(r)


def first_period_hits(ir: ImpulseResponse, spec: ReverbSpec, rate=DEFAULT_RATE) -> int:
    """Count of early impulses, sample 0 excluded."""
    n1 = duration_to_samples(spec.first_period, rate)
    return int(np.count_nonzero(ir.samples[1:n1]))
