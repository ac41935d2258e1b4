"""Vibrato, tremolo, AM, FM, Bessel sideband weights and ADSR envelopes.

Modulators are wavetables read at a low frequency (an
:class:`OscillatorPattern`).  Vibrato and FM bend the carrier frequency
sample by sample and feed it through the same phase accumulator as
:func:`pcmkit.oscillator.synth_note`, so zero depth gives back the
plain note exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .core import DEFAULT_RATE, SampleBuffer, check_rate, duration_to_samples
from .errors import InvalidArgument
from .oscillator import WaveTable, _check_freq, build_wavetable, lut_read


def _default_pattern_table():
    return build_wavetable("sine", 1024)


@dataclass(frozen=True)
class OscillatorPattern:
    """Low frequency modulator: a wavetable read at ``freq`` Hz."""

    freq: float
    table: WaveTable = field(default_factory=_default_pattern_table)

    def __post_init__(self):
        if not (math.isfinite(self.freq) and self.freq > 0):
            raise InvalidArgument(f"modulator frequency must be > 0, got {self.freq}")

    def values(self, n, rate=DEFAULT_RATE) -> np.ndarray:
        """Pattern sampled at ``rate`` for ``n`` samples."""
        return lut_read(self.table, self.freq, rate, n)


def vibrato(table: WaveTable, f, delta, rate=DEFAULT_RATE, pattern: Optional[OscillatorPattern] = None,
            nu=1.0) -> SampleBuffer:
    """Note at ``f`` Hz whose pitch swings by ``nu`` semitones.

    The frequency of sample ``i`` is ``f * 2**(p_i * nu / 12)`` where
    ``p_i`` is the pattern value.
    """
    rate = check_rate(rate)
    pattern = pattern or OscillatorPattern(6.0)
    if nu < 0 or not math.isfinite(nu):
        raise InvalidArgument(f"vibrato depth must be >= 0, got {nu}")
    _check_freq(f, rate)
    top = f * 2.0 ** (nu * max(float(np.max(pattern.table.samples)), 0.0) / 12.0)
    if top >= rate / 2:
        raise InvalidArgument(f"vibrato peak {top:.1f} Hz reaches Nyquist")
    n = duration_to_samples(delta, rate)
    p = pattern.values(n, rate)
    dev = f * 2.0 ** (p * nu / 12.0) - f
    return SampleBuffer(lut_read(table, f, rate, n, dev), rate)


def tremolo(buf: SampleBuffer, pattern: OscillatorPattern, depth_db) -> SampleBuffer:
    """Amplitude swing of ``depth_db`` dB either side of the input level."""
    if not math.isfinite(depth_db):
        raise InvalidArgument("tremolo depth must be finite")
    p = pattern.values(len(buf), buf.rate)
    gain = 10.0 ** (p * depth_db / 20.0)
    return buf.with_data(buf.data * gain)


def am(buf: SampleBuffer, f_mod, alpha, pattern: Optional[OscillatorPattern] = None) -> SampleBuffer:
    """Amplitude modulation ``t_i * (1 + alpha * m_i)``.

    ``m_i`` is an exact sine at ``f_mod`` unless a pattern is given.
    """
    if alpha < 0:
        raise InvalidArgument(f"modulation index must be >= 0, got {alpha}")
    n = len(buf)
    if pattern is None:
        if not 0 < f_mod < buf.rate / 2:
            raise InvalidArgument(f"f_mod must be in (0, {buf.rate / 2})")
        m = np.sin(2.0 * np.pi * f_mod * np.arange(n) / buf.rate)
    else:
        m = pattern.values(n, buf.rate)
    return buf.with_data(buf.data * (1.0 + alpha * m))


def fm(table: WaveTable, f, f_mod, mu, delta, rate=DEFAULT_RATE,
       pattern_table: Optional[WaveTable] = None) -> SampleBuffer:
    """Frequency modulation with deviation ``mu`` Hz at rate ``f_mod``.

    Instantaneous frequency is ``f + mu * m_i``.  The sideband weights
    follow Bessel functions of the index ``mu / f_mod``.
    """
    rate = check_rate(rate)
    if mu < 0:
        raise InvalidArgument(f"frequency deviation must be >= 0, got {mu}")
    _check_freq(f, rate)
    if f + mu >= rate / 2:
        raise InvalidArgument(f"peak frequency {f + mu} Hz reaches Nyquist")
    pattern = OscillatorPattern(f_mod, pattern_table or _default_pattern_table())
    n = duration_to_samples(delta, rate)
    dev = mu * pattern.values(n, rate)
    return SampleBuffer(lut_read(table, f, rate, n, dev), rate)


def bessel_j(k, mu) -> float:
    """Bessel function of the first kind ``J_k(mu)`` by its power series.

    Terms are summed until they drop below 1e-17 of the running total.
    The series cancels badly for large arguments, so above ``|mu| > 12``
    the integral route is used instead.
    """
    if int(k) != k or k < 0:
        raise InvalidArgument(f"order must be a non-negative integer, got {k}")
    if not math.isfinite(mu):
        raise InvalidArgument("argument must be finite")
    k = int(k)
    if abs(mu) > 12:
        return bessel_j_integral(k, mu)
    half = mu / 2.0
    term = half ** k / math.factorial(k)
    terms = [term]
    m = 0
    while True:
        term *= -(half * half) / ((m + 1) * (m + 1 + k))
        m += 1
        terms.append(term)
        if abs(term) < 1e-17 * max(abs(math.fsum(terms)), 1e-300) and m > abs(half):
            break
        if term == 0.0:
            break
    return math.fsum(terms)


def bessel_j_integral(k, mu) -> float:
    """``J_k(mu) = (1/pi) * int_0^pi cos(k t - mu sin t) dt`` by adaptive quadrature."""
    from scipy.integrate import quad

    val, _ = quad(lambda t: math.cos(k * t - mu * math.sin(t)), 0.0, math.pi,
                  limit=200, epsabs=1e-13, epsrel=1e-13)
    return val / math.pi


def sideband_weights(beta, kmax) -> dict:
    """Predicted amplitude of FM sideband ``k`` for ``-kmax <= k <= kmax``.

    Negative orders use ``J_{-k} = (-1)^k J_k``.
    """
    out = {}
    for k in range(-kmax, kmax + 1):
        j = bessel_j(abs(k), beta)
        out[k] = j * (-1) ** abs(k) if k < 0 else j
    return out


@dataclass(frozen=True)
class AdsrSpec:
    """Attack/decay/release times in seconds, sustain level and shape."""

    attack: float
    decay: float
    release: float
    sustain: float = 0.7
    mode: str = "exponential"
    floor: float = 1e-4

    def __post_init__(self):
        if min(self.attack, self.decay, self.release) < 0:
            raise InvalidArgument("ADSR times must be >= 0")
        if not 0 < self.sustain <= 1:
            raise InvalidArgument(f"sustain level must be in (0, 1], got {self.sustain}")
        if self.mode not in ("linear", "exponential"):
            raise InvalidArgument(f"ADSR mode must be linear or exponential, got {self.mode!r}")
        if self.mode == "exponential" and not 0 < self.floor < self.sustain:
            raise InvalidArgument("floor must be in (0, sustain)")


def _segment(n, start, end, exponential):
    """``n`` values going from ``start`` to ``end`` inclusive."""
    if n == 0:
        return np.zeros(0)
    if n == 1:
        return np.array([end])
    x = np.arange(n) / (n - 1)
    if exponential:
        return start * (end / start) ** x
    return start + (end - start) * x


def adsr_envelope(n, rate, spec: AdsrSpec) -> np.ndarray:
    """Envelope of ``n`` samples.

    Exponential mode rises from ``floor`` to 1, falls to the sustain
    level and finally decays to ``floor``; linear mode starts and ends
    at 0.
    """
    na = duration_to_samples(spec.attack, rate)
    nd = duration_to_samples(spec.decay, rate)
    nr = duration_to_samples(spec.release, rate)
    if na + nd + nr > n:
        raise InvalidArgument(f"attack+decay+release ({na + nd + nr} samples) longer than note ({n})")
    expo = spec.mode == "exponential"
    lo = spec.floor if expo else 0.0
    s = spec.sustain
    env = np.empty(n)
    env[:na] = _segment(na, lo, 1.0, expo)
    env[na : na + nd] = _segment(nd, 1.0, s, expo)
    env[na + nd : n - nr] = s
    env[n - nr :] = _segment(nr, s, lo, expo)
    return env


def adsr(buf: SampleBuffer, spec: AdsrSpec) -> SampleBuffer:
    env = adsr_envelope(len(buf), buf.rate, spec)
    return buf.with_data(buf.data * env)


class LinkedParameters(NamedTuple):
    f_mod: float
    nu: float
    v_db: float


def link_parameters(f, link) -> LinkedParameters:
    """Derive modulation settings from the note frequency.

    ``link`` maps ``f_mod``, ``nu`` and ``v_db`` to a callable of ``f`` or
    to a constant.  Missing keys give 0.
    """
    out = {}
    for key in LinkedParameters._fields:
        fn = link.get(key, 0.0)
        try:
            v = fn(f) if callable(fn) else fn
            v = float(v)
        except Exception as exc:  # user code, anything can happen
            raise InvalidArgument(f"link for {key} failed at f={f}: {exc}") from exc
        if not math.isfinite(v):
            raise InvalidArgument(f"link for {key} is not finite at f={f}")
        out[key] = v
    return LinkedParameters(**out)

