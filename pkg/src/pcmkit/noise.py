"""Colored noise built in the frequency domain.

Every bin gets a fixed magnitude that depends on the color and a random
phase; the mirror half is filled with conjugates and the result is
inverse transformed.  Magnitudes are deterministic, so spectral slopes
are exact and only the phases change with the seed.

    color    slope (dB/octave)
    white     0
    pink     -3
    brown    -6
    blue     +3
    violet   +6
    black    -beta  (beta > 6, default 12)
    gray     user loudness table
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import DEFAULT_RATE, SampleBuffer, check_rate
from .errors import InvalidArgument, MissingData

COLORS = ("white", "pink", "brown", "blue", "violet", "black", "gray")
SLOPES = {"white": 0.0, "pink": -3.0, "brown": -6.0, "blue": 3.0, "violet": 6.0}
DEFAULT_F_MIN = 15.0
# phases come from numpy's default Generator; recorded next to outputs
RNG_ALGORITHM = "numpy.random.Generator(PCG64)"


@dataclass(frozen=True)
class NoiseSpec:
    color: str = "white"
    length: int = DEFAULT_RATE
    rate: int = DEFAULT_RATE
    seed: int = 0
    f_min: float = DEFAULT_F_MIN
    f_max: Optional[float] = None
    beta: float = 12.0
    loudness_curve: Optional[Sequence] = None

    def validate(self):
        if self.color not in COLORS:
            raise InvalidArgument(f"unknown noise color {self.color!r}; expected one of {', '.join(COLORS)}")
        check_rate(self.rate)
        if int(self.length) != self.length or self.length < 2:
            raise InvalidArgument(f"noise length must be an integer >= 2, got {self.length}")
        nyq = self.rate / 2
        if not 0 < self.f_min < nyq:
            raise InvalidArgument(f"f_min must be in (0, {nyq}), got {self.f_min}")
        if self.f_max is not None and not self.f_min < self.f_max < nyq:
            raise InvalidArgument(f"need f_min < f_max < {nyq}, got f_max={self.f_max}")
        if self.color == "black" and not self.beta > 6:
            raise InvalidArgument(f"black noise needs beta > 6 dB/octave, got {self.beta}")
        if self.color == "gray" and self.loudness_curve is None:
            raise MissingData("gray noise needs a loudness_curve of (Hz, dB) points")

    def slope(self) -> Optional[float]:
        if self.color == "black":
            return -float(self.beta)
        return SLOPES.get(self.color)


def _curve_gains(curve, f):
    pts = sorted((float(hz), float(db)) for hz, db in curve)
    if len(pts) < 1 or any(hz <= 0 for hz, _ in pts):
        raise InvalidArgument("loudness curve needs positive frequencies")
    hz = np.log2([p[0] for p in pts])
    db = np.array([p[1] for p in pts])
    # linear in log-frequency, held flat past the ends
    return 10.0 ** (np.interp(np.log2(f), hz, db) / 20.0)


def bin_magnitudes(spec: NoiseSpec) -> np.ndarray:
    """Target magnitude of bins ``0 .. n//2``."""
    spec.validate()
    n = int(spec.length)
    half = n // 2
    f = np.arange(half + 1) * spec.rate / n
    mag = np.zeros(half + 1)
    if spec.color == "white":
        mag[1:] = 1.0
        return mag
    if spec.color == "gray":
        mag[1:] = _curve_gains(spec.loudness_curve, f[1:])
        return mag
    slope = spec.slope()
    band = f >= spec.f_min
    if spec.f_max is not None and spec.color in ("blue", "violet"):
        band &= f <= spec.f_max
    band[0] = False
    step = 10.0 ** (slope / 20.0)
    mag[band] = step ** np.log2(f[band] / spec.f_min)
    return mag


def noise_spectrum(spec: NoiseSpec) -> np.ndarray:
    """Full length Hermitian coefficient array with random phases."""
    mag = bin_magnitudes(spec)
    n = int(spec.length)
    rng = np.random.default_rng(spec.seed)
    c = np.zeros(n, dtype=np.complex128)
    top = (n - 1) // 2  # last bin that has a distinct mirror
    phase = rng.uniform(0.0, 2.0 * np.pi, top)
    c[1 : top + 1] = np.exp(1j * phase) * mag[1 : top + 1]
    c[n - top :] = np.conj(c[1 : top + 1][::-1])
    if n % 2 == 0:
        c[n // 2] = mag[n // 2]
    return c


def imaginary_residual(x) -> float:
    """Largest imaginary part in a complex array (0 for an empty one)."""
    x = np.asarray(x)
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(np.imag(x))))


def generate(spec: NoiseSpec, check=True) -> SampleBuffer:
    """Noise buffer of ``spec.length`` samples."""
    c = noise_spectrum(spec)
    raw = np.fft.ifft(c)
    if check:
        res = imaginary_residual(raw)
        if res > 1e-9 * c.size:
            raise ArithmeticError(f"inverse transform is not real (residual {res:g})")
    return SampleBuffer(raw.real, spec.rate)


def manifest(spec: NoiseSpec) -> dict:
    """Reproducibility record for a generated noise."""
    return {
        "color": spec.color,
        "length": int(spec.length),
        "rate": int(spec.rate),
        "seed": int(spec.seed),
        "f_min": spec.f_min,
        "f_max": spec.f_max,
        "slope_db_per_octave": spec.slope(),
        "rng": RNG_ALGORITHM,
    }
