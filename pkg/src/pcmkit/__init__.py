"""pcmkit: sample-level synthesis, analysis and music-structure tools.

Modules
-------
core        buffers, durations, power and decibels, mix/concat
oscillator  wavetables, notes, glides, amplitude transitions
spectral    DFT, real reconstruction, slope and harmonic measurements
filters     convolution and one/two-pole IIR designs
noise       colored noise from shaped spectra
modulation  vibrato, tremolo, AM, FM, Bessel weights, ADSR
spatial     ITD/IID placement, Doppler passes, reverb impulses
theory      tunings, intervals, scales, chords, counterpoint checks
structure   rhythm grids, motif transforms, permutations, Lucas sequences
render      score format, renderer, WAV I/O, demos
"""

from .core import SampleBuffer, concat, db_difference, db_to_gain, duration_to_samples, mix, normalize, power
from .errors import DegenerateSignal, EventError, InvalidArgument, MissingData, ParseError, PcmError

__version__ = "0.1.0"

__all__ = [
    "SampleBuffer", "concat", "db_difference", "db_to_gain", "duration_to_samples", "mix",
    "normalize", "power", "DegenerateSignal", "EventError", "InvalidArgument", "MissingData",
    "ParseError", "PcmError",
]
