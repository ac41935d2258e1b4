# %% [markdown]
# # Wavetables, notes and their spectra
#
# A note is a wavetable read at a fixed step.  Here we build the four
# basic shapes, play 441 Hz (a 100-sample period at 44.1 kHz) and look
# at the harmonic content.

# %%
import numpy as np

from pcmkit.core import db_difference, db_to_gain
from pcmkit.oscillator import GlideSpec, build_wavetable, synth_glide, synth_note
from pcmkit.spectral import forward, harmonic_magnitudes, paired_count, reconstruct_real

RATE = 44100

# %% [markdown]
# Level arithmetic first: doubling the amplitude adds about 6 dB.

# %%
x = synth_note(build_wavetable("sine"), 441, 0.1, RATE)
print("2x vs x:", round(db_difference(x.scaled(2), x), 4), "dB")
print("+10 dB as a gain:", round(db_to_gain(10), 5))

# %% [markdown]
# Harmonic levels relative to the fundamental.  Square and triangle
# carry odd harmonics only; sawtooth falls about 6 dB per octave.

# %%
for shape in ("sine", "square", "triangle", "sawtooth"):
    spec = forward(synth_note(build_wavetable(shape), 441, 1.0, RATE), method="fft")
    h = np.array(harmonic_magnitudes(spec, 441, 8))
    levels = 20 * np.log10(np.maximum(h / h[0], 1e-12))
    print(f"{shape:9s}", " ".join(f"{v:7.1f}" for v in levels))

# %% [markdown]
# A real signal is recovered from its spectrum as a sum of phased
# cosines, one per conjugate pair of bins.

# %%
rng = np.random.default_rng(0)
frame = rng.standard_normal(32)
spec = forward(frame)
back = reconstruct_real(spec).samples
print("pairs for 32 samples:", paired_count(32), "max error:", np.max(np.abs(back - frame)))

# %% [markdown]
# An exponential glide moves in equal ratios, a straight line in pitch.

# %%
up = synth_glide(build_wavetable("triangle"), GlideSpec(220, 880), 1.0, RATE)
print("glide samples:", len(up), "peak:", round(up.peak(), 3))
