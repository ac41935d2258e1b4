# %% [markdown]
# # Colored noise and simple filters
#
# Noise is drawn in the frequency domain: a magnitude curve with a given
# slope, random phases, and an inverse transform.

# %%
import numpy as np

from pcmkit.core import SampleBuffer
from pcmkit.filters import apply_iir, convolve, design_iir, probe_magnitude
from pcmkit.noise import NoiseSpec, generate, manifest
from pcmkit.spectral import forward, slope_db_per_octave

RATE = 44100

# %%
for color in ("white", "pink", "brown", "blue", "violet"):
    spec = NoiseSpec(color, 2 ** 16, RATE, seed=1)
    s = slope_db_per_octave(forward(generate(spec), method="fft"), 100, 10000)
    print(f"{color:7s} {s:+6.2f} dB/octave")
print(manifest(NoiseSpec("pink", 2 ** 16, RATE, seed=1)))

# %% [markdown]
# One-pole low and high pass filters lose about 3 dB at the cutoff.
# Frequencies are fractions of the sample rate.

# %%
for kind in ("lowpass", "highpass"):
    for fc in (0.01, 0.05, 0.1):
        g = probe_magnitude(design_iir(kind, fc), fc)
        print(f"{kind:8s} fc={fc:<5} {20 * np.log10(g):6.2f} dB")

# %% [markdown]
# Band filters are two-pole resonators.  Their half-power points sit
# half a bandwidth either side of the center.

# %%
bp = design_iir("bandpass", 0.25, 0.05)
peak = probe_magnitude(bp, 0.25)
for f in (0.2, 0.225, 0.25, 0.275, 0.3):
    print(f"f={f:<6} relative {probe_magnitude(bp, f) / peak:.3f}")
notch = design_iir("bandreject", 0.25, 0.05)
print("notch depth:", round(20 * np.log10(probe_magnitude(notch, 0.25) + 1e-300), 1), "dB")

# %%
white = generate(NoiseSpec("white", RATE, RATE, seed=3))
smooth = apply_iir(white, design_iir("lowpass", 0.02))
echo = convolve(white, np.r_[1.0, np.zeros(4409), 0.5])
print(len(smooth), len(echo))
