# %% [markdown]
# # Placing sounds: interaural cues, Doppler and reverb

# %%
import numpy as np

from pcmkit.oscillator import build_wavetable, synth_note
from pcmkit.spatial import (DopplerPath, ReverbSpec, SourcePosition, doppler_render, first_period_hits,
                            itd_iid, localize, reverb_impulse)
from pcmkit.filters import convolve

RATE = 44100

# %% [markdown]
# Time and level differences between the ears for a few source positions.

# %%
for x, y in [(0, 1), (1, 0), (-1, 0), (0.5, 2), (3, 3)]:
    itd, iid = itd_iid(SourcePosition(x, y))
    print(f"({x:>4}, {y:>3})  ITD {itd * 1e6:8.1f} us  IID {iid:+.3f} dB")

# %%
tone = synth_note(build_wavetable("triangle"), 330, 0.5, RATE)
placed = localize(tone, SourcePosition(1, 0.5))
print("stereo frames:", len(placed), "channels:", placed.channels)

# %% [markdown]
# A source passing at 20 m/s, 5 m beside the listener.

# %%
path = DopplerPath(y0=-30, z0=5, v_s=20, v_r=0, f0=440)
_, _, freq, _ = path.track(3 * RATE, RATE)
print(f"pitch from {freq[0]:.1f} to {freq[-1]:.1f} Hz")
passby = doppler_render(path, build_wavetable("sine"), 3.0, RATE)

# %% [markdown]
# Reverb: sparse early reflections, then a decaying noise tail.

# %%
spec = ReverbSpec(first_period=0.1, total=1.9, seed=2)
ir = reverb_impulse(spec, RATE)
print("impulse length:", len(ir), "early hits:", first_period_hits(ir, spec, RATE))
wet = convolve(tone, ir.samples)
print("wet length:", len(wet))
