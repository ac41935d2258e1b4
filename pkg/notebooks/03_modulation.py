# %% [markdown]
# # Vibrato, tremolo, AM, FM and envelopes

# %%
import numpy as np

from pcmkit.modulation import (AdsrSpec, OscillatorPattern, adsr, adsr_envelope, am, fm, sideband_weights,
                               tremolo, vibrato)
from pcmkit.oscillator import build_wavetable, synth_note
from pcmkit.spectral import zero_crossing_frequency

RATE = 44100
SINE = build_wavetable("sine")

# %% [markdown]
# A 3 Hz vibrato one octave deep swings 1000 Hz between 500 and 2000 Hz.

# %%
x = vibrato(SINE, 1000, 2.0, RATE, OscillatorPattern(3), 12)
_, f = zero_crossing_frequency(x)
print(f"instantaneous frequency {f.min():.1f} .. {f.max():.1f} Hz")

# %%
steady = synth_note(SINE, 440, 1.0, RATE)
wobble = tremolo(steady, OscillatorPattern(4), 6)
print("tremolo peak:", round(wobble.peak(), 3))

# %% [markdown]
# FM sidebands at f + k f' follow Bessel functions of the index mu / f'.

# %%
y = fm(SINE, 2000, 200, 200, 1.0, RATE).samples
mag = np.abs(np.fft.rfft(y)) / (y.size / 2)
pred = sideband_weights(1.0, 3)
for k in range(-3, 4):
    print(f"k={k:+d} measured {mag[2000 + 200 * k]:.4f} predicted {abs(pred[k]):.4f}")

# %%
ring = am(steady, 30, 0.5)
print("AM sideband/carrier:", round(np.abs(np.fft.rfft(ring.samples))[410] / np.abs(np.fft.rfft(ring.samples))[440], 3))

# %%
spec = AdsrSpec(attack=0.02, decay=0.1, release=0.3, sustain=0.6)
env = adsr_envelope(RATE, RATE, spec)
print("envelope start/peak/sustain/end:", env[0], env.max(), env[RATE // 2], env[-1])
shaped = adsr(steady, spec)
