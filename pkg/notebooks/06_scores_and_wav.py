# %% [markdown]
# # Scores, rendering and WAV files
#
# A score is a small text file of notes and post stages.  Rendering is
# deterministic, so the same score always gives the same bytes.  The
# reverb impulse sums many reflections and raises the level a lot, so a
# normalize stage usually follows it.

# %%
import hashlib
import tempfile
from pathlib import Path

import numpy as np

from pcmkit.render.demos import DEMO_NAMES, demo_text
from pcmkit.render.engine import render
from pcmkit.render.score import parse_score
from pcmkit.render.wav import read_wav, wav_bytes, write_wav

# %%
text = """
meta rate=44100 pulse=0.5 grid=-1:4,1:4 seed=3
table buzz shape=sawtooth len=512
note 0      ionian:0@4   0.5  adsr=0.01,0.1,0.7,0.2 amp=0.4
note @0:1   ionian:2@4   0.5  table=buzz amp=-12dB
note @0:2   ionian:4@4   1u0  vibrato=5,0.3 pos=1,1
note 1.5    noise:pink   0.5  amp=0.2
post lowpass fc=0.2
post reverb first=0.05 total=0.6 decay=-40
post normalize peak=0.9
"""
score = parse_score(text)
buf = render(score)
print("frames:", len(buf), "channels:", buf.channels, "peak:", round(buf.peak(), 3))

# %%
data, clipped = wav_bytes(buf)
print("sha256:", hashlib.sha256(data).hexdigest()[:16], "clipped:", clipped)
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "score.wav"
    write_wav(buf, path)
    back = read_wav(path)
    print("round trip error:", float(np.max(np.abs(back.data - buf.data))), "<=", 1 / 32767)

# %%
print("demos:", ", ".join(DEMO_NAMES))
print(demo_text("modulation"))
