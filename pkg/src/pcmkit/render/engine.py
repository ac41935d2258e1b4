"""Turn a :class:`Score` into samples.

Per note: oscillator (or noise) -> AM -> tremolo -> envelope -> gain ->
stereo placement.  Notes are then laid out at their onsets and summed
in score order, and the post chain runs on the mix.
"""

from __future__ import annotations

import numpy as np

from ..core import SampleBuffer, duration_to_samples, normalize, to_stereo
from ..errors import EventError, InvalidArgument, PcmError
from ..filters import apply_iir, convolve, design_iir
from ..modulation import OscillatorPattern, adsr, am, fm, tremolo, vibrato
from ..noise import NoiseSpec, generate
from ..oscillator import synth_glide, synth_note
from ..spatial import ReverbSpec, doppler_render, localize, reverb_impulse
from .score import NoteSpec, PostStage, Score


def render_note(note: NoteSpec, rate, seed=0) -> SampleBuffer:
    """Samples for one note, starting at time zero."""
    n = duration_to_samples(note.duration, rate)
    if note.noise is not None:
        if n < 2:
            raise InvalidArgument("noise notes need at least 2 samples")
        buf = normalize(generate(NoiseSpec(note.noise, n, rate, seed=seed)), 1.0)
    elif note.vibrato:
        f_mod, nu = note.vibrato
        buf = vibrato(note.waveform, note.frequency, note.duration, rate, OscillatorPattern(f_mod), nu)
    elif note.fm:
        f_mod, mu = note.fm
        buf = fm(note.waveform, note.frequency, f_mod, mu, note.duration, rate)
    elif note.glide:
        buf = synth_glide(note.waveform, note.glide, note.duration, rate)
    elif note.doppler:
        buf = doppler_render(note.doppler, note.waveform, note.duration, rate)
    else:
        buf = synth_note(note.waveform, note.frequency, note.duration, rate)
    if note.am:
        buf = am(buf, note.am[0], note.am[1])
    if note.tremolo:
        buf = tremolo(buf, OscillatorPattern(note.tremolo[0]), note.tremolo[1])
    if note.envelope:
        buf = adsr(buf, note.envelope)
    if note.amplitude != 1.0:
        buf = buf.scaled(note.amplitude)
    if note.position is not None:
        buf = localize(buf, note.position)
    return buf


def apply_post(buf: SampleBuffer, stage: PostStage, seed=0) -> SampleBuffer:
    if len(buf) == 0:
        return buf
    k = stage.kind
    if k in ("lowpass", "highpass", "bandpass", "bandreject"):
        return apply_iir(buf, design_iir(k, stage.get("fc"), stage.get("bw")))
    if k == "reverb":
        spec = ReverbSpec(stage.get("first", 0.1), stage.get("total", 1.9), stage.get("decay", -60.0),
                          stage.get("color", "brown"), int(stage.get("seed", seed)))
        return convolve(buf, reverb_impulse(spec, buf.rate))
    if k == "normalize":
        return normalize(buf, stage.get("peak", 1.0))
    raise InvalidArgument(f"unknown post stage {k!r}")


def render(score: Score) -> SampleBuffer:
    """Render every event, mix them, then run the post chain.

    Noise for event ``k`` is seeded with ``score.seed + k`` so pieces are
    reproducible note by note.
    """
    rate = score.rate
    parts = []
    for k, (onset, note) in enumerate(score.events):
        try:
            buf = render_note(note, rate, seed=score.seed + k)
        except PcmError as exc:
            raise EventError(k, exc) from exc
        parts.append((duration_to_samples(onset, rate), buf))
    if not parts:
        out = SampleBuffer(np.zeros(0), rate)
    else:
        stereo = any(b.channels == 2 for _, b in parts)
        total = max(off + len(b) for off, b in parts)
        acc = np.zeros((2 if stereo else 1, total))
        # ordered accumulation; equal to mixing zero-padded copies
        for off, b in parts:
            if stereo:
                b = to_stereo(b)
            acc[:, off : off + len(b)] += b.data
        out = SampleBuffer(acc, rate)
    for i, stage in enumerate(score.post):
        out = apply_post(out, stage, seed=score.seed + len(score.events) + i)
    return out
