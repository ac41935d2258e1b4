"""Built-in showcase scores, one per module.

Most live as ``.score`` files next to this module.  The spectral, theory
and structure demos are generated from the library itself and emitted
as score text, so every demo can be printed and edited.
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from ..spectral import Spectrum, reconstruct_real
from ..structure import (HUNT_PEAL_3, Motif, RhythmGrid, cycle_sequence, lucas_sequence, resolve_grid,
                         transform_motif)
from ..theory import build_chord, functional_relatives, make_scale
from .score import Score, parse_score

FILE_DEMOS = ("core", "oscillator", "filters", "noise", "modulation", "spatial", "render")


def _file_text(name):
    return resources.files(__package__).joinpath("scores", f"{name}.score").read_text(encoding="utf-8")


def _spectral_text():
    # a period built from its spectrum: odd harmonics at 1/k, phases staggered
    n = 64
    c = np.zeros(n, dtype=complex)
    for k in (1, 3, 5, 7, 9):
        c[k] = (n / 2) / k * np.exp(1j * 0.4 * k)
        c[n - k] = np.conj(c[k])
    period = reconstruct_real(Spectrum(c, 44100)).samples
    period = period / np.max(np.abs(period))
    samples = ",".join(f"{v:.10g}" for v in period)
    lines = [
        "# A wavetable synthesized from five odd harmonics, then the plain",
        "# sine and square for comparison.",
        "meta rate=44100",
        f"table odd5 samples={samples}",
        "note 0.0 220Hz 1.0 table=odd5 amp=0.5 adsr=0.01,0.1,0.8,0.1",
        "note 1.0 220Hz 1.0 shape=sine amp=0.5 adsr=0.01,0.1,0.8,0.1",
        "note 2.0 220Hz 1.0 shape=square amp=0.25 adsr=0.01,0.1,0.8,0.1",
    ]
    return "\n".join(lines) + "\n"


def _theory_text():
    lines = ["# Ionian scale, then tonic / subdominant / dominant / tonic chords,",
             "# then the same fifth in equal, just and Pythagorean tuning.",
             "meta rate=44100 tonic=0"]
    t = 0.0
    for deg in range(8):
        lines.append(f"note {t:.3f} ionian:{deg}@4 0.25 amp=0.4 adsr=0.01,0.05,0.7,0.05")
        t += 0.25
    major = make_scale("ionian")
    for fn in ("tonic", "subdominant", "dominant", "tonic"):
        main = functional_relatives(fn).main
        root = main[0].degree - 1
        chord = build_chord("major", "minor" if fn == "dominant" else None)
        for off in chord.offsets:
            midi = 60 + major.step(root) + off
            lines.append(f"note {t:.3f} eq12:{midi} 0.6 amp=0.2 adsr=0.02,0.1,0.7,0.2")
        t += 0.6
    for pitch in ("eq12:67", "just:7", "pyth:7"):
        lines.append(f"note {t:.3f} ionian:0@4 0.8 amp=0.3 adsr=0.02,0.1,0.7,0.2")
        lines.append(f"note {t:.3f} {pitch} 0.8 amp=0.3 adsr=0.02,0.1,0.7,0.2")
        t += 0.8
    return "\n".join(lines) + "\n"


def _structure_text():
    grid = RhythmGrid(0.4, {-1: 2, 1: 4})
    base = [262.0, 330.0, 392.0]
    lines = ["# A three-note cell rung through the hunt peal, a retrograde",
             "# and an inversion, with durations from a Lucas sequence.",
             "meta rate=44100 pulse=0.4 grid=-1:2,1:4"]
    rows = cycle_sequence(HUNT_PEAL_3, base)
    t = 0.0
    for row in rows:
        for k, f in enumerate(row):
            onset = t + resolve_grid(grid, [(-1, k % 2), (0, k // 2)])
            lines.append(f"note {onset:.4f} {f:.4f}Hz 0.18 shape=triangle amp=0.35 adsr=0.005,0.03,0.6,0.05")
        t += grid.unit(0) * 2
    lucas = lucas_sequence(2, 1, 6)
    m = Motif.from_lists(base + [523.0], [0.0, 0.2, 0.4, 0.6], [0.1 * v / max(lucas[:4]) + 0.05 for v in lucas[:4]])
    for variant in (m, transform_motif(m, "retrograde"), transform_motif(m, "inversion")):
        for e in variant.events:
            lines.append(f"note {t + e.onset:.4f} {e.pitch:.4f}Hz {e.duration:.4f} amp=0.35 adsr=0.005,0.02,0.7,0.02")
        t += 1.0
    return "\n".join(lines) + "\n"


_GENERATED = {"spectral": _spectral_text, "theory": _theory_text, "structure": _structure_text}

DEMO_NAMES = ("core", "oscillator", "spectral", "filters", "noise", "modulation",
              "spatial", "theory", "structure", "render")


def demo_text(name) -> str:
    if name in _GENERATED:
        return _GENERATED[name]()
    if name in FILE_DEMOS:
        return _file_text(name)
    raise KeyError(name)


def demo_score(name) -> Score:
    return parse_score(demo_text(name))
