# %% [markdown]
# # Scales, chords, counterpoint and structure

# %%
from pcmkit.structure import (HUNT_PEAL_3, Motif, Permutation, RhythmGrid, cycle_sequence, golden_errors,
                              mirror_arc, order, resolve_grid, transform_motif)
from pcmkit.theory import (Tuning, build_chord, check_counterpoint, classify_interval, degree_frequency,
                           diatonic_mode_kappa, functional_relatives, make_scale)

# %%
whole = make_scale("wholetone")
print("third whole-tone note from 200 Hz:", round(degree_frequency(Tuning(reference=200), whole.step(3)), 3))
for name in ("ionian", "dorian", "harmonic-minor"):
    print(f"{name:15s}", make_scale(name).offsets)
print("kappa 2:", diatonic_mode_kappa(2).offsets)

# %%
for s in (0, 3, 5, 6, 7, 11, 19):
    print(s, classify_interval(s).value)
print("major seventh chord, first inversion:", build_chord("major", "major", inversion=1).offsets)
print("dominant relatives:", functional_relatives("dominant"))

# %%
upper = [67, 69, 71, 72]
lower = [60, 62, 64, 65]
for v in check_counterpoint(upper, lower):
    print(v)

# %% [markdown]
# Rhythm grid addresses, motif transformations and permutations.

# %%
grid = RhythmGrid(pulse=0.5, factors={-1: 4, 1: 4})
print("onset of (1,1),(0,2),(-1,2):", resolve_grid(grid, [(1, 1), (0, 2), (-1, 2)]))

# A major fragment on A4, so the tonal inversion stays inside the scale
m = Motif.from_lists([440 * 2 ** (k / 12) for k in (0, 2, 4, 5)], [0, 0.5, 1.0, 1.25], [0.5, 0.5, 0.25, 0.75])
for kind, kw in [("retrograde", {}), ("transposition", {"semitones": 5}), ("inversion", {}),
                 ("tonal-inversion", {"scale": make_scale("ionian")}), ("rotation", {"n": 1})]:
    out = transform_motif(m, kind, **kw)
    print(f"{kind:16s}", [round(e.pitch, 1) for e in out.events])
print("arc:", mirror_arc([1, 2, 3, 4]))

# %%
for row in cycle_sequence(HUNT_PEAL_3, [1, 2, 3]):
    print(*row)
p = Permutation.from_cycles("(0 1 2)(3 4)")
print(p.cycle_text(), "order", order(p))
print("golden ratio errors from (1, 100):", [round(e, 2) for e in golden_errors(1, 100, 6)])
