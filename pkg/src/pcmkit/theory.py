"""Tunings, intervals, scales, chords and two-voice counterpoint checks.

Pitches are handled as semitone counts (possibly fractional) above a
reference; conversion to Hz happens through a :class:`Tuning`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from .errors import InvalidArgument

JUST_RATIOS = tuple(Fraction(*r) for r in [
    (1, 1), (16, 15), (9, 8), (6, 5), (5, 4), (4, 3),
    (45, 32), (3, 2), (8, 5), (5, 3), (16, 9), (15, 8),
])
PYTHAGOREAN_RATIOS = tuple(Fraction(*r) for r in [
    (1, 1), (256, 243), (9, 8), (32, 27), (81, 64), (4, 3),
    (729, 512), (3, 2), (128, 81), (27, 16), (16, 9), (243, 128),
])
# step 6 can also be spelled as a diminished fifth
PYTHAGOREAN_DIMINISHED_FIFTH = Fraction(1024, 729)


@dataclass(frozen=True)
class Tuning:
    """``kind`` is ``equal``, ``just`` or ``pythagorean``."""

    kind: str = "equal"
    steps: int = 12
    reference: float = 440.0

    def __post_init__(self):
        if self.kind not in ("equal", "just", "pythagorean"):
            raise InvalidArgument(f"unknown tuning {self.kind!r}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise InvalidArgument("steps per octave must be a positive integer")
        if not self.reference > 0:
            raise InvalidArgument("reference frequency must be > 0")
        if self.kind != "equal" and self.steps != 12:
            raise InvalidArgument(f"{self.kind} tuning is defined for 12 steps only")


def degree_frequency(t: Tuning, steps) -> float:
    """Frequency ``steps`` scale steps above the reference."""
    if t.kind == "equal":
        # whole octaves as an exact power of two, so f(s + n) == 2 f(s)
        octave = math.floor(steps / t.steps)
        rem = steps - octave * t.steps
        return math.ldexp(t.reference, octave) * 2.0 ** (rem / t.steps)
    if int(steps) != steps:
        raise InvalidArgument(f"{t.kind} tuning needs whole steps, got {steps}")
    octave, idx = divmod(int(steps), 12)
    table = JUST_RATIOS if t.kind == "just" else PYTHAGOREAN_RATIOS
    return t.reference * float(table[idx]) * 2.0 ** octave


def cents(ratio) -> float:
    return 1200.0 * math.log2(ratio)


class IntervalClass(str, Enum):
    PERFECT = "perfect consonance"
    IMPERFECT = "imperfect consonance"
    HARSH = "harsh dissonance"
    MILD = "mild dissonance"
    CONTEXTUAL = "contextual"  # the fourth: consonant or not depending on context
    TRITONE = "tritone"


_CLASS_OF = {
    0: IntervalClass.PERFECT, 7: IntervalClass.PERFECT,
    3: IntervalClass.IMPERFECT, 4: IntervalClass.IMPERFECT,
    8: IntervalClass.IMPERFECT, 9: IntervalClass.IMPERFECT,
    1: IntervalClass.HARSH, 11: IntervalClass.HARSH,
    2: IntervalClass.MILD, 10: IntervalClass.MILD,
    5: IntervalClass.CONTEXTUAL,
    6: IntervalClass.TRITONE,
}

INTERVAL_NAMES = ("P1", "m2", "M2", "m3", "M3", "P4", "TT", "P5", "m6", "M6", "m7", "M7", "P8")


def classify_interval(semitones) -> IntervalClass:
    if int(semitones) != semitones or semitones < 0:
        raise InvalidArgument(f"interval must be a non-negative integer, got {semitones}")
    return _CLASS_OF[int(semitones) % 12]


def is_consonant(semitones) -> bool:
    return classify_interval(semitones) in (IntervalClass.PERFECT, IntervalClass.IMPERFECT)


def is_dissonant(semitones) -> bool:
    return classify_interval(semitones) in (IntervalClass.HARSH, IntervalClass.MILD, IntervalClass.TRITONE)


def invert_interval(semitones) -> int:
    if int(semitones) != semitones or not 0 <= semitones <= 12:
        raise InvalidArgument(f"interval must be in 0..12, got {semitones}")
    return 12 - int(semitones)


@dataclass(frozen=True)
class Scale:
    """Named set of semitone offsets.

    ``contour`` scales (melodic minor) list a melodic path rather than
    a set, so their offsets may turn around.
    """

    name: str
    offsets: tuple
    contour: bool = False

    def __post_init__(self):
        offs = tuple(self.offsets)
        if not offs or offs[0] != 0:
            raise InvalidArgument("scale offsets must start at 0")
        if not self.contour and any(b <= a for a, b in zip(offs, offs[1:])):
            raise InvalidArgument("scale offsets must be strictly increasing")
        object.__setattr__(self, "offsets", offs)

    def __len__(self):
        return len(self.offsets)

    def pitch_classes(self) -> frozenset:
        return frozenset(o % 12 for o in self.offsets)

    def step(self, degree, octave=0):
        """Semitones above the tonic for a 0-based degree.

        Octave-bounded scales wrap, so degree 7 of a 7-note scale is the
        tonic an octave up.  Contours and scales spanning more than an
        octave (harmonic series) are indexed directly.
        """
        degree = int(degree)
        if self.contour or max(self.offsets) >= 12:
            if not 0 <= degree < len(self.offsets):
                raise InvalidArgument(f"degree {degree} outside {self.name} (0..{len(self.offsets) - 1})")
            return self.offsets[degree] + 12 * octave
        o, d = divmod(degree, len(self.offsets))
        return self.offsets[d] + 12 * (o + octave)


DIATONIC_STEPS = (2, 2, 1, 2, 2, 2, 1)

HARMONIC_SERIES = (
    0, 12, 19.02, 24, 27.86, 31.2, 33.69, 36, 38.04, 39.86,
    41.51, 43.02, 44.41, 45.69, 46.88, 48, 49.05, 50.04, 50.98, 51.86,
)

SCALES = {
    "chromatic": tuple(range(12)),
    "wholetone": (0, 2, 4, 6, 8, 10),
    "minor-thirds": (0, 3, 6, 9),
    "major-thirds": (0, 4, 8),
    "tritones": (0, 6),
    "aeolian": (0, 2, 3, 5, 7, 8, 10),
    "locrian": (0, 1, 3, 5, 6, 8, 10),
    "ionian": (0, 2, 4, 5, 7, 9, 11),
    "dorian": (0, 2, 3, 5, 7, 9, 10),
    "phrygian": (0, 1, 3, 5, 7, 8, 10),
    "lydian": (0, 2, 4, 6, 7, 9, 11),
    "mixolydian": (0, 2, 4, 5, 7, 9, 10),
    "harmonic-minor": (0, 2, 3, 5, 7, 8, 11),
    # up the melodic minor, back down the natural minor
    "melodic-minor": (0, 2, 3, 5, 7, 9, 11, 12, 10, 8, 7, 5, 3, 2, 0),
    "harmonic-series": HARMONIC_SERIES,
}
SCALES["major"] = SCALES["ionian"]
SCALES["minor"] = SCALES["aeolian"]

# generator of each symmetric scale
SYMMETRIC_GENERATORS = {"chromatic": 1, "wholetone": 2, "minor-thirds": 3, "major-thirds": 4, "tritones": 6}


def make_scale(name) -> Scale:
    try:
        offs = SCALES[name]
    except KeyError:
        raise InvalidArgument(f"unknown scale {name!r}") from None
    return Scale(name, offs, contour=(name == "melodic-minor"))


def diatonic_mode_kappa(kappa) -> Scale:
    """Diatonic mode obtained by rotating the step pattern by ``kappa``.

    ``kappa=6`` is ionian, ``kappa=2`` lydian, ``kappa=0`` dorian.
    """
    if int(kappa) != kappa or not 0 <= kappa <= 6:
        raise InvalidArgument(f"kappa must be in 0..6, got {kappa}")
    e = [0]
    for i in range(1, 7):
        e.append(e[-1] + DIATONIC_STEPS[(i + int(kappa)) % 7])
    return Scale(f"kappa{int(kappa)}", tuple(e))


CHORD_QUALITIES = {
    "major": (0, 4, 7),
    "minor": (0, 3, 7),
    "diminished": (0, 3, 6),
    "augmented": (0, 4, 8),
}
SEVENTHS = {None: None, "none": None, "minor": 10, "major": 11}


@dataclass(frozen=True)
class Chord:
    offsets: tuple

    def __post_init__(self):
        offs = tuple(self.offsets)
        if not offs:
            raise InvalidArgument("a chord needs at least one note")
        object.__setattr__(self, "offsets", offs)

    def normalized(self) -> "Chord":
        """Shift so the lowest note is 0."""
        lo = min(self.offsets)
        return Chord(tuple(sorted(o - lo for o in self.offsets)))


def build_chord(quality="major", seventh=None, inversion=0, spread=None) -> Chord:
    """Triad or tetrad as semitone offsets from the root.

    ``inversion`` moves the lowest note up an octave that many times.
    ``spread`` maps a member index (after inversion, in sorted order) to
    an octave shift.  Offsets are kept relative to the original root, so
    the first inversion of a major triad is ``(4, 7, 12)``.
    """
    try:
        notes = list(CHORD_QUALITIES[quality])
    except KeyError:
        raise InvalidArgument(f"unknown chord quality {quality!r}") from None
    if seventh not in SEVENTHS:
        raise InvalidArgument(f"seventh must be none, minor or major, got {seventh!r}")
    if SEVENTHS[seventh] is not None:
        notes.append(SEVENTHS[seventh])
    if inversion < 0 or inversion >= len(notes):
        raise InvalidArgument(f"inversion must be in 0..{len(notes) - 1}")
    for _ in range(inversion):
        notes = sorted(notes[1:] + [notes[0] + 12])
    if spread:
        for idx, octaves in dict(spread).items():
            notes[idx] += 12 * int(octaves)
        notes.sort()
    return Chord(tuple(notes))


class ScaleDegree(NamedTuple):
    """1-based scale degree with an optional chromatic alteration."""

    degree: int
    alteration: int = 0

    def __str__(self):
        sign = "#" * self.alteration if self.alteration > 0 else "b" * -self.alteration
        return f"{sign}{self.degree}"

    def semitones(self, scale="ionian"):
        return make_scale(scale).offsets[self.degree - 1] + self.alteration


class FunctionChords(NamedTuple):
    main: tuple
    relative: tuple
    counter_relative: tuple


def _triad(*ds):
    return tuple(d if isinstance(d, ScaleDegree) else ScaleDegree(d) for d in ds)


FUNCTION_TABLE = {
    "tonic": FunctionChords(_triad(1, 3, 5), _triad(6, 1, 3), _triad(3, 5, 7)),
    "dominant": FunctionChords(_triad(5, 7, 2), _triad(3, 5, 7), _triad(7, 2, ScaleDegree(4, 1))),
    "subdominant": FunctionChords(_triad(4, 6, 1), _triad(2, 4, 6), _triad(6, 1, 3)),
}


def functional_relatives(function, mode="major") -> FunctionChords:
    """Main, relative and counter-relative triads of a harmonic function."""
    if mode != "major":
        raise InvalidArgument("only the major mode table is available")
    try:
        return FUNCTION_TABLE[function]
    except KeyError:
        raise InvalidArgument(f"unknown function {function!r}") from None


class Motion(str, Enum):
    DIRECT = "direct"
    PARALLEL = "parallel"
    OBLIQUE = "oblique"
    CONTRARY = "contrary"
    STATIC = "static"  # neither voice moves


def classify_motion(v1_from, v1_to, v2_from, v2_to) -> Motion:
    d1 = v1_to - v1_from
    d2 = v2_to - v2_from
    if d1 == 0 and d2 == 0:
        return Motion.STATIC
    if d1 == 0 or d2 == 0:
        return Motion.OBLIQUE
    if (d1 > 0) != (d2 > 0):
        return Motion.CONTRARY
    return Motion.PARALLEL if d1 == d2 else Motion.DIRECT


class Violation(NamedTuple):
    index: int
    rule: str
    detail: str


MAX_PARALLEL_IMPERFECT = 3


def check_counterpoint(upper, lower, max_parallel=MAX_PARALLEL_IMPERFECT) -> list:
    """Flag common two-voice faults.

    Rules:

    ``direct-to-perfect``
        similar or parallel motion arriving at a unison, fifth or octave
    ``parallel-run``
        more than ``max_parallel`` imperfect consonances in a row joined
        by parallel motion
    ``unprepared-dissonance``
        a dissonance whose neighbours are not consonances reached and
        left by step (at most 2 semitones in each voice)

    ``index`` is the position of the offending simultaneity.
    """
    upper = list(upper)
    lower = list(lower)
    if len(upper) != len(lower):
        raise InvalidArgument("voices must have equal length")
    n = len(upper)
    iv = [abs(a - b) for a, b in zip(upper, lower)]
    out = []
    run = 1
    for k in range(1, n):
        m = classify_motion(upper[k - 1], upper[k], lower[k - 1], lower[k])
        if m in (Motion.DIRECT, Motion.PARALLEL) and classify_interval(iv[k]) is IntervalClass.PERFECT:
            out.append(Violation(k, "direct-to-perfect",
                                 f"{m.value} motion into {INTERVAL_NAMES[iv[k] % 12]}"))
        imperfect = (classify_interval(iv[k]) is IntervalClass.IMPERFECT
                     and classify_interval(iv[k - 1]) is IntervalClass.IMPERFECT)
        if m is Motion.PARALLEL and imperfect:
            run += 1
            if run == max_parallel + 1:
                out.append(Violation(k, "parallel-run", f"{run} parallel imperfect consonances"))
        else:
            run = 1

    def stepwise(a, b):
        return abs(upper[a] - upper[b]) <= 2 and abs(lower[a] - lower[b]) <= 2

    for k in range(n):
        if not is_dissonant(iv[k]):
            continue
        ok = (0 < k < n - 1 and is_consonant(iv[k - 1]) and is_consonant(iv[k + 1])
              and stepwise(k - 1, k) and stepwise(k, k + 1))
        if not ok:
            out.append(Violation(k, "unprepared-dissonance",
                                 f"{INTERVAL_NAMES[iv[k] % 12]} not approached and left by step"))
    return sorted(out)
