"""Rhythm grids, motif transformations, permutations and golden-ratio sequences.

Permutations use one-line notation on ``0..n-1``: ``p[i]`` is the image
of ``i``.  Applying ``p`` to an ordering ``seq`` gives ``seq[p[0]],
seq[p[1]], ...``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import InvalidArgument, ParseError
from .theory import Scale

GOLDEN_RATIO = (1 + 5 ** 0.5) / 2


# -- rhythm grid -------------------------------------------------------------

@dataclass(frozen=True)
class RhythmGrid:
    """Hierarchy of time units around a pulse.

    ``factors[j]`` for ``j < 0`` says how many level-``j`` units fill one
    level-``j+1`` unit; for ``j > 0`` how many level-``j-1`` units make one
    level-``j`` unit.  Missing levels use 2.
    """

    pulse: float = 0.5
    factors: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.pulse > 0:
            raise InvalidArgument("pulse must be > 0")
        for j, f in self.factors.items():
            if int(f) != f or f < 2:
                raise InvalidArgument(f"factor at level {j} must be an integer >= 2, got {f}")
            if j == 0:
                raise InvalidArgument("level 0 is the pulse and takes no factor")

    def factor(self, level) -> int:
        return int(self.factors.get(level, 2))

    def unit(self, level) -> float:
        """Duration in seconds of one unit at ``level``."""
        d = self.pulse
        if level < 0:
            for j in range(-1, level - 1, -1):
                d /= self.factor(j)
        else:
            for j in range(1, level + 1):
                d *= self.factor(j)
        return d


def resolve_grid(grid: RhythmGrid, address, one_based=False) -> float:
    """Onset in seconds of a grid address.

    ``address`` is a list of ``(level, index)`` pairs.  Indices count
    from 0 unless ``one_based`` is set, in which case ``(level, 1)`` is
    the first unit.  A division index must stay below its factor, and a
    pulse or grouping index below the factor of the level above when
    that level is part of the address.
    """
    pairs = [(int(j), int(i)) for j, i in address]
    levels = [j for j, _ in pairs]
    if len(set(levels)) != len(levels):
        raise InvalidArgument("each level may appear once in an address")
    top = max(levels) if levels else 0
    onset = 0.0
    for j, i in pairs:
        if one_based:
            i -= 1
        if i < 0:
            raise InvalidArgument(f"index at level {j} is below the first unit")
        if j < 0:
            limit = grid.factor(j)
        elif j < top:
            limit = grid.factor(j + 1)
        else:
            limit = None
        if limit is not None and i >= limit:
            raise InvalidArgument(f"index {i} at level {j} exceeds {limit - 1}")
        onset += i * grid.unit(j)
    return onset


# -- motifs ------------------------------------------------------------------

@dataclass(frozen=True)
class MotifEvent:
    pitch: float  # Hz
    onset: float  # seconds
    duration: float
    amplitude: float = 1.0


@dataclass(frozen=True)
class Motif:
    events: tuple

    def __post_init__(self):
        evs = tuple(self.events)
        for a, b in zip(evs, evs[1:]):
            if b.onset < a.onset:
                raise InvalidArgument("motif onsets must be non-decreasing")
        object.__setattr__(self, "events", evs)

    def __len__(self):
        return len(self.events)

    @classmethod
    def from_lists(cls, pitches, onsets, durations, amplitudes=None):
        amplitudes = amplitudes or [1.0] * len(pitches)
        return cls(tuple(MotifEvent(*e) for e in zip(pitches, onsets, durations, amplitudes)))

    def attribute(self, name):
        return [getattr(e, name) for e in self.events]


def _semitones(f, ref):
    return 12.0 * math.log2(f / ref)


def _tonal_inversion(m: Motif, scale: Scale, tonic=None):
    if len(scale) != 7 or scale.contour:
        raise InvalidArgument("tonal inversion needs a 7-degree scale")
    tonic = m.events[0].pitch if tonic is None else tonic
    offs = scale.offsets
    out = []
    for e in m.events:
        s = _semitones(e.pitch, tonic)
        octave, within = divmod(s, 12.0)
        matches = [k for k, o in enumerate(offs) if abs(o - within) < 1e-6 or abs(o - within + 12) < 1e-6]
        if not matches:
            raise InvalidArgument(f"{e.pitch:.3f} Hz is not in scale {scale.name}")
        deg = matches[0]
        if abs(offs[deg] - within + 12) < 1e-6:
            octave += 1
        # reflect the scale position around the tonic
        pos = -(7 * int(round(octave)) + deg)
        o2, d2 = divmod(pos, 7)
        steps = offs[d2] + 12 * o2
        out.append(replace(e, pitch=tonic * 2.0 ** (steps / 12.0)))
    return out


def _param(params, kind, name):
    try:
        return params[name]
    except KeyError:
        raise InvalidArgument(f"{kind} needs a {name!r} parameter") from None


def transform_motif(m: Motif, kind, **params) -> Motif:
    """Return a transformed copy of ``m``.

    kinds and parameters:

    * ``translation`` (``delta`` seconds)
    * ``stretch`` (``factor``), durations and inter-onset times scale
      around the first onset
    * ``retrograde``
    * ``transposition`` (``semitones``)
    * ``inversion``, strict mirror around the first pitch
    * ``tonal-inversion`` (``scale``, optional ``tonic`` Hz)
    * ``rotation`` (``n``), event contents shift ``n`` places while the
      onset slots stay put
    """
    evs = list(m.events)
    if not evs:
        return m
    t0 = evs[0].onset
    if kind == "translation":
        d = _param(params, kind, "delta")
        if t0 + d < 0:
            raise InvalidArgument("translation would move onsets before 0")
        evs = [replace(e, onset=e.onset + d) for e in evs]
    elif kind == "stretch":
        k = _param(params, kind, "factor")
        if not k > 0:
            raise InvalidArgument("stretch factor must be > 0")
        evs = [replace(e, onset=t0 + (e.onset - t0) * k, duration=e.duration * k) for e in evs]
    elif kind == "retrograde":
        last = evs[-1].onset
        rev = evs[::-1]
        evs = [replace(e, onset=t0 + (last - e.onset)) for e in rev]
    elif kind == "transposition":
        r = 2.0 ** (_param(params, kind, "semitones") / 12.0)
        evs = [replace(e, pitch=e.pitch * r) for e in evs]
    elif kind == "inversion":
        f0 = evs[0].pitch
        evs = [replace(e, pitch=f0 * f0 / e.pitch) for e in evs]
    elif kind == "tonal-inversion":
        evs = _tonal_inversion(m, _param(params, kind, "scale"), params.get("tonic"))
    elif kind == "rotation":
        h = len(evs)
        n = int(_param(params, kind, "n"))
        onsets = [e.onset for e in evs]
        evs = [replace(evs[(i + n) % h], onset=onsets[i]) for i in range(h)]
    else:
        raise InvalidArgument(f"unknown transformation {kind!r}")
    return Motif(tuple(evs))


def mirror_arc(seq) -> list:
    """Palindrome ``s0 .. s_{H-1} .. s0`` of length ``2H - 1``."""
    seq = list(seq)
    h = len(seq)
    return [seq[h - 1 - abs(h - 1 - i)] for i in range(2 * h - 1)]


# -- permutations ------------------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    mapping: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.mapping)
        if sorted(m) != list(range(len(m))):
            raise InvalidArgument(f"{list(m)} is not a permutation of 0..{len(m) - 1}")
        object.__setattr__(self, "mapping", m)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles, n=None):
        """From cycle text like ``"(0 2 5)(3 4)"`` or a list of tuples."""
        if isinstance(cycles, str):
            cycles = parse_cycles(cycles)
        cycles = [tuple(c) for c in cycles]
        top = max((max(c) for c in cycles if c), default=-1) + 1
        n = top if n is None else n
        if top > n:
            raise InvalidArgument(f"cycle element {top - 1} out of range for n={n}")
        m = list(range(n))
        seen = set()
        for c in cycles:
            if seen & set(c) or len(set(c)) != len(c):
                raise InvalidArgument("cycles must be disjoint")
            seen |= set(c)
            for a, b in zip(c, c[1:] + c[:1]):
                m[a] = b
        return cls(tuple(m))

    def __len__(self):
        return len(self.mapping)

    def __getitem__(self, i):
        return self.mapping[i]

    def __mul__(self, other):
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, v in enumerate(self.mapping):
            inv[v] = i
        return Permutation(tuple(inv))

    def __pow__(self, k):
        k = int(k)
        base = self if k >= 0 else self.inverse()
        out = Permutation.identity(len(self))
        for _ in range(abs(k)):
            out = compose(out, base)
        return out

    def apply(self, seq):
        seq = list(seq)
        if len(seq) != len(self):
            raise InvalidArgument(f"sequence length {len(seq)} != permutation size {len(self)}")
        return [seq[v] for v in self.mapping]

    def cycles(self, include_fixed=False) -> list:
        seen = set()
        out = []
        for start in range(len(self)):
            if start in seen:
                continue
            c = [start]
            seen.add(start)
            nxt = self.mapping[start]
            while nxt != start:
                c.append(nxt)
                seen.add(nxt)
                nxt = self.mapping[nxt]
            if len(c) > 1 or include_fixed:
                out.append(tuple(c))
        return out

    def cycle_text(self) -> str:
        cs = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cs) or "()"

    def is_identity(self):
        return all(i == v for i, v in enumerate(self.mapping))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text) -> list:
    """Parse ``"(1 2 5)(3 4)"``; commas may separate elements."""
    pos = 0
    cycles = []
    stripped = text.strip()
    for m in _CYCLE_RE.finditer(stripped):
        gap = stripped[pos : m.start()]
        if gap.strip():
            raise ParseError(f"unexpected {gap.strip()!r} in cycle text", column=pos + 1)
        body = m.group(1).replace(",", " ").split()
        try:
            cycles.append(tuple(int(v) for v in body))
        except ValueError:
            raise ParseError(f"non-integer element in cycle ({m.group(1)})", column=m.start() + 1) from None
        pos = m.end()
    if stripped[pos:].strip():
        raise ParseError(f"unexpected {stripped[pos:].strip()!r} in cycle text", column=pos + 1)
    return [c for c in cycles if c]


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``(p o q)[i] = p[q[i]]``."""
    if len(p) != len(q):
        raise InvalidArgument(f"cannot compose permutations of size {len(p)} and {len(q)}")
    return Permutation(tuple(p.mapping[v] for v in q.mapping))


def order(p: Permutation) -> int:
    """Smallest ``k >= 1`` with ``p**k`` the identity."""
    return math.lcm(*[len(c) for c in p.cycles()]) if p.cycles() else 1


HUNT_PEAL_3 = (Permutation((1, 0, 2)), Permutation((0, 2, 1)))


def cycle_sequence(p, seed: Sequence) -> list:
    """Orderings visited by repeatedly applying ``p`` until ``seed`` returns.

    ``p`` may be a single permutation or a sequence of permutations
    applied in turn.  The result starts with ``seed`` and ends with it.
    """
    gens = [p] if isinstance(p, Permutation) else list(p)
    if not gens:
        raise InvalidArgument("need at least one permutation")
    n = len(seed)
    for g in gens:
        if len(g) != n:
            raise InvalidArgument(f"permutation size {len(g)} != seed length {n}")
    start = list(seed)
    out = [start]
    cur = start
    limit = math.factorial(n) * len(gens) + 1
    for step in range(limit):
        cur = gens[step % len(gens)].apply(cur)
        out.append(cur)
        if cur == start:
            return out
    raise RuntimeError("sequence did not return to the seed")  # cannot happen for finite groups


def apply_to_dimension(m: Motif, p: Permutation, dimension) -> Motif:
    """Permute one attribute over the first ``len(p)`` events."""
    if dimension not in ("pitch", "duration", "amplitude"):
        raise InvalidArgument(f"dimension must be pitch, duration or amplitude, got {dimension!r}")
    n = len(p)
    if n > len(m):
        raise InvalidArgument(f"permutation of size {n} longer than motif ({len(m)} events)")
    vals = p.apply(m.attribute(dimension)[:n])
    evs = list(m.events)
    for i in range(n):
        evs[i] = replace(evs[i], **{dimension: vals[i]})
    return Motif(tuple(evs))


# -- golden ratio ------------------------------------------------------------

def lucas_sequence(x0, x1, n) -> list:
    """``n`` terms of ``x_k = x_{k-1} + x_{k-2}``."""
    if n < 2:
        raise InvalidArgument("need at least two terms")
    out = [x0, x1]
    while len(out) < n:
        out.append(out[-1] + out[-2])
    return out


def golden_errors(x0, x1, count) -> list:
    """Percentage error of successive ratios ``x_{k+1}/x_k`` against the golden ratio."""
    seq = lucas_sequence(x0, x1, count + 1)
    return [100.0 * (b / a) / GOLDEN_RATIO - 100.0 for a, b in zip(seq, seq[1:])]
