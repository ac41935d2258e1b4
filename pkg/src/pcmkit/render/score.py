"""Score model and the line-oriented score format.

Example::

    # two notes and a reverb
    meta rate=44100 pulse=0.5 ref=440 seed=7 grid=-1:4,1:4
    table buzz shape=sawtooth len=512
    note 0        441Hz       1.0   shape=sine amp=0.5 adsr=0.01,0.1,0.7,0.2
    note @0:2     eq12:64     1u0   table=buzz amp=-6dB vibrato=5,0.5 pos=1,1
    note 1.5      ionian:4@4  0.5   tremolo=4,6
    note 2        noise:pink  0.5   amp=0.3
    post lowpass fc=0.2
    post reverb first=0.05 total=0.8 decay=-40

Records
    ``meta``   rate, pulse, ref (Hz of ``refstep``), refstep (default 69),
               tonic (pitch class 0-11 for scale pitches), seed, grid
               (``level:factor`` pairs), tuning (equal/just/pythagorean)
    ``table``  named wavetable: ``shape=`` and ``len=``, or ``samples=a,b,...``
    ``note``   ``note <onset> <pitch> <duration> [key=value ...]``
    ``post``   ``lowpass|highpass fc=``, ``bandpass|bandreject fc= bw=``,
               ``reverb first= total= decay= color=``, ``normalize peak=``

Onsets are seconds or a grid address ``@level:index,...`` (0-based).
Durations are seconds or ``<count>u<level>``, a number of grid units.

Pitches
    ``441Hz``            literal frequency
    ``eq12:57``          equal temperament step; ``ref`` sits at ``refstep``
    ``just:4``/``pyth:4`` steps above the tonic in just or Pythagorean tuning
    ``ionian:3@4``       0-based scale degree, octave 4 holds middle C
    ``noise:<color>``    colored noise instead of a tone

Note keys
    shape, table, amp (linear or ``-6dB``), adsr=A,D,S,R, env=linear|exponential,
    vibrato=rate,semitones, tremolo=rate,dB, fm=rate,deviation_Hz,
    am=rate,index, glide=end_Hz[,linear], pos=x,y, doppler=y0,z0,v_source,v_receiver
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Optional

from ..core import check_rate
from ..errors import InvalidArgument, ParseError
from ..modulation import AdsrSpec
from ..noise import COLORS
from ..oscillator import SHAPES, GlideSpec, WaveTable, build_wavetable, from_sampled_period
from ..spatial import DopplerPath, SourcePosition
from ..structure import RhythmGrid, resolve_grid
from ..theory import SCALES, Tuning, degree_frequency, make_scale

POST_KINDS = ("lowpass", "highpass", "bandpass", "bandreject", "reverb", "normalize")


@dataclass(frozen=True)
class NoteSpec:
    duration: float
    frequency: Optional[float] = None
    noise: Optional[str] = None
    amplitude: float = 1.0
    waveform: WaveTable = field(default_factory=lambda: build_wavetable("sine"))
    envelope: Optional[AdsrSpec] = None
    vibrato: Optional[tuple] = None  # (rate Hz, semitones)
    tremolo: Optional[tuple] = None  # (rate Hz, dB)
    fm: Optional[tuple] = None  # (rate Hz, deviation Hz)
    am: Optional[tuple] = None  # (rate Hz, index)
    glide: Optional[GlideSpec] = None
    position: Optional[SourcePosition] = None
    doppler: Optional[DopplerPath] = None
    label: str = ""

    def __post_init__(self):
        if not self.duration > 0:
            raise InvalidArgument(f"duration must be > 0, got {self.duration}")
        if (self.frequency is None) == (self.noise is None):
            raise InvalidArgument("a note needs either a frequency or a noise color")
        pitch_mods = [m for m in ("vibrato", "fm", "glide", "doppler") if getattr(self, m) is not None]
        if len(pitch_mods) > 1:
            raise InvalidArgument(f"only one of vibrato/fm/glide/doppler per note, got {pitch_mods}")
        if self.noise is not None and pitch_mods:
            raise InvalidArgument("noise notes take no pitch modulation")


@dataclass(frozen=True)
class PostStage:
    kind: str
    params: tuple = ()  # sorted (key, value) pairs

    def get(self, key, default=None):
        return dict(self.params).get(key, default)


@dataclass(frozen=True)
class Score:
    rate: int = 44100
    events: tuple = ()  # (onset seconds, NoteSpec)
    post: tuple = ()
    seed: int = 0
    grid: Optional[RhythmGrid] = None

    def __post_init__(self):
        check_rate(self.rate)
        for onset, _ in self.events:
            if not onset >= 0:
                raise InvalidArgument(f"onsets must be >= 0, got {onset}")


@dataclass
class _Meta:
    rate: int = 44100
    pulse: float = 0.5
    ref: float = 440.0
    refstep: float = 69.0
    tonic: int = 0
    seed: int = 0
    tuning: str = "equal"
    grid: dict = field(default_factory=dict)

    def rhythm(self):
        return RhythmGrid(self.pulse, dict(self.grid))


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_HZ_RE = re.compile(rf"^({_NUM})hz$", re.I)
_EQ_RE = re.compile(rf"^eq(\d+):({_NUM})$")
_TUNE_RE = re.compile(r"^(just|pyth):(-?\d+)$")
_SCALE_RE = re.compile(r"^([a-z][a-z-]*):(-?\d+)@(-?\d+)$")
_UNITS_RE = re.compile(rf"^({_NUM})u(-?\d+)$")


class _Ctx:
    """Position bookkeeping for error messages."""

    def __init__(self, line, col):
        self.line = line
        self.col = col

    def fail(self, msg):
        raise ParseError(msg, line=self.line, column=self.col)


def _num(text, ctx, what="number"):
    try:
        v = float(text)
    except ValueError:
        ctx.fail(f"expected a {what}, got {text!r}")
    if not math.isfinite(v):
        ctx.fail(f"{what} must be finite")
    return v


def _nums(text, ctx, count=None, what="value"):
    parts = text.split(",")
    if count is not None and len(parts) not in (count if isinstance(count, tuple) else (count,)):
        ctx.fail(f"{what} expects {count} comma separated numbers, got {text!r}")
    return [_num(p, ctx, what) for p in parts]


def _pitch(text, meta, ctx):
    """Return ``(frequency, noise_color)``."""
    low = text.lower()
    m = _HZ_RE.match(low)
    if m:
        return _num(m.group(1), ctx, "frequency"), None
    m = _EQ_RE.match(low)
    if m:
        n = int(m.group(1))
        if n < 1:
            ctx.fail("equal temperament needs at least 1 step per octave")
        steps = _num(m.group(2), ctx)
        return meta.ref * 2.0 ** ((steps - meta.refstep) / n), None
    m = _TUNE_RE.match(low)
    if m:
        kind = "just" if m.group(1) == "just" else "pythagorean"
        return degree_frequency(Tuning(kind, 12, _tonic_hz(meta)), int(m.group(2))), None
    if low.startswith("noise:"):
        color = low.split(":", 1)[1]
        if color not in COLORS or color == "gray":
            ctx.fail(f"unknown noise color {color!r}")
        return None, color
    m = _SCALE_RE.match(low)
    if m:
        name = m.group(1)
        if name not in SCALES:
            ctx.fail(f"unknown scale {name!r}")
        try:
            step = make_scale(name).step(int(m.group(2)))
        except InvalidArgument as exc:
            ctx.fail(str(exc))
        midi = 12 * (int(m.group(3)) + 1) + meta.tonic + step
        if meta.tuning == "equal":
            return meta.ref * 2.0 ** ((midi - meta.refstep) / 12.0), None
        ctx.fail("scale pitches need tuning=equal")
    ctx.fail(f"cannot read pitch {text!r}")


def _tonic_hz(meta):
    # tonic pitch class in the octave holding middle C
    return meta.ref * 2.0 ** ((60 + meta.tonic - meta.refstep) / 12.0)


def _onset(text, meta, ctx):
    if text.startswith("@"):
        addr = []
        for part in text[1:].split(","):
            try:
                j, i = part.split(":")
                addr.append((int(j), int(i)))
            except ValueError:
                ctx.fail(f"bad grid address {text!r}; expected @level:index,...")
        try:
            return resolve_grid(meta.rhythm(), addr)
        except InvalidArgument as exc:
            ctx.fail(str(exc))
    v = _num(text, ctx, "onset")
    if v < 0:
        ctx.fail("onset must be >= 0")
    return v


def _duration(text, meta, ctx):
    m = _UNITS_RE.match(text)
    if m:
        v = float(m.group(1)) * meta.rhythm().unit(int(m.group(2)))
    else:
        v = _num(text, ctx, "duration")
    if not v > 0:
        ctx.fail("duration must be > 0")
    return v


def _amp(text, ctx):
    if text.lower().endswith("db"):
        return 10.0 ** (_num(text[:-2], ctx, "level") / 20.0)
    return _num(text, ctx, "amplitude")


def _tokens(line):
    """``(column, token)`` pairs, 1-based columns."""
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]


def _keyvals(tokens, lineno, allowed):
    out = {}
    for col, tok in tokens:
        ctx = _Ctx(lineno, col)
        if "=" not in tok:
            ctx.fail(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        if k not in allowed:
            ctx.fail(f"unknown key {k!r}")
        if k in out:
            ctx.fail(f"duplicate key {k!r}")
        out[k] = (v, ctx)
    return out


_META_KEYS = {"rate", "pulse", "ref", "refstep", "tonic", "seed", "grid", "tuning"}
_NOTE_KEYS = {"shape", "table", "amp", "adsr", "env", "vibrato", "tremolo", "fm", "am",
              "glide", "pos", "doppler", "label"}
_POST_KEYS = {"fc", "bw", "first", "total", "decay", "color", "seed", "peak"}


def _apply_meta(meta, kv):
    for k, (v, ctx) in kv.items():
        if k == "rate":
            r = _num(v, ctx, "rate")
            if r != int(r) or r < 2:
                ctx.fail("rate must be an integer >= 2")
            meta.rate = int(r)
        elif k in ("pulse", "ref", "refstep"):
            x = _num(v, ctx, k)
            if k != "refstep" and not x > 0:
                ctx.fail(f"{k} must be > 0")
            setattr(meta, k, x)
        elif k in ("tonic", "seed"):
            x = _num(v, ctx, k)
            if x != int(x):
                ctx.fail(f"{k} must be an integer")
            setattr(meta, k, int(x) % 12 if k == "tonic" else int(x))
        elif k == "tuning":
            if v not in ("equal", "just", "pythagorean"):
                ctx.fail(f"unknown tuning {v!r}")
            meta.tuning = v
        elif k == "grid":
            g = {}
            for part in v.split(","):
                try:
                    j, f = part.split(":")
                    g[int(j)] = int(f)
                except ValueError:
                    ctx.fail(f"bad grid entry {part!r}; expected level:factor")
            meta.grid = g
            try:
                meta.rhythm()
            except InvalidArgument as exc:
                ctx.fail(str(exc))


def _table(tokens, lineno):
    if not tokens:
        raise ParseError("table needs a name", line=lineno)
    col, name = tokens[0]
    kv = _keyvals(tokens[1:], lineno, {"shape", "len", "samples"})
    ctx = _Ctx(lineno, col)
    if "samples" in kv:
        v, c = kv["samples"]
        try:
            return name, from_sampled_period(_nums(v, c, what="samples"))
        except InvalidArgument as exc:
            c.fail(str(exc))
    shape = kv.get("shape", ("sine", ctx))[0]
    if shape not in SHAPES:
        ctx.fail(f"unknown shape {shape!r}")
    n = 1024
    if "len" in kv:
        v, c = kv["len"]
        n = _num(v, c, "length")
        if n != int(n) or n < 2:
            c.fail("table length must be an integer >= 2")
    return name, build_wavetable(shape, int(n))


def _note(tokens, lineno, meta, tables):
    if len(tokens) < 3:
        raise ParseError("note needs <onset> <pitch> <duration>", line=lineno,
                         column=tokens[-1][0] if tokens else None)
    (c0, t0), (c1, t1), (c2, t2) = tokens[:3]
    onset = _onset(t0, meta, _Ctx(lineno, c0))
    freq, noise = _pitch(t1, meta, _Ctx(lineno, c1))
    dur = _duration(t2, meta, _Ctx(lineno, c2))
    kv = _keyvals(tokens[3:], lineno, _NOTE_KEYS)
    args = dict(duration=dur, frequency=freq, noise=noise)
    if freq is not None and not 0 < freq < meta.rate / 2:
        _Ctx(lineno, c1).fail(f"pitch {freq:.2f} Hz is outside (0, {meta.rate / 2}) Hz")
    if "shape" in kv and "table" in kv:
        kv["table"][1].fail("give shape or table, not both")
    if "shape" in kv:
        v, c = kv["shape"]
        if v not in SHAPES:
            c.fail(f"unknown shape {v!r}")
        args["waveform"] = build_wavetable(v)
    if "table" in kv:
        v, c = kv["table"]
        if v not in tables:
            c.fail(f"unknown table {v!r}")
        args["waveform"] = tables[v]
    if "amp" in kv:
        args["amplitude"] = _amp(*kv["amp"])
    mode = "exponential"
    if "env" in kv:
        mode, c = kv["env"]
        if mode not in ("linear", "exponential"):
            c.fail(f"env must be linear or exponential, got {mode!r}")
    if "adsr" in kv:
        v, c = kv["adsr"]
        a, d, s, r = _nums(v, c, 4, "adsr")
        try:
            args["envelope"] = AdsrSpec(a, d, r, s, mode)
        except InvalidArgument as exc:
            c.fail(str(exc))
    for key in ("vibrato", "tremolo", "fm", "am"):
        if key in kv:
            args[key] = tuple(_nums(*kv[key], 2, key))
    if "glide" in kv:
        v, c = kv["glide"]
        parts = v.split(",")
        gmode = parts[1] if len(parts) > 1 else "exponential"
        if len(parts) > 2 or gmode not in ("linear", "exponential"):
            c.fail("glide expects end_Hz[,linear|exponential]")
        args["glide"] = GlideSpec(freq, _num(parts[0], c, "glide end"), gmode)
    if "pos" in kv:
        v, c = kv["pos"]
        x, y = _nums(v, c, 2, "pos")
        args["position"] = SourcePosition(x, y)
    if "doppler" in kv:
        v, c = kv["doppler"]
        y0, z0, vs, vr = _nums(v, c, 4, "doppler")
        try:
            args["doppler"] = DopplerPath(y0, z0, vs, vr, freq)
        except InvalidArgument as exc:
            c.fail(str(exc))
    if "label" in kv:
        args["label"] = kv["label"][0]
    try:
        return onset, NoteSpec(**args)
    except InvalidArgument as exc:
        raise ParseError(str(exc), line=lineno, column=c0) from None


def _post(tokens, lineno):
    if not tokens:
        raise ParseError("post needs a stage name", line=lineno)
    col, kind = tokens[0]
    ctx = _Ctx(lineno, col)
    if kind not in POST_KINDS:
        ctx.fail(f"unknown post stage {kind!r}")
    kv = _keyvals(tokens[1:], lineno, _POST_KEYS)
    params = {}
    for k, (v, c) in kv.items():
        params[k] = v if k == "color" else _num(v, c, k)
    need = {"lowpass": ("fc",), "highpass": ("fc",), "bandpass": ("fc", "bw"),
            "bandreject": ("fc", "bw"), "reverb": (), "normalize": ()}[kind]
    for k in need:
        if k not in params:
            ctx.fail(f"{kind} needs {k}=")
    return PostStage(kind, tuple(sorted(params.items())))


def parse_score(text) -> Score:
    """Parse score text into a :class:`Score`.  Errors carry line and column."""
    meta = _Meta()
    tables = {}
    events = []
    post = []
    seen_note = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        col, head = toks[0]
        rest = toks[1:]
        if head == "meta":
            if seen_note:
                raise ParseError("meta must come before notes", line=lineno, column=col)
            _apply_meta(meta, _keyvals(rest, lineno, _META_KEYS))
        elif head == "table":
            name, tab = _table(rest, lineno)
            tables[name] = tab
        elif head == "note":
            seen_note = True
            events.append(_note(rest, lineno, meta, tables))
        elif head == "post":
            post.append(_post(rest, lineno))
        else:
            raise ParseError(f"unknown record {head!r}", line=lineno, column=col)
    grid = meta.rhythm()
    return Score(meta.rate, tuple(events), tuple(post), meta.seed, grid)


def score_from_json(text) -> Score:
    """Structured alternative to the text format.

    ``{"meta": {...}, "tables": {"name": {...}}, "notes": [{"onset": 0,
    "pitch": "441Hz", "dur": 1, ...}], "post": [{"kind": "lowpass", "fc": 0.1}]}``

    Values use the same spelling as in the text format.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", line=1, column=1)

    def kv(d):
        return " ".join(f"{k}={_join(v)}" for k, v in d.items())

    lines = []
    if "meta" in doc:
        lines.append("meta " + kv(doc["meta"]))
    for name, spec in doc.get("tables", {}).items():
        lines.append(f"table {name} " + kv(spec))
    for i, n in enumerate(doc.get("notes", [])):
        n = dict(n)
        try:
            head = f"note {_join(n.pop('onset'))} {n.pop('pitch')} {_join(n.pop('dur'))}"
        except KeyError as exc:
            raise ParseError(f"note {i} lacks {exc.args[0]!r}") from None
        lines.append(head + " " + kv(n))
    for st in doc.get("post", []):
        st = dict(st)
        lines.append(f"post {st.pop('kind', '')} " + kv(st))
    return parse_score("\n".join(lines))


def _join(v):
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


def load_score(path) -> Score:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return score_from_json(text)
    return parse_score(text)
