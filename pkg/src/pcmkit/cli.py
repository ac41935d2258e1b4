"""Command line front end.

    pcmkit render SCORE -o OUT.wav [--normalize PEAK]
    pcmkit synth --freq 441 --dur 1 [--shape sine] [--adsr A,D,S,R] [--vibrato RATE,SEMI]
                 [--tremolo RATE,DB] -o OUT.wav
    pcmkit noise --color pink --seconds 2 --seed 0 -o OUT.wav
    pcmkit analyze FILE.wav
    pcmkit demo NAME -o OUT.wav | pcmkit demo --list | pcmkit demo NAME --print

Exit status: 0 on success, 1 for bad usage, 2 for bad data (missing or
malformed files, values out of range).  Messages go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .core import SampleBuffer, default_rate, normalize, power
from .errors import InvalidArgument, PcmError
from .modulation import AdsrSpec, OscillatorPattern, adsr, tremolo, vibrato
from .noise import COLORS, NoiseSpec, generate, manifest
from .oscillator import SHAPES, build_wavetable, synth_note
from .render.demos import DEMO_NAMES, demo_score, demo_text
from .render.engine import render
from .render.score import load_score
from .render.wav import read_wav, write_wav
from .spectral import forward, peak_frequency, slope_db_per_octave


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _pair(text):
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma separated numbers, got {text!r}")
    return a, b


def _quad(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != 4:
        raise argparse.ArgumentTypeError(f"expected A,D,S,R, got {text!r}")
    return vals


def build_parser():
    p = _Parser(prog="pcmkit", description="Sample-level synthesis and analysis.")
    p.add_argument("--version", action="version", version=f"pcmkit {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    r = sub.add_parser("render", help="render a score file to WAV")
    r.add_argument("score")
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--normalize", type=float, metavar="PEAK", help="scale the mix to this peak first")

    s = sub.add_parser("synth", help="render a single note")
    s.add_argument("--freq", type=float, required=True)
    s.add_argument("--dur", type=float, required=True)
    s.add_argument("--shape", choices=SHAPES, default="sine")
    s.add_argument("--amp", type=float, default=0.8)
    s.add_argument("--adsr", type=_quad, help="attack,decay,sustain,release")
    s.add_argument("--vibrato", type=_pair, help="rate_hz,semitones")
    s.add_argument("--tremolo", type=_pair, help="rate_hz,db")
    s.add_argument("--rate", type=int)
    s.add_argument("-o", "--output", required=True)

    n = sub.add_parser("noise", help="render colored noise")
    n.add_argument("--color", choices=[c for c in COLORS if c != "gray"], default="white")
    n.add_argument("--seconds", type=float, default=1.0)
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--beta", type=float, default=12.0)
    n.add_argument("--fmin", type=float, default=15.0)
    n.add_argument("--rate", type=int)
    n.add_argument("--peak", type=float, default=0.9)
    n.add_argument("-o", "--output", required=True)

    a = sub.add_parser("analyze", help="report pitch, spectral slope and level of a WAV file")
    a.add_argument("wav")
    a.add_argument("--band", type=_pair, default=(100.0, 10000.0), help="slope band lo,hi in Hz")

    d = sub.add_parser("demo", help="render a built-in showcase score")
    d.add_argument("name", nargs="?", choices=DEMO_NAMES)
    d.add_argument("-o", "--output")
    d.add_argument("--list", action="store_true")
    d.add_argument("--print", action="store_true", dest="print_text", help="print the score text")
    return p


def _emit(buf, path, out):
    info = write_wav(buf, path)
    print(f"wrote {info.path}: {info.frames} frames, {info.channels} ch, {info.rate} Hz", file=out)
    if info.clipped:
        print(f"warning: {info.clipped} samples clipped", file=sys.stderr)
    return info


def cmd_render(args, out):
    buf = render(load_score(args.score))
    if args.normalize is not None and len(buf):
        buf = normalize(buf, args.normalize)
    _emit(buf, args.output, out)


def cmd_synth(args, out):
    rate = args.rate or default_rate()
    table = build_wavetable(args.shape)
    if args.vibrato:
        rate_hz, nu = args.vibrato
        buf = vibrato(table, args.freq, args.dur, rate, OscillatorPattern(rate_hz), nu)
    else:
        buf = synth_note(table, args.freq, args.dur, rate)
    if args.tremolo:
        buf = tremolo(buf, OscillatorPattern(args.tremolo[0]), args.tremolo[1])
    if args.adsr:
        a, d, s, r = args.adsr
        buf = adsr(buf, AdsrSpec(a, d, r, s))
    _emit(buf.scaled(args.amp), args.output, out)


def cmd_noise(args, out):
    rate = args.rate or default_rate()
    spec = NoiseSpec(args.color, int(args.seconds * rate), rate, args.seed, f_min=args.fmin, beta=args.beta)
    buf = normalize(generate(spec), args.peak)
    _emit(buf, args.output, out)
    print(json.dumps(manifest(spec)), file=out)


def cmd_analyze(args, out):
    buf = read_wav(args.wav)
    if len(buf) < 4:
        raise InvalidArgument("file too short to analyze")
    mono = SampleBuffer(buf.data.mean(axis=0), buf.rate)
    p = power(mono)
    level = 10 * np.log10(p) if p > 0 else float("-inf")
    print(f"frames: {len(buf)}", file=out)
    print(f"channels: {buf.channels}", file=out)
    print(f"rate: {buf.rate}", file=out)
    print(f"power_db: {level:.3f}", file=out)
    if p == 0:
        return
    print(f"fundamental_hz: {peak_frequency(mono, f_min=20.0):.3f}", file=out)
    lo, hi = args.band
    hi = min(hi, buf.rate / 2)
    try:
        slope = slope_db_per_octave(forward(mono, method="fft"), lo, hi)
        print(f"slope_db_per_octave: {slope:.3f}", file=out)
    except InvalidArgument as exc:
        print(f"slope_db_per_octave: n/a ({exc})", file=out)


def cmd_demo(args, out):
    if args.list or not args.name:
        for name in DEMO_NAMES:
            print(name, file=out)
        return
    if args.print_text:
        out.write(demo_text(args.name))
        return
    if not args.output:
        raise UsageError("demo: -o/--output is required unless --list or --print is given")
    _emit(render(demo_score(args.name)), args.output, out)


COMMANDS = {"render": cmd_render, "synth": cmd_synth, "noise": cmd_noise,
            "analyze": cmd_analyze, "demo": cmd_demo}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("pcmkit: a command is required (render, synth, noise, analyze, demo)")
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return 0 if not exc.code else 1
    except (PcmError, OSError) as exc:
        print(f"pcmkit: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
