import hashlib
import json
import struct
import wave
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pcmkit.core import SampleBuffer, concat, mix
from pcmkit.errors import EventError, InvalidArgument, ParseError
from pcmkit.oscillator import build_wavetable, synth_note
from pcmkit.render import (NoteSpec, Score, load_score, parse_score, parse_wav, read_wav, render, render_note,
                           score_from_json, wav_bytes, write_wav)
from pcmkit.render.wav import quantize
from pcmkit.render.demos import DEMO_NAMES, demo_score, demo_text

GOLDEN = Path(__file__).with_name("golden_hashes.json")


def header_fields(data):
    """Independent reading of the canonical 44-byte header."""
    f = struct.unpack("<4sI4s4sIHHIIHH4sI", data[:44])
    return dict(riff=f[0], size=f[1], wave=f[2], fmt=f[3], fmt_len=f[4], tag=f[5], channels=f[6], rate=f[7],
                byte_rate=f[8], align=f[9], bits=f[10], data=f[11], data_len=f[12])


def check_header(data):
    h = header_fields(data)
    assert (h["riff"], h["wave"], h["fmt"], h["data"]) == (b"RIFF", b"WAVE", b"fmt ", b"data")
    assert h["tag"] == 1 and h["bits"] == 16 and h["fmt_len"] == 16
    assert h["align"] == 2 * h["channels"] and h["byte_rate"] == h["rate"] * h["align"]
    assert h["data_len"] == len(data) - 44 and h["size"] == len(data) - 8
    return h


# -- score format -------------------------------------------------------------

class TestParse:
    def test_minimal(self):
        s = parse_score("note 0 441Hz 1\n")
        assert len(s.events) == 1
        onset, note = s.events[0]
        assert onset == 0 and note.frequency == 441 and note.duration == 1

    def test_pitch_spellings(self):
        s = parse_score("""
            meta ref=440 tonic=0
            note 0 eq12:69 1
            note 0 eq12:57 1
            note 0 eq24:70 1
            note 0 ionian:0@4 1
            note 0 ionian:7@4 1
            note 0 just:7 1
            note 0 pyth:4 1
            note 0 noise:pink 1
        """)
        f = [n.frequency for _, n in s.events]
        c4 = 440 * 2 ** (-9 / 12)
        assert f[0] == 440 and f[1] == pytest.approx(220) and f[2] == pytest.approx(440 * 2 ** (1 / 24))
        assert f[3] == pytest.approx(c4) and f[4] == pytest.approx(2 * c4)
        assert f[5] == pytest.approx(1.5 * c4) and f[6] == pytest.approx(c4 * 81 / 64)
        assert s.events[7][1].noise == "pink"

    def test_grid(self):
        s = parse_score("meta pulse=0.5 grid=-1:4,1:4\nnote @-1:2,0:1,1:1 441Hz 2u-1\n")
        onset, note = s.events[0]
        assert onset == pytest.approx(2.75) and note.duration == pytest.approx(0.25)

    def test_keys(self):
        s = parse_score("""
            table t samples=0,1,0,-1
            note 0 200Hz 1 table=t amp=-6dB adsr=0.1,0.1,0.5,0.1 env=linear vibrato=5,0.5 tremolo=3,6 am=4,0.2 pos=1,2 label=x
            note 0 200Hz 1 glide=400,linear
            note 0 200Hz 1 fm=50,30
            note 0 200Hz 1 doppler=10,2,-5,0
            post bandpass fc=0.1 bw=0.02
            post reverb first=0.05 total=0.3 decay=-30 color=pink
        """)
        n = s.events[0][1]
        assert n.amplitude == pytest.approx(10 ** (-6 / 20))
        assert n.envelope.sustain == 0.5 and n.envelope.mode == "linear"
        assert n.vibrato == (5, 0.5) and n.tremolo == (3, 6) and n.am == (4, 0.2)
        assert n.position.x == 1 and n.label == "x"
        assert n.waveform.samples.tolist() == [0, 1, 0, -1]
        assert s.events[1][1].glide.mode == "linear"
        assert s.events[3][1].doppler.f0 == 200
        assert [p.kind for p in s.post] == ["bandpass", "reverb"]
        assert s.post[1].get("color") == "pink"

    def test_comments_and_blank(self):
        assert len(parse_score("# nothing\n\n   \nnote 0 1Hz 1 # trailing\n").events) == 1

    @pytest.mark.parametrize("text,line,col,needle", [
        ("note 0 441Hz 1\nnote 0 blues:1@4 1", 2, 8, "blues"),
        ("note 0 441Hz", 1, None, "note needs"),
        ("note 0 30000Hz 1", 1, 8, "outside"),
        ("note 0 441Hz 1 wobble=3", 1, 16, "wobble"),
        ("note 0 441Hz 1 table=nope", 1, 16, "nope"),
        ("note -1 441Hz 1", 1, 6, "onset"),
        ("note 0 441Hz 0", 1, 14, "duration"),
        ("bogus 1 2", 1, 1, "bogus"),
        ("note 0 441Hz 1\nmeta rate=8000", 2, 1, "meta"),
        ("meta grid=-1:1", 1, 6, "factor"),
        ("post lowpass", 1, 6, "fc"),
        ("post phaser fc=1", 1, 6, "phaser"),
        ("note 0 441Hz 1 vibrato=5,1 fm=3,3", 1, 6, "only one"),
        ("note @0:x 441Hz 1", 1, 6, "grid address"),
        ("note 0 noise:gray 1", 1, 8, "gray"),
        ("note 0 441Hz 1 adsr=1,2,3", 1, 16, "adsr"),
    ])
    def test_errors(self, text, line, col, needle):
        with pytest.raises(ParseError) as info:
            parse_score(text)
        err = info.value
        assert err.line == line
        if col is not None:
            assert err.column == col
        assert needle in str(err)

    def test_json(self):
        doc = {"meta": {"rate": 22050, "seed": 3}, "tables": {"t": {"shape": "triangle", "len": 64}},
               "notes": [{"onset": 0, "pitch": "441Hz", "dur": 0.5, "table": "t", "adsr": [0.01, 0.01, 0.5, 0.01]}],
               "post": [{"kind": "lowpass", "fc": 0.2}]}
        s = score_from_json(json.dumps(doc))
        assert s.rate == 22050 and s.seed == 3 and len(s.events) == 1
        assert len(s.events[0][1].waveform) == 64

    def test_json_errors(self):
        with pytest.raises(ParseError):
            score_from_json("{")
        with pytest.raises(ParseError):
            score_from_json('{"notes": [{"onset": 0}]}')

    def test_load(self, tmp_path):
        p = tmp_path / "a.score"
        p.write_text("note 0 441Hz 1\n")
        assert len(load_score(p).events) == 1
        j = tmp_path / "a.json"
        j.write_text('{"notes": [{"onset": 0, "pitch": "441Hz", "dur": 1}]}')
        assert len(load_score(j).events) == 1

    def test_notespec_checks(self):
        with pytest.raises(InvalidArgument):
            NoteSpec(1.0)
        with pytest.raises(InvalidArgument):
            NoteSpec(0, frequency=100)
        with pytest.raises(InvalidArgument):
            Score(events=((-1.0, NoteSpec(1, frequency=100)),))


# -- WAV ----------------------------------------------------------------------

class TestWav:
    def test_quantization(self, tmp_path):
        info = write_wav(SampleBuffer([1.0, -1.0, 0.0, 0.5]), tmp_path / "q.wav")
        _, _, frames = parse_wav((tmp_path / "q.wav").read_bytes())
        assert frames[:, 0].tolist() == [32767, -32767, 0, 16384]
        assert info.clipped == 0

    def test_clipping_counted(self, tmp_path):
        info = write_wav(SampleBuffer([2.0, -3.0, 0.1]), tmp_path / "c.wav")
        _, _, frames = parse_wav((tmp_path / "c.wav").read_bytes())
        assert info.clipped == 2
        assert frames[:, 0].tolist() == [32767, -32768, 3277]

    def test_nan(self):
        # SampleBuffer already refuses NaN, so check the quantizer itself
        with pytest.raises(InvalidArgument):
            quantize(np.array([[0.0, np.nan]]))

    def test_header_and_stdlib(self, tmp_path, rng):
        x = SampleBuffer(rng.uniform(-1, 1, (2, 1000)), 22050)
        path = tmp_path / "s.wav"
        write_wav(x, path)
        data = path.read_bytes()
        h = check_header(data)
        assert h["channels"] == 2 and h["rate"] == 22050 and h["data_len"] == 4000
        with wave.open(str(path)) as w:
            assert (w.getnchannels(), w.getframerate(), w.getsampwidth(), w.getnframes()) == (2, 22050, 2, 1000)
            raw = np.frombuffer(w.readframes(1000), "<i2").reshape(-1, 2)
        np.testing.assert_array_equal(raw.T, np.round(x.data * 32767))

    def test_round_trip(self, tmp_path, rng):
        x = SampleBuffer(rng.uniform(-1, 1, 5000))
        write_wav(x, tmp_path / "r.wav")
        y = read_wav(tmp_path / "r.wav")
        assert y.rate == x.rate and y.channels == 1
        assert np.max(np.abs(y.samples - x.samples)) <= 1 / 32767

    @settings(max_examples=25, deadline=None)
    @given(arrays(np.float64, st.tuples(st.integers(1, 2), st.integers(0, 300)),
                  elements=st.floats(-1.5, 1.5, allow_nan=False)))
    def test_idempotent(self, tmp_path_factory, x):
        d = tmp_path_factory.mktemp("idem")
        images = []
        buf = SampleBuffer(x)
        for k in range(3):
            path = d / f"{k}.wav"
            write_wav(buf, path)
            images.append(path.read_bytes())
            buf = read_wav(path)
        # stable from the second write on; the first already is when nothing clipped
        assert images[1] == images[2]
        if np.all(np.abs(x) <= 1):
            assert images[0] == images[1]

    def test_read_stdlib_file(self, tmp_path):
        path = tmp_path / "w.wav"
        codes = np.array([0, 100, -32768, 32767], "<i2")
        with wave.open(str(path), "wb") as w:
            w.setnchannels(1)
            w.setsampwidth(2)
            w.setframerate(8000)
            w.writeframes(codes.tobytes())
        y = read_wav(path)
        assert y.rate == 8000
        np.testing.assert_allclose(y.samples, [0, 100 / 32767, -1.0, 1.0])

    def test_skips_unknown_chunks(self):
        data, _ = wav_bytes(SampleBuffer([0.5, -0.5]))
        extra = b"LIST" + struct.pack("<I", 3) + b"abc\x00"
        body = data[12:36] + extra + data[36:]
        image = b"RIFF" + struct.pack("<I", 4 + len(body)) + b"WAVE" + body
        _, _, frames = parse_wav(image)
        assert frames[:, 0].tolist() == [16384, -16384]

    @pytest.mark.parametrize("cut,offset", [(10, 10), (40, 36)])
    def test_truncated(self, cut, offset):
        data, _ = wav_bytes(SampleBuffer(np.zeros(10)))
        with pytest.raises(ParseError) as info:
            parse_wav(data[:cut])
        assert info.value.offset is not None

    def test_bad_magic_and_codec(self):
        data, _ = wav_bytes(SampleBuffer(np.zeros(4)))
        with pytest.raises(ParseError, match="RIFF"):
            parse_wav(b"RIFX" + data[4:])
        bad = bytearray(data)
        bad[20:22] = struct.pack("<H", 3)
        with pytest.raises(ParseError, match="codec") as info:
            parse_wav(bytes(bad))
        assert info.value.offset == 20

    def test_atomic_no_partial(self, tmp_path):
        path = tmp_path / "a.wav"
        write_wav(SampleBuffer([0.1]), path)
        assert not (tmp_path / "a.wav.part").exists()

    def test_write_error(self, tmp_path):
        with pytest.raises(OSError):
            write_wav(SampleBuffer([0.1]), tmp_path / "missing" / "x.wav")


# -- engine ---------------------------------------------------------------------

class TestEngine:
    def test_empty(self):
        out = render(Score())
        assert len(out) == 0

    def test_single_note(self):
        out = render(parse_score("note 0 441Hz 1\n"))
        assert len(out) == 44100 and out.channels == 1
        assert int(np.argmax(np.abs(np.fft.rfft(out.samples)))) == 441
        np.testing.assert_array_equal(out.samples, synth_note(build_wavetable(), 441, 1.0).samples)

    def test_linearity(self):
        both = render(parse_score("note 0 300Hz 0.5 amp=0.3\nnote 0.1 500Hz 0.5 shape=square amp=0.2\n"))
        a = render(parse_score("note 0 300Hz 0.5 amp=0.3\n"))
        b = render(parse_score("note 0.1 500Hz 0.5 shape=square amp=0.2\n"))
        b = SampleBuffer(np.concatenate([np.zeros(4410), b.samples[4410:]]), 44100)
        ref = mix([a, b])
        assert np.max(np.abs(both.samples - ref.samples)) <= 1e-12

    def test_disjoint_concat(self):
        notes = ["note 0 300Hz 0.25 adsr=0.01,0.01,0.5,0.01", "note 0.3 400Hz 0.2 shape=triangle",
                 "note 0.6 noise:brown 0.1"]
        full = render(parse_score("meta seed=4\n" + "\n".join(notes)))
        pieces = []
        t = 0
        for k, line in enumerate(notes):
            onset, note = parse_score(line).events[0]
            start = round(onset * 44100)
            pieces.append(SampleBuffer(np.zeros(start - t)))
            part = render_note(note, 44100, seed=4 + k)
            pieces.append(part)
            t = start + len(part)
        ref = concat(pieces)
        assert len(full) == len(ref)
        assert np.max(np.abs(full.samples - ref.samples)) <= 1e-12

    def test_stereo_promotion(self):
        out = render(parse_score("note 0 300Hz 0.1\nnote 0 300Hz 0.1 pos=0,1\n"))
        assert out.channels == 2
        np.testing.assert_allclose(out.channel(0), out.channel(1))

    def test_deterministic(self):
        text = demo_text("noise")
        a = render(parse_score(text))
        b = render(parse_score(text))
        np.testing.assert_array_equal(a.data, b.data)

    def test_event_error(self):
        s = parse_score("note 0 300Hz 0.1\nnote 0 10000Hz 0.1 vibrato=5,24\n")
        with pytest.raises(EventError) as info:
            render(s)
        assert info.value.index == 1

    def test_post_chain(self):
        s = parse_score("note 0 noise:white 0.2\npost lowpass fc=0.01\npost normalize peak=0.5\n")
        out = render(s)
        assert out.peak() == pytest.approx(0.5)

    def test_reverb_post_grows(self):
        out = render(parse_score("note 0 441Hz 0.1\npost reverb first=0.01 total=0.1\n"))
        assert len(out) == 4410 + 4410 - 1


# -- demos ----------------------------------------------------------------------

def _demo_hash(name):
    data, _ = wav_bytes(render(demo_score(name)))
    return hashlib.sha256(data).hexdigest(), data


class TestDemos:
    def test_all_listed(self):
        assert len(DEMO_NAMES) == 10

    @pytest.mark.parametrize("name", DEMO_NAMES)
    def test_golden(self, name):
        digest, data = _demo_hash(name)
        check_header(data)
        golden = json.loads(GOLDEN.read_text())
        assert digest == golden[name]

    @pytest.mark.parametrize("name", DEMO_NAMES)
    def test_text_round_trip(self, name):
        text = demo_text(name)
        assert parse_score(text).events
