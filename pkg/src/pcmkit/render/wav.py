"""16-bit PCM WAVE files.

Layout written (all integers little-endian)::

    offset size  field
    0      4     "RIFF"
    4      4     36 + data bytes
    8      4     "WAVE"
    12     4     "fmt "
    16     4     16
    20     2     1 (PCM)
    22     2     channels
    24     4     sample rate
    28     4     byte rate = rate * channels * 2
    32     2     block align = channels * 2
    34     2     16 (bits per sample)
    36     4     "data"
    40     4     data bytes
    44     ...   interleaved int16 frames

Writing maps ``x`` to ``round(x * 32767)``; reading divides by 32767, so
a value survives a round trip to within half a quantization step.
The reader walks chunks and skips any it does not know.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

import numpy as np

from ..core import SampleBuffer, as_buffer
from ..errors import InvalidArgument, ParseError

FULL_SCALE = 32767


@dataclass(frozen=True)
class WavFile:
    path: str
    rate: int
    channels: int
    frames: int
    bits: int = 16
    clipped: int = 0


def quantize(data) -> tuple:
    """int16 codes for float samples and the number of clipped samples."""
    x = np.asarray(data, dtype=np.float64)
    if np.any(np.isnan(x)):
        raise InvalidArgument("cannot write NaN samples")
    clipped = int(np.count_nonzero(np.abs(x) > 1.0))
    q = np.clip(np.round(x * FULL_SCALE), -32768, 32767).astype("<i2")
    return q, clipped


def wav_bytes(buf: SampleBuffer) -> tuple:
    """Complete file image and clip count."""
    buf = as_buffer(buf)
    q, clipped = quantize(buf.data)
    payload = q.T.reshape(-1).tobytes()  # frame-interleaved
    ch = buf.channels
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(payload), b"WAVE",
        b"fmt ", 16, 1, ch, buf.rate, buf.rate * ch * 2, ch * 2, 16,
        b"data", len(payload),
    )
    return header + payload, clipped


def write_wav(buf, path) -> WavFile:
    """Write ``buf`` as 16-bit PCM.  Samples beyond [-1, 1] are clamped and counted."""
    buf = as_buffer(buf)
    data, clipped = wav_bytes(buf)
    tmp = f"{path}.part"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
    return WavFile(str(path), buf.rate, buf.channels, len(buf), 16, clipped)


def parse_wav(data: bytes):
    """Decode a file image into ``(rate, channels, int16 frames)``."""
    if len(data) < 12:
        raise ParseError("file shorter than a RIFF header", offset=len(data))
    riff, size, wave = struct.unpack_from("<4sI4s", data, 0)
    if riff != b"RIFF":
        raise ParseError(f"expected 'RIFF', found {riff!r}", offset=0)
    if wave != b"WAVE":
        raise ParseError(f"expected 'WAVE', found {wave!r}", offset=8)
    if size + 8 > len(data):
        raise ParseError(f"RIFF size {size} runs past end of file ({len(data)} bytes)", offset=4)
    pos = 12
    fmt = None
    while pos < len(data):
        if pos + 8 > len(data):
            raise ParseError("truncated chunk header", offset=pos)
        cid, clen = struct.unpack_from("<4sI", data, pos)
        body = pos + 8
        if body + clen > len(data):
            raise ParseError(f"chunk {cid!r} of {clen} bytes runs past end of file", offset=pos + 4)
        if cid == b"fmt ":
            if clen < 16:
                raise ParseError("fmt chunk too short", offset=pos + 4)
            tag, ch, rate, brate, align, bits = struct.unpack_from("<HHIIHH", data, body)
            if tag != 1:
                raise ParseError(f"unsupported codec {tag} (only PCM 1)", offset=body)
            if bits != 16:
                raise ParseError(f"unsupported bit depth {bits}", offset=body + 14)
            if ch not in (1, 2):
                raise ParseError(f"unsupported channel count {ch}", offset=body + 2)
            if align != ch * 2 or brate != rate * align:
                raise ParseError("inconsistent block align / byte rate", offset=body + 8)
            fmt = (rate, ch)
        elif cid == b"data":
            if fmt is None:
                raise ParseError("data chunk before fmt chunk", offset=pos)
            rate, ch = fmt
            if clen % (2 * ch):
                raise ParseError(f"data size {clen} is not a whole number of frames", offset=pos + 4)
            frames = np.frombuffer(data, dtype="<i2", count=clen // 2, offset=body).reshape(-1, ch)
            return rate, ch, frames
        pos = body + clen + (clen & 1)
    raise ParseError("no data chunk", offset=len(data))


def read_wav(path) -> SampleBuffer:
    with open(path, "rb") as fh:
        data = fh.read()
    rate, ch, frames = parse_wav(data)
    x = frames.T.astype(np.float64) / FULL_SCALE
    np.clip(x, -1.0, 1.0, out=x)
    return SampleBuffer(x, rate)
