"""Score model, renderer, WAV files and demos."""

from .engine import apply_post, render, render_note
from .score import NoteSpec, PostStage, Score, load_score, parse_score, score_from_json
from .wav import WavFile, parse_wav, read_wav, wav_bytes, write_wav

__all__ = [
    "NoteSpec", "PostStage", "Score", "WavFile",
    "apply_post", "load_score", "parse_score", "parse_wav", "read_wav",
    "render", "render_note", "score_from_json", "wav_bytes", "write_wav",
]
