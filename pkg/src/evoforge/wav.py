"""Canonical RIFF/WAVE encoding for mono 16-bit PCM clips.

Layout (all integers little-endian):

    offset  size  field
    0       4     "RIFF"
    4       4     chunk size = 36 + data size
    8       4     "WAVE"
    12      4     "fmt "
    16      4     16 (PCM fmt chunk size)
    20      2     format code 1 (PCM)
    22      2     channels = 1
    24      4     sample rate
    28      4     byte rate = sample rate * 2
    32      2     block align = 2
    34      2     bits per sample = 16
    36      4     "data"
    40      4     data size = 2 * sample count
    44      ...   samples, int16 LE
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import FormatError, ValidationError
from .synth import AudioClip

_HEADER = struct.Struct("<4sI4s4sIHHIIHH4sI")


def encode_wav(clip: AudioClip) -> bytes:
    if clip.samples.shape[0] == 0:
        raise ValidationError("cannot encode a clip with zero samples")
    data = clip.samples.astype("<i2").tobytes()
    header = _HEADER.pack(
        b"RIFF",
        36 + len(data),
        b"WAVE",
        b"fmt ",
        16,
        1,
        1,
        clip.sample_rate,
        clip.sample_rate * 2,
        2,
        16,
        b"data",
        len(data),
    )
    return header + data


def decode_wav(payload: bytes) -> AudioClip:
    """Strict parser for the canonical layout produced by :func:`encode_wav`."""
    if len(payload) < _HEADER.size:
        raise FormatError("truncated WAV header", offset=len(payload))
    (
        riff,
        chunk_size,
        wave_tag,
        fmt_tag,
        fmt_size,
        fmt_code,
        channels,
        sample_rate,
        byte_rate,
        block_align,
        bits,
        data_tag,
        data_size,
    ) = _HEADER.unpack_from(payload)
    if riff != b"RIFF":
        raise FormatError("missing RIFF magic", offset=0)
    if wave_tag != b"WAVE":
        raise FormatError("missing WAVE tag", offset=8)
    if fmt_tag != b"fmt " or fmt_size != 16 or fmt_code != 1:
        raise FormatError("not canonical PCM fmt chunk", offset=12)
    if channels != 1 or bits != 16 or block_align != 2:
        raise FormatError("expected mono 16-bit PCM", offset=22)
    if byte_rate != sample_rate * 2:
        raise FormatError("inconsistent byte rate", offset=28)
    if data_tag != b"data":
        raise FormatError("missing data chunk", offset=36)
    if chunk_size != 36 + data_size:
        raise FormatError("inconsistent RIFF chunk size", offset=4)
    if len(payload) != _HEADER.size + data_size:
        raise FormatError("data size does not match payload length", offset=40)
    samples = np.frombuffer(payload, dtype="<i2", offset=_HEADER.size).astype(np.int16)
    return AudioClip(samples=samples, sample_rate=sample_rate)
