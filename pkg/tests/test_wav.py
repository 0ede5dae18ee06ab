from __future__ import annotations

import io
import struct
import wave

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from evoforge.errors import FormatError, ValidationError
from evoforge.synth import AudioClip, SynthesisRequest, synthesize
from evoforge.wav import decode_wav, encode_wav


def clip_of(samples, sr=22050) -> AudioClip:
    return AudioClip(samples=np.asarray(samples, dtype=np.int16), sample_rate=sr)


class TestEncode:
    def test_header_arithmetic(self):
        payload = encode_wav(clip_of(np.zeros(22050), sr=22050))
        assert payload[:4] == b"RIFF"
        assert struct.unpack_from("<I", payload, 4)[0] == 36 + 44100
        assert struct.unpack_from("<I", payload, 28)[0] == 44100  # byte rate
        assert struct.unpack_from("<I", payload, 40)[0] == 44100  # data size

    def test_silence_payload_is_zero(self):
        payload = encode_wav(clip_of(np.zeros(100)))
        assert payload[44:] == b"\x00" * 200

    def test_zero_samples_rejected(self):
        with pytest.raises(ValidationError):
            encode_wav(clip_of(np.array([], dtype=np.int16)))

    def test_stdlib_wave_parses_metadata(self):
        clip = synthesize(SynthesisRequest(embedding=np.zeros(256), text="one two"))
        payload = encode_wav(clip)
        with wave.open(io.BytesIO(payload)) as reader:
            assert reader.getnchannels() == 1
            assert reader.getsampwidth() == 2
            assert reader.getframerate() == clip.sample_rate
            assert reader.getnframes() == len(clip.samples)
            frames = reader.readframes(reader.getnframes())
        recovered = np.frombuffer(frames, dtype="<i2")
        np.testing.assert_array_equal(recovered, clip.samples)

    def test_round_trip_exact(self):
        rng = np.random.default_rng(5)
        samples = rng.integers(-32768, 32768, size=1000, dtype=np.int16)
        clip = clip_of(samples, sr=44100)
        back = decode_wav(encode_wav(clip))
        np.testing.assert_array_equal(back.samples, clip.samples)
        assert back.sample_rate == clip.sample_rate


@settings(max_examples=30, deadline=None)
@given(
    arrays(np.int16, st.integers(1, 400), elements=st.integers(-32768, 32767)),
    st.sampled_from([16000, 22050, 44100]),
)
def test_round_trip_property(samples, sr):
    clip = AudioClip(samples=samples, sample_rate=sr)
    back = decode_wav(encode_wav(clip))
    np.testing.assert_array_equal(back.samples, clip.samples)
    assert back.sample_rate == sr
    assert back.duration_ms == clip.duration_ms


class TestDecodeErrors:
    def test_truncated(self):
        payload = encode_wav(clip_of(np.zeros(10)))
        with pytest.raises(FormatError):
            decode_wav(payload[:20])

    def test_bad_magic(self):
        payload = bytearray(encode_wav(clip_of(np.zeros(10))))
        payload[0] = ord("X")
        with pytest.raises(FormatError) as err:
            decode_wav(bytes(payload))
        assert err.value.offset == 0

    def test_inconsistent_data_size(self):
        payload = bytearray(encode_wav(clip_of(np.zeros(10))))
        struct.pack_into("<I", payload, 40, 9999)
        with pytest.raises(FormatError):
            decode_wav(bytes(payload))
