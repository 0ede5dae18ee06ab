from __future__ import annotations

import numpy as np
import pytest

from evoforge import corpus, pca
from evoforge.errors import NotFoundError, ValidationError
from evoforge.synth import (
    BASE_SEGMENT_MS,
    F0_RANGE,
    FORMANT_RANGES,
    GAP_MS,
    ParametricBackend,
    SynthesisRequest,
    VoiceParams,
    control_directions,
    embedding_to_params,
    get_backend,
    synthesize,
)

from .oracles import track_pitch


def straight_line_params(embedding: np.ndarray) -> dict:
    """Independent reimplementation of the embedding -> params map."""
    dirs = control_directions()
    s = [float(np.dot(d, embedding)) for d in dirs]

    def squash(x, lo, hi, scale):
        return lo + (hi - lo) / (1.0 + np.exp(-x / scale))

    return {
        "f0_hz": squash(s[0], 75, 400, 2.0),
        "formants_hz": (
            squash(s[1], 300, 900, 2.0),
            squash(s[2], 950, 2200, 4.0),
            squash(s[3], 2250, 3400, 4.0),
        ),
        "breathiness": squash(s[4], 0, 1, 2.0),
        "speech_rate": squash(s[5], 0.7, 1.4, 2.0),
        "vibrato_depth": squash(s[0], 0, 0.05, 2.0),
    }


class TestControlMap:
    def test_zero_embedding_midpoints(self):
        p = embedding_to_params(np.zeros(256))
        assert p.f0_hz == pytest.approx((75 + 400) / 2)
        assert p.formants_hz[0] == pytest.approx(600)
        assert p.formants_hz[1] == pytest.approx(1575)
        assert p.formants_hz[2] == pytest.approx(2825)
        assert p.breathiness == pytest.approx(0.5)
        assert p.speech_rate == pytest.approx(1.05)
        assert p.vibrato_depth == pytest.approx(0.025)

    def test_null_space_invariance(self):
        rng = np.random.default_rng(21)
        dirs = control_directions()
        e = rng.standard_normal(256)
        v = rng.standard_normal(256)
        for _ in range(2):  # double projection drives residual to fp noise
            v -= dirs.T @ (dirs @ v)
        a, b = embedding_to_params(e), embedding_to_params(e + 5.0 * v)
        assert a.f0_hz == pytest.approx(b.f0_hz, abs=1e-9)
        assert a.formants_hz == pytest.approx(b.formants_hz, abs=1e-9)
        assert a.breathiness == pytest.approx(b.breathiness, abs=1e-12)
        assert a.speech_rate == pytest.approx(b.speech_rate, abs=1e-12)
        assert a.vibrato_depth == pytest.approx(b.vibrato_depth, abs=1e-12)

    def test_matches_straight_line_oracle(self):
        rng = np.random.default_rng(22)
        for _ in range(100):
            e = rng.standard_normal(256) * 2.0
            got = embedding_to_params(e)
            want = straight_line_params(e)
            assert got.f0_hz == pytest.approx(want["f0_hz"], abs=1e-12)
            for g, w in zip(got.formants_hz, want["formants_hz"]):
                assert g == pytest.approx(w, abs=1e-12)
            assert got.breathiness == pytest.approx(want["breathiness"], abs=1e-12)
            assert got.speech_rate == pytest.approx(want["speech_rate"], abs=1e-12)
            assert got.vibrato_depth == pytest.approx(want["vibrato_depth"], abs=1e-12)

    def test_monotone_in_each_score(self):
        dirs = control_directions()
        base = embedding_to_params(np.zeros(256))
        up_f0 = embedding_to_params(1.5 * dirs[0])
        assert up_f0.f0_hz > base.f0_hz
        assert up_f0.vibrato_depth > base.vibrato_depth
        for i, attr in [(1, 0), (2, 1), (3, 2)]:
            up = embedding_to_params(1.5 * dirs[i])
            assert up.formants_hz[attr] > base.formants_hz[attr]
        assert embedding_to_params(1.5 * dirs[4]).breathiness > base.breathiness
        assert embedding_to_params(1.5 * dirs[5]).speech_rate > base.speech_rate

    def test_lipschitz_continuity(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            e = rng.standard_normal(256)
            delta = rng.standard_normal(256)
            delta *= 1e-6 / np.linalg.norm(delta)
            a, b = embedding_to_params(e), embedding_to_params(e + delta)
            assert abs(a.f0_hz - b.f0_hz) <= 1e-4
            for fa, fb in zip(a.formants_hz, b.formants_hz):
                assert abs(fa - fb) <= 1e-4
            assert abs(a.breathiness - b.breathiness) <= 1e-4
            assert abs(a.speech_rate - b.speech_rate) <= 1e-4
            assert abs(a.vibrato_depth - b.vibrato_depth) <= 1e-4

    def test_ranges_always_respected(self):
        rng = np.random.default_rng(24)
        for scale in (0.1, 1.0, 10.0, 1000.0):
            p = embedding_to_params(rng.standard_normal(256) * scale)
            assert 75 <= p.f0_hz <= 400
            assert all(200 <= f <= 3500 for f in p.formants_hz)
            assert p.formants_hz[0] < p.formants_hz[1] < p.formants_hz[2]


class TestVoiceParams:
    def test_rejects_out_of_range(self):
        good = dict(
            f0_hz=200.0,
            formants_hz=(500.0, 1500.0, 2500.0),
            breathiness=0.3,
            speech_rate=1.0,
            vibrato_depth=0.01,
        )
        VoiceParams(**good)
        with pytest.raises(ValidationError):
            VoiceParams(**{**good, "f0_hz": 50.0})
        with pytest.raises(ValidationError):
            VoiceParams(**{**good, "formants_hz": (1500.0, 500.0, 2500.0)})
        with pytest.raises(ValidationError):
            VoiceParams(**{**good, "speech_rate": 2.0})


class TestSynthesize:
    def test_deterministic(self):
        req = SynthesisRequest(embedding=np.zeros(256), text="hello there friend")
        a, b = synthesize(req), synthesize(req)
        assert np.array_equal(a.samples, b.samples)
        assert a.sample_rate == b.sample_rate == 22050

    def test_segment_count_and_duration(self):
        backend = ParametricBackend()
        params = VoiceParams(
            f0_hz=180.0,
            formants_hz=(500.0, 1500.0, 2500.0),
            breathiness=0.2,
            speech_rate=1.0,
            vibrato_depth=0.0,
        )
        clip = backend.render_params(params, "a b c", 22050)
        expected_ms = 3 * BASE_SEGMENT_MS + 2 * GAP_MS
        assert abs(clip.duration_ms - expected_ms) <= 1.0
        # count energy bursts: 10 ms envelope, gaps are exact silence
        window = round(22050 * 0.010)
        envelope = np.convolve(
            np.abs(clip.samples.astype(np.float64)), np.ones(window) / window, mode="same"
        )
        active = envelope > 0.005 * envelope.max()
        rising = np.flatnonzero(np.diff(active.astype(np.int8)) == 1)
        bursts = (1 if active[0] else 0) + len(rising)
        assert bursts == 3

    def test_duration_scales_with_rate(self):
        backend = ParametricBackend()
        base = dict(
            f0_hz=180.0,
            formants_hz=(500.0, 1500.0, 2500.0),
            breathiness=0.2,
            vibrato_depth=0.0,
        )
        slow = backend.render_params(VoiceParams(speech_rate=0.8, **base), "a b c", 22050)
        fast = backend.render_params(VoiceParams(speech_rate=1.3, **base), "a b c", 22050)
        for clip, rate in ((slow, 0.8), (fast, 1.3)):
            expected = 3 * BASE_SEGMENT_MS / rate + 2 * GAP_MS
            assert abs(clip.duration_ms - expected) <= 1.5

    def test_pitch_tracks_f0_param(self):
        backend = ParametricBackend()
        for f0 in (120.0, 240.0, 330.0):
            params = VoiceParams(
                f0_hz=f0,
                formants_hz=(500.0, 1500.0, 2500.0),
                breathiness=0.1,
                speech_rate=1.0,
                vibrato_depth=0.0,
            )
            clip = backend.render_params(params, "aaa", 22050)
            measured = track_pitch(clip.samples, clip.sample_rate)
            assert measured == pytest.approx(f0, rel=0.05)

    def test_pca_axis_shift_changes_pitch(self, model):
        base = pca.inverse(model, np.zeros(model.k))
        shifted_coeffs = np.zeros(model.k)
        shifted_coeffs[0] = 3.0 * model.component_stddevs[0]
        shifted = pca.inverse(model, shifted_coeffs)
        clips = [
            synthesize(SynthesisRequest(embedding=e, text="oo aa ee")) for e in (base, shifted)
        ]
        pitches = [track_pitch(c.samples, c.sample_rate) for c in clips]
        assert abs(pitches[1] - pitches[0]) >= 5.0

    def test_seed_voices_pitch_gap(self, model, seed_coeffs):
        low, high = seed_coeffs
        pitches = []
        for coeffs in (low, high):
            clip = synthesize(
                SynthesisRequest(embedding=pca.inverse(model, coeffs), text="oo aa ee")
            )
            pitches.append(track_pitch(clip.samples, clip.sample_rate))
        assert abs(pitches[1] - pitches[0]) >= 40.0

    def test_sample_rates(self):
        for sr in (16000, 22050, 44100):
            req = SynthesisRequest(embedding=np.zeros(256), text="a", sample_rate=sr)
            clip = synthesize(req)
            assert clip.sample_rate == sr
            assert clip.duration_ms == round(1000 * len(clip.samples) / sr)

    def test_request_validation(self):
        with pytest.raises(ValidationError):
            SynthesisRequest(embedding=np.zeros(256), text="   ")
        with pytest.raises(ValidationError):
            SynthesisRequest(embedding=np.zeros(256), text="x" * 501)
        with pytest.raises(ValidationError):
            SynthesisRequest(embedding=np.zeros(256), text="hi", sample_rate=8000)

    def test_unknown_backend(self):
        with pytest.raises(NotFoundError):
            get_backend("nonexistent-backend")

    def test_clipping_counter_zero_after_normalization(self):
        req = SynthesisRequest(embedding=np.zeros(256), text="loud words here")
        assert synthesize(req).clipped_count == 0
