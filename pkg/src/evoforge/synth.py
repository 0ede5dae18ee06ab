"""Deterministic parametric voice synthesis.

The synthesizer contract is ``embedding + text -> AudioClip``. The reference
backend ("parametric-v1") is a source-filter renderer: a pulse train with
vibrato, three formant resonators and a breathiness noise mix, rendering one
vowel-like segment per whitespace-separated token. It is a pure function of
its request, which is what makes the surrounding search loop replayable.

Control mapping
---------------
A fixed, seeded set of six orthonormal directions in embedding space drives
the voice parameters. Each projection score is squashed through a logistic
sigmoid into its parameter range (midpoint at score 0):

    score 0 -> f0_hz        in [75, 400]     scale 2.0
    score 1 -> formant 1    in [300, 900]    scale 2.0
    score 2 -> formant 2    in [950, 2200]   scale 4.0
    score 3 -> formant 3    in [2250, 3400]  scale 4.0
    score 4 -> breathiness  in [0, 1]        scale 2.0
    score 5 -> speech_rate  in [0.7, 1.4]    scale 2.0
    score 0 -> vibrato_depth in [0, 0.05]    scale 2.0 (shares the pitch score)

Disjoint formant ranges keep the three formants strictly increasing by
construction. Directions are generated once from CONTROL_DIRECTIONS_SEED and
never change; embedding deltas orthogonal to all six directions are inaudible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np
from scipy.signal import lfilter

from .errors import NotFoundError, ValidationError
from .pca import as_embedding

SUPPORTED_SAMPLE_RATES = (16000, 22050, 44100)
DEFAULT_SAMPLE_RATE = 22050
MAX_TEXT_LENGTH = 500

CONTROL_DIRECTIONS_SEED = 714025
N_CONTROL_DIRECTIONS = 6

# (lo, hi, sigmoid scale) per parameter; see module docstring
F0_RANGE = (75.0, 400.0, 2.0)
FORMANT_RANGES = (
    (300.0, 900.0, 2.0),
    (950.0, 2200.0, 4.0),
    (2250.0, 3400.0, 4.0),
)
BREATHINESS_RANGE = (0.0, 1.0, 2.0)
SPEECH_RATE_RANGE = (0.7, 1.4, 2.0)
VIBRATO_RANGE = (0.0, 0.05, 2.0)

# segment rendering constants (milliseconds)
BASE_SEGMENT_MS = 180.0
GAP_MS = 60.0
FADE_MS = 10.0
VIBRATO_HZ = 5.5
FORMANT_BANDWIDTHS_HZ = (80.0, 110.0, 160.0)
FORMANT_AMPLITUDES = (1.0, 0.65, 0.4)
NOISE_SEED = 613339
TARGET_PEAK = 0.89  # of int16 full scale, leaves headroom so clipping count stays 0

_PCM_MAX = 32767
_PCM_MIN = -32768


@dataclass(frozen=True)
class VoiceParams:
    """Audible control parameters decoded from an embedding."""

    f0_hz: float
    formants_hz: tuple[float, float, float]
    breathiness: float
    speech_rate: float
    vibrato_depth: float

    def __post_init__(self):
        if not 75.0 <= self.f0_hz <= 400.0:
            raise ValidationError(f"f0_hz {self.f0_hz} outside [75, 400]")
        if len(self.formants_hz) != 3:
            raise ValidationError("exactly 3 formants required")
        for f in self.formants_hz:
            if not 200.0 <= f <= 3500.0:
                raise ValidationError(f"formant {f} outside [200, 3500]")
        if not (self.formants_hz[0] < self.formants_hz[1] < self.formants_hz[2]):
            raise ValidationError("formants must be strictly increasing")
        if not 0.0 <= self.breathiness <= 1.0:
            raise ValidationError("breathiness outside [0, 1]")
        if not 0.7 <= self.speech_rate <= 1.4:
            raise ValidationError("speech_rate outside [0.7, 1.4]")
        if not 0.0 <= self.vibrato_depth <= 0.05:
            raise ValidationError("vibrato_depth outside [0, 0.05]")


@dataclass(frozen=True)
class SynthesisRequest:
    embedding: np.ndarray
    text: str
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        object.__setattr__(self, "embedding", as_embedding(self.embedding))
        if not isinstance(self.text, str) or not self.text.strip():
            raise ValidationError("text must be non-empty after trimming whitespace")
        if len(self.text) > MAX_TEXT_LENGTH:
            raise ValidationError(f"text longer than {MAX_TEXT_LENGTH} characters")
        if self.sample_rate not in SUPPORTED_SAMPLE_RATES:
            raise ValidationError(
                f"sample_rate must be one of {SUPPORTED_SAMPLE_RATES}, got {self.sample_rate}"
            )


@dataclass(frozen=True)
class AudioClip:
    """Mono 16-bit PCM audio."""

    samples: np.ndarray
    sample_rate: int
    duration_ms: int = field(init=False)
    clipped_count: int = 0

    def __post_init__(self):
        arr = np.asarray(self.samples)
        if arr.dtype != np.int16 or arr.ndim != 1:
            raise ValidationError("samples must be a 1-d int16 array")
        if self.sample_rate not in SUPPORTED_SAMPLE_RATES:
            raise ValidationError(f"unsupported sample_rate {self.sample_rate}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(
            self, "duration_ms", round(1000 * arr.shape[0] / self.sample_rate)
        )


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _squash(score: float, lo: float, hi: float, scale: float) -> float:
    return lo + (hi - lo) * _sigmoid(score / scale)


_control_cache: np.ndarray | None = None


def control_directions() -> np.ndarray:
    """The six fixed orthonormal control directions, shape (6, 256)."""
    global _control_cache
    if _control_cache is None:
        rng = np.random.default_rng(CONTROL_DIRECTIONS_SEED)
        raw = rng.standard_normal((256, N_CONTROL_DIRECTIONS))
        q, _ = np.linalg.qr(raw)
        dirs = q.T.copy()
        dirs.setflags(write=False)
        _control_cache = dirs
    return _control_cache


def embedding_to_params(embedding: Sequence[float] | np.ndarray) -> VoiceParams:
    """Decode an embedding into voice parameters (pure, strictly monotone per score)."""
    e = as_embedding(embedding)
    s = control_directions() @ e
    return VoiceParams(
        f0_hz=_squash(s[0], *F0_RANGE),
        formants_hz=tuple(_squash(s[i + 1], *FORMANT_RANGES[i]) for i in range(3)),
        breathiness=_squash(s[4], *BREATHINESS_RANGE),
        speech_rate=_squash(s[5], *SPEECH_RATE_RANGE),
        vibrato_depth=_squash(s[0], *VIBRATO_RANGE),
    )


def _resonator(x: np.ndarray, freq: float, bandwidth: float, sr: int) -> np.ndarray:
    # Klatt-style two-pole resonator, unity gain at DC
    c = -math.exp(-2.0 * math.pi * bandwidth / sr)
    b = 2.0 * math.exp(-math.pi * bandwidth / sr) * math.cos(2.0 * math.pi * freq / sr)
    a = 1.0 - b - c
    return lfilter([a], [1.0, -b, -c], x)


def _render_segment(params: VoiceParams, sr: int, n_samples: int) -> np.ndarray:
    t = np.arange(n_samples) / sr
    inst_freq = params.f0_hz * (
        1.0 + params.vibrato_depth * np.sin(2.0 * math.pi * VIBRATO_HZ * t)
    )
    phase = np.cumsum(inst_freq) / sr
    pulses = np.zeros(n_samples)
    pulses[np.diff(np.floor(phase), prepend=0.0) >= 1.0] = 1.0

    noise = np.random.default_rng(NOISE_SEED).standard_normal(n_samples)
    source = pulses * (1.0 - 0.5 * params.breathiness)
    source += noise * (0.005 + 0.05 * params.breathiness)

    voiced = np.zeros(n_samples)
    for freq, bw, amp in zip(params.formants_hz, FORMANT_BANDWIDTHS_HZ, FORMANT_AMPLITUDES):
        voiced += amp * _resonator(source, freq, bw, sr)

    fade = min(int(round(FADE_MS / 1000 * sr)), n_samples // 2)
    if fade > 0:
        ramp = 0.5 - 0.5 * np.cos(np.pi * np.arange(fade) / fade)
        voiced[:fade] *= ramp
        voiced[-fade:] *= ramp[::-1]
    return voiced


def float_to_pcm(samples: np.ndarray) -> tuple[np.ndarray, int]:
    """Round float samples to int16 with saturation; returns (pcm, clipped count)."""
    scaled = np.rint(samples)
    clipped = int(np.count_nonzero((scaled > _PCM_MAX) | (scaled < _PCM_MIN)))
    return np.clip(scaled, _PCM_MIN, _PCM_MAX).astype(np.int16), clipped


class SynthesizerBackend(Protocol):
    name: str

    def render(self, request: SynthesisRequest) -> AudioClip: ...


class ParametricBackend:
    """Reference source-filter backend; bit-identical output per request."""

    name = "parametric-v1"

    def render(self, request: SynthesisRequest) -> AudioClip:
        params = embedding_to_params(request.embedding)
        return self.render_params(params, request.text, request.sample_rate)

    def render_params(
        self, params: VoiceParams, text: str, sample_rate: int = DEFAULT_SAMPLE_RATE
    ) -> AudioClip:
        if sample_rate not in SUPPORTED_SAMPLE_RATES:
            raise ValidationError(f"unsupported sample_rate {sample_rate}")
        tokens = text.split()
        if not tokens:
            raise ValidationError("text must contain at least one token")
        seg_samples = round(sample_rate * BASE_SEGMENT_MS / 1000 / params.speech_rate)
        gap_samples = round(sample_rate * GAP_MS / 1000)
        segment = _render_segment(params, sample_rate, seg_samples)
        gap = np.zeros(gap_samples)
        pieces: list[np.ndarray] = []
        for i in range(len(tokens)):
            if i:
                pieces.append(gap)
            pieces.append(segment)
        wave = np.concatenate(pieces)
        peak = np.max(np.abs(wave))
        if peak > 0:
            wave = wave * (TARGET_PEAK * _PCM_MAX / peak)
        pcm, clipped = float_to_pcm(wave)
        return AudioClip(samples=pcm, sample_rate=sample_rate, clipped_count=clipped)


_registry: dict[str, SynthesizerBackend] = {}


def register_backend(backend: SynthesizerBackend) -> None:
    _registry[backend.name] = backend


def get_backend(name: str) -> SynthesizerBackend:
    try:
        return _registry[name]
    except KeyError:
        raise NotFoundError(f"unknown synthesizer backend {name!r}") from None


register_backend(ParametricBackend())


def synthesize(
    request: SynthesisRequest, backend: SynthesizerBackend | None = None
) -> AudioClip:
    """Render ``request`` with ``backend`` (reference backend by default)."""
    if backend is None:
        backend = get_backend(ParametricBackend.name)
    return backend.render(request)
