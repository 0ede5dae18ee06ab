"""Voice customization by human-in-the-loop evolutionary search.

Binary preference judgments drive a (1 + lambda) evolution strategy through a
PCA-reduced speaker-embedding space; converged voices export as portable
voice files that a deterministic parametric synthesizer can render anywhere.
"""

from .errors import (
    ConfigurationError,
    ConflictError,
    DimensionError,
    EvoforgeError,
    FormatError,
    IntegrityError,
    JudgmentError,
    NotFoundError,
    StateError,
    ValidationError,
)
from .evolution import (
    EvolutionConfig,
    Individual,
    Judgment,
    Population,
    initial_population,
    mutate,
    select_and_advance,
)
from .pca import PcaModel, fit, inverse, project
from .session import Session, SessionManager
from .synth import (
    AudioClip,
    ParametricBackend,
    SynthesisRequest,
    VoiceParams,
    embedding_to_params,
    synthesize,
)
from .voicefile import VoiceFile, decode_voicefile, encode_voicefile
from .wav import decode_wav, encode_wav

__version__ = "0.1.0"

__all__ = [
    "AudioClip",
    "ConfigurationError",
    "ConflictError",
    "DimensionError",
    "EvoforgeError",
    "EvolutionConfig",
    "FormatError",
    "Individual",
    "IntegrityError",
    "Judgment",
    "JudgmentError",
    "NotFoundError",
    "ParametricBackend",
    "PcaModel",
    "Population",
    "Session",
    "SessionManager",
    "StateError",
    "SynthesisRequest",
    "ValidationError",
    "VoiceFile",
    "VoiceParams",
    "decode_voicefile",
    "decode_wav",
    "embedding_to_params",
    "encode_voicefile",
    "encode_wav",
    "fit",
    "initial_population",
    "inverse",
    "mutate",
    "project",
    "select_and_advance",
    "synthesize",
]
