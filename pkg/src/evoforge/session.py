"""Iterate-until-satisfied customization sessions.

A session presents exactly two candidate voices per generation (lambda is
pinned to 1 at this layer), accepts preference judgments, and on finish
exports the current parent as a portable voice file. Every session owns a
seeded RNG stream, so seeds + config + the judgment transcript fully
determine each population, each rendered clip, and the exported bytes.
"""

from __future__ import annotations

import hashlib
import secrets
import threading
import time
from dataclasses import dataclass

import numpy as np

from . import corpus
from .errors import (
    ConfigurationError,
    ConflictError,
    JudgmentError,
    NotFoundError,
    StateError,
    ValidationError,
)
from .evolution import (
    ORIGIN_SEED,
    EvolutionConfig,
    Individual,
    Judgment,
    Population,
    initial_population,
    make_rng,
    rng_from_state,
    rng_state,
    select_and_advance,
)
from .pca import PcaModel, inverse
from .store import SessionStore
from .synth import (
    DEFAULT_SAMPLE_RATE,
    ParametricBackend,
    SynthesisRequest,
    SynthesizerBackend,
    get_backend,
)
from .voicefile import (
    VoiceFile,
    check_export_consistency,
    decode_voicefile,
    encode_voicefile,
)
from .wav import encode_wav

STATUS_ACTIVE = "active"
STATUS_FINISHED = "finished"
STATUS_ABANDONED = "abandoned"

DEFAULT_TEXT = "the quick onyx goblin jumps over the lazy dwarf"

SEED_PARENT_ID = "g0-p"
SEED_OFFSPRING_ID = "g0-o0"

TRANSCRIPT_VERSION = 1


def _now_ms() -> int:
    return int(time.time() * 1000)


@dataclass
class Session:
    session_id: str
    status: str
    config: EvolutionConfig
    text: str
    population: Population
    history: list[tuple[Population, Judgment]]
    rng: np.random.Generator
    created_at_ms: int
    updated_at_ms: int
    max_generations: int | None = None
    voicefile_bytes: bytes | None = None

    @property
    def generation(self) -> int:
        return self.population.generation

    def find_individual(self, individual_id: str) -> Individual | None:
        """Look up an individual in the current population or anywhere in history."""
        found = self.population.by_id(individual_id)
        if found is not None:
            return found
        for pop, _ in self.history:
            found = pop.by_id(individual_id)
            if found is not None:
                return found
        return None


@dataclass(frozen=True)
class RenderedVoice:
    """Stable handle for one candidate's rendered audio."""

    individual_id: str
    wav_bytes: bytes
    content_hash: str
    duration_ms: int


def _serialize_individual(ind: Individual) -> dict:
    return {"id": ind.id, "origin": ind.origin, "genes": ind.genes.tolist()}


def _deserialize_individual(doc: dict) -> Individual:
    return Individual(genes=np.asarray(doc["genes"]), id=doc["id"], origin=doc["origin"])


def _serialize_population(pop: Population) -> dict:
    return {
        "generation": pop.generation,
        "parent": _serialize_individual(pop.parent),
        "offspring": [_serialize_individual(o) for o in pop.offspring],
    }


def _deserialize_population(doc: dict) -> Population:
    return Population(
        parent=_deserialize_individual(doc["parent"]),
        offspring=tuple(_deserialize_individual(o) for o in doc["offspring"]),
        generation=doc["generation"],
    )


def serialize_session(session: Session) -> dict:
    cfg = session.config
    return {
        "session_id": session.session_id,
        "status": session.status,
        "text": session.text,
        "created_at_ms": session.created_at_ms,
        "updated_at_ms": session.updated_at_ms,
        "max_generations": session.max_generations,
        "config": {
            "lam": cfg.lam,
            "epsilon": cfg.epsilon,
            "sigma_scale": cfg.sigma_scale,
            "restart_scale": cfg.restart_scale,
            "rng_seed": cfg.rng_seed,
        },
        "rng_state": rng_state(session.rng),
        "population": _serialize_population(session.population),
        "history": [
            {"population": _serialize_population(p), "judgment": {"chosen": j.chosen}}
            for p, j in session.history
        ],
        "voicefile_hex": session.voicefile_bytes.hex() if session.voicefile_bytes else None,
    }


def deserialize_session(doc: dict) -> Session:
    return Session(
        session_id=doc["session_id"],
        status=doc["status"],
        config=EvolutionConfig(**doc["config"]),
        text=doc["text"],
        population=_deserialize_population(doc["population"]),
        history=[
            (
                _deserialize_population(h["population"]),
                Judgment(chosen=h["judgment"]["chosen"]),
            )
            for h in doc["history"]
        ],
        rng=rng_from_state(doc["rng_state"]),
        created_at_ms=doc["created_at_ms"],
        updated_at_ms=doc["updated_at_ms"],
        max_generations=doc["max_generations"],
        voicefile_bytes=bytes.fromhex(doc["voicefile_hex"]) if doc["voicefile_hex"] else None,
    )


class SessionManager:
    """Owns live sessions, their persistence, and the per-individual audio cache.

    Mutations of one session are serialized behind a per-session lock;
    different sessions progress fully in parallel.
    """

    def __init__(
        self,
        model: PcaModel | None = None,
        store: SessionStore | None = None,
        backend: SynthesizerBackend | None = None,
        default_text: str = DEFAULT_TEXT,
        sample_rate: int = DEFAULT_SAMPLE_RATE,
        prerender: bool = False,
    ):
        self.model = model or corpus.default_model()
        self.store = store or SessionStore(None)
        self.backend = backend or get_backend(ParametricBackend.name)
        self.default_text = default_text
        self.sample_rate = sample_rate
        self.prerender = prerender
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._audio_cache: dict[tuple[str, str], RenderedVoice] = {}
        self._cache_lock = threading.Lock()
        low, high = corpus.seed_coefficients(self.model)
        self._seed_low = low
        self._seed_high = high

    # -- lifecycle ---------------------------------------------------------

    def create_session(
        self,
        config: EvolutionConfig | None = None,
        text: str | None = None,
        max_generations: int | None = None,
        session_id: str | None = None,
    ) -> Session:
        if config is None:
            config = EvolutionConfig(rng_seed=secrets.randbits(64))
        if config.lam != 1:
            raise ConfigurationError("sessions present exactly two voices; lambda must be 1")
        text = self.default_text if text is None else text
        # validates text length/emptiness against the synthesis contract
        SynthesisRequest(embedding=self.model.mean, text=text, sample_rate=self.sample_rate)
        if max_generations is not None and max_generations < 1:
            raise ValidationError("max_generations must be positive when set")
        seed_a = Individual(genes=self._seed_low, id=SEED_PARENT_ID, origin=ORIGIN_SEED)
        seed_b = Individual(genes=self._seed_high, id=SEED_OFFSPRING_ID, origin=ORIGIN_SEED)
        now = _now_ms()
        session = Session(
            session_id=session_id or secrets.token_urlsafe(16),
            status=STATUS_ACTIVE,
            config=config,
            text=text,
            population=initial_population(seed_a, seed_b, config),
            history=[],
            rng=make_rng(config.rng_seed),
            created_at_ms=now,
            updated_at_ms=now,
            max_generations=max_generations,
        )
        with self._registry_lock:
            if session.session_id in self._sessions:
                raise ConflictError(f"session {session.session_id} already exists")
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()
        self.store.save(serialize_session(session))
        if self.prerender:
            self.current_pair(session.session_id)
        return session

    def get_session(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                doc = self.store.load(session_id)
                if doc is None:
                    raise NotFoundError(f"unknown session {session_id!r}")
                session = deserialize_session(doc)
                self._sessions[session_id] = session
                self._locks.setdefault(session_id, threading.Lock())
            return session

    def _lock(self, session_id: str) -> threading.Lock:
        self.get_session(session_id)  # raises NotFoundError for unknown ids
        with self._registry_lock:
            return self._locks[session_id]

    # -- interaction -------------------------------------------------------

    def current_pair(self, session_id: str) -> tuple[RenderedVoice, RenderedVoice]:
        session = self.get_session(session_id)
        if session.status != STATUS_ACTIVE:
            raise StateError(f"session is {session.status}; no active pair")
        parent, offspring = session.population.parent, session.population.offspring[0]
        return self._render(session, parent), self._render(session, offspring)

    def submit_judgment(
        self,
        session_id: str,
        chosen: str,
        expected_generation: int | None = None,
    ) -> Session:
        with self._lock(session_id):
            session = self.get_session(session_id)
            if session.status != STATUS_ACTIVE:
                raise StateError(f"session is {session.status}; judgments are closed")
            current = {
                "generation": session.population.generation,
                "candidates": [m.id for m in session.population.members()],
            }
            if (
                expected_generation is not None
                and expected_generation != session.population.generation
            ):
                raise ConflictError(
                    f"judgment targets generation {expected_generation}, session is at"
                    f" {session.population.generation}; refresh the pair",
                    detail=current,
                )
            if session.population.by_id(chosen) is None:
                raise JudgmentError(
                    f"{chosen!r} is not in the current pair; refresh the pair",
                    detail=current,
                )
            previous = session.population
            judgment = Judgment(chosen=chosen)
            session.population = select_and_advance(
                previous, judgment, session.config, self.model, session.rng
            )
            session.history.append((previous, judgment))
            session.updated_at_ms = _now_ms()
            self.store.append_lineage(
                session_id,
                previous.generation,
                {
                    "generation": previous.generation,
                    "parent": previous.parent.id,
                    "offspring": [o.id for o in previous.offspring],
                    "chosen": chosen,
                    "at_ms": session.updated_at_ms,
                },
            )
            if (
                session.max_generations is not None
                and session.population.generation >= session.max_generations
            ):
                self._finish_locked(session, created_at_ms=None)
            else:
                self.store.save(serialize_session(session))
            if self.prerender and session.status == STATUS_ACTIVE:
                for member in session.population.members():
                    self._render(session, member)
            return session

    def finish_session(self, session_id: str, created_at_ms: int | None = None) -> VoiceFile:
        with self._lock(session_id):
            session = self.get_session(session_id)
            if session.status != STATUS_ACTIVE:
                raise StateError(f"session is already {session.status}")
            return self._finish_locked(session, created_at_ms)

    def _finish_locked(self, session: Session, created_at_ms: int | None) -> VoiceFile:
        parent = session.population.parent
        vf = VoiceFile(
            embedding=inverse(self.model, parent.genes),
            pca_coeffs=parent.genes,
            generations=session.population.generation,
            rng_seed=session.config.rng_seed,
            created_at_ms=_now_ms() if created_at_ms is None else created_at_ms,
            backend_hint=self.backend.name,
        )
        check_export_consistency(vf, self.model)
        session.voicefile_bytes = encode_voicefile(vf)
        session.status = STATUS_FINISHED
        session.updated_at_ms = _now_ms()
        self.store.save(serialize_session(session))
        return vf

    def abandon_session(self, session_id: str) -> Session:
        with self._lock(session_id):
            session = self.get_session(session_id)
            if session.status != STATUS_ACTIVE:
                raise StateError(f"session is already {session.status}")
            session.status = STATUS_ABANDONED
            session.updated_at_ms = _now_ms()
            self.store.save(serialize_session(session))
            return session

    def voicefile_bytes(self, session_id: str) -> bytes:
        session = self.get_session(session_id)
        if session.status == STATUS_ACTIVE:
            raise ConflictError("session is still active; finish it first")
        if session.voicefile_bytes is None:
            raise StateError(f"session is {session.status} and exported no voice file")
        return session.voicefile_bytes

    # -- audio -------------------------------------------------------------

    def audio(self, session_id: str, individual_id: str) -> RenderedVoice:
        session = self.get_session(session_id)
        individual = session.find_individual(individual_id)
        if individual is None:
            raise NotFoundError(
                f"individual {individual_id!r} does not belong to session {session_id!r}"
            )
        return self._render(session, individual)

    def _render(self, session: Session, individual: Individual) -> RenderedVoice:
        key = (session.session_id, individual.id)
        with self._cache_lock:
            cached = self._audio_cache.get(key)
        if cached is not None:
            return cached
        request = SynthesisRequest(
            embedding=inverse(self.model, individual.genes),
            text=session.text,
            sample_rate=self.sample_rate,
        )
        clip = self.backend.render(request)
        wav = encode_wav(clip)
        voice = RenderedVoice(
            individual_id=individual.id,
            wav_bytes=wav,
            content_hash=hashlib.sha256(wav).hexdigest(),
            duration_ms=clip.duration_ms,
        )
        with self._cache_lock:
            self._audio_cache.setdefault(key, voice)
        return voice

    # -- replay ------------------------------------------------------------

    def transcript(self, session_id: str) -> dict:
        """Config + ordered choices: everything needed to reproduce the session."""
        session = self.get_session(session_id)
        cfg = session.config
        doc = {
            "version": TRANSCRIPT_VERSION,
            "session_id": session.session_id,
            "text": session.text,
            "config": {
                "lam": cfg.lam,
                "epsilon": cfg.epsilon,
                "sigma_scale": cfg.sigma_scale,
                "restart_scale": cfg.restart_scale,
                "rng_seed": cfg.rng_seed,
            },
            "choices": [j.chosen for _, j in session.history],
            "finished": session.status == STATUS_FINISHED,
        }
        if session.status == STATUS_FINISHED and session.voicefile_bytes is not None:
            doc["finished_at_ms"] = decode_voicefile(session.voicefile_bytes).created_at_ms
        return doc

    def replay_transcript(self, transcript: dict) -> Session:
        """Re-run a recorded transcript on a fresh session (bit-exact trajectory)."""
        if transcript.get("version") != TRANSCRIPT_VERSION:
            raise ValidationError(f"unsupported transcript version {transcript.get('version')!r}")
        config = EvolutionConfig(**transcript["config"])
        session = self.create_session(config=config, text=transcript["text"])
        for chosen in transcript["choices"]:
            self.submit_judgment(session.session_id, chosen)
        if transcript.get("finished"):
            self.finish_session(
                session.session_id, created_at_ms=transcript.get("finished_at_ms")
            )
        return self.get_session(session.session_id)
