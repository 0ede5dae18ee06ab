"""HTTP facade over the session layer.

Routes (JSON unless noted):

    POST /v1/sessions                       create; 201 with the initial pair
    GET  /v1/sessions/{sid}/audio/{iid}     WAV bytes, strong content-hash ETag
    POST /v1/sessions/{sid}/judgments       advance; 200 with the next pair
    POST /v1/sessions/{sid}/finish          voice file bytes; 410 once finished
    GET  /v1/sessions/{sid}/voicefile       re-download after finishing
    GET  /healthz                           liveness

Every error body has the shape {"code", "message", "detail?"} with code in
{validation, not_found, conflict, state, internal}, mapped onto
400/404/409/410/500. Sessions are capability URLs: the unguessable id is the
only credential.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, ConfigDict, Field

from .errors import EvoforgeError, StateError
from .evolution import EvolutionConfig
from .pca import load as load_pca
from .session import DEFAULT_TEXT, STATUS_ACTIVE, Session, SessionManager
from .store import SessionStore

_HTTP_STATUS = {
    "validation": 400,
    "not_found": 404,
    "conflict": 409,
    "state": 410,
    "internal": 500,
}


@dataclass
class ServiceSettings:
    host: str = "127.0.0.1"
    port: int = 8321
    pca_path: str | None = None
    store_path: str | None = None
    default_text: str = DEFAULT_TEXT
    cors_origin: str | None = None
    prerender: bool = False

    @classmethod
    def from_env(cls) -> "ServiceSettings":
        env = os.environ
        return cls(
            host=env.get("EVOFORGE_HOST", cls.host),
            port=int(env.get("EVOFORGE_PORT", cls.port)),
            pca_path=env.get("EVOFORGE_PCA_PATH") or None,
            store_path=env.get("EVOFORGE_STORE_PATH") or None,
            default_text=env.get("EVOFORGE_TEXT", cls.default_text),
            cors_origin=env.get("EVOFORGE_CORS_ORIGIN") or None,
            prerender=env.get("EVOFORGE_PRERENDER", "").lower() in ("1", "true", "yes"),
        )


class CreateSessionBody(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    text: str | None = None
    epsilon: float | None = None
    sigma_scale: float | None = None
    restart_scale: float | None = None
    rng_seed: int | None = None
    lam: int | None = Field(default=None, alias="lambda")
    max_generations: int | None = None


class JudgmentBody(BaseModel):
    chosen: str
    generation: int | None = None


def _pair_payload(session: Session) -> list[dict]:
    if session.status != STATUS_ACTIVE:
        return []
    entries = []
    for member in session.population.members():
        entries.append(
            {
                "individual_id": member.id,
                "audio_url": f"/v1/sessions/{session.session_id}/audio/{member.id}",
            }
        )
    return entries


def _session_payload(session: Session) -> dict:
    return {
        "session_id": session.session_id,
        "generation": session.generation,
        "status": session.status,
        "pair": _pair_payload(session),
    }


def build_manager(settings: ServiceSettings) -> SessionManager:
    model = load_pca(settings.pca_path) if settings.pca_path else None
    return SessionManager(
        model=model,
        store=SessionStore(settings.store_path),
        default_text=settings.default_text,
        prerender=settings.prerender,
    )


def create_app(
    settings: ServiceSettings | None = None, manager: SessionManager | None = None
) -> FastAPI:
    settings = settings or ServiceSettings.from_env()
    manager = manager or build_manager(settings)
    app = FastAPI(title="evoforge", docs_url=None, redoc_url=None)
    app.state.manager = manager
    app.state.settings = settings

    if settings.cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[settings.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(EvoforgeError)
    async def domain_error(_request: Request, exc: EvoforgeError):
        return JSONResponse(
            status_code=_HTTP_STATUS.get(exc.code, 500), content=exc.as_dict()
        )

    @app.exception_handler(RequestValidationError)
    async def body_error(_request: Request, exc: RequestValidationError):
        detail = [
            {"loc": [str(p) for p in e.get("loc", [])], "msg": e.get("msg", "")}
            for e in exc.errors()
        ]
        return JSONResponse(
            status_code=400,
            content={"code": "validation", "message": "invalid request", "detail": detail},
        )

    @app.exception_handler(Exception)
    async def unexpected_error(_request: Request, _exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"code": "internal", "message": "internal server error"},
        )

    @app.get("/healthz")
    async def healthz():
        return PlainTextResponse("ok")

    @app.post("/v1/sessions", status_code=201)
    async def create_session(body: CreateSessionBody | None = None):
        body = body or CreateSessionBody()
        defaults = EvolutionConfig()
        config = EvolutionConfig(
            lam=body.lam if body.lam is not None else defaults.lam,
            epsilon=body.epsilon if body.epsilon is not None else defaults.epsilon,
            sigma_scale=(
                body.sigma_scale if body.sigma_scale is not None else defaults.sigma_scale
            ),
            restart_scale=(
                body.restart_scale if body.restart_scale is not None else defaults.restart_scale
            ),
            rng_seed=(
                body.rng_seed
                if body.rng_seed is not None
                else int.from_bytes(os.urandom(8), "little")
            ),
        )
        session = manager.create_session(
            config=config, text=body.text, max_generations=body.max_generations
        )
        return _session_payload(session)

    @app.get("/v1/sessions/{session_id}/audio/{individual_id}")
    async def get_audio(session_id: str, individual_id: str):
        voice = manager.audio(session_id, individual_id)
        return Response(
            content=voice.wav_bytes,
            media_type="audio/wav",
            headers={
                "ETag": f'"{voice.content_hash}"',
                "Cache-Control": "private, max-age=31536000, immutable",
            },
        )

    @app.post("/v1/sessions/{session_id}/judgments")
    async def post_judgment(session_id: str, body: JudgmentBody):
        session = manager.submit_judgment(
            session_id, body.chosen, expected_generation=body.generation
        )
        return _session_payload(session)

    def _voicefile_response(session_id: str) -> Response:
        payload = manager.voicefile_bytes(session_id)
        return Response(
            content=payload,
            media_type="application/octet-stream",
            headers={
                "Content-Disposition": f'attachment; filename="voice-{session_id}.evvf"'
            },
        )

    @app.post("/v1/sessions/{session_id}/finish")
    async def finish(session_id: str):
        try:
            manager.finish_session(session_id)
        except StateError as exc:
            raise StateError(
                exc.message,
                detail={"voicefile_url": f"/v1/sessions/{session_id}/voicefile"},
            ) from exc
        return _voicefile_response(session_id)

    @app.get("/v1/sessions/{session_id}/voicefile")
    async def get_voicefile(session_id: str):
        return _voicefile_response(session_id)

    return app


def serve(settings: ServiceSettings | None = None) -> None:
    import uvicorn

    settings = settings or ServiceSettings.from_env()
    uvicorn.run(create_app(settings), host=settings.host, port=settings.port)
