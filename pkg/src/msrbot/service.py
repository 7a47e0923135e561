"""HTTP surface: POST /chat, GET /health, GET /intents, plus startup wiring."""

from __future__ import annotations

import json
import logging
import uuid
from typing import Any

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import ServiceConfig
from .dates import NowClock
from .dialogue import BotReply, DialogueOrchestrator, intent_examples
from .model import parse_utc
from .ner import EntityRecognizer
from .nlu import load_training, load_vectors
from .queries import QueryEngine
from .store import KnowledgeBase

log = logging.getLogger("msrbot.service")


class StableJSONResponse(JSONResponse):
    """Stable key order so responses are golden-testable byte for byte."""

    def render(self, content: Any) -> bytes:
        return json.dumps(
            content, sort_keys=True, ensure_ascii=False, separators=(",", ":")
        ).encode("utf-8")


class ChatRequest(BaseModel):
    session_id: str = "default"
    text: str


def build_runtime(config: ServiceConfig) -> tuple[KnowledgeBase, DialogueOrchestrator]:
    """Load every resource named by the config and wire the pipeline."""
    kb = KnowledgeBase.load(config.kb_path)
    table = load_vectors(config.resolved_vectors_path)
    training = load_training(config.resolved_nlu_path, table)
    clock = NowClock(parse_utc(config.fixed_now)) if config.fixed_now else None
    orchestrator = DialogueOrchestrator(
        engine=QueryEngine(kb),
        recognizer=EntityRecognizer.for_store(kb),
        table=table,
        training=training,
        tau=config.tau,
        clock=clock,
        log_path=config.log_path,
    )
    return kb, orchestrator


def reply_to_dict(reply: BotReply) -> dict:
    return {
        "reply": reply.text,
        "intent": reply.intent_id,
        "confidence": reply.confidence,
        "entities": [e.to_dict() for e in reply.entities],
        "elapsed_ms": reply.elapsed_ms,
        "payload": reply.payload.to_dict() if reply.payload else None,
    }


def create_app(config: ServiceConfig) -> FastAPI:
    kb, orchestrator = build_runtime(config)
    app = FastAPI(title="msrbot", default_response_class=StableJSONResponse)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.exception_handler(Exception)
    async def internal_error(request: Request, exc: Exception) -> StableJSONResponse:
        error_id = uuid.uuid4().hex
        log.exception("internal error %s on %s", error_id, request.url.path)
        return StableJSONResponse({"error": "internal", "id": error_id}, status_code=500)

    @app.post("/chat")
    def chat(request: ChatRequest) -> StableJSONResponse:
        if not request.text.strip():
            return StableJSONResponse({"detail": "text must be non-empty"}, status_code=400)
        reply = orchestrator.handle(request.text)
        return StableJSONResponse(reply_to_dict(reply))

    @app.get("/health")
    def health() -> dict:
        return {
            "status": "ok",
            "commit_count": len(kb.commits),
            "issue_count": len(kb.issues),
        }

    @app.get("/intents")
    def intents() -> dict:
        return {"intents": intent_examples()}

    return app
