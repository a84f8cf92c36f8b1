"""HTTP API for blind evaluation studies."""
from __future__ import annotations

import json
from typing import List, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .corpus import Document
from .store import DEFAULT_BATCH_SIZE, EvalStore, StoreError, StudyConfig

INSTRUCTIONS_TEXT = """\
You are shown two or more possible headlines for an article. Score each
headline for its quality INDEPENDENTLY. (Some headlines might be better than
the others, or worse, or they could all be the same quality.) Sometimes
headlines are good, and sometimes they are bad. You must be the judge!

What makes a GOOD headline? It should be...
 - Informative. It should tell you what the article is about, including key
   details.
 - Easy to read. It should not be too long or full of extra details.
 - Well-written. It should not have grammatical errors or awkward wording.

What makes a BAD headline?
 - Irrelevant details included.
 - Factually incorrect. (This is the worst of all!)
"""


class StudyDocIn(BaseModel):
    id: str
    source: str
    published_at: str = ""
    title: str
    text: str
    generated_title: str


class StudyConfigIn(BaseModel):
    allowed_sources: Optional[List[str]] = None
    one_doc_per_source: bool = False
    batch_size: int = DEFAULT_BATCH_SIZE
    seed: int = 0


class StudyIn(BaseModel):
    docs: List[StudyDocIn]
    config: StudyConfigIn = Field(default_factory=StudyConfigIn)


class SessionIn(BaseModel):
    evaluator_id: str


class ScoresIn(BaseModel):
    scores: List[int]


_ERROR_STATUS = {
    "empty_study": 400,
    "missing_generated_title": 400,
    "duplicate_source": 400,
    "source_not_allowed": 400,
    "bad_scores": 400,
    "score_out_of_range": 400,
    "unknown_study": 404,
    "unknown_session": 404,
    "unknown_task": 404,
    "already_scored": 409,
}


def create_app(store: Optional[EvalStore] = None) -> FastAPI:
    app = FastAPI(title="titlesmith evaluation service")
    app.state.store = store if store is not None else EvalStore()
    # The evaluator UI is served as static files from a separate origin.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(StoreError)
    async def store_error_handler(_request: Request, exc: StoreError):
        return JSONResponse(
            status_code=_ERROR_STATUS.get(exc.code, 400),
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/instructions", response_class=PlainTextResponse)
    def instructions():
        return INSTRUCTIONS_TEXT

    @app.post("/studies")
    def create_study(body: StudyIn):
        docs = [
            (
                Document(
                    doc_id=d.id,
                    source=d.source,
                    published_at=d.published_at,
                    title=d.title,
                    text=d.text,
                ),
                d.generated_title,
            )
            for d in body.docs
        ]
        config = StudyConfig(
            allowed_sources=body.config.allowed_sources,
            one_doc_per_source=body.config.one_doc_per_source,
            batch_size=body.config.batch_size,
            seed=body.config.seed,
        )
        study_id = app.state.store.create_study(docs, config)
        return {"study_id": study_id}

    @app.post("/studies/{study_id}/sessions")
    def create_session(study_id: str, body: SessionIn):
        session_id, task_count = app.state.store.create_session(
            study_id, body.evaluator_id
        )
        return {"session_id": session_id, "task_count": task_count}

    @app.get("/sessions/{session_id}/next")
    def next_task(session_id: str):
        task = app.state.store.next_task(session_id)
        if task is None:
            return {"done": True}
        return {
            "done": False,
            "task_id": task.task_id,
            "doc_id": task.doc_id,
            "text": task.text,
            "titles": list(task.titles),
            "progress": {"done": task.done, "total": task.total},
        }

    @app.post("/sessions/{session_id}/tasks/{task_id}/scores")
    def submit_scores(session_id: str, task_id: str, body: ScoresIn):
        app.state.store.submit_scores(session_id, task_id, body.scores)
        return {"ok": True}

    @app.get("/studies/{study_id}")
    def study_meta(study_id: str):
        _records, meta = app.state.store.export_scores(study_id)
        return meta

    @app.get("/studies/{study_id}/export", response_class=PlainTextResponse)
    def export_scores(study_id: str):
        records, _meta = app.state.store.export_scores(study_id)
        lines = [
            json.dumps(
                {**record.to_record(), "session_status": status},
                ensure_ascii=False,
            )
            for record, status in records
        ]
        return "\n".join(lines) + "\n" if lines else ""

    return app
