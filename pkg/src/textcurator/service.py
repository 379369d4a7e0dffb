"""HTTP facade over the engine.

Every endpoint is a thin adapter around exactly one engine operation; all
responses are JSON (UTF-8) and every non-2xx body is a single error object
``{"code", "message", "details"}`` drawn from the stable code vocabulary in
errors.py. Lexicons and sub-corpora persist as files under the state
directory; mutations carry an optimistic version token and stale writers get
a 409 VERSION_CONFLICT.
"""

from __future__ import annotations

import io
import tempfile
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from .corpus import TOKENIZER_RULES, Corpus, ingest_corpus, tokenize
from .curation import (
    SubCorpus,
    exclude_document,
    export_subcorpus,
    include_document,
    rank_by_lexicon,
    save_subcorpus,
)
from .embedding import EmbeddingModel, TrainingConfig, load_model, save_model, train_cbow
from .errors import (
    ConflictError,
    EngineError,
    NotFoundError,
    ValidationError,
    VersionConflictError,
)
from .index import InvertedIndex, MetadataFilter, build_index, keyword_search, ngram_series, snippet
from .lexicon import (
    DEFAULT_RECOMMEND_K,
    Lexicon,
    create_lexicon,
    recommend,
    record_decisions,
)
from .store import LexiconStore, SubCorpusStore

DEFAULT_SEARCH_LIMIT = 10
DEFAULT_PAGE_SIZE = 500
MAX_PAGE_SIZE = 5000


class NotReadyError(EngineError):
    code = "NOT_READY"


@dataclass
class EngineState:
    """Everything the endpoints read; components may load lazily."""

    corpus: Corpus | None = None
    model: EmbeddingModel | None = None
    index: InvertedIndex | None = None
    lexicons: LexiconStore | None = None
    subcorpora: SubCorpusStore | None = None
    model_ref: str = ""

    def component_status(self) -> dict[str, bool]:
        return {
            "corpus": self.corpus is not None,
            "model": self.model is not None,
            "index": self.index is not None,
            "state": self.lexicons is not None and self.subcorpora is not None,
        }

    def ready(self) -> bool:
        return all(self.component_status().values())

    def require_ready(self) -> None:
        if not self.ready():
            raise NotReadyError(
                "engine is still loading",
                details={"components": self.component_status()},
            )


class StateHolder:
    """One atomically-swappable reference to the current engine state.

    Handlers read ``holder.current`` once per request; a management reload
    builds a complete replacement state and swaps the reference, so readers
    see either the old or the new state, never a mixture.
    """

    def __init__(self, state: EngineState):
        self.current = state


@dataclass
class ServiceConfig:
    corpus_dir: Path
    model_path: Path
    state_dir: Path
    host: str = "127.0.0.1"
    port: int = 8000
    train_if_missing: bool = False
    train_config: TrainingConfig = field(default_factory=TrainingConfig)
    ui_dir: Path | None = None
    # Enables POST /api/admin/reload (re-ingest corpus, reload/retrain model).
    enable_admin: bool = False


def load_state(config: ServiceConfig) -> EngineState:
    """Ingest the corpus, load (or train and save) the model, build the
    index, and open the stores."""
    corpus = ingest_corpus(config.corpus_dir)
    model_path = Path(config.model_path)
    if model_path.is_file():
        model = load_model(model_path)
    elif config.train_if_missing:
        model = train_cbow(corpus, config.train_config)
        save_model(model, model_path)
    else:
        raise FileNotFoundError(
            f"model file {model_path} not found (training not enabled)"
        )
    return EngineState(
        corpus=corpus,
        model=model,
        index=build_index(corpus),
        lexicons=LexiconStore(config.state_dir),
        subcorpora=SubCorpusStore(config.state_dir),
        model_ref=str(model_path),
    )


_STATUS_BY_CODE = {
    "VALIDATION": 400,
    "OOV_TERM": 400,
    "EMPTY_VOCABULARY": 400,
    "NOT_FOUND": 404,
    "CONFLICT": 409,
    "VERSION_CONFLICT": 409,
    "NOT_READY": 503,
}


def _error_response(code: str, message: str, details: dict | None = None,
                    status: int | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status or _STATUS_BY_CODE.get(code, 500),
        content={"code": code, "message": message, "details": details or {}},
    )


# ----------------------------- request bodies ------------------------------

class FilterBody(BaseModel):
    year_from: int | None = None
    year_to: int | None = None
    category: str | None = None
    author: str | None = None

    def to_filter(self) -> MetadataFilter:
        return MetadataFilter(
            year_from=self.year_from, year_to=self.year_to,
            category=self.category, author=self.author,
        )


class CreateLexiconBody(BaseModel):
    name: str
    seeds: list[str]


class RecommendBody(BaseModel):
    k: int = DEFAULT_RECOMMEND_K


class DecisionsBody(BaseModel):
    version: int
    accept: list[str] = []
    reject: list[str] = []


class RankBody(BaseModel):
    filters: FilterBody | None = None
    limit: int = 100


class CreateSubCorpusBody(BaseModel):
    name: str
    lexicon_name: str
    filters: FilterBody | None = None
    limit: int = 100


class MemberBody(BaseModel):
    version: int
    doc_id: str


# ------------------------------- serializers -------------------------------

def _meta_view(state: EngineState, doc_id: str) -> dict:
    meta = state.index.doc_meta[doc_id]
    return {
        "doc_id": doc_id,
        "title": meta.title,
        "author": meta.author,
        "year": meta.year,
        "category": meta.category,
    }


def _candidates_view(candidates) -> list[dict]:
    return [{"term": c.term, "score": c.score} for c in candidates]


def _round_view(rnd) -> dict:
    return {
        "query_terms": list(rnd.query_terms),
        "candidates": _candidates_view(rnd.candidates),
        "accepted_now": list(rnd.accepted_now),
        "rejected_now": list(rnd.rejected_now),
        "timestamp": rnd.timestamp,
    }


def _lexicon_view(lexicon: Lexicon) -> dict:
    return {
        "name": lexicon.name,
        "model_ref": lexicon.model_ref,
        "seeds": list(lexicon.seeds),
        "accepted": sorted(lexicon.accepted),
        "rejected": sorted(lexicon.rejected),
        "rounds": [_round_view(r) for r in lexicon.rounds],
        "pending": None if lexicon.pending is None else {
            "query_terms": list(lexicon.pending.query_terms),
            "candidates": _candidates_view(lexicon.pending.candidates),
            "opened_at": lexicon.pending.opened_at,
        },
        "version": lexicon.version,
    }


def _lexicon_summary(lexicon: Lexicon) -> dict:
    return {
        "name": lexicon.name,
        "model_ref": lexicon.model_ref,
        "seeds": list(lexicon.seeds),
        "accepted_count": len(lexicon.accepted),
        "rejected_count": len(lexicon.rejected),
        "round_count": len(lexicon.rounds),
        "version": lexicon.version,
    }


def _ranked_view(state: EngineState, results) -> list[dict]:
    return [
        {**_meta_view(state, r.doc_id), "score": r.score,
         "matched_terms": dict(sorted(r.matched_terms.items()))}
        for r in results
    ]


def _subcorpus_view(state: EngineState, sub: SubCorpus) -> dict:
    return {
        "name": sub.name,
        "lexicon_name": sub.lexicon_name,
        "created_at": sub.created_at,
        "filters": {
            "year_from": sub.filters.year_from,
            "year_to": sub.filters.year_to,
            "category": sub.filters.category,
            "author": sub.filters.author,
        },
        "excluded": sorted(sub.excluded),
        "members": [
            {**_meta_view(state, r.doc_id), "rank": rank, "score": r.score,
             "matched_term_count": len(r.matched_terms)}
            for rank, r in sub.effective_members()
        ],
        "total_ranked": len(sub.ranking),
        "version": sub.version,
    }


# --------------------------------- the app ---------------------------------

def create_app(
    initial_state: EngineState | StateHolder,
    reload_state: "Callable[[], EngineState] | None" = None,
) -> FastAPI:
    """Build the app over a state holder; pass reload_state to enable the
    admin reload endpoint."""
    holder = (initial_state if isinstance(initial_state, StateHolder)
              else StateHolder(initial_state))
    app = FastAPI(title="textcurator", version="0.1.0", docs_url="/api/docs",
                  openapi_url="/api/openapi.json")

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, exc: EngineError):
        return _error_response(exc.code, exc.message, exc.details)

    @app.exception_handler(RequestValidationError)
    async def request_validation_handler(request: Request, exc):
        return _error_response("VALIDATION", "invalid request",
                               {"errors": exc.errors()}, status=400)

    @app.exception_handler(StarletteHTTPException)
    async def http_exception_handler(request: Request, exc):
        code = "NOT_FOUND" if exc.status_code == 404 else f"HTTP_{exc.status_code}"
        return _error_response(code, str(exc.detail), status=exc.status_code)

    @app.get("/api/health")
    def health():
        state = holder.current
        if not state.ready():
            return _error_response(
                "NOT_READY", "engine is still loading",
                {"components": state.component_status()},
            )
        return {"status": "ready"}

    @app.get("/api/config")
    def config():
        state = holder.current
        state.require_ready()
        cfg = state.model.config
        return {
            "model_ref": state.model_ref,
            "training": {
                "dimension": cfg.dimension,
                "window": cfg.window,
                "min_count": cfg.min_count,
                "negative_samples": cfg.negative_samples,
                "epochs": cfg.epochs,
                "initial_learning_rate": cfg.initial_learning_rate,
                "seed": cfg.seed,
                "subsample": cfg.subsample,
            },
            "tokenizer": {"rules": list(TOKENIZER_RULES)},
        }

    @app.get("/api/search")
    def search(q: str = "", year_from: int | None = None,
               year_to: int | None = None, category: str | None = None,
               author: str | None = None, limit: int = DEFAULT_SEARCH_LIMIT):
        state = holder.current
        state.require_ready()
        tokens = tokenize(q)
        filters = MetadataFilter(year_from=year_from, year_to=year_to,
                                 category=category, author=author)
        hits = keyword_search(state.index, tokens, filters, limit=limit)
        return {
            "query_tokens": tokens,
            "results": [
                {**_meta_view(state, h.doc_id), "score": h.score,
                 "snippet": snippet(state.corpus.documents[h.doc_id], tokens)}
                for h in hits
            ],
        }

    @app.get("/api/ngrams")
    def ngrams(term: str, year_from: int, year_to: int):
        state = holder.current
        state.require_ready()
        series = ngram_series(state.index, term.strip().lower(), year_from, year_to)
        return {
            "term": series.term,
            "points": [
                {"year": p.year, "count": p.count,
                 "relative_frequency": p.relative_frequency}
                for p in series.points
            ],
        }

    @app.get("/api/documents/{doc_id}")
    def document(doc_id: str, page: int = 1, page_size: int = DEFAULT_PAGE_SIZE):
        state = holder.current
        state.require_ready()
        doc = state.corpus.documents.get(doc_id)
        if doc is None:
            raise NotFoundError(f"no document {doc_id!r}")
        if page < 1 or not 1 <= page_size <= MAX_PAGE_SIZE:
            raise ValidationError(
                f"page must be >= 1 and page_size in 1..{MAX_PAGE_SIZE}"
            )
        total_pages = max(1, -(-doc.length // page_size))
        lo = (page - 1) * page_size
        return {
            **_meta_view(state, doc_id),
            "length": doc.length,
            "page": page,
            "page_size": page_size,
            "total_pages": total_pages,
            "tokens": list(doc.tokens[lo:lo + page_size]),
        }

    @app.get("/api/lexicons")
    def list_lexicons():
        state = holder.current
        state.require_ready()
        return [_lexicon_summary(state.lexicons.get(name))
                for name in state.lexicons.names()]

    @app.post("/api/lexicons", status_code=201)
    def create_lexicon_endpoint(body: CreateLexiconBody):
        state = holder.current
        state.require_ready()
        lexicon = create_lexicon(body.name, body.seeds, state.model_ref)
        state.lexicons.create(lexicon)
        return _lexicon_view(lexicon)

    @app.get("/api/lexicons/{name}")
    def get_lexicon(name: str):
        state = holder.current
        state.require_ready()
        return _lexicon_view(state.lexicons.get(name))

    @app.post("/api/lexicons/{name}/recommend")
    def recommend_endpoint(name: str, body: RecommendBody | None = None):
        state = holder.current
        state.require_ready()
        k = body.k if body is not None else DEFAULT_RECOMMEND_K
        offered: dict = {}

        def mutate(lexicon: Lexicon) -> None:
            offered["candidates"] = recommend(lexicon, state.model, k=k)

        updated = state.lexicons.update(name, None, mutate)
        return {
            "candidates": _candidates_view(offered["candidates"]),
            "version": updated.version,
        }

    @app.post("/api/lexicons/{name}/decisions")
    def decisions_endpoint(name: str, body: DecisionsBody):
        state = holder.current
        state.require_ready()
        updated = state.lexicons.update(
            name, body.version,
            lambda lexicon: record_decisions(lexicon, body.accept, body.reject),
        )
        return _lexicon_view(updated)

    @app.post("/api/lexicons/{name}/rank")
    def rank_endpoint(name: str, body: RankBody | None = None):
        state = holder.current
        state.require_ready()
        body = body or RankBody()
        filters = body.filters.to_filter() if body.filters else None
        lexicon = state.lexicons.get(name)
        results = rank_by_lexicon(state.index, lexicon, filters, limit=body.limit)
        return {"lexicon_name": name, "results": _ranked_view(state, results)}

    @app.get("/api/subcorpora")
    def list_subcorpora():
        state = holder.current
        state.require_ready()
        return [_subcorpus_view(state, state.subcorpora.get(name))
                for name in state.subcorpora.names()]

    @app.post("/api/subcorpora", status_code=201)
    def create_subcorpus(body: CreateSubCorpusBody):
        state = holder.current
        state.require_ready()
        lexicon = state.lexicons.get(body.lexicon_name)
        filters = body.filters.to_filter() if body.filters else None
        ranking = rank_by_lexicon(state.index, lexicon, filters, limit=body.limit)
        sub = save_subcorpus(body.name, body.lexicon_name, ranking, filters)
        state.subcorpora.create(sub)
        return _subcorpus_view(state, sub)

    @app.get("/api/subcorpora/{name}")
    def get_subcorpus(name: str):
        state = holder.current
        state.require_ready()
        return _subcorpus_view(state, state.subcorpora.get(name))

    @app.post("/api/subcorpora/{name}/exclude")
    def exclude_endpoint(name: str, body: MemberBody):
        state = holder.current
        state.require_ready()
        updated = state.subcorpora.update(
            name, body.version, lambda sub: exclude_document(sub, body.doc_id)
        )
        return _subcorpus_view(state, updated)

    @app.post("/api/subcorpora/{name}/include")
    def include_endpoint(name: str, body: MemberBody):
        state = holder.current
        state.require_ready()
        updated = state.subcorpora.update(
            name, body.version, lambda sub: include_document(sub, body.doc_id)
        )
        return _subcorpus_view(state, updated)

    @app.get("/api/subcorpora/{name}/export")
    def export_endpoint(name: str):
        state = holder.current
        state.require_ready()
        sub = state.subcorpora.get(name)
        buffer = io.BytesIO()
        with tempfile.TemporaryDirectory() as tmp:
            export_subcorpus(sub, state.corpus, tmp)
            root = Path(tmp)
            with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
                for path in sorted(root.rglob("*")):
                    if path.is_file():
                        archive.write(path, path.relative_to(root).as_posix())
        return Response(
            content=buffer.getvalue(),
            media_type="application/zip",
            headers={
                "Content-Disposition": f'attachment; filename="{name}.zip"'
            },
        )

    @app.post("/api/admin/reload")
    def admin_reload():
        if reload_state is None:
            raise NotFoundError("management endpoint is disabled")
        holder.current = reload_state()  # single reference swap: atomic
        return {"status": "reloaded",
                "components": holder.current.component_status()}

    return app


def serve(config: ServiceConfig) -> None:
    """Load everything, then block serving HTTP."""
    import uvicorn

    state = load_state(config)
    reload_state = (lambda: load_state(config)) if config.enable_admin else None
    app = create_app(state, reload_state=reload_state)
    if config.ui_dir is not None and Path(config.ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
