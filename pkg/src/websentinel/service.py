"""Analysis workflow and HTTP API.

Workflow order is fixed: canonicalize, reputation lookup, on hit return
the cached verdict with zero model evaluations; on miss extract features
(URL always, content when HTML is supplied, domain metadata through the
provider), run the ensemble, aggregate, store, respond. Danger verdicts
carry an alert flag. HTML arrives from the client -- the service never
fetches pages itself, and neither the HTML nor any form value is ever
persisted.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Literal, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from . import scoring
from .config import EngineConfig
from .content_analysis import analyze_html
from .errors import WebSentinelError
from .feature_extraction import (
    MetadataProvider,
    NullMetadataProvider,
    domain_metadata,
    lexical_features,
    parse_url,
)
from .manifest import FEATURE_LABELS, build_feature_vector
from .models.ensemble import Ensemble
from .reputation_store import ReputationStore, canonicalize
from .scoring import RiskAssessment, Verdict
from .session_monitor import (
    EventKind,
    SessionEvent,
    SessionState,
    record_event,
    session_features,
)

API_PREFIX = "/api/v1"

_TIER_ORDER = {Verdict.SAFE: 0, Verdict.CAUTION: 1, Verdict.DANGER: 2}


class UnknownSession(WebSentinelError):
    code = "unknown_session"


@dataclass
class _Session:
    state: SessionState
    url: str
    base_features: list[float]
    assessment: RiskAssessment
    lock: threading.Lock = field(default_factory=threading.Lock)
    seen_events: set = field(default_factory=set)


class AnalysisEngine:
    """Orchestrates the verdict workflow; shared by HTTP handlers and tests."""

    def __init__(
        self,
        ensemble: Optional[Ensemble] = None,
        store: Optional[ReputationStore] = None,
        config: Optional[EngineConfig] = None,
        metadata_provider: Optional[MetadataProvider] = None,
        clock=time.time,
    ):
        self.ensemble = ensemble
        self.config = config if config is not None else EngineConfig()
        if store is None:
            store = ReputationStore(default_ttl=self.config.store["ttl_seconds"])
        self.store = store
        self.metadata_provider = (
            metadata_provider if metadata_provider is not None else NullMetadataProvider()
        )
        self.clock = clock
        self.sessions: dict[str, _Session] = {}
        self._sessions_lock = threading.Lock()
        self._assessments: dict[str, RiskAssessment] = {}

    # -- helpers ------------------------------------------------------------

    def _thresholds(self) -> dict:
        s = self.config.scoring
        return {
            "caution_threshold": s["caution_threshold"],
            "danger_threshold": s["danger_threshold"],
            "anomaly_floor": s["anomaly_floor"],
        }

    def _payload(self, score: float, verdict: Verdict, cached: bool,
                 assessment: Optional[RiskAssessment], assessed_at: float) -> dict:
        top_n = int(self.config.scoring["explanation_top_n"])
        explanation = []
        model_outputs = None
        if assessment is not None:
            explanation = [
                {
                    "feature": name,
                    "label": FEATURE_LABELS.get(name, name),
                    "delta": delta,
                }
                for name, delta in assessment.explanation[:top_n]
            ]
            model_outputs = assessment.model_outputs.to_dict()
        return {
            "score": score,
            "verdict": verdict.value,
            "cached": cached,
            "alert": verdict == Verdict.DANGER,
            "explanation": explanation,
            "model_outputs": model_outputs,
            "assessed_at": assessed_at,
        }

    def _extract_vector(self, url: str, html: Optional[str]) -> tuple[list[float], str]:
        parts = parse_url(url)
        lex = lexical_features(
            parts, url,
            suspicious_tlds=set(self.config.features["suspicious_tlds"]),
        )
        meta = domain_metadata(
            parts.host,
            self.metadata_provider,
            now=datetime.fromtimestamp(self.clock(), tz=timezone.utc),
            young_days=self.config.features["young_domain_days"],
        )
        content = None
        if html is not None:
            content = analyze_html(
                html,
                parts.host,
                sensitive_keywords=self.config.features["sensitive_input_keywords"],
                obfuscation_weights=self.config.obfuscation,
            )
        vec = build_feature_vector(
            url_features=lex, domain_metadata=meta, content_features=content
        )
        return vec, parts.host

    # -- workflow -----------------------------------------------------------

    def analyze(
        self,
        url: str,
        html: Optional[str] = None,
        session_id: Optional[str] = None,
        force: bool = False,
    ) -> dict:
        now = self.clock()
        canonical = canonicalize(url)

        if not force:
            entry = self.store.lookup(url, now=now)
            if entry is not None:
                cached_assessment = self._assessments.get(canonical)
                verdict = Verdict(entry.verdict)
                return self._payload(
                    entry.score, verdict, cached=True,
                    assessment=cached_assessment, assessed_at=entry.stored_at,
                )

        if self.ensemble is None:
            raise WebSentinelError("no model bundle loaded")

        vec, page_host = self._extract_vector(url, html)
        assessment = scoring.assess(self.ensemble, vec, **self._thresholds())
        assessment.assessed_at = now
        self.store.upsert(
            url, assessment.score, assessment.verdict.value,
            source="ml_pipeline", now=now,
        )
        self._assessments[canonical] = assessment

        if session_id is not None:
            self._open_session(session_id, url, page_host, vec, assessment, now)

        return self._payload(
            assessment.score, assessment.verdict, cached=False,
            assessment=assessment, assessed_at=now,
        )

    def _open_session(self, session_id, url, page_host, vec, assessment, now):
        with self._sessions_lock:
            existing = self.sessions.get(session_id)
            if existing is None:
                self.sessions[session_id] = _Session(
                    state=SessionState(
                        session_id=session_id, page_host=page_host, created_at=now
                    ),
                    url=url,
                    base_features=list(vec),
                    assessment=assessment,
                )
            else:
                with existing.lock:
                    # Re-analysis of the same session: refresh the baseline but
                    # keep the score ratchet.
                    existing.base_features = list(vec)
                    if assessment.score >= existing.assessment.score:
                        existing.assessment = assessment

    def record_session_event(self, session_id: str, event: SessionEvent) -> dict:
        with self._sessions_lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"unknown session {session_id!r}")

        with session.lock:
            dedup_key = (event.kind.value, event.timestamp_ms)
            if dedup_key not in session.seen_events:
                session.seen_events.add(dedup_key)
                record_event(session.state, event)
                features = session_features(
                    session.state,
                    rapid_redirect_ms=self.config.session["rapid_redirect_ms"],
                    hidden_redirect_lookback_ms=self.config.session[
                        "hidden_redirect_lookback_ms"
                    ],
                )
                previous = session.assessment
                updated = scoring.rescore_with_session(
                    previous, session.base_features, features, self.ensemble,
                    **self._thresholds(),
                )
                updated.assessed_at = self.clock()
                session.assessment = updated
                if _TIER_ORDER[updated.verdict] > _TIER_ORDER[previous.verdict]:
                    self.store.upsert(
                        session.url, updated.score, updated.verdict.value,
                        source="ml_pipeline", now=updated.assessed_at,
                    )
                    self._assessments[canonicalize(session.url)] = updated
            snapshot = session.assessment

        return self._payload(
            snapshot.score, snapshot.verdict, cached=False,
            assessment=snapshot, assessed_at=snapshot.assessed_at,
        )

    def session_score(self, session_id: str) -> dict:
        with self._sessions_lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"unknown session {session_id!r}")
        with session.lock:
            snapshot = session.assessment
        return self._payload(
            snapshot.score, snapshot.verdict, cached=False,
            assessment=snapshot, assessed_at=snapshot.assessed_at,
        )

    def health(self) -> dict:
        return {
            "status": "ok" if self.ensemble is not None else "degraded",
            "store_entries": len(self.store),
        }

    def models_info(self) -> dict:
        if self.ensemble is None:
            raise WebSentinelError("no model bundle loaded")
        return {
            "format_version": self.ensemble.format_version,
            "manifest_size": len(self.ensemble.manifest),
            "training_seed": self.ensemble.training_seed,
        }


# -- wire schemas -------------------------------------------------------------

class AnalyzeIn(BaseModel):
    model_config = ConfigDict(extra="forbid")
    url: str
    html: Optional[str] = None
    session_id: Optional[str] = None


class EventIn(BaseModel):
    # extra="forbid" plus counts-only typing keeps field values out by schema.
    model_config = ConfigDict(extra="forbid")
    kind: Literal[
        "navigation", "redirect", "request", "form_submit",
        "focus_sensitive_field", "click", "hover",
    ]
    timestamp_ms: int
    target_host: Optional[str] = None
    cross_origin: bool = False
    metadata_flags: list[str] = Field(default_factory=list)
    field_type_counts: dict[str, int] = Field(default_factory=dict)

    def to_event(self) -> SessionEvent:
        return SessionEvent(
            kind=EventKind(self.kind),
            timestamp_ms=self.timestamp_ms,
            target_host=self.target_host,
            cross_origin=self.cross_origin,
            metadata_flags=frozenset(self.metadata_flags),
            field_type_counts=dict(self.field_type_counts),
        )


_ERROR_STATUS = {
    "malformed_url": 400,
    "unsupported_scheme": 400,
    "unknown_session": 404,
    "invalid_score": 500,
}


def create_app(engine: AnalysisEngine) -> FastAPI:
    app = FastAPI(title="websentinel", docs_url=None, redoc_url=None)
    app.state.engine = engine

    @app.exception_handler(WebSentinelError)
    async def _engine_error(request: Request, exc: WebSentinelError):
        status = _ERROR_STATUS.get(exc.code, 500)
        if engine.ensemble is None and status == 500:
            status = 503
        return JSONResponse(
            status_code=status,
            content={"error_code": exc.code, "message": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error_code": "invalid_request", "message": str(exc.errors())},
        )

    @app.post(API_PREFIX + "/analyze")
    async def handle_analyze(body: AnalyzeIn, force: bool = False):
        return engine.analyze(
            url=body.url, html=body.html, session_id=body.session_id, force=force
        )

    @app.post(API_PREFIX + "/sessions/{session_id}/events")
    async def handle_session_event(session_id: str, body: EventIn):
        return engine.record_session_event(session_id, body.to_event())

    @app.get(API_PREFIX + "/sessions/{session_id}/score")
    async def handle_score_get(session_id: str):
        return engine.session_score(session_id)

    @app.get(API_PREFIX + "/health")
    async def handle_health():
        return engine.health()

    @app.get(API_PREFIX + "/models/info")
    async def handle_models_info():
        return engine.models_info()

    return app
