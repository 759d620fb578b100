"""Per-session navigation/network/interaction events and derived features.

Events never carry form field values -- form submissions are reduced to
field-type counts before they reach this module, so nothing sensitive can
end up in session state or anything serialized from it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Optional

from .errors import SessionClosed
from .feature_extraction import registrable_domain

DEFAULT_RAPID_REDIRECT_MS = 500
DEFAULT_HIDDEN_REDIRECT_LOOKBACK_MS = 2000


class EventKind(str, Enum):
    NAVIGATION = "navigation"
    REDIRECT = "redirect"
    REQUEST = "request"
    FORM_SUBMIT = "form_submit"
    FOCUS_SENSITIVE_FIELD = "focus_sensitive_field"
    CLICK = "click"
    HOVER = "hover"


@dataclass(frozen=True)
class SessionEvent:
    kind: EventKind
    timestamp_ms: int
    target_host: Optional[str] = None
    cross_origin: bool = False
    metadata_flags: frozenset[str] = frozenset()
    # form_submit only: field-type name -> count. Counts, never values.
    field_type_counts: Mapping[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "timestamp_ms": self.timestamp_ms,
            "target_host": self.target_host,
            "cross_origin": self.cross_origin,
            "metadata_flags": sorted(self.metadata_flags),
            "field_type_counts": dict(self.field_type_counts),
        }


@dataclass
class SessionState:
    session_id: str
    page_host: str
    events: list[SessionEvent] = field(default_factory=list)
    created_at: float = field(default_factory=time.time)
    finalized: bool = False

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "page_host": self.page_host,
            "created_at": self.created_at,
            "events": [e.to_dict() for e in self.events],
        }


@dataclass(frozen=True)
class SessionFeatures:
    redirect_chain_length: int
    cross_origin_hops: int
    rapid_redirect_count: int
    third_party_request_ratio: float
    unique_third_party_domains: int
    external_form_submit: bool
    sensitive_field_focus_count: int
    hidden_redirect_flag: bool


EMPTY_SESSION_FEATURES = SessionFeatures(
    redirect_chain_length=0,
    cross_origin_hops=0,
    rapid_redirect_count=0,
    third_party_request_ratio=0.0,
    unique_third_party_domains=0,
    external_form_submit=False,
    sensitive_field_focus_count=0,
    hidden_redirect_flag=False,
)


def record_event(state: SessionState, event: SessionEvent) -> SessionState:
    """Append an event; out-of-order timestamps are clamped, never dropped."""
    if state.finalized:
        raise SessionClosed(f"session {state.session_id} is finalized")
    if state.events:
        last_ts = state.events[-1].timestamp_ms
        if event.timestamp_ms < last_ts:
            event = replace(event, timestamp_ms=last_ts)
    state.events.append(event)
    return state


def finalize(state: SessionState) -> SessionState:
    state.finalized = True
    return state


def session_features(
    state: SessionState,
    rapid_redirect_ms: int = DEFAULT_RAPID_REDIRECT_MS,
    hidden_redirect_lookback_ms: int = DEFAULT_HIDDEN_REDIRECT_LOOKBACK_MS,
) -> SessionFeatures:
    """Pure function of the recorded event list.

    A redirect is "rapid" when it sits in a chain: any adjacent redirect
    gap under the threshold marks both ends. A redirect is "hidden" when
    no click happened within the lookback window before it. Third-party
    means the target's registrable domain differs from the page's.
    """
    page_reg = registrable_domain(state.page_host) if state.page_host else ""

    redirects = [e for e in state.events if e.kind == EventKind.REDIRECT]
    clicks = [e.timestamp_ms for e in state.events if e.kind == EventKind.CLICK]
    requests = [e for e in state.events if e.kind == EventKind.REQUEST]

    redirect_chain_length = len(redirects)
    cross_origin_hops = sum(1 for e in redirects if e.cross_origin)

    rapid_flags = [False] * len(redirects)
    for i in range(1, len(redirects)):
        gap = redirects[i].timestamp_ms - redirects[i - 1].timestamp_ms
        if gap < rapid_redirect_ms:
            rapid_flags[i - 1] = True
            rapid_flags[i] = True
    rapid_redirect_count = sum(rapid_flags)

    hidden_redirect_flag = False
    for e in redirects:
        preceded = any(
            0 <= e.timestamp_ms - t <= hidden_redirect_lookback_ms for t in clicks
        )
        if not preceded:
            hidden_redirect_flag = True
            break

    third_party_domains = set()
    third_party_requests = 0
    for e in requests:
        if e.target_host:
            reg = registrable_domain(e.target_host.lower())
            if reg != page_reg:
                third_party_requests += 1
                third_party_domains.add(reg)
    third_party_ratio = third_party_requests / len(requests) if requests else 0.0

    external_form_submit = any(
        e.kind == EventKind.FORM_SUBMIT and e.cross_origin for e in state.events
    )
    sensitive_focus = sum(
        1 for e in state.events if e.kind == EventKind.FOCUS_SENSITIVE_FIELD
    )

    return SessionFeatures(
        redirect_chain_length=redirect_chain_length,
        cross_origin_hops=cross_origin_hops,
        rapid_redirect_count=rapid_redirect_count,
        third_party_request_ratio=third_party_ratio,
        unique_third_party_domains=len(third_party_domains),
        external_form_submit=external_form_submit,
        sensitive_field_focus_count=sensitive_focus,
        hidden_redirect_flag=hidden_redirect_flag,
    )
