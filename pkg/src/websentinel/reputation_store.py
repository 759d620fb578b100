"""TTL-expiring verdict cache keyed by canonical URL, with a JSONL journal.

The store is consulted before any model evaluation; a fresh hit means the
pipeline never runs. Persistence is line-oriented and append-friendly:
one JSON object per line, replayed last-writer-wins on restore, corrupt
lines skipped with a report.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass
from urllib.parse import urlsplit, urlunsplit

from .errors import InvalidScore, IoError, MalformedUrl

log = logging.getLogger(__name__)

DEFAULT_TTL_SECONDS = 86400

SOURCES = ("ml_pipeline", "seed_list", "manual")

JOURNAL_FIELDS = ("canonical_url", "score", "verdict", "stored_at", "ttl_seconds", "source")


@dataclass
class ReputationEntry:
    canonical_url: str
    score: float
    verdict: str
    stored_at: float
    ttl_seconds: int
    source: str

    def expired(self, now: float) -> bool:
        return (now - self.stored_at) > self.ttl_seconds

    def to_dict(self) -> dict:
        return {
            "canonical_url": self.canonical_url,
            "score": self.score,
            "verdict": self.verdict,
            "stored_at": self.stored_at,
            "ttl_seconds": self.ttl_seconds,
            "source": self.source,
        }


def canonicalize(raw_url: str) -> str:
    """Lowercase scheme/host, strip default ports and fragment, keep the
    path and query verbatim. Idempotent."""
    if not raw_url:
        raise MalformedUrl("empty URL")
    try:
        split = urlsplit(raw_url)
        port = split.port
    except ValueError as exc:
        raise MalformedUrl(f"unparseable URL: {exc}")
    scheme = split.scheme.lower()
    if not scheme or not split.hostname:
        raise MalformedUrl(f"no scheme/host in {raw_url!r}")
    host = split.hostname.lower()
    default_port = {"http": 80, "https": 443}.get(scheme)
    netloc = host if port is None or port == default_port else f"{host}:{port}"
    return urlunsplit((scheme, netloc, split.path, split.query, ""))


class ReputationStore:
    """Thread-safe in-memory map with optional append-on-write journaling."""

    def __init__(self, default_ttl: int = DEFAULT_TTL_SECONDS,
                 journal_path: str | None = None):
        if default_ttl <= 0:
            raise InvalidScore(f"default_ttl must be positive (got {default_ttl})")
        self._entries: dict[str, ReputationEntry] = {}
        self._lock = threading.Lock()
        self.default_ttl = default_ttl
        self.journal_path = journal_path

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def lookup(self, raw_url: str, now: float | None = None) -> ReputationEntry | None:
        """Unexpired entry for the canonical form, else None. Never runs ML."""
        key = canonicalize(raw_url)
        if now is None:
            now = time.time()
        with self._lock:
            entry = self._entries.get(key)
            if entry is None or entry.expired(now):
                return None
            return entry

    def upsert(
        self,
        raw_url: str,
        score: float,
        verdict: str,
        source: str = "ml_pipeline",
        now: float | None = None,
        ttl_seconds: int | None = None,
    ) -> ReputationEntry:
        if not (0.0 <= score <= 100.0):
            raise InvalidScore(f"score must be in [0,100] (got {score})")
        if source not in SOURCES:
            raise InvalidScore(f"unknown source {source!r}")
        key = canonicalize(raw_url)
        if now is None:
            now = time.time()
        entry = ReputationEntry(
            canonical_url=key,
            score=float(score),
            verdict=str(verdict),
            stored_at=float(now),
            ttl_seconds=int(ttl_seconds if ttl_seconds is not None else self.default_ttl),
            source=source,
        )
        with self._lock:
            self._entries[key] = entry
            if self.journal_path:
                self._append_journal(entry)
        return entry

    def _append_journal(self, entry: ReputationEntry) -> None:
        try:
            with open(self.journal_path, "a", encoding="utf-8", newline="\n") as fh:
                fh.write(json.dumps(entry.to_dict(), sort_keys=True) + "\n")
        except OSError as exc:
            raise IoError(f"journal append failed: {exc}")

    def prune_expired(self, now: float | None = None) -> int:
        if now is None:
            now = time.time()
        with self._lock:
            stale = [k for k, e in self._entries.items() if e.expired(now)]
            for k in stale:
                del self._entries[k]
            return len(stale)

    def persist(self, path: str) -> None:
        """Write a compacted snapshot (one line per live entry)."""
        with self._lock:
            entries = sorted(self._entries.values(), key=lambda e: e.canonical_url)
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                for entry in entries:
                    fh.write(json.dumps(entry.to_dict(), sort_keys=True) + "\n")
        except OSError as exc:
            raise IoError(f"persist to {path} failed: {exc}")

    @classmethod
    def restore(
        cls,
        path: str,
        default_ttl: int = DEFAULT_TTL_SECONDS,
        now: float | None = None,
        journal_path: str | None = None,
    ) -> "ReputationStore":
        """Replay a journal last-writer-wins; corrupt lines are reported and
        skipped, expired entries dropped."""
        store = cls(default_ttl=default_ttl, journal_path=journal_path)
        if now is None:
            now = time.time()
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except FileNotFoundError:
            return store
        except OSError as exc:
            raise IoError(f"restore from {path} failed: {exc}")

        for line_no, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                entry = ReputationEntry(
                    canonical_url=record["canonical_url"],
                    score=float(record["score"]),
                    verdict=str(record["verdict"]),
                    stored_at=float(record["stored_at"]),
                    ttl_seconds=int(record["ttl_seconds"]),
                    source=str(record["source"]),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                log.warning("skipping corrupt journal line %d in %s: %s",
                            line_no, path, exc)
                continue
            if not entry.expired(now):
                store._entries[entry.canonical_url] = entry
        return store

    def load_seed_list(self, path: str, now: float | None = None) -> int:
        """Load known-good/known-bad URLs (journal schema minus stored_at)."""
        if now is None:
            now = time.time()
        loaded = 0
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise IoError(f"seed list {path} unreadable: {exc}")
        for line_no, line in enumerate(lines, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                record = json.loads(line)
                self.upsert(
                    record["canonical_url"],
                    score=float(record["score"]),
                    verdict=str(record["verdict"]),
                    source="seed_list",
                    now=now,
                    ttl_seconds=int(record.get("ttl_seconds", self.default_ttl)),
                )
                loaded += 1
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                log.warning("skipping bad seed entry line %d in %s: %s",
                            line_no, path, exc)
        return loaded
