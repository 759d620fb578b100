"""URL parsing, lexical features and domain/certificate metadata.

Registrable domains come from a bundled public-suffix snapshot so results
are deterministic and offline. Metadata (domain age, certificate state)
is looked up through a provider interface; any provider failure degrades
to "unresolved" and never blocks the scoring pipeline.
"""

from __future__ import annotations

import ipaddress
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from typing import Optional, Protocol
from urllib.parse import urlsplit

from .errors import MalformedUrl, ProviderTimeout, UnsupportedScheme

log = logging.getLogger(__name__)

DEFAULT_YOUNG_DOMAIN_DAYS = 180

DEFAULT_SUSPICIOUS_TLDS = frozenset(
    ["tk", "ml", "ga", "cf", "gq", "zip", "mov",
     "xyz", "top", "click", "loan", "icu", "buzz"]
)


def _load_suffix_snapshot() -> frozenset[str]:
    text = (
        resources.files("websentinel")
        .joinpath("data/public_suffix_snapshot.txt")
        .read_text(encoding="utf-8")
    )
    suffixes = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            suffixes.add(line)
    return frozenset(suffixes)


PUBLIC_SUFFIXES = _load_suffix_snapshot()


@dataclass(frozen=True)
class UrlParts:
    scheme: str
    host: str
    host_is_ip: bool
    registrable_domain: str
    subdomain_count: int
    path: str
    query: str
    port: Optional[int] = None


@dataclass(frozen=True)
class UrlLexicalFeatures:
    url_length: int
    host_length: int
    digit_ratio: float
    char_entropy: float
    subdomain_count: int
    has_at_symbol: bool
    has_punycode: bool
    hyphen_count: int
    host_is_ip: bool
    suspicious_tld: bool


@dataclass(frozen=True)
class DomainMetadata:
    age_days: Optional[int]
    is_young: bool
    cert_valid: Optional[bool]
    cert_days_remaining: Optional[int]
    provider_resolved: bool


def _is_ip_literal(host: str) -> bool:
    candidate = host[1:-1] if host.startswith("[") and host.endswith("]") else host
    try:
        ipaddress.ip_address(candidate)
        return True
    except ValueError:
        return False


def registrable_domain(host: str) -> str:
    """Public-suffix-plus-one label; the whole host when nothing matches deeper.

    Unknown TLDs fall back to treating the last label as the suffix.
    """
    host = host.lower().rstrip(".")
    if _is_ip_literal(host) or "." not in host:
        return host
    labels = host.split(".")
    # Longest suffix from the snapshot that still leaves one label.
    for start in range(1, len(labels)):
        candidate = ".".join(labels[start:])
        if candidate in PUBLIC_SUFFIXES:
            return ".".join(labels[start - 1:])
    if host in PUBLIC_SUFFIXES:
        return host
    return ".".join(labels[-2:])


def parse_url(raw: str) -> UrlParts:
    """Decompose a raw URL; raises MalformedUrl / UnsupportedScheme."""
    if not raw:
        raise MalformedUrl("empty URL")
    try:
        split = urlsplit(raw)
        port = split.port
    except ValueError as exc:
        raise MalformedUrl(f"unparseable URL: {exc}")
    if not split.scheme:
        raise MalformedUrl(f"no scheme in {raw!r}")
    if split.scheme.lower() not in ("http", "https"):
        raise UnsupportedScheme(f"scheme {split.scheme!r} not supported")
    host = (split.hostname or "").lower()
    if not host:
        raise MalformedUrl(f"no host in {raw!r}")

    host_is_ip = _is_ip_literal(host)
    reg_domain = registrable_domain(host)
    if host_is_ip or host == reg_domain:
        subdomain_count = 0
    else:
        prefix = host[: -(len(reg_domain) + 1)]
        subdomain_count = len([p for p in prefix.split(".") if p])

    return UrlParts(
        scheme=split.scheme.lower(),
        host=host,
        host_is_ip=host_is_ip,
        registrable_domain=reg_domain,
        subdomain_count=subdomain_count,
        path=split.path,
        query=split.query,
        port=port,
    )


def char_entropy(text: str) -> float:
    """Shannon entropy in bits over the characters of text.

    Codepoint-wise; for pure-ASCII strings this equals the byte-wise value.
    """
    if not text:
        return 0.0
    counts = Counter(text)
    n = len(text)
    entropy = 0.0
    for count in counts.values():
        p = count / n
        entropy -= p * math.log2(p)
    return max(entropy, 0.0)


def lexical_features(
    parts: UrlParts,
    raw: str,
    suspicious_tlds: frozenset[str] | set[str] = DEFAULT_SUSPICIOUS_TLDS,
) -> UrlLexicalFeatures:
    """URL-side features over the raw string plus its parsed parts."""
    digits = sum(1 for c in raw if c.isdigit())
    tld = "" if parts.host_is_ip else parts.host.rsplit(".", 1)[-1]
    return UrlLexicalFeatures(
        url_length=len(raw),
        host_length=len(parts.host),
        digit_ratio=digits / len(raw) if raw else 0.0,
        char_entropy=char_entropy(raw),
        subdomain_count=parts.subdomain_count,
        has_at_symbol="@" in raw,
        has_punycode=any(label.startswith("xn--") for label in parts.host.split(".")),
        hyphen_count=parts.host.count("-"),
        host_is_ip=parts.host_is_ip,
        suspicious_tld=tld in suspicious_tlds,
    )


class MetadataProvider(Protocol):
    """Resolves a hostname to domain/certificate metadata.

    Implementations must be safe for concurrent lookup calls. Returns None
    for unknown hosts; may raise ProviderTimeout.
    """

    def lookup(self, host: str) -> Optional[dict]:
        ...


class NullMetadataProvider:
    """Provider that never resolves anything."""

    def lookup(self, host: str) -> Optional[dict]:
        return None


class FixtureMetadataProvider:
    """Metadata from a JSON table file: host -> record.

    Record fields (fixed names): created_date (ISO-8601), cert_valid (bool),
    cert_expiry (ISO-8601). Any field may be omitted.
    """

    def __init__(self, table: dict | None = None, path: str | None = None):
        if path is not None:
            with open(path, "r", encoding="utf-8") as fh:
                table = json.load(fh)
        self._table = {k.lower(): v for k, v in (table or {}).items()}

    def lookup(self, host: str) -> Optional[dict]:
        return self._table.get(host.lower())


def _parse_iso(value: str) -> datetime:
    dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def domain_metadata(
    host: str,
    provider: MetadataProvider,
    now: datetime | None = None,
    young_days: int = DEFAULT_YOUNG_DOMAIN_DAYS,
) -> DomainMetadata:
    """Resolve age/certificate metadata; failures degrade, never raise."""
    if now is None:
        now = datetime.now(timezone.utc)
    elif now.tzinfo is None:
        now = now.replace(tzinfo=timezone.utc)

    unresolved = DomainMetadata(
        age_days=None,
        is_young=False,
        cert_valid=None,
        cert_days_remaining=None,
        provider_resolved=False,
    )

    try:
        record = provider.lookup(host)
    except ProviderTimeout as exc:
        log.warning("metadata provider timed out for %s: %s", host, exc)
        return unresolved
    if record is None:
        return unresolved

    age_days = None
    if "created_date" in record:
        created = _parse_iso(record["created_date"])
        age_days = max(0, (now - created).days)

    cert_valid = record.get("cert_valid")
    cert_days_remaining = None
    if cert_valid is not None and "cert_expiry" in record:
        expiry = _parse_iso(record["cert_expiry"])
        cert_days_remaining = (expiry - now).days

    return DomainMetadata(
        age_days=age_days,
        is_young=age_days is not None and age_days < young_days,
        cert_valid=cert_valid,
        cert_days_remaining=cert_days_remaining,
        provider_resolved=True,
    )
