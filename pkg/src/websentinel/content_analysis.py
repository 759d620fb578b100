"""Structural HTML features that signal credential harvesting or deception.

Parsing is lenient tag-soup scanning via the stdlib HTMLParser: malformed
markup never raises, unparseable regions are simply skipped. "External"
always means the resolved target's registrable domain differs from the
page host's.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from html.parser import HTMLParser
from typing import Iterable, Optional
from urllib.parse import urljoin, urlsplit

from .feature_extraction import char_entropy, registrable_domain

DEFAULT_SENSITIVE_KEYWORDS = ("ssn", "card", "cvv")

# Weighted combination for the obfuscation heuristic; overridable via config.
DEFAULT_OBFUSCATION_WEIGHTS = {
    "weight_eval": 0.35,
    "weight_escape_density": 0.25,
    "weight_concat_density": 0.20,
    "weight_entropy": 0.20,
    "entropy_threshold_bits": 4.0,
}

_EVAL_RE = re.compile(r"\beval\s*\(|\bFunction\s*\(")
_ESCAPE_RE = re.compile(r"\\x[0-9a-fA-F]{2}|\\u[0-9a-fA-F]{4}")
_CONCAT_RE = re.compile(r"['\"]\s*\+\s*['\"]")
_HIDDEN_STYLE_RE = re.compile(
    r"display\s*:\s*none|visibility\s*:\s*hidden|(?:width|height)\s*:\s*[01](?:px)?\b"
)
_META_URL_RE = re.compile(r"url\s*=\s*['\"]?([^'\";>]+)", re.IGNORECASE)


@dataclass(frozen=True)
class ContentFeatures:
    form_count: int
    password_input_count: int
    external_form_actions: int
    script_count: int
    external_script_ratio: float
    iframe_count: int
    hidden_element_count: int
    meta_refresh_present: bool
    meta_refresh_cross_origin: bool
    external_link_ratio: float
    max_script_obfuscation: float


def script_obfuscation_score(
    script_text: str, weights: dict | None = None
) -> float:
    """Heuristic obfuscation score in [0,1] for one script body.

    Weighted sum of four signals:
      - eval/Function-constructor usage (flag),
      - hex/unicode escape density, scaled so one escape per 16
        characters saturates the component,
      - string-concatenation chain density ("a"+"b"), saturating at 5,
      - character entropy above the configured threshold (flag).
    """
    w = DEFAULT_OBFUSCATION_WEIGHTS if weights is None else weights
    if not script_text:
        return 0.0

    eval_flag = 1.0 if _EVAL_RE.search(script_text) else 0.0
    escapes = len(_ESCAPE_RE.findall(script_text))
    escape_density = min(1.0, escapes / max(1.0, len(script_text) / 16))
    concats = len(_CONCAT_RE.findall(script_text))
    concat_density = min(1.0, concats / 5.0)
    entropy_flag = (
        1.0 if char_entropy(script_text) > w["entropy_threshold_bits"] else 0.0
    )

    score = (
        w["weight_eval"] * eval_flag
        + w["weight_escape_density"] * escape_density
        + w["weight_concat_density"] * concat_density
        + w["weight_entropy"] * entropy_flag
    )
    return min(1.0, max(0.0, score))


class _Collector(HTMLParser):
    """Streaming tag counter; tolerant of arbitrary input."""

    def __init__(self, page_host: str, sensitive_keywords: Iterable[str]):
        super().__init__(convert_charrefs=True)
        self.page_host = page_host
        self.page_reg = registrable_domain(page_host) if page_host else ""
        self.keywords = tuple(k.lower() for k in sensitive_keywords)

        self.form_count = 0
        self.external_form_actions = 0
        self.sensitive_input_count = 0
        self.script_count = 0
        self.external_script_count = 0
        self.iframe_count = 0
        self.hidden_element_count = 0
        self.meta_refresh_present = False
        self.meta_refresh_cross_origin = False
        self.link_count = 0
        self.external_link_count = 0
        self.script_bodies: list[str] = []

        self._in_script = False
        self._script_chunks: list[str] = []

    def _is_external(self, target: str) -> Optional[bool]:
        """True/False for resolvable http(s) targets, None for everything else."""
        target = (target or "").strip()
        if not target or not self.page_host:
            return None
        lowered = target.lower()
        if lowered.startswith(("javascript:", "mailto:", "data:", "#", "tel:")):
            return None
        try:
            resolved = urljoin(f"http://{self.page_host}/", target)
            split = urlsplit(resolved)
        except ValueError:
            return None
        if split.scheme not in ("http", "https") or not split.hostname:
            return None
        return registrable_domain(split.hostname.lower()) != self.page_reg

    def _handle_tag(self, tag: str, attrs_list) -> None:
        attrs = {}
        for key, value in attrs_list:
            if key not in attrs:
                attrs[key.lower()] = value or ""

        style = attrs.get("style", "").lower()
        if _HIDDEN_STYLE_RE.search(style) or attrs.get("width") in ("0", "1") or attrs.get("height") in ("0", "1"):
            self.hidden_element_count += 1
        if attrs.get("type", "").lower() == "hidden" and tag == "input":
            self.hidden_element_count += 1

        if tag == "form":
            self.form_count += 1
            if self._is_external(attrs.get("action", "")):
                self.external_form_actions += 1
        elif tag == "input":
            itype = attrs.get("type", "").lower()
            name_id = (attrs.get("name", "") + " " + attrs.get("id", "")).lower()
            if itype == "password" or any(k in name_id for k in self.keywords):
                self.sensitive_input_count += 1
        elif tag == "script":
            self.script_count += 1
            src = attrs.get("src", "")
            if src and self._is_external(src):
                self.external_script_count += 1
        elif tag == "iframe":
            self.iframe_count += 1
        elif tag == "meta":
            if attrs.get("http-equiv", "").lower() == "refresh":
                self.meta_refresh_present = True
                match = _META_URL_RE.search(attrs.get("content", ""))
                if match and self._is_external(match.group(1)):
                    self.meta_refresh_cross_origin = True
        elif tag == "a":
            href = attrs.get("href", "")
            verdict = self._is_external(href)
            if verdict is not None:
                self.link_count += 1
                if verdict:
                    self.external_link_count += 1

    def handle_starttag(self, tag, attrs):
        tag = tag.lower()
        self._handle_tag(tag, attrs)
        if tag == "script":
            self._in_script = True
            self._script_chunks = []

    def handle_startendtag(self, tag, attrs):
        self._handle_tag(tag.lower(), attrs)

    def handle_endtag(self, tag):
        if tag.lower() == "script" and self._in_script:
            self._in_script = False
            self.script_bodies.append("".join(self._script_chunks))
            self._script_chunks = []

    def handle_data(self, data):
        if self._in_script:
            self._script_chunks.append(data)

    def flush(self):
        if self._in_script:
            self._in_script = False
            self.script_bodies.append("".join(self._script_chunks))
            self._script_chunks = []


def analyze_html(
    html: str,
    page_host: str,
    sensitive_keywords: Iterable[str] = DEFAULT_SENSITIVE_KEYWORDS,
    obfuscation_weights: dict | None = None,
) -> ContentFeatures:
    """Extract ContentFeatures from a document string. Total: never raises."""
    collector = _Collector(page_host, sensitive_keywords)
    try:
        collector.feed(html or "")
        collector.close()
    except Exception:
        # Tag-soup guarantee: keep whatever was counted before the parser gave up.
        pass
    collector.flush()

    max_obfuscation = 0.0
    for body in collector.script_bodies:
        score = script_obfuscation_score(body, obfuscation_weights)
        if score > max_obfuscation:
            max_obfuscation = score

    script_total = collector.script_count
    external_script_ratio = (
        collector.external_script_count / script_total if script_total else 0.0
    )
    external_link_ratio = (
        collector.external_link_count / collector.link_count
        if collector.link_count
        else 0.0
    )

    return ContentFeatures(
        form_count=collector.form_count,
        password_input_count=collector.sensitive_input_count,
        external_form_actions=collector.external_form_actions,
        script_count=script_total,
        external_script_ratio=external_script_ratio,
        iframe_count=collector.iframe_count,
        hidden_element_count=collector.hidden_element_count,
        meta_refresh_present=collector.meta_refresh_present,
        meta_refresh_cross_origin=collector.meta_refresh_cross_origin,
        external_link_ratio=external_link_ratio,
        max_script_obfuscation=max_obfuscation,
    )
