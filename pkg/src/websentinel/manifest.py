"""Frozen feature-vector layout shared by extraction, dataset and model code.

Every model, the synthetic generator, CSV files and serialized bundles all
use this ordering. Changing it invalidates trained bundles, so the list is
append-only and the bundle format carries its own copy for verification.
"""

from __future__ import annotations

# URL lexical features
URL_FEATURES = [
    "url_length",
    "host_length",
    "digit_ratio",
    "char_entropy",
    "subdomain_count",
    "has_at_symbol",
    "has_punycode",
    "hyphen_count",
    "host_is_ip",
    "suspicious_tld",
]

# Domain/certificate metadata (0 + resolved-indicator encoding for misses)
DOMAIN_FEATURES = [
    "domain_age_days",
    "domain_is_young",
    "cert_valid",
    "cert_days_remaining",
    "metadata_resolved",
]

# Page content structure
CONTENT_FEATURES = [
    "form_count",
    "password_input_count",
    "external_form_actions",
    "script_count",
    "external_script_ratio",
    "iframe_count",
    "hidden_element_count",
    "meta_refresh_present",
    "meta_refresh_cross_origin",
    "external_link_ratio",
    "max_script_obfuscation",
]

# Browsing-session dynamics
SESSION_FEATURES = [
    "redirect_chain_length",
    "cross_origin_hops",
    "rapid_redirect_count",
    "third_party_request_ratio",
    "unique_third_party_domains",
    "external_form_submit",
    "sensitive_field_focus_count",
    "hidden_redirect_flag",
]

FEATURE_NAMES: list[str] = (
    URL_FEATURES + DOMAIN_FEATURES + CONTENT_FEATURES + SESSION_FEATURES
)

FEATURE_INDEX: dict[str, int] = {name: i for i, name in enumerate(FEATURE_NAMES)}

N_FEATURES = len(FEATURE_NAMES)

SESSION_SLOTS = [FEATURE_INDEX[name] for name in SESSION_FEATURES]

# Human-readable labels served to clients (popup detail view etc.)
FEATURE_LABELS: dict[str, str] = {
    "url_length": "URL length",
    "host_length": "hostname length",
    "digit_ratio": "digits in URL",
    "char_entropy": "URL character entropy",
    "subdomain_count": "subdomain depth",
    "has_at_symbol": "@ symbol in URL",
    "has_punycode": "punycode hostname",
    "hyphen_count": "hyphens in hostname",
    "host_is_ip": "raw IP address host",
    "suspicious_tld": "commonly-abused TLD",
    "domain_age_days": "domain age",
    "domain_is_young": "domain registered < 6 months ago",
    "cert_valid": "SSL certificate validity",
    "cert_days_remaining": "days until certificate expiry",
    "metadata_resolved": "domain metadata available",
    "form_count": "forms on page",
    "password_input_count": "sensitive input fields",
    "external_form_actions": "forms posting off-site",
    "script_count": "scripts on page",
    "external_script_ratio": "third-party scripts",
    "iframe_count": "iframes on page",
    "hidden_element_count": "hidden elements",
    "meta_refresh_present": "meta-refresh redirect",
    "meta_refresh_cross_origin": "meta-refresh to another site",
    "external_link_ratio": "links pointing off-site",
    "max_script_obfuscation": "script obfuscation",
    "redirect_chain_length": "redirect chain length",
    "cross_origin_hops": "cross-origin redirects",
    "rapid_redirect_count": "rapid redirects",
    "third_party_request_ratio": "third-party requests",
    "unique_third_party_domains": "distinct third-party domains",
    "external_form_submit": "form submitted off-site",
    "sensitive_field_focus_count": "sensitive fields focused",
    "hidden_redirect_flag": "redirect without user click",
}


def build_feature_vector(
    url_features=None,
    domain_metadata=None,
    content_features=None,
    session_features=None,
) -> list[float]:
    """Assemble the full fixed-order vector from per-module feature objects.

    Each argument is the corresponding dataclass (or None, which zero-fills
    that block: e.g. no HTML supplied, no session activity yet).
    """
    vec = [0.0] * N_FEATURES

    def put(name: str, value) -> None:
        vec[FEATURE_INDEX[name]] = float(value)

    if url_features is not None:
        put("url_length", url_features.url_length)
        put("host_length", url_features.host_length)
        put("digit_ratio", url_features.digit_ratio)
        put("char_entropy", url_features.char_entropy)
        put("subdomain_count", url_features.subdomain_count)
        put("has_at_symbol", url_features.has_at_symbol)
        put("has_punycode", url_features.has_punycode)
        put("hyphen_count", url_features.hyphen_count)
        put("host_is_ip", url_features.host_is_ip)
        put("suspicious_tld", url_features.suspicious_tld)

    if domain_metadata is not None:
        put("domain_age_days", domain_metadata.age_days or 0)
        put("domain_is_young", domain_metadata.is_young)
        put("cert_valid", bool(domain_metadata.cert_valid))
        put("cert_days_remaining", domain_metadata.cert_days_remaining or 0)
        put("metadata_resolved", domain_metadata.provider_resolved)

    if content_features is not None:
        put("form_count", content_features.form_count)
        put("password_input_count", content_features.password_input_count)
        put("external_form_actions", content_features.external_form_actions)
        put("script_count", content_features.script_count)
        put("external_script_ratio", content_features.external_script_ratio)
        put("iframe_count", content_features.iframe_count)
        put("hidden_element_count", content_features.hidden_element_count)
        put("meta_refresh_present", content_features.meta_refresh_present)
        put("meta_refresh_cross_origin", content_features.meta_refresh_cross_origin)
        put("external_link_ratio", content_features.external_link_ratio)
        put("max_script_obfuscation", content_features.max_script_obfuscation)

    if session_features is not None:
        put("redirect_chain_length", session_features.redirect_chain_length)
        put("cross_origin_hops", session_features.cross_origin_hops)
        put("rapid_redirect_count", session_features.rapid_redirect_count)
        put("third_party_request_ratio", session_features.third_party_request_ratio)
        put("unique_third_party_domains", session_features.unique_third_party_domains)
        put("external_form_submit", session_features.external_form_submit)
        put("sensitive_field_focus_count", session_features.sensitive_field_focus_count)
        put("hidden_redirect_flag", session_features.hidden_redirect_flag)

    return vec


def overlay_session_features(vec: list[float], session_features) -> list[float]:
    """Copy of vec with the session slots overwritten from session_features."""
    out = list(vec)
    out[FEATURE_INDEX["redirect_chain_length"]] = float(session_features.redirect_chain_length)
    out[FEATURE_INDEX["cross_origin_hops"]] = float(session_features.cross_origin_hops)
    out[FEATURE_INDEX["rapid_redirect_count"]] = float(session_features.rapid_redirect_count)
    out[FEATURE_INDEX["third_party_request_ratio"]] = float(session_features.third_party_request_ratio)
    out[FEATURE_INDEX["unique_third_party_domains"]] = float(session_features.unique_third_party_domains)
    out[FEATURE_INDEX["external_form_submit"]] = float(session_features.external_form_submit)
    out[FEATURE_INDEX["sensitive_field_focus_count"]] = float(session_features.sensitive_field_focus_count)
    out[FEATURE_INDEX["hidden_redirect_flag"]] = float(session_features.hidden_redirect_flag)
    return out
