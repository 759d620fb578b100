import json
import os

import pytest

from websentinel.config import EngineConfig
from websentinel.feature_extraction import FixtureMetadataProvider
from websentinel.models.ensemble import load_bundle

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

FIXED_NOW = 1753920000.0  # 2025-07-31T00:00:00Z, matches the golden fixtures


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def golden_expected() -> dict:
    with open(fixture_path("golden_expected.json")) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def golden_bundle():
    return load_bundle(fixture_path("bundle_seed42.json"))


@pytest.fixture(scope="session")
def known_bad_vector() -> list:
    with open(fixture_path("known_bad_vector.json")) as fh:
        return json.load(fh)["vector"]


@pytest.fixture(scope="session")
def known_bad_html() -> str:
    with open(fixture_path("known_bad.html"), encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture(scope="session")
def metadata_provider() -> FixtureMetadataProvider:
    return FixtureMetadataProvider(path=fixture_path("metadata_fixture.json"))


@pytest.fixture()
def default_config() -> EngineConfig:
    return EngineConfig()
