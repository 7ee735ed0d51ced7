import pytest


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Keep every test's coefficient/correlation cache in a throwaway dir."""
    monkeypatch.setenv("SDMCAP_CACHE_DIR", str(tmp_path / "cache"))
