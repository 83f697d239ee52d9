import pytest

from gnprove import settings as settings_module


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Keep settings.json out of the real user data directory."""
    monkeypatch.setattr(settings_module, "user_data_dir", lambda app, author: str(tmp_path / "data"))
    monkeypatch.setattr(settings_module, "_settings", None)
    monkeypatch.delenv(settings_module.FIXTURES_ENV, raising=False)
    return settings_module.get_settings()
