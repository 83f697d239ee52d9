import pytest

from gnprove.settings import BUILTIN_PROFILES, FIXTURES_ENV, Settings, get_settings


def test_builtin_profile_merges_common_keys(isolated_settings):
    cfg = isolated_settings.profile('full', 'tm-stieltjes')
    assert cfg['source_level'] == 9
    assert cfg['max_states'] == 4096
    assert cfg['name'] == 'full'
    assert cfg['pipeline'] == 'tm-stieltjes'


def test_unknown_profile_and_pipeline(isolated_settings):
    with pytest.raises(KeyError):
        isolated_settings.profile('nope', 'tm-ncf')
    with pytest.raises(KeyError):
        isolated_settings.profile('full', 'nope')


def test_user_profile_overrides(isolated_settings):
    isolated_settings.set_profile('quick', {'retries': 0, 'pd-ncf': {'max_level': 12}})
    cfg = isolated_settings.profile('quick', 'pd-ncf')
    assert cfg['retries'] == 0
    assert cfg['max_level'] == 12
    assert cfg['ladders'] == BUILTIN_PROFILES['full']['pd-ncf']['ladders']
    assert 'quick' in isolated_settings.profile_names()
    # persisted and read back by a fresh instance
    assert Settings().profile('quick', 'tm-ncf')['retries'] == 0


def test_profile_copies_are_independent(isolated_settings):
    cfg = isolated_settings.profile('auto', 'tm-ncf')
    cfg['ladders'][0].append(99)
    assert 99 not in isolated_settings.profile('auto', 'tm-ncf')['ladders'][0]


def test_recent_reports(isolated_settings, tmp_path):
    paths = []
    for i in range(12):
        p = tmp_path / f"r{i}.json"
        p.write_text("{}")
        paths.append(p)
        isolated_settings.add_recent_report(str(p))
    recent = isolated_settings.get_recent_reports()
    assert len(recent) == 10
    assert recent[0] == str(paths[-1].resolve())
    paths[-1].unlink()
    assert str(paths[-1].resolve()) not in isolated_settings.get_recent_reports()


def test_fixtures_dir_precedence(isolated_settings, tmp_path, monkeypatch):
    assert isolated_settings.fixtures_dir().name == "fixtures"
    monkeypatch.setenv(FIXTURES_ENV, str(tmp_path / "env"))
    assert isolated_settings.fixtures_dir() == tmp_path / "env"
    assert isolated_settings.fixtures_dir(str(tmp_path / "cli")) == tmp_path / "cli"


def test_corrupt_settings_file_falls_back(isolated_settings, capsys):
    isolated_settings.settings_file.write_text("{not json")
    s = Settings()
    assert "Warning: Could not load settings" in capsys.readouterr().out
    assert s.profile_names() == sorted(BUILTIN_PROFILES)


def test_global_instance(isolated_settings):
    assert get_settings() is isolated_settings
