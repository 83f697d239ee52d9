import json

import pytest

from gnprove.__main__ import main
from gnprove.cli import RunConfig, UsageError, parse_args
from gnprove.messages import EXIT_CERTIFIED, EXIT_INTERNAL, EXIT_USAGE


@pytest.fixture
def run(tmp_path):
    log_file = str(tmp_path / "gnprove.log")

    def go(*argv):
        return main(["--log-file", log_file, *argv])
    return go


@pytest.fixture
def fixtures(isolated_settings):
    return isolated_settings.fixtures_dir()


@pytest.mark.parametrize("argv", [
    [],
    ["prove"],
    ["prove", "nope"],
    ["bogus"],
])
def test_parse_usage_errors(argv):
    with pytest.raises(UsageError):
        parse_args(argv)


def test_run_config_overrides():
    args = parse_args(["--profile", "auto", "prove", "pd-ncf", "--a", "z^2", "--b", "z",
                       "--set", "retries=5", "--set", 'ladders=[[0, 1]]'])
    cfg = RunConfig.from_args(args)
    assert cfg.letters == ["z^2", "z"]
    assert cfg.overrides == {'retries': 5, 'ladders': [[0, 1]]}
    profile = cfg.profile_for('pd-ncf')
    assert profile['retries'] == 5
    assert profile['name'] == 'auto'


def test_bad_override_is_a_usage_error(run):
    assert run("prove", "tm-ncf", "--a", "z", "--b", "z + 1", "--set", "retries=five") == EXIT_USAGE


def test_missing_letters(run):
    assert run("prove", "tm-ncf", "--a", "z") == EXIT_USAGE
    assert run("prove", "tm-stieltjes", "--symbolic", "--all-representatives") == EXIT_USAGE


def test_no_command(run, capsys):
    assert run() == EXIT_USAGE
    assert "Error:" in capsys.readouterr().out


def test_cf_expansion(run, capsys):
    assert run("cf", "--quotients", "z;z + 1", "--expand") == EXIT_CERTIFIED
    out = capsys.readouterr().out
    assert "convergents" in out
    assert out.strip().splitlines()[-1] == "z; z + 1"


def test_stieltjes(run, capsys):
    assert run("stieltjes", "--coeffs", "u,1", "--order", "4") == EXIT_CERTIFIED
    out = capsys.readouterr().out
    assert "P = u" in out
    assert "Q = x + 1" in out
    assert "O(x^4)" in out


def test_christol_structured(run, capsys, fixtures):
    assert run("christol", "--equation", str(fixtures / "cubic_f4.eq"), "--emit", "structured") == EXIT_CERTIFIED
    data = json.loads(capsys.readouterr().out)
    assert data['base'] == 2
    assert data['states'] == len(data['transitions'])


def test_christol_trace(run, capsys, fixtures):
    assert run("christol", "--equation", str(fixtures / "cubic_f4.eq"), "--emit", "trace") == EXIT_CERTIFIED
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("T = ")
    assert lines[1].startswith("0: ")


def test_automaton_run(run, capsys, fixtures):
    assert run("automaton", "--table", str(fixtures / "pd_z2_z_ae00.tex"), "--run", "8") == EXIT_CERTIFIED
    values = capsys.readouterr().out.strip().split(", ")
    assert len(values) == 8
    assert values[0] == "1"


def test_missing_file_is_internal(run, tmp_path, capsys):
    assert run("christol", "--equation", str(tmp_path / "missing.eq")) == EXIT_INTERNAL
    assert "Error:" in capsys.readouterr().out


def test_guess_minpoly(run, capsys, tmp_path):
    eq = tmp_path / "catalan.eq"
    eq.write_text("field = 2\nP = x y^2 + y + 1\ninit = 1\n")
    assert run("guess-minpoly", "--equation", str(eq), "--ladder", "0,1,2", "--degrees", "2,2,2") == EXIT_CERTIFIED
    assert capsys.readouterr().out.strip() == "xy^2 + y + 1"
    assert run("guess-minpoly", "--equation", str(eq), "--ladder", "0,1", "--degrees", "2") == EXIT_USAGE
