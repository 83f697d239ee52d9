import pytest

from gnprove.fields import RationalFunctionField, field_make
from gnprove.fixtures import (EQUATION_SETS, PD_Z3_CONDITIONS, TABLES, check_table, fixtures_check,
                              load_equation_file, load_equations, load_table, make_field, parse_field_spec)
from gnprove.relations import check_regex_conditions, language_condition
from gnprove.messages import Status
from gnprove.series import certify_unique_solution
from gnprove.textfmt import ParseError


@pytest.fixture
def fixtures(isolated_settings):
    return isolated_settings.fixtures_dir()


def test_parse_field_spec():
    assert parse_field_spec("2^2") == field_make(2, 2)
    assert parse_field_spec("2^2:u^2+u+1") == field_make(2, 2)
    assert parse_field_spec("2") == field_make(2, 1)
    assert parse_field_spec("F2(a)") == RationalFunctionField('a')
    with pytest.raises(ParseError):
        parse_field_spec("3^2")


def test_make_field():
    assert make_field({'kind': 'rational', 'symbol': 'a'}) == RationalFunctionField('a')
    assert make_field({'kind': 'finite', 'm': 2, 'symbol': 'a'}).symbol == 'a'


@pytest.mark.parametrize("key", sorted(EQUATION_SETS))
def test_shipped_equations_load(fixtures, key):
    eset = EQUATION_SETS[key]
    eqs = load_equations(fixtures / eset.file, make_field(eset.field))
    assert len(eqs) == 16
    assert all(eq.phi.ydeg >= 1 for eq in eqs.values())


def test_shipped_equation_is_certified(fixtures):
    f2 = field_make(2, 1)
    eq = load_equations(fixtures / "pd_z2_z.txt", f2)["A^e[0,0]"]
    assert eq.init == (1, 0)
    assert certify_unique_solution(eq.phi, eq.init).ok


def test_corrupted_equation_fails(fixtures, tmp_path):
    text = (fixtures / "pd_z2_z.txt").read_text()
    bad = tmp_path / "bad.txt"
    bad.write_text(text.replace("p0 = x^8 + x^6 + x^5 + x^2 + 1", "p0 = x^8 + x^6 + x^5 + x^2", 1))
    eq = load_equations(bad, field_make(2, 1))["A^e[0,0]"]
    assert not certify_unique_solution(eq.phi, eq.init).ok


def test_equation_file_errors(tmp_path):
    f2 = field_make(2, 1)
    p = tmp_path / "e.txt"
    p.write_text("[A^e,0,0]\np0 = x\n")
    with pytest.raises(ParseError):
        load_equations(p, f2)
    p.write_text("[A^e,0,0]\nbogus\n")
    with pytest.raises(ParseError):
        load_equations(p, f2)


def test_single_equation_file(fixtures, tmp_path):
    fld, P, init = load_equation_file(fixtures / "cubic_f4.eq")
    assert fld == field_make(2, 2)
    assert fld.symbol == 'a'
    assert P.ydeg == 3
    assert init == (fld.gen.value,)
    p = tmp_path / "x.eq"
    p.write_text("field = 2^2\nP = y + 1\n")
    with pytest.raises(ParseError):
        load_equation_file(p)


def test_printed_table_generates_series(fixtures):
    f2 = field_make(2, 1)
    d = load_table(fixtures / "pd_z2_z_ae00.tex", f2)
    assert d.size == 7
    series = load_equations(fixtures / "pd_z2_z.txt", f2)["A^e[0,0]"].series(256)
    assert all(d(n) == series.coeffs[n] for n in range(256))


def test_table_rebuilt_by_christol(fixtures):
    assert check_table('pd_z2_z_ae00', fixtures, {'max_states': 4096}).status is Status.PASSED


@pytest.fixture
def pd_copy(fixtures, tmp_path):
    for name in ("pd_z2_z.txt", "pd_z2_z_ae00.tex"):
        (tmp_path / name).write_text((fixtures / name).read_text())
    return tmp_path


def test_mutated_output_is_caught(pd_copy):
    tex = pd_copy / "pd_z2_z_ae00.tex"
    tex.write_text(tex.read_text().replace("0 & 1& 2 & 0& 4 & 0& 6 & 1", "0 & 1& 2 & 0& 4 & 1& 6 & 1", 1))
    result = check_table('pd_z2_z_ae00', pd_copy, {'max_states': 4096})
    assert result.status is Status.FAILED
    assert "printed" in result.clause


def test_mutated_equation_is_caught(pd_copy):
    eqs = pd_copy / "pd_z2_z.txt"
    eqs.write_text(eqs.read_text().replace("p0 = x^8 + x^6 + x^5 + x^2 + 1", "p0 = x^8 + x^6 + x^2 + 1", 1))
    result = check_table('pd_z2_z_ae00', pd_copy, {'max_states': 512})
    assert result.status is not Status.PASSED


def _pd_z3_conditions(fld, flip=None):
    out = []
    for i, (regex, words, constant) in enumerate(PD_Z3_CONDITIONS):
        out.append(language_condition(fld, regex, words, constant ^ 1 if i == flip else constant))
    return out


def test_printed_table_meets_its_conditions(fixtures):
    f2 = field_make(2, 1)
    d = load_table(fixtures / "pd_z3_ae00.tex", f2)
    check = check_regex_conditions(d, _pd_z3_conditions(f2), name="pd_z3_ae00")
    assert check.status is Status.PASSED, check.counterexample
    assert len(check.witness) == len(PD_Z3_CONDITIONS)


@pytest.mark.parametrize("flip", [0, 4, 9])
def test_flipped_condition_fails(fixtures, flip):
    f2 = field_make(2, 1)
    d = load_table(fixtures / "pd_z3_ae00.tex", f2)
    check = check_regex_conditions(d, _pd_z3_conditions(f2, flip))
    assert check.status is Status.FAILED
    assert check.counterexample["condition"] == flip


@pytest.mark.slow
def test_all_fixtures(fixtures, isolated_settings):
    results = fixtures_check(fixtures, lambda pipeline: isolated_settings.profile('full', pipeline))
    assert len(results) == 16 * len(EQUATION_SETS) + len(TABLES)
    assert all(r.status is Status.PASSED for r in results), [r.to_dict() for r in results if
                                                            r.status is not Status.PASSED]
