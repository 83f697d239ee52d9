import pytest

from gnprove.bipoly import BiPoly
from gnprove.cfrac import LetterError, stieltjes_series, tm_letters
from gnprove.fields import FieldElem, RationalFunctionField, field_make
from gnprove.fixtures import load_equations
from gnprove.messages import Stage, Status
from gnprove.poly import UniPoly
from gnprove.prover import (PD_NCF, TM_NCF, ProofReport, ProofStep, Prover, closed_form_polynomial, field_from_dict,
                            field_to_dict, final_entry, letter_pairs, letter_text, parse_letter, pipeline_pd_ncf,
                            pipeline_tm_ncf, pipeline_tm_stieltjes, replay, rescale_annihilator, series_name,
                            stieltjes_reduction, stieltjes_representatives, sweep_tm_ncf, z_form)
from gnprove.series import residual_valuation, solve_unique_series


@pytest.fixture
def f4():
    return field_make(2, 2)


def test_series_name():
    assert series_name('M', 1, 0, 1) == "M^o[0,1]"
    assert series_name('A', 0, 1, 1) == "A^e[1,1]"


@pytest.mark.parametrize("n", range(4))
def test_family_words(n):
    first, second = TM_NCF.words('a', 'b', n)
    assert len(first) == len(second) == 1 << n
    assert all(x != y for x, y in zip(first, second))
    first, second = PD_NCF.words('a', 'b', n)
    assert len(first) == 1 << n
    assert len(second) == max(1, 1 << n)


def test_param_parity():
    p = TM_NCF.param(0)
    assert TM_NCF.parity_of(p.start) == 0
    assert p.step == 2


def test_letter_pairs():
    assert len(list(letter_pairs(2))) == 2
    assert len(list(letter_pairs(3))) == 18
    assert all(a != b and a.deg + b.deg <= 3 for a, b in letter_pairs(3))


def test_letters_round_trip(f4):
    a = parse_letter("z^2 + u", f4, 'ncf')
    assert letter_text(a) == "z^2 + u"
    e = parse_letter("u + 1", f4, 'stieltjes')
    assert isinstance(e, FieldElem)
    assert letter_text(e) == "u + 1"


@pytest.mark.parametrize("fld", [field_make(2, 3), RationalFunctionField('a')])
def test_field_dict_round_trip(fld):
    assert field_from_dict(field_to_dict(fld)) == fld


@pytest.mark.parametrize("m, count", [(2, 1), (3, 2), (4, 3)])
def test_stieltjes_representatives(m, count):
    fld = field_make(2, m)
    reps = stieltjes_representatives(fld)
    assert len(reps) == count
    assert all(not fld.in_subfield(r.value, 1) for r in reps)


def test_stieltjes_reduction(f4):
    g = f4.gen
    assert stieltjes_reduction(g) == (g, 0, f4(1))
    r, j, b = stieltjes_reduction(f4(3))
    assert (r, j) == (g, 1)
    r, j, b = stieltjes_reduction(f4(1), g)
    assert r.frob(j) == f4(1) / g
    assert b == g


def test_report_status_and_round_trip():
    report = ProofReport('tm-ncf', {'a': 'z'}, {'name': 'full'})
    assert report.status is Status.UNVERIFIED
    report.add(ProofStep(Stage.MATRICES, 'M_2', Status.PASSED))
    assert report.status is Status.PASSED
    report.add(ProofStep(Stage.FINAL, 'CF(t)', Status.FAILED, "cofactor vanishes"))
    assert report.status is Status.FAILED
    assert report.failing_stage is Stage.FINAL
    back = ProofReport.from_dict(report.to_dict())
    assert back.status is Status.FAILED
    assert back.steps[1].clause == "cofactor vanishes"
    assert report.stage_status(Stage.MATRICES) is Status.PASSED


def test_z_form_and_final_entry():
    f2 = field_make(2, 1)
    Q = BiPoly.parse("x y^2 + y + 1", f2)
    assert z_form(Q) == BiPoly.parse("y^2 + x y + x", f2)
    entry = final_entry(Q)
    assert entry['ydeg'] == 2
    assert entry['xdeg'] == 1
    assert entry['z_form'] == "y^2 + zy + z"


def test_rescale_annihilator(f4):
    Q = BiPoly.parse("x y^2 + y + 1", f4)
    f = solve_unique_series(Q, (1,), 60)
    b = f4.gen
    scaled = f.scale_x(b.value) * b
    assert residual_valuation(rescale_annihilator(Q, b), scaled).vanishes


@pytest.mark.parametrize("m", [2, 3])
def test_closed_form_annihilates_stieltjes_series(m):
    fld = field_make(2, m)
    one = fld(1)
    for a in stieltjes_representatives(fld):
        u = tm_letters(a, one, 64)
        P = closed_form_polynomial(fld, a)
        assert P.ydeg == 4
        assert residual_valuation(P, stieltjes_series(u, 63, 48)).vanishes


def test_closed_form_with_two_letters():
    fld = field_make(2, 3)
    a, b = fld.gen, fld.gen ** 3
    u = tm_letters(a, b, 64)
    assert residual_valuation(closed_form_polynomial(fld, a, b), stieltjes_series(u, 63, 48)).vanishes


def test_letter_checks(f4):
    z = UniPoly.parse("z", field_make(2, 1), 'z')
    with pytest.raises(LetterError):
        pipeline_tm_ncf(z, z, {})
    with pytest.raises(LetterError):
        pipeline_tm_stieltjes(f4.gen, {}, f4.gen)


@pytest.mark.slow
def test_tm_ncf_pipeline_certifies(isolated_settings):
    f2 = field_make(2, 1)
    a = parse_letter("z", f2, 'ncf')
    b = parse_letter("z^2 + z + 1", f2, 'ncf')
    report = pipeline_tm_ncf(a, b, isolated_settings.profile('full', 'tm-ncf'))
    assert report.status is Status.PASSED
    assert report.final['CF(t)']['ydeg'] == 4
    again = replay(report.to_dict())
    assert again.status is Status.PASSED


@pytest.mark.slow
def test_tm_stieltjes_pipeline_certifies(isolated_settings, f4):
    report = pipeline_tm_stieltjes(f4.gen, isolated_settings.profile('full', 'tm-stieltjes'))
    assert report.status is Status.PASSED
    assert report.final['S']['ydeg'] == 4


@pytest.mark.slow
def test_sweep_small(isolated_settings):
    rows = sweep_tm_ncf(2, isolated_settings.profile('full', 'tm-ncf'))
    assert [r['status'] for r in rows] == [Status.PASSED.label] * 2
    assert all(r['ydeg'] == 4 for r in rows)


@pytest.fixture
def pd_prover(isolated_settings):
    f2 = field_make(2, 1)
    a, b = parse_letter("z^2", f2, 'ncf'), parse_letter("z", f2, 'ncf')
    cfg = isolated_settings.profile('auto', 'pd-ncf')
    report = ProofReport('pd-ncf', {'a': "z^2", 'b': "z"}, cfg)
    return Prover(PD_NCF, a, b, f2, cfg, report)


@pytest.fixture
def pd_shipped(isolated_settings):
    return load_equations(isolated_settings.fixtures_dir() / "pd_z2_z.txt", field_make(2, 1))


def test_pd_ncf_equations_stage(pd_prover, pd_shipped):
    assert pd_prover.prove_matrices()
    assert pd_prover.guess_equations()
    assert pd_prover.prove_equations()
    assert pd_prover.report.stage_status(Stage.EQUATIONS) is Status.PASSED
    assert sorted(pd_prover.equations) == sorted(pd_shipped)
    for name, eq in pd_shipped.items():
        got = pd_prover.equations[name]
        assert got.phi == eq.phi.normalize(), name
        assert got.init == eq.init, name
    assert pd_prover.equations["A^e[1,0]"].finite == UniPoly.parse("x^2", field_make(2, 1))


def test_pd_ncf_final_stage(pd_prover, pd_shipped):
    pd_prover.equations.update(pd_shipped)
    assert pd_prover.guess_final()
    assert pd_prover.prove_final()
    Q = pd_prover.final_polys['CF(p)']['Q']
    assert Q.normalize() == BiPoly.parse("y^4 + x^3 y^2 + (x^5 + x^4) y + x^3 + x^2 + 1", field_make(2, 1))
    step = pd_prover.report.steps[-1]
    assert step.stage is Stage.FINAL
    assert step.data['certificate']['irreducible'] is True


def test_pd_ncf_final_factor_of_quotient_resultant(pd_prover, pd_shipped):
    pd_prover.equations.update(pd_shipped)
    P = pd_prover._ratio_annihilator('A')
    assert P.ydeg == 16
    assert pd_prover.guess_final()
    Q = pd_prover.final_polys['CF(p)']['Q']
    assert Q.ydeg == 4
    assert residual_valuation(Q, pd_prover._ratio('A', 200)).vanishes


@pytest.mark.slow
def test_pd_ncf_pipeline_certifies(isolated_settings):
    f2 = field_make(2, 1)
    a, b = parse_letter("z^2", f2, 'ncf'), parse_letter("z", f2, 'ncf')
    report = pipeline_pd_ncf(a, b, isolated_settings.profile('full', 'pd-ncf'))
    assert report.status is Status.PASSED, report.failing_stage
    assert report.final['CF(p)']['ydeg'] == 4
    again = replay(report.to_dict())
    assert again.status is Status.PASSED
