"""Shipped fixtures: equation files, automaton tables and their re-derivation.

An equation file lists blocks

    [M^e,0,0]
    p0 = x^2 + 1
    p3 = x
    init = 1, 0

giving phi(M^e,0,0) = sum p_k(x) y^k and the initial terms of its root.
Automaton tables use the layout of `autoseq.emit_tables`. A single-equation
file (`*.eq`) holds `field`, `symbol`, `P` and `init` lines for the
christol command.
"""
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .autoseq import dfao_isomorphism, parse_tables
from .bipoly import BiPoly
from .christol import KernelOverflow, NormalizationError, christol_run
from .fields import RationalFunctionField, field_make
from .guess import GuessFailure
from .messages import Status
from .poly import UniPoly
from .prover import SPECS, Equation, LimitSource, guess_equation, parse_letter, series_name
from .relations import check_regex_conditions, language_condition
from .series import certify_unique_solution
from .textfmt import ParseError

log = logging.getLogger(__name__)

_BLOCK = re.compile(r'^\[(\w)\^([eo]),([01]),([01])\]$')
_TERM = re.compile(r'^p(\d+)\s*=\s*(.+)$')


@dataclass(frozen=True)
class EquationSet:
    """One shipped equation file and the run that re-derives it."""

    file: str
    pipeline: str
    letters: tuple
    field: dict


@dataclass(frozen=True)
class TableFixture:
    """A printed automaton of one component, with its equation set.

    `conditions` are (language, words, constant): sum_w tau(A(s, w)) + constant
    vanishes for every state s reached from the initial state on the language.
    """

    file: str
    equations: str
    component: str
    field: dict
    conditions: Tuple[Tuple[str, Tuple[str, ...], int], ...] = ()


EQUATION_SETS = {
    'tm_ncf': EquationSet('tm_ncf.txt', 'tm-ncf', ('z', 'z^2 + z + 1'), {'kind': 'finite', 'm': 1}),
    'tm_stieltjes': EquationSet('tm_stieltjes.txt', 'tm-stieltjes', ('a', '1'), {'kind': 'rational', 'symbol': 'a'}),
    'pd_z2_z': EquationSet('pd_z2_z.txt', 'pd-ncf', ('z^2', 'z'), {'kind': 'finite', 'm': 1}),
    'pd_z3_z2z1': EquationSet('pd_z3_z2z1.txt', 'pd-ncf', ('z^3', 'z^2 + z + 1'), {'kind': 'finite', 'm': 1}),
}

_L0 = "(10)^*11"
_L1 = "(10)^*11{00,01,10,11}^+"
_L2 = "(10)^*0{0,1}{00,01,10,11}^*+(10)^+"
_L3 = "(10)^+0{00,01,10,11}^+"
_L4 = "(10)^+{0,1}"

# the slices of A^e[0,0] for the letters (z^3, z^2 + z + 1), one block [w]_2 at a time
PD_Z3_CONDITIONS = (
    (_L0, ("10", "1"), 1),
    (_L1, ("10", "1"), 0),
    (_L2, ("11", "10", ""), 0),
    (_L0, ("11", "", "1"), 1),
    (_L1, ("11", "", "1"), 0),
    (_L2, ("100", "10", "1", ""), 0),
    (_L0, ("100", ""), 1),
    (_L1, ("100", ""), 0),
    (_L3, ("10", ""), 0),
    (_L4, ("10", ""), 0),
)

TABLES = {
    'tm_ncf_mo00': TableFixture('tm_ncf_mo00.tex', 'tm_ncf', 'M^o[0,0]', {'kind': 'finite', 'm': 1}),
    'stieltjes_f4_me00': TableFixture('stieltjes_f4_me00.tex', 'tm_stieltjes', 'M^e[0,0]',
                                      {'kind': 'finite', 'm': 2, 'symbol': 'a'}),
    'pd_z2_z_ae00': TableFixture('pd_z2_z_ae00.tex', 'pd_z2_z', 'A^e[0,0]', {'kind': 'finite', 'm': 1}),
    'pd_z3_ae00': TableFixture('pd_z3_ae00.tex', 'pd_z3_z2z1', 'A^e[0,0]', {'kind': 'finite', 'm': 1},
                               PD_Z3_CONDITIONS),
}


def make_field(spec: dict):
    if spec['kind'] == 'rational':
        return RationalFunctionField(spec.get('symbol', 'a'))
    return field_make(2, spec['m'], spec.get('modulus', 'default'), spec.get('symbol', 'u'))


def parse_field_spec(text: str, symbol: str = 'u'):
    """'2^k' for F_(2^k), '2^k:<modulus>' with an explicit modulus, 'F2(a)' for the rational field."""
    text = text.strip()
    if text.lower().startswith('f2(') and text.endswith(')'):
        return RationalFunctionField(text[3:-1].strip() or 'a')
    base, _, modulus = text.partition(':')
    p, _, m = base.partition('^')
    if p.strip() != '2':
        raise ParseError(f"field {text!r} must be of the form 2^k", 0)
    return field_make(2, int(m or 1), modulus.strip() or 'default', symbol)


def _parse_init(text: str, fld) -> tuple:
    return tuple(fld.parse(t).value for t in text.split(','))


def load_equations(path: Path, fld) -> Dict[str, Equation]:
    """Read a shipped equation file into equations keyed by component name."""
    out = {}
    name, terms, init = None, {}, None

    def flush():
        if name is None:
            return
        if init is None:
            raise ParseError(f"{path.name}: block {name} has no initial terms", 0)
        out[name] = Equation(name, BiPoly.from_terms(fld, terms), init, tuple(sorted(terms)))

    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        m = _BLOCK.match(line)
        if m:
            flush()
            obj, par, i, j = m.groups()
            name, terms, init = series_name(obj, 'eo'.index(par), int(i), int(j)), {}, None
            continue
        m = _TERM.match(line)
        if m and name is not None:
            terms[int(m.group(1))] = UniPoly.parse(m.group(2), fld, 'x')
            continue
        if line.startswith('init') and name is not None:
            init = _parse_init(line.split('=', 1)[1], fld)
            continue
        raise ParseError(f"{path.name}:{lineno}: unexpected line {line!r}", 0)
    flush()
    log.debug(f"{path.name}: {len(out)} equations")
    return out


def load_equation_file(path: Path):
    """(field, P, init) from a single-equation file."""
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        key, _, value = line.partition('=')
        values[key.strip()] = value.strip()
    for key in ('field', 'P', 'init'):
        if key not in values:
            raise ParseError(f"{Path(path).name}: missing '{key} = ...'", 0)
    fld = parse_field_spec(values['field'], values.get('symbol', 'u'))
    return fld, BiPoly.parse(values['P'], fld), _parse_init(values['init'], fld)


def load_table(path: Path, fld):
    return parse_tables(Path(path).read_text(), lambda s: fld.parse(s).value)


def specialize_equation(eq: Equation, src: RationalFunctionField, fld) -> Equation:
    """The equation over F_(2^m) with the symbol of F_2(a) set to the generator."""
    g = fld.gen.value
    phi = eq.phi.map(lambda c: UniPoly(fld, [src.specialize(v, fld, g) for v in c.coeffs]))
    init = tuple(src.specialize(v, fld, g) for v in eq.init)
    return Equation(eq.name, phi, init, eq.ladder)


# checks

@dataclass
class FixtureResult:
    name: str
    status: Status
    clause: Optional[str] = None

    def to_dict(self) -> dict:
        return {'name': self.name, 'status': self.status.label, 'clause': self.clause}


def _compare(name: str, shipped: Equation, found: Equation) -> FixtureResult:
    if shipped.phi.normalize() != found.phi:
        return FixtureResult(name, Status.FAILED, f"guessed {found.phi.to_text()}")
    if tuple(shipped.init) != tuple(found.init):
        fld = found.phi.field
        return FixtureResult(name, Status.FAILED,
                             f"initial terms {', '.join(fld.format(v) for v in found.init)}")
    return FixtureResult(name, Status.PASSED)


def check_equation_set(key: str, directory: Path, cfg: dict) -> List[FixtureResult]:
    """Certify every shipped equation, then guess it again from the matrices and compare."""
    eset = EQUATION_SETS[key]
    fld = make_field(eset.field)
    shipped = load_equations(directory / eset.file, fld)
    spec = SPECS[eset.pipeline]
    a, b = (parse_letter(t, fld, spec.flavor) for t in eset.letters)
    source = LimitSource(spec, a, b, cfg['source_level'], cfg['max_level'])
    results = []
    for name, eq in sorted(shipped.items()):
        label = f"{key} {name}"
        cert = certify_unique_solution(eq.phi, eq.init)
        if not cert.ok:
            results.append(FixtureResult(label, Status.FAILED, cert.clause))
            continue
        obj, rest = name.split('^')
        try:
            found = guess_equation(source, obj, 'eo'.index(rest[0]), int(rest[2]), int(rest[4]), cfg)
        except GuessFailure as e:
            results.append(FixtureResult(label, Status.UNVERIFIED, str(e)))
            continue
        results.append(_compare(label, eq, found))
    return results


def check_table(key: str, directory: Path, cfg: dict) -> FixtureResult:
    """Rebuild the automaton of a shipped equation and compare it with the printed tables."""
    tab = TABLES[key]
    fld = make_field(tab.field)
    eset = EQUATION_SETS[tab.equations]
    src = make_field(eset.field)
    eq = load_equations(directory / eset.file, src)[tab.component]
    if isinstance(src, RationalFunctionField):
        eq = specialize_equation(eq, src, fld)
    printed = load_table(directory / tab.file, fld)
    cert = certify_unique_solution(eq.phi, eq.init)
    if not cert.ok:
        return FixtureResult(key, Status.FAILED, cert.clause)
    try:
        built = christol_run(eq.phi, eq.init, affine=bool(eq.phi.coeff(0)), max_states=cfg['max_states']).minimal
    except (KernelOverflow, NormalizationError) as e:
        return FixtureResult(key, Status.UNVERIFIED, str(e))
    if built == printed:
        return _check_conditions(key, tab, built, fld)
    iso = dfao_isomorphism(built, printed)
    if iso is not None:
        result = _check_conditions(key, tab, built, fld)
        result.clause = result.clause or f"isomorphic under {iso}"
        return result
    return FixtureResult(key, Status.FAILED, f"{built.size} states built, {printed.size} printed")


def _check_conditions(key: str, tab: TableFixture, d, fld) -> FixtureResult:
    if not tab.conditions:
        return FixtureResult(key, Status.PASSED)
    conditions = [language_condition(fld, regex, words, constant) for regex, words, constant in tab.conditions]
    check = check_regex_conditions(d, conditions, name=key)
    return FixtureResult(key, check.status, check.clause)


def fixtures_check(directory: Path, profile) -> List[FixtureResult]:
    """Every equation set and table; `profile(pipeline)` gives the settings of each run."""
    results = []
    for key, eset in EQUATION_SETS.items():
        log.info(f"fixtures: {key}")
        results.extend(check_equation_set(key, directory, profile(eset.pipeline)))
    for key, tab in TABLES.items():
        results.append(check_table(key, directory, profile(EQUATION_SETS[tab.equations].pipeline)))
    return results
