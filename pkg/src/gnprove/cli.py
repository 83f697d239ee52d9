"""Command line: argument parsing and the subcommands."""
import argparse
import json
import logging
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path
from typing import List, Optional

from rich.console import Console
from rich.table import Table

from .autoseq import dump_structured, emit_tables
from .cfrac import cf_convergent, cf_expand, laurent_ratio, stieltjes_convergent
from .christol import christol_run, normalize_equation
from .fixtures import fixtures_check, load_equation_file, load_table, parse_field_spec
from .guess import guess_escalating, shares_root
from .messages import EXIT_CERTIFIED, EXIT_UNVERIFIED, Status, exit_code
from .poly import UniPoly
from .prover import (letter_text, pipeline_pd_ncf, pipeline_tm_ncf, pipeline_tm_stieltjes, replay,
                     stieltjes_representatives, sweep_tm_ncf)
from .report import emit_report
from .series import TruncSeries, solve_unique_series
from .settings import PIPELINES, get_settings

log = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() can map usage errors to exit code 64."""

    def error(self, message):
        self.print_usage()
        raise UsageError(message)


@dataclass
class RunConfig:
    """What a run was asked to do; stored in every report for provenance."""

    command: str
    pipeline: Optional[str] = None
    field: Optional[str] = None
    letters: List[str] = dc_field(default_factory=list)
    profile: str = 'full'
    overrides: dict = dc_field(default_factory=dict)
    report: Optional[str] = None
    emit: str = 'text'
    jobs: int = 1

    @classmethod
    def from_args(cls, args) -> 'RunConfig':
        letters = [v for v in (getattr(args, 'a', None), getattr(args, 'b', None),
                               getattr(args, 'elem', None)) if v]
        overrides = {}
        for item in getattr(args, 'set', None) or []:
            key, _, value = item.partition('=')
            try:
                overrides[key] = json.loads(value)
            except json.JSONDecodeError:
                raise UsageError(f"--set {item}: value is not JSON")
        return cls(args.command, getattr(args, 'pipeline', None), getattr(args, 'field', None), letters,
                   args.profile, overrides, getattr(args, 'report', None), getattr(args, 'emit', 'text'),
                   args.jobs)

    def profile_for(self, pipeline: str) -> dict:
        cfg = get_settings().profile(self.profile, pipeline)
        cfg.update(self.overrides)
        return cfg


def _comma_ints(value: str) -> List[int]:
    return [int(v) for v in value.split(',') if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gnprove", description="Guess'n'Prove engine for automatic continued fractions")
    parser.add_argument("--profile", default="full", help="Proof profile (full, auto or a user profile)")
    parser.add_argument("--fixtures", default=None, help="Fixture directory (default: $GNPROVE_FIXTURES or packaged)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug level in the log file")
    parser.add_argument("--log-file", default="gnprove_debug.log", help="Debug log file")
    parser.add_argument("-j", "--jobs", type=int, default=1, help="Worker processes for the component proofs")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("prove", help="Run a Guess'n'Prove pipeline")
    p.add_argument("pipeline", nargs='?', choices=PIPELINES)
    p.add_argument("--a", help="First letter: polynomial in z, or a field element for tm-stieltjes")
    p.add_argument("--b", help="Second letter (default 1 for tm-stieltjes)")
    p.add_argument("--field", default="2^1", help="Coefficient field, 2^k or 2^k:<modulus>")
    p.add_argument("--elem", help="Stieltjes letter a in the field (alias of --a)")
    p.add_argument("--symbolic", action="store_true", help="Stieltjes over F_2(a)")
    p.add_argument("--all-representatives", action="store_true",
                   help="Stieltjes: every Frobenius-orbit representative of the field")
    p.add_argument("--report", help="Write the structured report here")
    p.add_argument("--emit", choices=("text", "structured"), default="text")
    p.add_argument("--replay", help="Re-verify a structured report without guessing")
    p.add_argument("--set", action="append", metavar="KEY=JSON", help="Override a profile key")

    p = sub.add_parser("christol", help="Automaton of the unique root of an equation")
    p.add_argument("--equation", required=True, help="Equation file (field, symbol, P, init)")
    p.add_argument("--init", help="Initial terms, comma separated (overrides the file)")
    p.add_argument("--emit", choices=("table", "structured", "trace"), default="table")
    p.add_argument("--max-states", type=int, default=None)

    p = sub.add_parser("guess-minpoly", help="Guess the minimal polynomial of an equation's root")
    p.add_argument("--equation", required=True)
    p.add_argument("--ladder", type=_comma_ints, default=[0, 1, 2, 3, 4])
    p.add_argument("--degrees", type=_comma_ints, default=[8] * 5)
    p.add_argument("--retries", type=int, default=2)

    p = sub.add_parser("cf", help="Convergents and expansion of a continued fraction over F_2[z]")
    p.add_argument("--quotients", required=True, help="Partial quotients in z, separated by ';'")
    p.add_argument("--field", default="2^1")
    p.add_argument("--expand", action="store_true", help="Expand the last convergent back")

    p = sub.add_parser("stieltjes", help="Convergents of a Stieltjes continued fraction")
    p.add_argument("--coeffs", required=True, help="u_0, u_1, ... as field elements, comma separated")
    p.add_argument("--field", default="2^2:u^2+u+1")
    p.add_argument("--symbol", default="u")
    p.add_argument("--order", type=int, default=16)

    p = sub.add_parser("automaton", help="Print, convert or run an automaton table")
    p.add_argument("--table", required=True)
    p.add_argument("--field", default="2^1")
    p.add_argument("--symbol", default="u")
    p.add_argument("--emit", choices=("table", "structured"), default="table")
    p.add_argument("--run", type=int, default=None, help="Print the first N outputs")

    sub.add_parser("fixtures-check", help="Re-derive every shipped fixture")

    p = sub.add_parser("sweep", help="Thue-Morse continued fractions over letter pairs")
    p.add_argument("--max-degree", type=int, default=4, help="deg a + deg b bound")
    p.add_argument("--full", action="store_true", help="Run the whole proof for every pair")
    return parser


def parse_args(argv=None):
    """Parse command line arguments."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage()
        raise UsageError("a subcommand is required")
    if args.command == 'prove' and args.pipeline is None and not args.replay:
        raise UsageError("prove needs a pipeline or --replay")
    return args


# subcommands

def _letters(args, fld):
    if args.a is None or args.b is None:
        raise UsageError(f"{args.pipeline} needs --a and --b")
    return UniPoly.parse(args.a, fld, 'z'), UniPoly.parse(args.b, fld, 'z')


def _finish_report(report, cfg: RunConfig, console: Console) -> int:
    report.inputs.setdefault('run', asdict(cfg))
    if cfg.report:
        emit_report(report, 'structured', Path(cfg.report))
        get_settings().add_recent_report(cfg.report)
    console.print(emit_report(report, cfg.emit), end='', markup=False, highlight=False, soft_wrap=True)
    return exit_code(report.status)


def cmd_prove(args, console: Console) -> int:
    cfg = RunConfig.from_args(args)
    if args.replay:
        with open(args.replay, 'r') as f:
            data = json.load(f)
        return _finish_report(replay(data, args.jobs), cfg, console)
    if args.pipeline == 'tm-stieltjes':
        return _prove_stieltjes(args, cfg, console)
    profile = cfg.profile_for(args.pipeline)
    fld = parse_field_spec(args.field, 'u')
    a, b = _letters(args, fld)
    run = pipeline_tm_ncf if args.pipeline == 'tm-ncf' else pipeline_pd_ncf
    return _finish_report(run(a, b, profile, args.jobs), cfg, console)


def _prove_stieltjes(args, cfg: RunConfig, console: Console) -> int:
    profile = cfg.profile_for('tm-stieltjes')
    fld = parse_field_spec('F2(a)' if args.symbolic else args.field, 'u')
    if args.all_representatives:
        if fld.m is None:
            raise UsageError("--all-representatives needs a finite field")
        worst = EXIT_CERTIFIED
        for r in stieltjes_representatives(fld):
            log.info(f"tm-stieltjes: representative {letter_text(r)}")
            worst = max(worst, _finish_report(pipeline_tm_stieltjes(r, profile, jobs=args.jobs), cfg, console))
        return worst
    text = args.elem or args.a
    if args.symbolic and text is None:
        text = fld.symbol
    if text is None:
        raise UsageError("tm-stieltjes needs --elem, --a, --symbolic or --all-representatives")
    a = fld.parse(text)
    b = fld.parse(args.b) if args.b else None
    return _finish_report(pipeline_tm_stieltjes(a, profile, b, args.jobs), cfg, console)


def cmd_christol(args, console: Console) -> int:
    fld, P, init = load_equation_file(Path(args.equation))
    if args.init:
        init = tuple(fld.parse(t).value for t in args.init.split(','))
    max_states = args.max_states or get_settings().profile(args.profile, 'tm-ncf')['max_states']
    affine = bool(P.coeff(0))
    res = christol_run(P, init, affine=affine, max_states=max_states)
    if args.emit == 'trace':
        console.print(normalize_equation(P, affine=affine).to_text(), markup=False, soft_wrap=True)
        for line in res.closure.trace_lines():
            console.print(line, markup=False, highlight=False, soft_wrap=True)
        return EXIT_CERTIFIED
    out = emit_tables(res.minimal, fld.format) if args.emit == 'table' else dump_structured(res.minimal, fld.format)
    console.print(out, markup=False, highlight=False, soft_wrap=True)
    return EXIT_CERTIFIED


def cmd_guess_minpoly(args, console: Console) -> int:
    fld, P, init = load_equation_file(Path(args.equation))
    if len(args.ladder) != len(args.degrees):
        raise UsageError("--ladder and --degrees need the same length")

    def root(order):
        return solve_unique_series(P, init, order)

    Q = guess_escalating(root, args.ladder, args.degrees, args.retries,
                         accept=lambda cand: shares_root(cand, P, root))
    console.print(Q.to_text(), markup=False, highlight=False, soft_wrap=True)
    return EXIT_CERTIFIED


def cmd_cf(args, console: Console) -> int:
    fld = parse_field_spec(args.field, 'u')
    quotients = [UniPoly.parse(q, fld, 'z') for q in args.quotients.split(';')]
    table = Table(title="convergents", title_justify="left")
    table.add_column("n", justify="right")
    table.add_column("P_n")
    table.add_column("Q_n")
    for n in range(len(quotients)):
        pair = cf_convergent(quotients, n)
        table.add_row(str(n), pair.P.to_text('z'), pair.Q.to_text('z'))
    console.print(table)
    if args.expand:
        pair = cf_convergent(quotients, len(quotients) - 1)
        order = 2 * sum(max(q.deg, 0) for q in quotients) + 4
        # Q/P = a_0 + 1/(a_1 + ...)
        g, s = laurent_ratio(pair.Q, pair.P, order)
        back = cf_expand(g, len(quotients), s)
        console.print('; '.join(q.to_text('z') for q in back), markup=False, soft_wrap=True)
    return EXIT_CERTIFIED


def cmd_stieltjes(args, console: Console) -> int:
    fld = parse_field_spec(args.field, args.symbol)
    u = [fld.parse(c) for c in args.coeffs.split(',')]
    pair = stieltjes_convergent(u, len(u) - 1)
    console.print(f"P = {pair.P.to_text()}", markup=False, highlight=False, soft_wrap=True)
    console.print(f"Q = {pair.Q.to_text()}", markup=False, highlight=False, soft_wrap=True)
    s = TruncSeries.from_poly(pair.P, args.order) / TruncSeries.from_poly(pair.Q, args.order)
    console.print(f"S = {s.to_text()}", markup=False, highlight=False, soft_wrap=True)
    return EXIT_CERTIFIED


def cmd_automaton(args, console: Console) -> int:
    fld = parse_field_spec(args.field, args.symbol)
    d = load_table(Path(args.table), fld)
    if args.run is not None:
        values = ', '.join(fld.format(d(n)) for n in range(args.run))
        console.print(values, markup=False, highlight=False, soft_wrap=True)
        return EXIT_CERTIFIED
    out = emit_tables(d, fld.format) if args.emit == 'table' else dump_structured(d, fld.format)
    console.print(out, markup=False, highlight=False, soft_wrap=True)
    return EXIT_CERTIFIED


def cmd_fixtures_check(args, console: Console) -> int:
    directory = get_settings().fixtures_dir(args.fixtures)
    results = fixtures_check(directory, lambda pipeline: get_settings().profile(args.profile, pipeline))
    table = Table(title=f"fixtures in {directory}", title_justify="left")
    table.add_column("fixture")
    table.add_column("status")
    table.add_column("clause", overflow="fold")
    for r in results:
        table.add_row(r.name, r.status.label, r.clause or "")
    console.print(table)
    return exit_code(Status.combine(r.status for r in results))


def cmd_sweep(args, console: Console) -> int:
    profile = get_settings().profile(args.profile, 'tm-ncf')
    rows = sweep_tm_ncf(args.max_degree, profile, args.jobs, args.full)
    table = Table(title=f"Thue-Morse continued fractions, deg a + deg b <= {args.max_degree}", title_justify="left")
    for col in ("a", "b", "status", "y-degree", "stage"):
        table.add_column(col)
    for row in rows:
        table.add_row(row['a'], row['b'], row['status'], str(row.get('ydeg')), row.get('stage') or "")
    console.print(table)
    return EXIT_CERTIFIED if all(r['status'] == Status.PASSED.label for r in rows) else EXIT_UNVERIFIED


HANDLERS = {
    'prove': cmd_prove,
    'christol': cmd_christol,
    'guess-minpoly': cmd_guess_minpoly,
    'cf': cmd_cf,
    'stieltjes': cmd_stieltjes,
    'automaton': cmd_automaton,
    'fixtures-check': cmd_fixtures_check,
    'sweep': cmd_sweep,
}


def dispatch(args, console: Console = None) -> int:
    console = console or Console()
    return HANDLERS[args.command](args, console)
