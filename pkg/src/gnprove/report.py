"""Text and structured emission of proof reports."""
import io
import json
import logging
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.table import Table
from rich.text import Text

from .messages import Stage, Status
from .prover import ProofReport

log = logging.getLogger(__name__)

FORMATS = ('text', 'structured')

STATUS_STYLE = {
    Status.PASSED: "bold green",
    Status.FAILED: "bold red",
    Status.UNVERIFIED: "bold yellow",
    Status.UNDECIDED: "yellow",
}

# narrative order of the stages in the text form
STAGE_ORDER = list(Stage)


def status_text(status: Status) -> Text:
    return Text(status.label, style=STATUS_STYLE[status])


def _header(report: ProofReport) -> Text:
    text = Text()
    text.append(f"gnprove {report.pipeline}", style="bold cyan")
    for key in ('a', 'b', 'mode'):
        if key in report.inputs:
            text.append(" | ", style="dim")
            text.append(f"{key} = {report.inputs[key]}")
    text.append(" | profile ", style="dim")
    text.append(str(report.profile.get('name', '-')))
    text.append(" | ", style="dim")
    text.append_text(status_text(report.status))
    if report.failing_stage is not None:
        text.append(f" at {report.failing_stage.value}", style="dim")
    return text


def steps_table(report: ProofReport, stage: Stage) -> Optional[Table]:
    steps = [s for s in report.steps if s.stage is stage]
    if not steps:
        return None
    table = Table(title=stage.value, title_justify="left", show_lines=False)
    table.add_column("step", overflow="fold")
    table.add_column("status")
    table.add_column("clause", overflow="fold")
    for s in steps:
        table.add_row(s.name, status_text(s.status), s.clause or "")
    return table


def final_table(label: str, entry: dict) -> Table:
    """p_i of the printed polynomial, highest y-power last."""
    table = Table(title=f"minimal polynomial of {label}", title_justify="left")
    table.add_column("i", justify="right")
    table.add_column("coefficient", overflow="fold")
    for i, text in sorted(entry.get('coefficients', {}).items(), key=lambda kv: int(kv[0])):
        table.add_row(f"p{i}", text)
    return table


def render_text(report: ProofReport, width: int = 120) -> str:
    """Stage by stage in pipeline order, then the final polynomials."""
    console = Console(file=io.StringIO(), width=width, record=True, color_system=None)
    console.print(_header(report))
    for stage in STAGE_ORDER:
        table = steps_table(report, stage)
        if table is not None:
            console.print(table)
    for label, entry in report.final.items():
        console.print(final_table(label, entry))
        for key in ('z_form', 'x_form'):
            if key in entry:
                console.print(Text(f"{label}: {entry[key]} = 0", style="bold"))
    return console.export_text()


def render_structured(report: ProofReport) -> str:
    return report.to_json() + '\n'


def emit_report(report: ProofReport, fmt: str = 'text', path: Optional[Path] = None) -> str:
    """Serialize a report; written to `path` when given."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}")
    out = render_text(report) if fmt == 'text' else render_structured(report)
    if path is not None:
        Path(path).write_text(out)
        log.info(f"report written to {path}")
    return out


def load_report(path: Path) -> ProofReport:
    with open(path, 'r') as f:
        return ProofReport.from_dict(json.load(f))


def print_report(report: ProofReport, console: Console = None):
    """The text form on the terminal, with colours."""
    console = console or Console()
    console.print(_header(report))
    for stage in STAGE_ORDER:
        table = steps_table(report, stage)
        if table is not None:
            console.print(table)
    for label, entry in report.final.items():
        console.print(final_table(label, entry))
