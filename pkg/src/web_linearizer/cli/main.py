"""Main CLI interface for the web linearizer."""

from datetime import datetime
from functools import wraps
from typing import Optional
import logging
import random
import sys

import click
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from ..analysis.linearize import dump_grid
from ..analysis.obstruction import (
    DET_DEGREE_BOUNDS, Q_DEGREE_BOUNDS, printed_ledger, materialize, pipeline_versions, random_binding,
)
from ..analysis.report import Report, degree_table, ledger_table, roots_table
from ..config import JobConfig, settings
from ..exceptions import ConfigurationError, WebLinearizerError
from ..services.service_factory import ServiceFactory

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)

VERDICT_STYLES = {
    "linearizable": "green",
    "parallelizable": "green",
    "not-linearizable": "yellow",
    "inconclusive-numeric": "red",
}


def configure_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose or settings.debug else getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, rich_tracebacks=settings.debug)],
        force=True,
    )


def handle_errors(command):
    """Print pipeline errors in red and exit with their family's status."""

    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except WebLinearizerError as e:
            logger.error(str(e))
            err_console.print(f"[red]Error: {e}[/red]")
            sys.exit(e.exit_code)
        except ValidationError as e:
            err_console.print(f"[red]Invalid job configuration:[/red]\n{e}")
            sys.exit(2)

    return wrapper


def job_options(command):
    """Flags shared by every command that works on a web at a point."""
    options = [
        click.option("--f", "f", type=str, help="Web function f(x, y), e.g. '(x+y)*exp(-x)'"),
        click.option("--point", type=str, help="Point as 'x0,y0' with rational coordinates (default: 0,0)"),
        click.option("--mode", type=click.Choice(["exact", "float"]), help="Evaluation mode (default: exact)"),
        click.option("--grid-h", type=float, help=f"Grid spacing (default: {settings.grid_h})"),
        click.option("--grid-n", type=int, help=f"Grid nodes per axis, odd (default: {settings.grid_n})"),
        click.option("--tol", type=float, help="Zero tolerance override for float mode"),
        click.option("--cache-dir", type=click.Path(file_okay=False), help="Tower cache directory"),
        click.option("--s0", type=str, help="Initial base value s0"),
        click.option("--t0", type=str, help="Initial value of t (default: 0)"),
        click.option("--z0", type=str, help="Initial value of z (default: 0)"),
        click.option("--config-file", type=click.Path(exists=True, dir_okay=False), help="JSON job file"),
        click.option("--report-out", type=click.Path(dir_okay=False), help="Write the JSON report here"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def build_job(config_file: Optional[str] = None, **flags) -> JobConfig:
    """JobConfig from a JSON file and/or flags; flags win."""
    given = {k: v for k, v in flags.items() if v is not None}
    if config_file:
        return JobConfig.from_file(config_file, **given)
    if "f" not in given:
        raise ConfigurationError("f", None, "give --f or --config-file")
    return JobConfig(**given)


def finish(report: Report, report_out: Optional[str]) -> None:
    report.provenance.update({
        "created_at": datetime.now().isoformat(timespec="seconds"),
        "versions": pipeline_versions(),
        "tower_from_cache": ServiceFactory.tower_from_cache(),
    })
    if report_out:
        report.write(report_out)
    sys.exit(report.exit_code)


def service_for(job: JobConfig):
    return ServiceFactory.get_linearization_service(job.pipeline())


def display_job(job: JobConfig) -> None:
    table = Table(title="Job")
    table.add_column("Parameter", style="cyan")
    table.add_column("Value", style="magenta")
    for key, value in job.to_dict().items():
        if value is not None:
            table.add_row(key, str(value))
    console.print(table)


def display_verdict(report: Report) -> None:
    style = VERDICT_STYLES.get(report.verdict, "white")
    body = [f"[bold {style}]{report.verdict}[/bold {style}]"]
    if report.class_count is not None:
        body.append(f"classes: {report.class_count} (bound {report.class_bound})")
    body.extend(report.notes)
    console.print(Panel("\n".join(body), title="Verdict"))


@click.group()
@click.version_option(version="0.1.0")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
def cli(verbose):
    """Web Linearizer - linearizability of planar 3-webs

    Decides whether the 3-web x = const, y = const, f(x, y) = const is
    linearizable near a point, and integrates and verifies linearizations.
    """
    configure_logging(verbose)


@cli.command()
@job_options
@handle_errors
def curvature(config_file, report_out, **flags):
    """Curvature of the web at the point."""
    job = build_job(config_file, **flags)
    report = service_for(job).curvature(job)
    console.print(f"R at ({', '.join(str(c) for c in job.point)}) = [bold]{report.curvature}[/bold]")
    console.print(f"parallelizable: {'[green]yes[/green]' if report.parallelizable else 'no'}")
    finish(report, report_out)


@cli.command()
@job_options
@handle_errors
def analyze(config_file, report_out, **flags):
    """Full pipeline: tower, radical, admissible bases, integration and verdict."""
    job = build_job(config_file, **flags)
    display_job(job)
    with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=err_console) as progress:
        progress.add_task("Analyzing web...", total=None)
        report = service_for(job).analyze(job)

    console.print(f"\nR = [bold]{report.curvature}[/bold]")
    if report.degrees:
        console.print(degree_table(report.degrees, {**DET_DEGREE_BOUNDS, **Q_DEGREE_BOUNDS}))
    if report.radical is not None:
        console.print(f"\nRad(Q1..Q7) = [bold]{report.radical}[/bold] (degree {report.radical_degree})")
    if report.roots:
        console.print(roots_table(report.roots))
    for pair, value in report.resultants.items():
        console.print(f"resultant({pair}) = {value}")
    display_verdict(report)
    finish(report, report_out)


@cli.command()
@click.option("--rebuild", is_flag=True, help="Ignore the cached tower and derive it again")
@click.option("--cache-dir", type=click.Path(file_okay=False), help="Tower cache directory")
@click.option("--ledger/--no-ledger", default=True, help="Compare with the printed formulas")
@click.option("--report-out", type=click.Path(dir_okay=False), help="Write the JSON report here")
@handle_errors
def tower(rebuild, cache_dir, ledger, report_out):
    """Build or validate the cached obstruction tower."""
    with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=err_console) as progress:
        progress.add_task("Loading obstruction tower...", total=None)
        obstruction = ServiceFactory.get_tower(cache_dir, rebuild=rebuild)

    report = Report(command="tower")
    values = materialize(obstruction, random_binding(random.Random(0)))
    report.degrees = values.degrees()
    report.checks["row_degrees"] = obstruction.row_degrees()
    console.print(f"tower {'loaded from cache' if ServiceFactory.tower_from_cache() else 'derived'}")
    console.print(degree_table(report.degrees, {**DET_DEGREE_BOUNDS, **Q_DEGREE_BOUNDS}))

    if ledger:
        found = printed_ledger(obstruction)
        report.ledger = {kind: [e.to_dict() for e in entries] for kind, entries in found.items()}
        console.print("\n[bold]Printed formula ledger[/bold]")
        console.print(ledger_table(report.ledger["known"]))
        if report.ledger["unexpected"]:
            console.print("\n[yellow]Unexpected mismatches[/yellow]")
            console.print(ledger_table(report.ledger["unexpected"]))
    report.provenance["tower"] = obstruction.provenance
    finish(report, report_out)


@cli.command()
@job_options
@click.option("--dump", type=click.Path(dir_okay=False), help="Write the grid table here")
@handle_errors
def integrate(config_file, report_out, dump, **flags):
    """Integrate s, t, z and assemble the linearization on a grid."""
    job = build_job(config_file, **flags)
    report, grid, L = service_for(job).integrate(job)
    summary = report.checks["integration"]
    table = Table(title="Integration")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="magenta")
    table.add_row("grid", f"{summary['grid_n']}x{summary['grid_n']}, h = {summary['grid_h']}")
    for key, value in summary["initial"].items():
        table.add_row(key, str(value))
    if summary["cramer_residual"] is not None:
        table.add_row("max |AB - CD| / D^2", f"{summary['cramer_residual']:.3e}")
    for key, value in summary["frobenius"].items():
        table.add_row(f"Frobenius {key}", f"{value:.3e}")
    console.print(table)
    if dump:
        dump_grid(dump, grid, L)
        console.print(f"grid written to {dump}")
    finish(report, report_out)


@cli.command()
@job_options
@handle_errors
def verify(config_file, report_out, **flags):
    """Integrate and check the linearization: P1 residual, flatness and fibre conditions."""
    job = build_job(config_file, **flags)
    report, _, _ = service_for(job).verify(job)
    result = report.checks["verification"]
    table = Table(title="Verification")
    table.add_column("Residual", style="cyan")
    table.add_column("Max", style="magenta")
    table.add_row("P1(L)", f"{result['p1_residual']:.3e}")
    table.add_row("curvature of the total connection", f"{result['curvature_residual']:.3e}")
    for key, value in result["prelinearization"].items():
        table.add_row(key, f"{value:.3e}")
    console.print(table)
    status = "[green]passed[/green]" if result["passed"] else "[red]failed[/red]"
    console.print(f"tolerance {result['tolerance']}: {status}")
    finish(report, report_out)


if __name__ == "__main__":
    cli()
