from pathlib import Path
from typing import List, NoReturn, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.progress import BarColumn, Progress, TextColumn
from rich.table import Table

from .config import ENV_PREFIX, Settings, load_settings
from .errors import HypothesisError, SvineqError
from .falsifier import SearchConfig, falsify as run_falsifier
from .harness import (
    CheckReport,
    FalsificationReport,
    SuiteConfig,
    SuiteRunner,
    check_explicit,
    parse_dims,
    write_json,
)
from .inequalities import ALPHA_GRID, CheckResult
from .matrix_io import write_matrices

app = typer.Typer(add_completion=False, no_args_is_help=True, help="Singular value inequality checks and counterexample search.")
console = Console()

EXIT_VIOLATION = 1
EXIT_ERROR = 2


def _env(flag: str) -> str:
    return ENV_PREFIX + flag.upper()


def _settings() -> Settings:
    try:
        return load_settings()
    except SvineqError as exc:
        console.print(f"[red]Configuration error:[/red] {exc}")
        raise typer.Exit(code=EXIT_ERROR)


def _fail(label: str, exc: Exception) -> NoReturn:
    console.print(f"[red]{label}:[/red] {exc}")
    raise typer.Exit(code=EXIT_ERROR)


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:+.3e}"


def _print_check(result: CheckResult) -> None:
    table = Table(title=f"{result.id}", show_lines=False)
    table.add_column("track")
    table.add_column("status")
    table.add_column("worst margin", justify="right")
    table.add_column("j", justify="right")
    table.add_column("margins")
    for track in result.tracks:
        if track.skipped:
            table.add_row(track.name, "[yellow]skipped[/yellow]", "-", "-", track.skipped)
            continue
        status = "[green]pass[/green]" if track.passed else "[red]FAIL[/red]"
        margins = ", ".join(f"{m:+.4f}" for m in track.margins[:8])
        table.add_row(track.name, status, _fmt(track.worst_margin), str(track.worst_index), margins)
    console.print(table)
    if result.hypothesis_failures:
        console.print(f"[yellow]Forced past failed hypotheses:[/yellow] {', '.join(result.hypothesis_failures)}")


@app.command()
def run(
    suite: Optional[List[str]] = typer.Option(None, "--suite", envvar=_env("suite"), help="Inequality id to run (repeatable; default: all)"),
    dims: Optional[str] = typer.Option(None, "--dims", envvar=_env("dims"), help="Dimensions, e.g. '1-6' or '2,3'"),
    trials: Optional[int] = typer.Option(None, "--trials", envvar=_env("trials"), help="Trials per (id, dim)"),
    seed: Optional[int] = typer.Option(None, "--seed", envvar=_env("seed"), help="Base seed"),
    tol: Optional[float] = typer.Option(None, "--tol", envvar=_env("tol"), help="Margin tolerance"),
    alpha: Optional[List[float]] = typer.Option(None, "--alpha", envvar=_env("alpha"), help="Alpha grid value (repeatable)"),
    p: Optional[List[float]] = typer.Option(None, "--p", envvar=_env("p"), help="Schatten p (repeatable)"),
    k: Optional[str] = typer.Option(None, "--k", envvar=_env("k"), help="Ky Fan k: 'cycle' (default) or a fixed integer"),
    out: Path = typer.Option(Path("report.json"), "--out", envvar=_env("out"), help="JSON report path"),
    csv_path: Optional[Path] = typer.Option(None, "--csv", envvar=_env("csv"), help="Also export per-j margins as CSV"),
    workers: Optional[int] = typer.Option(None, "--workers", envvar=_env("workers"), help="Parallel trial workers"),
    solver: Optional[str] = typer.Option(None, "--solver", envvar=_env("solver"), help="jacobi or lapack"),
    real_alpha: bool = typer.Option(False, "--real-alpha", help="Allow alpha outside [0, 1] (positive definite X only)"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Echo the run log"),
) -> None:
    """Run inequality suites over seeded trials and write a JSON report."""
    settings = _settings()
    try:
        config = SuiteConfig(
            suites=list(suite or []),
            dims=parse_dims(dims or settings.dims),
            trials=settings.trials if trials is None else trials,
            seed=settings.seed if seed is None else seed,
            tolerances=settings.tolerances(margin_tol=tol, solver=solver.lower() if solver else None),
            alphas=list(alpha) if alpha else list(ALPHA_GRID),
            ps=list(p) if p else [1.0, 2.0, 3.0],
            k_policy=(k or "cycle").strip().lower(),
            real_alpha=real_alpha,
            workers=settings.workers if workers is None else workers,
            out=out,
            csv_path=csv_path,
        )
    except (ValidationError, SvineqError) as exc:
        _fail("Invalid suite configuration", exc)

    runner = SuiteRunner(config, console=console, verbose=verbose)
    ids = config.suite_ids()
    try:
        with Progress(TextColumn("[progress.description]{task.description}"), BarColumn(), TextColumn("{task.completed}/{task.total}"), console=console) as progress:
            task = progress.add_task("Checking inequalities", total=len(ids))
            report = runner.run(on_spec=lambda _id: progress.advance(task))
        runner.save_report(config.out)
        if config.csv_path is not None:
            runner.save_csv(config.csv_path)
    except SvineqError as exc:
        _fail("Suite failed", exc)
    except OSError as exc:
        _fail("Could not write report", exc)

    table = Table(title="Inequality suite")
    for column in ("id", "trials", "passes", "worst margin", "track", "j", "dim", "tight", "flagged"):
        table.add_column(column, justify="left" if column in ("id", "track") else "right")
    for entry in report.results.values():
        style = "green" if entry.failures == 0 else "red"
        table.add_row(
            f"[{style}]{entry.id}[/{style}]",
            str(entry.trials),
            str(entry.passes),
            _fmt(entry.worst_margin),
            entry.worst_track or "-",
            str(entry.worst_index),
            str(entry.worst_dim or "-"),
            str(entry.tight),
            str(entry.flagged),
        )
    console.print(table)
    console.print(f"Report: {config.out}")

    if not report.all_passed:
        console.print("[bold red]Inequality violations found.[/bold red]")
        raise typer.Exit(code=EXIT_VIOLATION)
    console.print("[bold green]All checks passed.[/bold green]")


@app.command()
def falsify(
    ineq: str = typer.Option(..., "--ineq", envvar=_env("ineq"), help="Target '<id>' or '<id>-<track>', e.g. normal-cartesian-upper"),
    drop: Optional[str] = typer.Option(None, "--drop", envvar=_env("drop"), help="Hypothesis to drop"),
    dims: str = typer.Option("2", "--dims", envvar=_env("dims"), help="Search dimension"),
    iters: int = typer.Option(10_000, "--iters", envvar=_env("iters"), help="Evaluation budget"),
    seed: int = typer.Option(7, "--seed", envvar=_env("seed"), help="Search seed"),
    alpha: float = typer.Option(0.5, "--alpha", envvar=_env("alpha"), help="Alpha for alpha-dependent checks"),
    norm: str = typer.Option("operator", "--norm", envvar=_env("norm"), help="Norm family: operator, schatten:p, ky_fan:k"),
    tol: Optional[float] = typer.Option(None, "--tol", envvar=_env("tol"), help="Margin tolerance"),
    out: Optional[Path] = typer.Option(None, "--out", envvar=_env("out"), help="JSON report path"),
    witness: Optional[Path] = typer.Option(None, "--witness", help="Write the witness as a matrix file for `check --force`"),
    deepen: bool = typer.Option(True, "--deepen/--no-deepen", help="Finish the crossing restart's steps to deepen the violation"),
) -> None:
    """Search for a counterexample with one hypothesis dropped."""
    settings = _settings()
    try:
        config = SearchConfig(dim=parse_dims(dims)[0], iters=iters, seed=seed, alpha=alpha, family=norm, deepen=deepen)
        result = run_falsifier(ineq, drop, config, settings.tolerances(margin_tol=tol), log=lambda m: console.print(f"[dim]{m}[/dim]"))
    except (ValidationError, SvineqError) as exc:
        _fail("Falsification failed", exc)

    if result.found:
        console.print(
            f"[bold yellow]Witness found[/bold yellow] for {result.target}"
            f"{f' without {result.dropped}' if result.dropped else ''}: "
            f"j = {result.violated_index}, LHS - RHS = {result.violation:.6g} after {result.iterations} evaluations"
        )
    else:
        console.print(f"[green]Exhausted[/green] after {result.iterations} evaluations; best margin {_fmt(result.best_margin)}")

    try:
        if out is not None:
            write_json(FalsificationReport.from_result(result), out)
            console.print(f"Report: {out}")
        if witness is not None and result.witness is not None:
            write_matrices(witness, result.witness, result.parameters)
            console.print(f"Witness: {witness}")
    except OSError as exc:
        _fail("Could not write output", exc)

    if result.found and result.dropped is None:
        raise typer.Exit(code=EXIT_VIOLATION)


@app.command()
def check(
    ineq: str = typer.Option(..., "--ineq", envvar=_env("ineq"), help="Inequality id"),
    input_path: Path = typer.Option(..., "--input", envvar=_env("input"), help="Matrix JSON file"),
    alpha: Optional[float] = typer.Option(None, "--alpha", envvar=_env("alpha"), help="Alpha (default: file or 0.5)"),
    norm: Optional[str] = typer.Option(None, "--norm", envvar=_env("norm"), help="Norm family (default: file or operator)"),
    force: bool = typer.Option(False, "--force", help="Evaluate margins even when hypotheses fail"),
    tol: Optional[float] = typer.Option(None, "--tol", envvar=_env("tol"), help="Margin tolerance"),
    out: Optional[Path] = typer.Option(None, "--out", envvar=_env("out"), help="JSON result path"),
) -> None:
    """Check one inequality on explicit matrices."""
    settings = _settings()
    try:
        result = check_explicit(ineq, input_path, alpha=alpha, family=norm, force=force, tol=settings.tolerances(margin_tol=tol))
    except HypothesisError as exc:
        console.print(f"[red]Hypothesis '{exc.hypothesis}' fails:[/red] {exc}")
        console.print("Re-run with --force to evaluate the margins anyway.")
        raise typer.Exit(code=EXIT_ERROR)
    except (ValidationError, SvineqError) as exc:
        _fail("Check failed", exc)
    except OSError as exc:
        _fail("Could not read input", exc)

    _print_check(result)
    if out is not None:
        try:
            write_json(CheckReport.from_result(result), out)
        except OSError as exc:
            _fail("Could not write result", exc)
        console.print(f"Result: {out}")

    if not result.passed:
        raise typer.Exit(code=EXIT_VIOLATION)


if __name__ == "__main__":
    app()
