"""
Suite Runner and Reports
========================

Drives the inequality registry end to end:
1. `run_suite` runs every selected inequality over seeded trials per dimension
2. `check_explicit` runs one check on matrices loaded from a file
3. report models serialise results, witnesses and falsification searches to JSON

Reports are deterministic for a fixed configuration; only `generated_at`
changes between identical runs.
"""

from __future__ import annotations

import csv
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Sequence

from pydantic import BaseModel, Field, field_validator, model_validator
from rich.console import Console

from . import __version__
from .constructions import NormFamily
from .errors import ParameterError
from .falsifier import FalsificationResult
from .inequalities import REGISTRY, ALPHA_GRID, CheckResult, KPolicy, Track, TrialParams, get_spec, run_registry
from .linalg_core import DEFAULT_TOLERANCES, Tolerances
from .matrix_io import matrix_to_json, read_matrices

MAX_WITNESSES = 5


def parse_dims(text: str) -> list[int]:
    """'1-6' → [1..6]; '2,4' → [2, 4]; '3' → [3]."""
    dims: list[int] = []
    try:
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            lo, sep, hi = chunk.partition("-")
            dims.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
    except ValueError:
        raise ParameterError(f"Cannot parse dims '{text}'; use e.g. '1-6' or '2,3'") from None
    if not dims or min(dims) < 1:
        raise ParameterError(f"dims must be positive integers, got '{text}'")
    return sorted(set(dims))


class SuiteConfig(BaseModel):
    suites: list[str] = Field(default_factory=list)
    dims: list[int] = Field(default_factory=lambda: list(range(1, 7)))
    trials: int = Field(default=1000, ge=1)
    seed: int = 42
    tolerances: Tolerances = DEFAULT_TOLERANCES
    alphas: list[float] = Field(default_factory=lambda: list(ALPHA_GRID))
    ps: list[float] = Field(default_factory=lambda: [1.0, 2.0, 3.0])
    k_policy: KPolicy = "cycle"
    real_alpha: bool = False
    workers: int = Field(default=1, ge=1)
    out: Path | None = None
    csv_path: Path | None = None

    @field_validator("dims", mode="before")
    @classmethod
    def _dims(cls, value: Any) -> Any:
        return parse_dims(value) if isinstance(value, str) else value

    @field_validator("ps")
    @classmethod
    def _ps(cls, value: list[float]) -> list[float]:
        for p in value:
            NormFamily.schatten(p)
        return value

    @field_validator("k_policy")
    @classmethod
    def _k_policy(cls, value: KPolicy) -> KPolicy:
        if value != "cycle" and value < 1:
            raise ValueError(f"Ky Fan k must be 'cycle' or an integer >= 1, got {value}")
        return value

    @model_validator(mode="after")
    def _alpha_range(self) -> "SuiteConfig":
        outside = [a for a in self.alphas if not 0.0 <= a <= 1.0]
        if outside and not self.real_alpha:
            raise ValueError(f"alpha values {outside} lie outside [0, 1]; enable the positive definite override to use them")
        for suite in self.suites:
            get_spec(suite)
        return self

    def suite_ids(self) -> list[str]:
        return list(self.suites) or list(REGISTRY)


# ---------------------------------------------------------------------------
# Report models
# ---------------------------------------------------------------------------


class TrackReport(BaseModel):
    name: str
    kind: str
    passed: bool
    skipped: str | None = None
    worst_margin: float | None = None
    worst_index: int = 0
    tight: int = 0
    tolerance: float = 0.0
    margins: list[float] = Field(default_factory=list)
    raw: list[float] = Field(default_factory=list)
    lhs: list[float] = Field(default_factory=list)
    rhs: list[float] = Field(default_factory=list)

    @classmethod
    def from_track(cls, track: Track) -> "TrackReport":
        return cls(
            name=track.name,
            kind=track.kind,
            passed=track.passed,
            skipped=track.skipped,
            worst_margin=None if track.skipped else track.worst_margin,
            worst_index=track.worst_index,
            tight=track.tight_count,
            tolerance=track.tolerance,
            margins=track.margins.tolist(),
            raw=track.raw.tolist(),
            lhs=track.lhs.tolist(),
            rhs=track.rhs.tolist(),
        )


class CheckReport(BaseModel):
    id: str
    passed: bool
    worst_margin: float | None
    worst_track: str
    worst_index: int
    tight: int
    flagged: list[str] = Field(default_factory=list)
    hypothesis_failures: list[str] = Field(default_factory=list)
    forced: bool = False
    parameters: dict[str, Any] = Field(default_factory=dict)
    digest: dict[str, Any] = Field(default_factory=dict)
    tracks: list[TrackReport] = Field(default_factory=list)
    matrices: list[dict[str, Any]] = Field(default_factory=list)

    @classmethod
    def from_result(cls, result: CheckResult) -> "CheckReport":
        worst = result.worst_track
        return cls(
            id=result.id,
            passed=result.passed,
            worst_margin=None if worst.skipped else worst.worst_margin,
            worst_track=worst.name,
            worst_index=worst.worst_index,
            tight=result.tight_count,
            flagged=list(result.flagged),
            hypothesis_failures=list(result.hypothesis_failures),
            forced=result.forced,
            parameters=dict(result.parameters),
            digest=result.digest.model_dump(exclude_none=True),
            tracks=[TrackReport.from_track(t) for t in result.tracks],
            matrices=[matrix_to_json(m) for m in result.inputs],
        )


class InequalityReport(BaseModel):
    id: str
    summary: str
    trials: int = 0
    passes: int = 0
    failures: int = 0
    worst_margin: float | None = None
    worst_track: str | None = None
    worst_index: int = 0
    worst_dim: int | None = None
    tight: int = 0
    flagged: int = 0
    failing_witnesses: list[CheckReport] = Field(default_factory=list)

    def add(self, result: CheckResult) -> None:
        self.trials += 1
        self.tight += result.tight_count
        self.flagged += len(result.flagged)
        if result.passed:
            self.passes += 1
        else:
            self.failures += 1
            if len(self.failing_witnesses) < MAX_WITNESSES:
                self.failing_witnesses.append(CheckReport.from_result(result))
        worst = result.worst_track
        if not worst.skipped and (self.worst_margin is None or worst.worst_margin < self.worst_margin):
            self.worst_margin = worst.worst_margin
            self.worst_track = worst.name
            self.worst_index = worst.worst_index
            self.worst_dim = result.digest.dim


class SuiteReport(BaseModel):
    tool: str = "svineq"
    version: str = __version__
    generated_at: str
    config: dict[str, Any]
    all_passed: bool
    results: dict[str, InequalityReport]
    run_log: list[str] = Field(default_factory=list)


class FalsificationReport(BaseModel):
    target: str
    inequality_id: str
    track: str | None
    dropped: str | None
    found: bool
    violated_index: int
    violation: float | None
    best_margin: float | None
    iterations: int
    seed: int
    dim: int
    parameters: dict[str, Any] = Field(default_factory=dict)
    witness_restart: int | None = None
    witness: list[dict[str, Any]] = Field(default_factory=list)
    trace: list[dict[str, Any]] = Field(default_factory=list)

    @classmethod
    def from_result(cls, result: FalsificationResult) -> "FalsificationReport":
        return cls(
            target=result.target,
            inequality_id=result.inequality_id,
            track=result.track,
            dropped=result.dropped,
            found=result.found,
            violated_index=result.violated_index,
            violation=result.violation,
            best_margin=result.best_margin,
            iterations=result.iterations,
            seed=result.seed,
            dim=result.dim,
            parameters=dict(result.parameters),
            witness_restart=result.witness_restart,
            witness=[matrix_to_json(m) for m in (result.witness or ())],
            trace=[
                {"restart": s.restart, "start_margin": s.start_margin, "best_margin": s.best_margin, "steps": s.steps}
                for s in result.trace
            ],
        )


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


class SuiteRunner:
    """
    Runs a property suite and assembles its report.

    Usage:
        runner = SuiteRunner(SuiteConfig(trials=10, dims=[1, 2]))
        report = runner.run()
        runner.save_report("report.json")
    """

    def __init__(self, config: SuiteConfig, console: Console | None = None, verbose: bool = False) -> None:
        self.config = config
        self.console = console
        self.verbose = verbose
        self.results: list[CheckResult] = []
        self.report: SuiteReport | None = None
        self.run_log: list[str] = []

    def log(self, message: str) -> None:
        self.run_log.append(message)
        if self.verbose and self.console is not None:
            self.console.print(f"[dim]{message}[/dim]")

    def run(self, on_spec: Callable[[str], None] | None = None) -> SuiteReport:
        cfg = self.config
        self.log(
            f"Running {len(cfg.suite_ids())} inequalities, dims {cfg.dims}, {cfg.trials} trials each, "
            f"seed {cfg.seed}, solver {cfg.tolerances.solver}"
        )
        reports: dict[str, InequalityReport] = {}
        for spec_id in cfg.suite_ids():
            results = run_registry(
                [spec_id],
                dims=cfg.dims,
                trials=cfg.trials,
                seed=cfg.seed,
                tol=cfg.tolerances,
                alphas=cfg.alphas,
                ps=cfg.ps,
                k_policy=cfg.k_policy,
                workers=cfg.workers,
            )
            entry = InequalityReport(id=spec_id, summary=get_spec(spec_id).summary)
            for result in results:
                entry.add(result)
            reports[spec_id] = entry
            self.results.extend(results)
            self.log(f"{spec_id}: {entry.passes}/{entry.trials} passed, worst margin {entry.worst_margin}")
            if on_spec:
                on_spec(spec_id)

        self.report = SuiteReport(
            generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            config=cfg.model_dump(mode="json", exclude={"out", "csv_path"}),
            all_passed=all(r.failures == 0 for r in reports.values()),
            results=reports,
            run_log=self.run_log,
        )
        return self.report

    def save_report(self, filepath: str | Path) -> Path:
        if self.report is None:
            raise RuntimeError("No report yet; call run() first")
        path = Path(filepath)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.report.model_dump_json(indent=2), encoding="utf-8")
        self.log(f"Report saved: {path}")
        return path

    def save_csv(self, filepath: str | Path) -> Path:
        return write_margins_csv(self.results, filepath)


def run_suite(config: SuiteConfig, console: Console | None = None, verbose: bool = False) -> SuiteReport:
    runner = SuiteRunner(config, console=console, verbose=verbose)
    report = runner.run()
    if config.out is not None:
        runner.save_report(config.out)
    if config.csv_path is not None:
        runner.save_csv(config.csv_path)
    return report


def write_margins_csv(results: Sequence[CheckResult], filepath: str | Path) -> Path:
    path = Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["id", "dim", "trial", "track", "j", "lhs", "rhs", "raw", "margin"])
        for result in results:
            for track in result.evaluated:
                for j, (lhs, rhs, raw, margin) in enumerate(zip(track.lhs, track.rhs, track.raw, track.margins), start=1):
                    writer.writerow(
                        [result.id, result.digest.dim, result.digest.trial, track.name, j, repr(lhs), repr(rhs), repr(raw), repr(margin)]
                    )
    return path


def check_explicit(
    spec_id: str,
    input_path: str | Path,
    *,
    alpha: float | None = None,
    family: str | None = None,
    force: bool = False,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CheckResult:
    """Run one check on matrices from a file; file parameters fill in what the caller leaves unset."""
    spec = get_spec(spec_id)
    matrices, file_params = read_matrices(input_path)
    if alpha is None:
        alpha = float(file_params.get("alpha", 0.5))
    if family is None:
        family = str(file_params.get("family", "operator"))
    params = TrialParams(alpha=alpha, family=NormFamily.parse(family) if "family" in spec.parameters else None)
    return spec.run(matrices, tol, params, force=force)


def write_json(model: BaseModel, filepath: str | Path) -> Path:
    path = Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2), encoding="utf-8")
    return path
