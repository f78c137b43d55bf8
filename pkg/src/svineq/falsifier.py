"""
Hypothesis-Dropping Falsifier
=============================

Random-restart hill climbing on the most negative margin of a check, run over
a search space that keeps every hypothesis except the dropped one.

Schedule: up to `restarts` restarts of up to `steps` perturbation steps each,
bounded by `iters` total evaluations. The perturbation magnitude halves on
every non-improving step. Once a restart crosses the violation threshold
(10 times the track tolerance) it finishes its remaining steps to deepen the
violation and the search stops; with `deepen=False` it stops at the first
crossing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from . import generators as gen
from .constructions import NormFamily
from .errors import ContractError, ConvergenceError, DomainError, HypothesisError
from .inequalities import CheckResult, InequalitySpec, SearchSpace, TrialParams, resolve_target
from .linalg_core import DEFAULT_TOLERANCES, ComplexMatrix, Tolerances

STOP_FACTOR = 10.0


class SearchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    dim: int = Field(default=2, ge=1)
    iters: int = Field(default=10_000, ge=1)
    restarts: int = Field(default=100, ge=1)
    steps: int = Field(default=100, ge=0)
    seed: int = 7
    initial_step: float = Field(default=0.5, gt=0.0)
    alpha: float = 0.5
    family: str = "operator"
    deepen: bool = True


@dataclass(frozen=True)
class RestartSummary:
    restart: int
    start_margin: float
    best_margin: float
    steps: int
    final_step: float


@dataclass(frozen=True)
class FalsificationResult:
    target: str
    inequality_id: str
    track: str | None
    dropped: str | None
    found: bool
    witness: tuple[ComplexMatrix, ...] | None
    violated_index: int
    violation: float
    best_margin: float
    iterations: int
    seed: int
    dim: int
    parameters: dict
    trace: tuple[RestartSummary, ...]
    witness_restart: int | None = None

    @property
    def exhausted(self) -> bool:
        return not self.found


def _focus(result: CheckResult, track: str | None):
    return result.track(track) if track else result.worst_track


class _Objective:
    def __init__(self, spec: InequalitySpec, track: str | None, space: SearchSpace, tol: Tolerances, params: TrialParams) -> None:
        self.spec = spec
        self.track = track
        self.space = space
        self.tol = tol
        self.params = params
        self.calls = 0

    def __call__(self, latent) -> tuple[float, CheckResult | None]:
        self.calls += 1
        try:
            result = self.spec.run(self.space.build(latent), self.tol, self.params, force=True)
        except (HypothesisError, DomainError, ConvergenceError):
            return math.inf, None
        return _focus(result, self.track).worst_margin, result


def _threshold(result: CheckResult | None, track: str | None, tol: Tolerances) -> float:
    if result is None:
        return -STOP_FACTOR * tol.margin_tol
    return -STOP_FACTOR * _focus(result, track).tolerance


def falsify(
    target: str,
    dropped: str | None = None,
    config: SearchConfig | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
    log: Callable[[str], None] | None = None,
) -> FalsificationResult:
    """Search for inputs violating `target` ('<id>' or '<id>-<track>') with one hypothesis dropped."""
    config = config or SearchConfig()
    spec, track = resolve_target(target)
    if dropped is not None and dropped not in spec.search:
        raise ContractError(
            f"{spec.id} cannot be evaluated with '{dropped}' dropped; droppable: {', '.join(spec.droppable) or 'none'}"
        )
    space = spec.search[dropped]
    params = TrialParams(
        alpha=config.alpha,
        family=NormFamily.parse(config.family) if "family" in spec.parameters else None,
    )
    objective = _Objective(spec, track, space, tol, params)

    best_margin, best_result, best_restart = math.inf, None, None
    trace: list[RestartSummary] = []

    for restart in range(config.restarts):
        if objective.calls >= config.iters:
            break
        rng = gen.stream(config.seed, spec.id, dropped or "", config.dim, restart)
        latent = space.latent(rng, config.dim)
        current, result = objective(latent)
        start, step, taken = current, config.initial_step, 0
        crossed = current < _threshold(result, track, tol)

        for _ in range(config.steps):
            if objective.calls >= config.iters or (crossed and not config.deepen):
                break
            candidate = tuple(np.array(gen.perturb(x, step, rng)) for x in latent)
            value, cand_result = objective(candidate)
            taken += 1
            if value < current:
                latent, current, result = candidate, value, cand_result
            else:
                step *= 0.5
            crossed = crossed or current < _threshold(result, track, tol)

        trace.append(RestartSummary(restart, start, current, taken, step))
        if current < best_margin:
            best_margin, best_result, best_restart = current, result, restart
        if crossed:
            if log:
                log(f"{target}: violation found in restart {restart} after {objective.calls} evaluations")
            break

    found = best_result is not None and best_margin < _threshold(best_result, track, tol)
    j, violation = (0, -math.inf) if best_result is None else _focus(best_result, track).violation()
    if log and not found:
        log(f"{target}: exhausted after {objective.calls} evaluations, best margin {best_margin:.3e}")

    return FalsificationResult(
        target=target,
        inequality_id=spec.id,
        track=track,
        dropped=dropped,
        found=found,
        witness=best_result.inputs if best_result is not None else None,
        violated_index=j,
        violation=violation,
        best_margin=best_margin,
        iterations=objective.calls,
        seed=config.seed,
        dim=config.dim,
        parameters=dict(best_result.parameters) if best_result is not None else {},
        trace=tuple(trace),
        witness_restart=best_restart,
    )
