"""
Inequality Registry
===================

Executable forms of the singular value inequalities and block positivity
lemmas. Each check:
1. validates the hypotheses of its statement (or records them when forced)
2. builds the left- and right-hand spectra, PSD claims or norm pairs
3. compares them index by index and returns a `CheckResult`

A check may expose several tracks (e.g. the two directions of a two-sided
bound). Margins are stored normalised, (RHS_j − LHS_j) / max(1, scale) with
scale the largest magnitude on the track; PSD claims store
λ_min / max(1, λ_max) and are judged against `psd_tol`.

The registry maps inequality ids to `InequalitySpec` entries that also know
how to sample hypothesis-satisfying inputs and which hypotheses the
falsifier may drop.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Any, Callable, Literal, Mapping, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from . import generators as gen
from .constructions import NormFamily, block2x2, direct_sum, merge_spectra, spectrum_norm
from .errors import ArityError, DomainError, HypothesisError, ParameterError, ShapeError, UnknownInequalityError
from .linalg_core import (
    DEFAULT_TOLERANCES,
    ComplexMatrix,
    SingularSpectrum,
    Tolerances,
    abs_op,
    abs_power,
    adjoint,
    as_matrix,
    cartesian,
    commutator_residual,
    hermitian_eig,
    hermitian_part,
    identity,
    is_hermitian,
    is_normal,
    is_psd,
    multiply,
    normality_residual,
    operator_norm,
    power_op,
    singular_values,
)

Kind = Literal["spectrum-dominance", "psd-claim", "norm-dominance", "two-sided-spectrum"]
TrackKind = Literal["spectrum", "psd", "norm"]

SQRT2 = math.sqrt(2.0)
MAX_CONDITION = 1e12
ALPHA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)

# Ky Fan k selection for norm-family trials: "cycle" or a fixed k
KPolicy = Union[Literal["cycle"], int]


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Track:
    """One compared inequality: per-index margins plus the sides that produced them."""

    name: str
    kind: TrackKind
    lhs: np.ndarray
    rhs: np.ndarray
    raw: np.ndarray
    margins: np.ndarray
    tolerance: float
    skipped: str | None = None

    @property
    def worst_index(self) -> int:
        """1-based index of the most negative margin; 0 when nothing was compared."""
        if self.skipped or self.margins.size == 0:
            return 0
        return int(np.argmin(self.margins)) + 1

    @property
    def worst_margin(self) -> float:
        if self.skipped or self.margins.size == 0:
            return math.inf
        return float(self.margins.min())

    @property
    def passed(self) -> bool:
        return self.worst_margin >= -self.tolerance

    @property
    def tight_count(self) -> int:
        if self.skipped:
            return 0
        return int(np.count_nonzero(np.abs(self.margins) <= self.tolerance))

    def violation(self) -> tuple[int, float]:
        """(j, LHS_j − RHS_j) at the worst index."""
        j = self.worst_index
        if j == 0:
            return 0, -math.inf
        return j, float(-self.raw[j - 1])


class InputsDigest(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int | None = None
    dim: int | None = None
    trial: int | None = None
    shapes: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class CheckResult:
    id: str
    tracks: tuple[Track, ...]
    inputs: tuple[ComplexMatrix, ...]
    parameters: Mapping[str, Any] = field(default_factory=dict)
    digest: InputsDigest = field(default_factory=InputsDigest)
    hypothesis_failures: tuple[str, ...] = ()
    forced: bool = False

    @property
    def evaluated(self) -> tuple[Track, ...]:
        return tuple(t for t in self.tracks if not t.skipped)

    @property
    def flagged(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tracks if t.skipped)

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.tracks)

    @property
    def worst_track(self) -> Track:
        evaluated = self.evaluated or self.tracks
        return min(evaluated, key=lambda t: t.worst_margin)

    @property
    def worst_margin(self) -> float:
        return self.worst_track.worst_margin

    @property
    def worst_index(self) -> int:
        return self.worst_track.worst_index

    @property
    def margins(self) -> np.ndarray:
        return self.worst_track.margins

    @property
    def tight_count(self) -> int:
        return sum(t.tight_count for t in self.tracks)

    def track(self, name: str) -> Track:
        for t in self.tracks:
            if t.name == name:
                return t
        raise KeyError(f"{self.id} has no track '{name}' (tracks: {', '.join(t.name for t in self.tracks)})")


def _spectrum_track(name: str, lhs, rhs, tol: Tolerances, kind: TrackKind = "spectrum") -> Track:
    """Compare j = 1 … len(lhs); a shorter rhs is zero-padded."""
    lhs = np.asarray(lhs, dtype=float).reshape(-1)
    rhs = np.asarray(rhs, dtype=float).reshape(-1)
    padded = np.zeros(lhs.size)
    k = min(lhs.size, rhs.size)
    padded[:k] = rhs[:k]
    raw = padded - lhs
    top = max([1.0, *np.abs(lhs).tolist(), *np.abs(padded).tolist()])
    return Track(name, kind, lhs, padded, raw, raw / top, tol.margin_tol)


def _norm_track(name: str, lhs: float, rhs: float, tol: Tolerances) -> Track:
    return _spectrum_track(name, [lhs], [rhs], tol, kind="norm")


def _psd_track(name: str, matrix: np.ndarray, tol: Tolerances) -> Track:
    vals = hermitian_eig(hermitian_part(matrix), tol).eigenvalues
    lam_min, lam_max = float(vals[-1]), float(vals[0])
    raw = np.array([lam_min])
    return Track(name, "psd", np.zeros(1), raw.copy(), raw, raw / max(1.0, lam_max), tol.psd_tol)


def _skipped(name: str, kind: TrackKind, reason: str) -> Track:
    empty = np.zeros(0)
    return Track(name, kind, empty, empty, empty, empty, 0.0, skipped=reason)


def _result(check_id: str, tracks, inputs, hyp: "_Hypotheses", **parameters) -> CheckResult:
    inputs = tuple(inputs)
    return CheckResult(
        id=check_id,
        tracks=tuple(tracks),
        inputs=inputs,
        parameters={k: v for k, v in parameters.items() if v is not None},
        digest=InputsDigest(shapes=tuple(tuple(int(d) for d in m.shape) for m in inputs)),
        hypothesis_failures=tuple(hyp.failures),
        forced=hyp.force,
    )


# ---------------------------------------------------------------------------
# Hypotheses
# ---------------------------------------------------------------------------


class _Hypotheses:
    """Raises on a failed hypothesis, or records it when the check is forced."""

    def __init__(self, check_id: str, force: bool) -> None:
        self.check_id = check_id
        self.force = force
        self.failures: list[str] = []

    def require(self, ok: bool, name: str, message: str, *, value: float | None = None, part: int | None = None) -> bool:
        if ok:
            return True
        if not self.force:
            raise HypothesisError(name, f"{self.check_id}: {message}", value=value, part=part)
        if name not in self.failures:
            self.failures.append(name)
        return False

    def require_psd(self, name: str, matrix: np.ndarray, what: str, tol: Tolerances) -> bool:
        if not is_hermitian(matrix, tol):
            return self.require(False, name, f"{what} is not Hermitian")
        report = is_psd(matrix, tol)
        return self.require(
            report.is_psd,
            name,
            f"{what} is not positive semidefinite (lambda_min = {report.min_eigenvalue:.3e})",
            value=report.min_eigenvalue,
        )


def _psd_quietly(matrix: np.ndarray, tol: Tolerances) -> bool:
    return matrix.shape[0] == matrix.shape[1] and is_hermitian(matrix, tol) and is_psd(matrix, tol).is_psd


def _require_unit_alpha(check_id: str, alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 <= alpha <= 1.0):
        raise ParameterError(f"{check_id}: alpha must lie in [0, 1], got {alpha}")
    return alpha


def _spectrum(a, tol: Tolerances) -> SingularSpectrum:
    return singular_values(a, tol)


def _square_parts(check_id: str, parts: Sequence) -> list[ComplexMatrix]:
    if len(parts) == 0:
        raise ArityError(f"{check_id}: needs at least one operator")
    mats = [as_matrix(p, f"part {i}") for i, p in enumerate(parts)]
    for i, m in enumerate(mats):
        if m.shape[0] != m.shape[1]:
            raise ShapeError(f"{check_id}: part {i} must be square, got {m.shape}")
    return mats


# ---------------------------------------------------------------------------
# Block operator inequalities
# ---------------------------------------------------------------------------


def check_tao(a, b, c, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """2 s_j(B) ≤ s_j([[A, B], [B*, C]]) for a PSD block.

    The `dilation` track follows the alternative route through
    s_j([[0, 2B], [2B*, 0]]) ≤ s_j(block ⊕ companion).
    """
    blk = block2x2(a, b, c)
    hyp = _Hypotheses("tao", force)
    hyp.require_psd("block_psd", blk.realized, "block [[A, B], [B*, C]]", tol)

    s_block = _spectrum(blk.realized, tol)
    s_b = _spectrum(blk.b, tol)
    doubled = SingularSpectrum(2.0 * _spectrum(blk.off_diagonal(), tol).values)
    both = merge_spectra(s_block, _spectrum(blk.companion(), tol))
    tracks = [
        _spectrum_track("tao", 2.0 * s_b.values, s_block.values, tol),
        _spectrum_track("dilation", doubled.values, both.values, tol),
    ]
    return _result("tao", tracks, (blk.a, blk.b, blk.c), hyp)


def check_block_dominance(a, b, c, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """s_j(block) ≤ 2 s_j(A ⊕ C), and its consequence s_j(B) ≤ s_j(A ⊕ C)."""
    blk = block2x2(a, b, c)
    hyp = _Hypotheses("block-dominance", force)
    hyp.require_psd("block_psd", blk.realized, "block [[A, B], [B*, C]]", tol)

    s_block = _spectrum(blk.realized, tol)
    s_pinch = _spectrum(blk.pinching(), tol)
    tracks = [
        _spectrum_track("dominance", s_block.values, 2.0 * s_pinch.values, tol),
        _spectrum_track("off-diagonal", _spectrum(blk.b, tol).values, s_pinch.values, tol),
    ]
    return _result("block-dominance", tracks, (blk.a, blk.b, blk.c), hyp)


def check_pinching_norms(
    a,
    b,
    c,
    family: NormFamily | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    force: bool = False,
) -> CheckResult:
    """|||A ⊕ C||| ≤ |||block||| for any block; |||block||| ≤ 2|||A ⊕ C||| when the block is PSD.

    The upper direction is skipped and flagged, not failed, when the block is
    not PSD.
    """
    family = family or NormFamily.operator()
    blk = block2x2(a, b, c)
    hyp = _Hypotheses("pinching-norms", force)

    s_block = _spectrum(blk.realized, tol)
    s_pinch = _spectrum(blk.pinching(), tol)
    n_block = spectrum_norm(s_block, family)
    n_pinch = spectrum_norm(s_pinch, family)
    n_comp = spectrum_norm(_spectrum(blk.companion(), tol), family)

    tracks = [
        _norm_track("lower", n_pinch, n_block, tol),
        _norm_track("operator", float(s_pinch[0]), float(s_block[0]), tol),
        _norm_track("triangle", 2.0 * n_pinch, n_block + n_comp, tol),
    ]
    if _psd_quietly(blk.realized, tol):
        tracks.append(_norm_track("upper", n_block, 2.0 * n_pinch, tol))
    elif force:
        hyp.require(False, "block_psd", "block is not PSD")
        tracks.append(_norm_track("upper", n_block, 2.0 * n_pinch, tol))
    else:
        tracks.append(_skipped("upper", "norm", "block is not positive semidefinite"))
    return _result("pinching-norms", tracks, (blk.a, blk.b, blk.c), hyp, family=str(family))


def check_cartesian_block_psd(a, alpha: float = 0.5, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """[[|A|^{2α}, A*], [A, |A*|^{2(1−α)}]] ≥ 0, with |·|^0 = I at the endpoints."""
    alpha = _require_unit_alpha("cartesian-block-psd", alpha)
    a = as_matrix(a, "a")
    a_star = adjoint(a)
    blk = block2x2(abs_power(a, 2.0 * alpha, tol), a_star, abs_power(a_star, 2.0 * (1.0 - alpha), tol))
    hyp = _Hypotheses("cartesian-block-psd", force)
    return _result("cartesian-block-psd", [_psd_track("psd", blk.realized, tol)], (a,), hyp, alpha=alpha)


def check_kittaneh_lemma(a, b, c, alpha: float = 0.5, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """If A, B ≥ 0, BC = CA and [[A, C*], [C, B]] ≥ 0, then [[A^{2α}, C*], [C, B^{2(1−α)}]] ≥ 0.

    f(t) = t^α and g(t) = t^{1−α}; other pairs with f(t)g(t) = t are not
    covered. Positivity of A and B cannot be forced away because the powers
    need it.
    """
    alpha = _require_unit_alpha("kittaneh-lemma", alpha)
    a, b, c = as_matrix(a, "a"), as_matrix(b, "b"), as_matrix(c, "c")
    blk = block2x2(a, adjoint(c), b)
    hyp = _Hypotheses("kittaneh-lemma", force)

    hyp.require_psd("a_psd", a, "A", tol)
    hyp.require_psd("b_psd", b, "B", tol)
    residual = commutator_residual(b, c, a)
    bound = tol.recon_tol * max(1.0, (operator_norm(a, tol) + operator_norm(b, tol)) * operator_norm(c, tol))
    hyp.require(residual <= bound, "commuting", f"BC != CA (max residual {residual:.3e})", value=residual)
    hyp.require_psd("block_psd", blk.realized, "block [[A, C*], [C, B]]", tol)

    transformed = block2x2(power_op(a, 2.0 * alpha, tol), adjoint(c), power_op(b, 2.0 * (1.0 - alpha), tol))
    return _result("kittaneh-lemma", [_psd_track("psd", transformed.realized, tol)], (a, b, c), hyp, alpha=alpha)


# ---------------------------------------------------------------------------
# Sums and products
# ---------------------------------------------------------------------------


def check_sum_split(a, b, alpha: float = 0.5, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """s_j(A + B) ≤ s_j((|A|^{2α} + |B|^{2α}) ⊕ (|A*|^{2(1−α)} + |B*|^{2(1−α)})).

    α = 1/2 gives the s_j(A + B) ≤ s_j((|A| + |B|) ⊕ (|A*| + |B*|)) case. When
    both operators are normal a `normal` track also checks
    s_j(A + B) ≤ s_j((|A| + |B|) ⊕ (|A| + |B|)).
    """
    alpha = _require_unit_alpha("sum-split", alpha)
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ShapeError(f"sum-split: needs two square matrices of one shape, got {a.shape} and {b.shape}")
    hyp = _Hypotheses("sum-split", force)

    lhs = _spectrum(a + b, tol).values
    a_star, b_star = adjoint(a), adjoint(b)
    p, q = 2.0 * alpha, 2.0 * (1.0 - alpha)
    top = abs_power(a, p, tol) + abs_power(b, p, tol)
    bottom = abs_power(a_star, q, tol) + abs_power(b_star, q, tol)
    rhs = merge_spectra(_spectrum(top, tol), _spectrum(bottom, tol))
    tracks = [_spectrum_track("split", lhs, rhs.values, tol)]

    if is_normal(a, tol) and is_normal(b, tol):
        s_abs = _spectrum(abs_op(a, tol) + abs_op(b, tol), tol)
        tracks.append(_spectrum_track("normal", lhs, merge_spectra(s_abs, s_abs).values, tol))
    return _result("sum-split", tracks, (a, b), hyp, alpha=alpha)


def alpha_one_rhs(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> SingularSpectrum:
    """Right-hand spectrum of the sum split at α = 1: s(A*A + B*B) ∪ s(2I)."""
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    gram = hermitian_part(a.conj().T @ a + b.conj().T @ b)
    return merge_spectra(_spectrum(gram, tol), _spectrum(2.0 * identity(a.shape[1]), tol))


def check_product_split(a, b, x, alpha: float = 0.5, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """s_j(B*XA) ≤ s_j(A*|X|^{2α}A ⊕ B*|X*|^{2(1−α)}B).

    Shapes: X is r×c, A is c×p, B is r×q. The off-diagonal block of
    (A ⊕ B)* [[|X|^{2α}, X*], [X, |X*|^{2(1−α)}]] (A ⊕ B) is A*X*B, whose
    adjoint B*XA is the operator bounded here; the AXB* ordering is false in
    general. A normal X also gets a `normal-x` track with |X| in place of |X*|.
    """
    alpha = _require_unit_alpha("product-split", alpha)
    a, b, x = as_matrix(a, "a"), as_matrix(b, "b"), as_matrix(x, "x")
    r, c = x.shape
    if a.shape[0] != c or b.shape[0] != r:
        raise ShapeError(f"product-split: X is {x.shape}, so A needs {c} rows and B needs {r} rows; got {a.shape}, {b.shape}")
    hyp = _Hypotheses("product-split", force)

    a_star, b_star = adjoint(a), adjoint(b)
    lhs = _spectrum(multiply(multiply(b_star, x), a), tol).values
    top = hermitian_part(a_star @ abs_power(x, 2.0 * alpha, tol) @ a)
    s_top = _spectrum(top, tol)
    bottom = hermitian_part(b_star @ abs_power(adjoint(x), 2.0 * (1.0 - alpha), tol) @ b)
    tracks = [_spectrum_track("split", lhs, merge_spectra(s_top, _spectrum(bottom, tol)).values, tol)]

    if r == c and is_normal(x, tol):
        bottom_n = hermitian_part(b_star @ abs_power(x, 2.0 * (1.0 - alpha), tol) @ b)
        tracks.append(_spectrum_track("normal-x", lhs, merge_spectra(s_top, _spectrum(bottom_n, tol)).values, tol))
    return _result("product-split", tracks, (a, b, x), hyp, alpha=alpha)


def check_product_norm_bound(a, b, x, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """s_j(AXB*) ≤ ‖X‖ s_j(A ⊕ B)², read as the square of the j-th singular value.

    Shapes: A is p×r, X is r×c, B is q×c. For square PSD A and B the
    `positive` track checks s_j(A^{1/2} X B^{1/2}) ≤ ‖X‖ s_j(A ⊕ B); otherwise
    that track is skipped and flagged.
    """
    a, b, x = as_matrix(a, "a"), as_matrix(b, "b"), as_matrix(x, "x")
    r, c = x.shape
    if a.shape[1] != r or b.shape[1] != c:
        raise ShapeError(f"product-norm-bound: X is {x.shape}, so A needs {r} columns and B needs {c}; got {a.shape}, {b.shape}")
    hyp = _Hypotheses("product-norm-bound", force)

    x_norm = operator_norm(x, tol)
    lhs = _spectrum(multiply(multiply(a, x), adjoint(b)), tol).values
    s_sum = merge_spectra(_spectrum(a, tol), _spectrum(b, tol)).values
    tracks = [_spectrum_track("norm-bound", lhs, x_norm * s_sum**2, tol)]

    if _psd_quietly(a, tol) and _psd_quietly(b, tol):
        ha, hb = power_op(a, 0.5, tol), power_op(b, 0.5, tol)
        lhs_pos = _spectrum(ha @ x @ hb, tol).values
        tracks.append(_spectrum_track("positive", lhs_pos, x_norm * s_sum, tol))
    else:
        tracks.append(_skipped("positive", "spectrum", "A and B are not both square and PSD"))
    return _result("product-norm-bound", tracks, (a, b, x), hyp)


def _commutator_embedding(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """A' = [[X, Y], [0, 0]] and B' = [[Y, −X], [0, 0]], so A'B'* = (XY* − YX*) ⊕ 0."""
    r, c = x.shape
    zero = np.zeros((r, 2 * c), dtype=np.complex128)
    return np.vstack([np.hstack([x, y]), zero]), np.vstack([np.hstack([y, -x]), zero])


def check_ab_star(a, b, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """s_j(AB*) ≤ s_j(A*A ⊕ B*B), and s_j(XY* − YX*) ≤ s_j((XX* + YY*) ⊕ (XX* + YY*))."""
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape != b.shape:
        raise ShapeError(f"ab-star: shapes {a.shape} and {b.shape} differ")
    hyp = _Hypotheses("ab-star", force)

    def corollary(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        lhs = _spectrum(p @ q.conj().T, tol).values
        rhs = merge_spectra(
            _spectrum(hermitian_part(p.conj().T @ p), tol),
            _spectrum(hermitian_part(q.conj().T @ q), tol),
        )
        return lhs, rhs.values

    tracks = [_spectrum_track("corollary", *corollary(a, b), tol)]
    tracks.append(_spectrum_track("commutator", *corollary(*_commutator_embedding(a, b)), tol))
    return _result("ab-star", tracks, (a, b), hyp)


def check_positive_sandwich(a, b, x, alpha: float = 0.5, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """s_j(AXB*) ≤ s_j(AX^{2α}A* ⊕ BX^{2(1−α)}B*) for X ≥ 0.

    Also checks the norm form max(‖X^{2α}‖, ‖X^{2(1−α)}‖)·s_j(A ⊕ B)² and, for
    square PSD A and B, the A^{1/2}, B^{1/2} instance. α outside [0, 1] needs a
    positive definite X with condition number at most 1e12. X ≥ 0 cannot be
    forced away.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise ParameterError(f"positive-sandwich: alpha must be finite, got {alpha}")
    a, b, x = as_matrix(a, "a"), as_matrix(b, "b"), as_matrix(x, "x")
    n = x.shape[0]
    if x.shape[1] != n or a.shape[1] != n or b.shape[1] != n:
        raise ShapeError(f"positive-sandwich: X must be square and A, B need {n} columns; got {a.shape}, {b.shape}, {x.shape}")
    _Hypotheses("positive-sandwich", False).require_psd("x_psd", x, "X", tol)
    hyp = _Hypotheses("positive-sandwich", force)

    if not (0.0 <= alpha <= 1.0):
        vals = hermitian_eig(x, tol).eigenvalues
        lam_min, lam_max = float(vals[-1]), float(vals[0])
        if lam_min <= tol.psd_tol * max(1.0, lam_max) or lam_max / lam_min > MAX_CONDITION:
            raise DomainError(f"positive-sandwich: alpha = {alpha} outside [0, 1] needs a well-conditioned positive definite X")

    xa, xb = power_op(x, 2.0 * alpha, tol), power_op(x, 2.0 * (1.0 - alpha), tol)
    lhs = _spectrum(a @ x @ b.conj().T, tol).values

    rhs = merge_spectra(
        _spectrum(hermitian_part(a @ xa @ a.conj().T), tol),
        _spectrum(hermitian_part(b @ xb @ b.conj().T), tol),
    )
    weight = max(operator_norm(xa, tol), operator_norm(xb, tol))
    s_sum = merge_spectra(_spectrum(a, tol), _spectrum(b, tol)).values
    tracks = [
        _spectrum_track("sandwich", lhs, rhs.values, tol),
        _spectrum_track("norm", lhs, weight * s_sum**2, tol),
    ]

    if a.shape == (n, n) and b.shape == (n, n) and _psd_quietly(a, tol) and _psd_quietly(b, tol):
        ha, hb = power_op(a, 0.5, tol), power_op(b, 0.5, tol)
        rhs_pos = merge_spectra(
            _spectrum(hermitian_part(ha @ xa @ ha), tol),
            _spectrum(hermitian_part(hb @ xb @ hb), tol),
        )
        tracks.append(_spectrum_track("positive", _spectrum(ha @ x @ hb, tol).values, rhs_pos.values, tol))
    else:
        tracks.append(_skipped("positive", "spectrum", "A and B are not both square and PSD"))
    return _result("positive-sandwich", tracks, (a, b, x), hyp, alpha=alpha)


# ---------------------------------------------------------------------------
# Cartesian decomposition bounds
# ---------------------------------------------------------------------------


def scalar_cartesian_bounds(x: complex) -> tuple[float, float, float]:
    """((1/√2)|a + b|, |x|, |a| + |b|) for x = a + ib."""
    a, b = complex(x).real, complex(x).imag
    return abs(a + b) / SQRT2, abs(complex(x)), abs(a) + abs(b)


def check_normal_cartesian(parts: Sequence, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """(1/√2) s_j(⊕(Re A_i + Im A_i)) ≤ s_j(⊕A_i) ≤ s_j(⊕(|Re A_i| + |Im A_i|)) for normal A_i."""
    mats = _square_parts("normal-cartesian", parts)
    hyp = _Hypotheses("normal-cartesian", force)
    for i, m in enumerate(mats):
        residual = normality_residual(m)
        hyp.require(is_normal(m, tol), "normal", f"part {i} is not normal (max |A*A - AA*| = {residual:.3e})", value=residual, part=i)

    sums, abs_sums = [], []
    for m in mats:
        re, im = cartesian(m)
        sums.append(re + im)
        abs_sums.append(abs_op(re, tol) + abs_op(im, tol))

    s_parts = _spectrum(direct_sum(mats), tol).values
    tracks = [
        _spectrum_track("lower", _spectrum(direct_sum(sums), tol).values / SQRT2, s_parts, tol),
        _spectrum_track("upper", s_parts, _spectrum(direct_sum(abs_sums), tol).values, tol),
    ]
    return _result("normal-cartesian", tracks, mats, hyp)


def check_a_plus_ia_star(parts: Sequence, tol: Tolerances = DEFAULT_TOLERANCES, *, force: bool = False) -> CheckResult:
    """√2 s_j(⊕(Re A_i + Im A_i)) ≤ s_j(⊕(A_i + iA_i*)) ≤ 2 s_j(⊕(Re A_i + Im A_i))."""
    mats = _square_parts("a-plus-ia-star", parts)
    hyp = _Hypotheses("a-plus-ia-star", force)

    sums = []
    for m in mats:
        re, im = cartesian(m)
        sums.append(re + im)
    s_sum = _spectrum(direct_sum(sums), tol).values
    s_mid = _spectrum(direct_sum([m + 1j * m.conj().T for m in mats]), tol).values
    tracks = [
        _spectrum_track("lower", SQRT2 * s_sum, s_mid, tol),
        _spectrum_track("upper", s_mid, 2.0 * s_sum, tol),
    ]
    return _result("a-plus-ia-star", tracks, mats, hyp)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

Latent = tuple[np.ndarray, ...]


@dataclass(frozen=True)
class TrialParams:
    alpha: float = 0.5
    family: NormFamily | None = None


@dataclass(frozen=True)
class SearchSpace:
    """Unconstrained latent arrays plus the map that turns them into check inputs.

    The falsifier perturbs latents, so `build` must keep every hypothesis that
    was not dropped.
    """

    latent: Callable[[np.random.Generator, int], Latent]
    build: Callable[[Latent], tuple]


@dataclass(frozen=True)
class InequalitySpec:
    id: str
    kind: Kind
    inputs: tuple[str, ...]
    hypotheses: tuple[str, ...]
    parameters: tuple[str, ...]
    tracks: tuple[str, ...]
    check: Callable[..., CheckResult]
    sample: Callable[[np.random.Generator, int, TrialParams], tuple]
    search: Mapping[str | None, SearchSpace]
    summary: str
    variadic: bool = False
    real_alpha: bool = False

    @property
    def droppable(self) -> tuple[str, ...]:
        return tuple(k for k in self.search if k is not None)

    def run(self, inputs: Sequence, tol: Tolerances = DEFAULT_TOLERANCES, params: TrialParams | None = None, *, force: bool = False) -> CheckResult:
        params = params or TrialParams()
        kwargs: dict[str, Any] = {"tol": tol, "force": force}
        if "alpha" in self.parameters:
            kwargs["alpha"] = params.alpha
        if "family" in self.parameters:
            kwargs["family"] = params.family
        if self.variadic:
            return self.check(list(inputs), **kwargs)
        if len(inputs) != len(self.inputs):
            raise ArityError(f"{self.id} takes {len(self.inputs)} matrices ({', '.join(self.inputs)}), got {len(inputs)}")
        return self.check(*inputs, **kwargs)


def _gram_blocks(w: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    k = w.shape[0]
    n = k - k // 2
    g = hermitian_part((w.conj().T @ w) / k)
    return g[:n, :n].copy(), g[:n, n:].copy(), g[n:, n:].copy()


def _normal_from(g: np.ndarray, d: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(g)
    return (q * d.reshape(-1)) @ q.conj().T


def _ginibre_latent(*shapes: Callable[[int], tuple[int, int]]) -> Callable[[np.random.Generator, int], Latent]:
    def draw(rng: np.random.Generator, dim: int) -> Latent:
        return tuple(np.array(gen.ginibre(rng, *shape(dim))) for shape in shapes)

    return draw


def _square(dim: int) -> tuple[int, int]:
    return dim, dim


def _double(dim: int) -> tuple[int, int]:
    return 2 * dim, 2 * dim


def _column(dim: int) -> tuple[int, int]:
    return dim, 1


def _identity_build(latent: Latent) -> tuple:
    return tuple(latent)


def _side(rng: np.random.Generator, dim: int) -> int:
    return int(rng.integers(1, dim + 1))


# samplers used by run_registry: hypothesis-satisfying, with enough variety to
# reach every track


def _sample_block_psd(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    return gen.block_psd(rng, dim, _side(rng, dim))


def _sample_pinching(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    m = _side(rng, dim)
    if rng.random() < 0.5:
        return gen.block_psd(rng, dim, m)
    return gen.ginibre(rng, dim), gen.ginibre(rng, dim, m), gen.ginibre(rng, m)


def _sample_rectangular(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    return (gen.ginibre(rng, dim, _side(rng, dim)),)


def _sample_kittaneh(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    if rng.random() < 0.5:
        p, q = gen.commuting_pair(rng, dim)
        return p, p, q
    return gen.canonical_triple(rng, dim)


def _sample_sum_split(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    if rng.random() < 0.25:
        return gen.normal(rng, dim), gen.normal(rng, dim)
    return gen.ginibre(rng, dim), gen.ginibre(rng, dim)


def _sample_product_split(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    if rng.random() < 0.25:
        x = gen.normal(rng, dim)
        r = c = dim
    else:
        r, c = dim, _side(rng, dim)
        x = gen.ginibre(rng, r, c)
    return gen.ginibre(rng, c, _side(rng, dim)), gen.ginibre(rng, r, _side(rng, dim)), x


def _sample_product_norm(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    r, c = dim, _side(rng, dim)
    x = gen.ginibre(rng, r, c)
    if rng.random() < 0.3:
        return gen.psd(rng, r), gen.psd(rng, c), x
    return gen.ginibre(rng, _side(rng, dim), r), gen.ginibre(rng, _side(rng, dim), c), x


def _sample_pair(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    cols = _side(rng, dim)
    return gen.ginibre(rng, dim, cols), gen.ginibre(rng, dim, cols)


def _sample_sandwich(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    if 0.0 <= params.alpha <= 1.0 and rng.random() < 0.5:
        x = gen.psd(rng, dim)
    else:
        x = gen.positive_definite(rng, dim)
    if rng.random() < 0.3:
        return gen.psd(rng, dim), gen.psd(rng, dim), x
    return gen.ginibre(rng, _side(rng, dim), dim), gen.ginibre(rng, _side(rng, dim), dim), x


def _sample_normal_parts(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    count = int(rng.integers(1, 4))
    return tuple(gen.normal(rng, dim if i == 0 else _side(rng, dim)) for i in range(count))


def _sample_square_parts(rng: np.random.Generator, dim: int, params: TrialParams) -> tuple:
    count = int(rng.integers(1, 4))
    return tuple(gen.ginibre(rng, dim if i == 0 else _side(rng, dim)) for i in range(count))


# search spaces used by the falsifier


def _kittaneh_commuting(latent: Latent) -> tuple:
    (p_factor, coeffs) = latent
    p = hermitian_part(p_factor.conj().T @ p_factor / p_factor.shape[0])
    k = coeffs.reshape(-1)
    return p, p, k[0] * p + k[1] * (p @ p) + k[2] * (p @ p @ p)


def _kittaneh_block(latent: Latent) -> tuple:
    a, c_star, b = _gram_blocks(latent[0])
    return a, b, c_star.conj().T


def _kittaneh_canonical(latent: Latent) -> tuple:
    (t,) = latent
    return abs_op(t), abs_op(adjoint(t)), t


def _sandwich_build(latent: Latent) -> tuple:
    a, b, z = latent
    return a, b, hermitian_part(z.conj().T @ z / z.shape[0])


def _normal_build(latent: Latent) -> tuple:
    g, d = latent
    return (_normal_from(g, d),)


_BLOCK_SEARCH = SearchSpace(_ginibre_latent(_double), lambda latent: _gram_blocks(latent[0]))
_FREE_TRIPLE = SearchSpace(_ginibre_latent(_square, _square, _square), _identity_build)


def _coeff_shape(dim: int) -> tuple[int, int]:
    return 3, 1


def _build_registry() -> Mapping[str, InequalitySpec]:
    specs = [
        InequalitySpec(
            id="tao",
            kind="spectrum-dominance",
            inputs=("a", "b", "c"),
            hypotheses=("block_psd",),
            parameters=(),
            tracks=("tao", "dilation"),
            check=check_tao,
            sample=_sample_block_psd,
            search={None: _BLOCK_SEARCH, "block_psd": _FREE_TRIPLE},
            summary="2 s_j(B) <= s_j([[A, B], [B*, C]]) for a PSD block",
        ),
        InequalitySpec(
            id="block-dominance",
            kind="spectrum-dominance",
            inputs=("a", "b", "c"),
            hypotheses=("block_psd",),
            parameters=(),
            tracks=("dominance", "off-diagonal"),
            check=check_block_dominance,
            sample=_sample_block_psd,
            search={None: _BLOCK_SEARCH, "block_psd": _FREE_TRIPLE},
            summary="s_j(block) <= 2 s_j(A + C) and s_j(B) <= s_j(A + C) (direct sums)",
        ),
        InequalitySpec(
            id="pinching-norms",
            kind="norm-dominance",
            inputs=("a", "b", "c"),
            hypotheses=("block_psd",),
            parameters=("family",),
            tracks=("lower", "operator", "triangle", "upper"),
            check=check_pinching_norms,
            sample=_sample_pinching,
            search={None: _BLOCK_SEARCH, "block_psd": _FREE_TRIPLE},
            summary="|||A + C||| <= |||block||| <= 2 |||A + C||| (upper needs a PSD block)",
        ),
        InequalitySpec(
            id="cartesian-block-psd",
            kind="psd-claim",
            inputs=("a",),
            hypotheses=(),
            parameters=("alpha",),
            tracks=("psd",),
            check=check_cartesian_block_psd,
            sample=_sample_rectangular,
            search={None: SearchSpace(_ginibre_latent(_square), _identity_build)},
            summary="[[|A|^(2a), A*], [A, |A*|^(2(1-a))]] >= 0",
        ),
        InequalitySpec(
            id="kittaneh-lemma",
            kind="psd-claim",
            inputs=("a", "b", "c"),
            hypotheses=("a_psd", "b_psd", "commuting", "block_psd"),
            parameters=("alpha",),
            tracks=("psd",),
            check=check_kittaneh_lemma,
            sample=_sample_kittaneh,
            search={
                None: SearchSpace(_ginibre_latent(_square), _kittaneh_canonical),
                "commuting": SearchSpace(_ginibre_latent(_double), _kittaneh_block),
                "block_psd": SearchSpace(_ginibre_latent(_square, _coeff_shape), _kittaneh_commuting),
            },
            summary="[[A, C*], [C, B]] >= 0 and BC = CA imply [[A^(2a), C*], [C, B^(2(1-a))]] >= 0",
        ),
        InequalitySpec(
            id="sum-split",
            kind="spectrum-dominance",
            inputs=("a", "b"),
            hypotheses=(),
            parameters=("alpha",),
            tracks=("split", "normal"),
            check=check_sum_split,
            sample=_sample_sum_split,
            search={None: SearchSpace(_ginibre_latent(_square, _square), _identity_build)},
            summary="s_j(A + B) <= s_j((|A|^(2a) + |B|^(2a)) + (|A*|^(2(1-a)) + |B*|^(2(1-a))))",
        ),
        InequalitySpec(
            id="product-split",
            kind="spectrum-dominance",
            inputs=("a", "b", "x"),
            hypotheses=(),
            parameters=("alpha",),
            tracks=("split", "normal-x"),
            check=check_product_split,
            sample=_sample_product_split,
            search={None: _FREE_TRIPLE},
            summary="s_j(B*XA) <= s_j(A*|X|^(2a)A + B*|X*|^(2(1-a))B)",
        ),
        InequalitySpec(
            id="product-norm-bound",
            kind="spectrum-dominance",
            inputs=("a", "b", "x"),
            hypotheses=(),
            parameters=(),
            tracks=("norm-bound", "positive"),
            check=check_product_norm_bound,
            sample=_sample_product_norm,
            search={None: _FREE_TRIPLE},
            summary="s_j(AXB*) <= ||X|| s_j(A + B)^2",
        ),
        InequalitySpec(
            id="ab-star",
            kind="spectrum-dominance",
            inputs=("a", "b"),
            hypotheses=(),
            parameters=(),
            tracks=("corollary", "commutator"),
            check=check_ab_star,
            sample=_sample_pair,
            search={None: SearchSpace(_ginibre_latent(_square, _square), _identity_build)},
            summary="s_j(AB*) <= s_j(A*A + B*B) and the XY* - YX* bound",
        ),
        InequalitySpec(
            id="positive-sandwich",
            kind="spectrum-dominance",
            inputs=("a", "b", "x"),
            hypotheses=("x_psd",),
            parameters=("alpha",),
            tracks=("sandwich", "norm", "positive"),
            check=check_positive_sandwich,
            sample=_sample_sandwich,
            search={None: SearchSpace(_ginibre_latent(_square, _square, _square), _sandwich_build)},
            summary="s_j(AXB*) <= s_j(AX^(2a)A* + BX^(2(1-a))B*) for X >= 0",
            real_alpha=True,
        ),
        InequalitySpec(
            id="normal-cartesian",
            kind="two-sided-spectrum",
            inputs=("parts",),
            hypotheses=("normal",),
            parameters=(),
            tracks=("lower", "upper"),
            check=check_normal_cartesian,
            sample=_sample_normal_parts,
            search={
                None: SearchSpace(_ginibre_latent(_square, _column), _normal_build),
                "normal": SearchSpace(_ginibre_latent(_square), _identity_build),
            },
            summary="(1/sqrt2) s_j(Re A + Im A) <= s_j(A) <= s_j(|Re A| + |Im A|) for normal A",
            variadic=True,
        ),
        InequalitySpec(
            id="a-plus-ia-star",
            kind="two-sided-spectrum",
            inputs=("parts",),
            hypotheses=(),
            parameters=(),
            tracks=("lower", "upper"),
            check=check_a_plus_ia_star,
            sample=_sample_square_parts,
            search={None: SearchSpace(_ginibre_latent(_square), _identity_build)},
            summary="sqrt2 s_j(Re A + Im A) <= s_j(A + iA*) <= 2 s_j(Re A + Im A)",
            variadic=True,
        ),
    ]
    return MappingProxyType({spec.id: spec for spec in specs})


REGISTRY: Mapping[str, InequalitySpec] = _build_registry()


def get_spec(spec_id: str) -> InequalitySpec:
    try:
        return REGISTRY[spec_id]
    except KeyError:
        raise UnknownInequalityError(f"Unknown inequality '{spec_id}'. Known: {', '.join(REGISTRY)}") from None


def resolve_target(target: str) -> tuple[InequalitySpec, str | None]:
    """Split '<id>' or '<id>-<track>' into the registry entry and optional track name."""
    if target in REGISTRY:
        return REGISTRY[target], None
    for spec_id in sorted(REGISTRY, key=len, reverse=True):
        prefix = spec_id + "-"
        if target.startswith(prefix) and target[len(prefix):] in REGISTRY[spec_id].tracks:
            return REGISTRY[spec_id], target[len(prefix):]
    raise UnknownInequalityError(f"Unknown inequality or track '{target}'. Known ids: {', '.join(REGISTRY)}")


# ---------------------------------------------------------------------------
# Running the registry
# ---------------------------------------------------------------------------


def family_for_trial(trial: int, ps: Sequence[float], total_dim: int, k_policy: KPolicy = "cycle") -> NormFamily:
    """Cycle operator, Schatten p for each p, then Ky Fan k.

    k cycles over 1..total_dim under the "cycle" policy; a fixed integer k is
    clamped to total_dim.
    """
    options = 2 + len(ps)
    slot = trial % options
    if slot == 0:
        return NormFamily.operator()
    if slot <= len(ps):
        return NormFamily.schatten(ps[slot - 1])
    if k_policy == "cycle":
        return NormFamily.ky_fan(1 + (trial // options) % total_dim)
    return NormFamily.ky_fan(min(int(k_policy), total_dim))


def alpha_for_trial(spec: InequalitySpec, trial: int, alphas: Sequence[float]) -> float:
    """Cycle the α grid by trial index; values outside [0, 1] only reach real-α checks."""
    grid = [float(x) for x in alphas if spec.real_alpha or 0.0 <= x <= 1.0] or [0.5]
    return grid[trial % len(grid)]


def trial_params(
    spec: InequalitySpec,
    trial: int,
    inputs: tuple,
    alphas: Sequence[float],
    ps: Sequence[float],
    k_policy: KPolicy = "cycle",
) -> TrialParams:
    family = None
    if "family" in spec.parameters:
        total = inputs[0].shape[0] + inputs[2].shape[0]
        family = family_for_trial(trial, ps, total, k_policy)
    return TrialParams(alpha=alpha_for_trial(spec, trial, alphas), family=family)


def run_trial(
    spec: InequalitySpec,
    dim: int,
    trial: int,
    *,
    seed: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    alphas: Sequence[float] = ALPHA_GRID,
    ps: Sequence[float] = (1.0, 2.0, 3.0),
    k_policy: KPolicy = "cycle",
) -> CheckResult:
    """One seeded trial; the PRNG stream depends only on (seed, id, dim, trial)."""
    rng = gen.stream(seed, spec.id, dim, trial)
    inputs = spec.sample(rng, dim, TrialParams(alpha=alpha_for_trial(spec, trial, alphas)))
    params = trial_params(spec, trial, inputs, alphas, ps, k_policy)
    result = spec.run(inputs, tol, params)
    return replace(result, digest=result.digest.model_copy(update={"seed": seed, "dim": dim, "trial": trial}))


def _run_job(job: tuple) -> CheckResult:
    spec_id, dim, trial, seed, tol, alphas, ps, k_policy = job
    return run_trial(REGISTRY[spec_id], dim, trial, seed=seed, tol=tol, alphas=alphas, ps=ps, k_policy=k_policy)


def run_registry(
    spec_ids: Sequence[str] | None = None,
    *,
    dims: Sequence[int] = range(1, 7),
    trials: int = 1000,
    seed: int = 42,
    tol: Tolerances = DEFAULT_TOLERANCES,
    alphas: Sequence[float] = ALPHA_GRID,
    ps: Sequence[float] = (1.0, 2.0, 3.0),
    k_policy: KPolicy = "cycle",
    workers: int = 1,
) -> list[CheckResult]:
    """One CheckResult per (id, dim, trial), ordered by id then dim then trial.

    With workers > 1 the trials run in a process pool; each trial owns its
    PRNG stream, so the results do not depend on scheduling.
    """
    specs = [get_spec(s) for s in (spec_ids or list(REGISTRY))]
    alphas, ps = tuple(float(a) for a in alphas), tuple(float(p) for p in ps)
    jobs = [
        (spec.id, dim, trial, seed, tol, alphas, ps, k_policy)
        for spec in specs
        for dim in dims
        for trial in range(trials)
    ]

    if workers <= 1:
        return [_run_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
