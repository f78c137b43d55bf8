"""
Dense Complex Linear Algebra Core
=================================

Spectral kernels the rest of the toolkit is built on:
1. Matrix arithmetic with shape checking (add, subtract, multiply, scale, adjoint)
2. Hermitian eigendecomposition by cyclic complex Jacobi rotations
3. Singular value decomposition by one-sided (Hestenes) Jacobi
4. Spectral calculus: |A|, fractional powers of PSD matrices, Cartesian parts
5. Hypothesis predicates (Hermitian, PSD, normal, unitary, commuting)

Every public function returns read-only arrays. Tolerances travel explicitly
with each call; `Tolerances.solver` switches the kernels to LAPACK when a fast
cross-check is wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

from .errors import (
    ContractError,
    ConvergenceError,
    DomainError,
    HypothesisError,
    ParameterError,
    ShapeError,
)

ComplexMatrix = npt.NDArray[np.complex128]

MAX_SWEEPS = 100
EIG_OFF_TOL = 1e-13
_EPS = float(np.finfo(float).eps)
_TINY = 1e-300


class Tolerances(BaseModel):
    model_config = ConfigDict(frozen=True)

    psd_tol: float = Field(default=1e-10, ge=0.0, allow_inf_nan=False)
    unitary_tol: float = Field(default=1e-10, ge=0.0, allow_inf_nan=False)
    recon_tol: float = Field(default=1e-9, ge=0.0, allow_inf_nan=False)
    margin_tol: float = Field(default=1e-8, ge=0.0, allow_inf_nan=False)
    clip_tol: float = Field(default=1e-10, ge=0.0, allow_inf_nan=False)
    solver: Literal["jacobi", "lapack"] = "jacobi"


DEFAULT_TOLERANCES = Tolerances()


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------


def freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def as_matrix(x, name: str = "matrix") -> ComplexMatrix:
    """Validate and copy `x` into an immutable complex matrix. Scalars become 1x1."""
    arr = np.array(x, dtype=np.complex128, copy=True)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{name} must have at least one row and one column, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} has non-finite entries")
    return freeze(arr)


@dataclass(frozen=True)
class SingularSpectrum:
    """Non-negative singular values sorted in descending order."""

    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float, copy=True).reshape(-1)
        object.__setattr__(self, "values", freeze(vals))

    @classmethod
    def from_values(cls, raw, clip_tol: float = DEFAULT_TOLERANCES.clip_tol) -> "SingularSpectrum":
        vals = np.asarray(raw, dtype=float).reshape(-1)
        if vals.size:
            floor = -clip_tol * max(1.0, float(np.max(np.abs(vals))))
            if float(vals.min()) < floor:
                raise ContractError(f"spectrum value {vals.min():.3e} is below the clipping floor {floor:.3e}")
            vals = np.clip(vals, 0.0, None)
            vals = vals[np.argsort(-vals, kind="stable")]
        return cls(vals)

    def is_sorted(self) -> bool:
        return bool(np.all(np.diff(self.values) <= 0.0))

    def padded(self, length: int) -> np.ndarray:
        """First `length` values, zero-padded when the spectrum is shorter."""
        out = np.zeros(length)
        k = min(length, self.values.size)
        out[:k] = self.values[:k]
        return out

    def __len__(self) -> int:
        return int(self.values.size)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values.tolist())

    def __getitem__(self, j):
        return self.values[j]


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return freeze((v * self.eigenvalues) @ v.conj().T)


@dataclass(frozen=True)
class SvdDecomposition:
    """Thin SVD: u is rows x k, v is cols x k with k = min(rows, cols)."""

    u: ComplexMatrix
    singular_values: SingularSpectrum
    v: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        return freeze((self.u * self.singular_values.values) @ self.v.conj().T)


@dataclass(frozen=True)
class PsdReport:
    is_psd: bool
    min_eigenvalue: float
    max_eigenvalue: float

    def __bool__(self) -> bool:
        return self.is_psd

    @property
    def relative_min(self) -> float:
        return self.min_eigenvalue / max(1.0, self.max_eigenvalue)


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------


def _same_shape(op: str, a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{op}: shapes {a.shape} and {b.shape} differ")


def add(a, b) -> ComplexMatrix:
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    _same_shape("add", a, b)
    return freeze(a + b)


def subtract(a, b) -> ComplexMatrix:
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    _same_shape("subtract", a, b)
    return freeze(a - b)


def multiply(a, b) -> ComplexMatrix:
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"multiply: inner dimensions of {a.shape} and {b.shape} do not match")
    return freeze(a @ b)


def scale(a, z: complex) -> ComplexMatrix:
    return freeze(complex(z) * as_matrix(a, "a"))


def adjoint(a) -> ComplexMatrix:
    return freeze(as_matrix(a, "a").conj().T.copy())


def identity(n: int) -> ComplexMatrix:
    return freeze(np.eye(n, dtype=np.complex128))


def hermitian_part(a: np.ndarray) -> ComplexMatrix:
    return freeze((a + a.conj().T) / 2.0)


def _require_square(op: str, a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"{op} needs a square matrix, got {a.shape}")


def _fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


# ---------------------------------------------------------------------------
# Jacobi kernels
# ---------------------------------------------------------------------------


def _jacobi_rotation(app: float, aqq: float, apq: complex) -> tuple[float, complex]:
    """(c, z) for the 2x2 unitary V = [[c, z], [-conj(z), c]] with V* [[app, apq], [conj(apq), aqq]] V diagonal."""
    mag = abs(apq)
    tau = (aqq - app) / (2.0 * mag)
    t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, (t * c) * (apq / mag)


def _rotate_columns(x: np.ndarray, p: int, q: int, c: float, z: complex) -> None:
    xp = x[:, p].copy()
    xq = x[:, q]
    x[:, p] = c * xp - z.conjugate() * xq
    x[:, q] = z * xp + c * xq


def _rotate_rows(x: np.ndarray, p: int, q: int, c: float, z: complex) -> None:
    xp = x[p, :].copy()
    xq = x[q, :]
    x[p, :] = c * xp - z * xq
    x[q, :] = z.conjugate() * xp + c * xq


def _off_norm(a: np.ndarray) -> float:
    return _fro(a - np.diag(np.diag(a)))


def _jacobi_eigh(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.array(h, dtype=np.complex128, copy=True)
    n = a.shape[0]
    w = np.eye(n, dtype=np.complex128)
    target = EIG_OFF_TOL * _fro(a)

    for _ in range(MAX_SWEEPS):
        if _off_norm(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(a[p, q])
                if abs(apq) < _TINY:
                    continue
                c, z = _jacobi_rotation(a[p, p].real, a[q, q].real, apq)
                _rotate_columns(a, p, q, c, z)
                _rotate_rows(a, p, q, c, z)
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                _rotate_columns(w, p, q, c, z)
    else:
        if _off_norm(a) > target:
            raise ConvergenceError(f"Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps")

    return np.diag(a).real.copy(), w


def _complete_columns(u: np.ndarray, missing: np.ndarray) -> np.ndarray:
    """Replace the columns flagged in `missing` by an orthonormal completion."""
    rows = u.shape[0]
    for j in np.flatnonzero(missing):
        known = u[:, ~missing]
        best, best_norm = None, -1.0
        for k in range(rows):
            cand = np.zeros(rows, dtype=np.complex128)
            cand[k] = 1.0
            for _ in range(2):
                cand = cand - known @ (known.conj().T @ cand)
            norm = float(np.linalg.norm(cand))
            if norm > best_norm:
                best, best_norm = cand, norm
        u[:, j] = best / best_norm
        missing = missing.copy()
        missing[j] = False
    return u


def _hestenes(g: np.ndarray, v: np.ndarray | None) -> None:
    """Orthogonalise the columns of `g` in place, accumulating the rotations into `v`."""
    m, n = g.shape
    orth_tol = 8.0 * _EPS * m
    norms = np.einsum("ij,ij->j", g.conj(), g).real

    for _ in range(MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha, beta = float(norms[p]), float(norms[q])
                gamma = complex(np.vdot(g[:, p], g[:, q]))
                if abs(gamma) < _TINY or abs(gamma) <= orth_tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                c, z = _jacobi_rotation(alpha, beta, gamma)
                _rotate_columns(g, p, q, c, z)
                if v is not None:
                    _rotate_columns(v, p, q, c, z)
                norms[p] = float(np.vdot(g[:, p], g[:, p]).real)
                norms[q] = float(np.vdot(g[:, q], g[:, q]).real)
        if not rotated:
            return
    raise ConvergenceError(f"one-sided Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")


def _jacobi_svd(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m, n = a.shape
    if m < n:
        v, s, u = _jacobi_svd(a.conj().T)
        return u, s, v

    g = np.array(a, dtype=np.complex128, copy=True)
    v = np.eye(n, dtype=np.complex128)
    _hestenes(g, v)

    sigma = np.linalg.norm(g, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, g, v = sigma[order], g[:, order], v[:, order]

    missing = sigma <= _TINY
    u = np.zeros_like(g)
    u[:, ~missing] = g[:, ~missing] / sigma[~missing]
    if missing.any():
        u = _complete_columns(u, missing)
    return u, sigma, v


def _jacobi_singular_values(a: np.ndarray) -> np.ndarray:
    """Values-only one-sided Jacobi: no V accumulation, no U completion."""
    g = np.array(a if a.shape[0] >= a.shape[1] else a.conj().T, dtype=np.complex128, copy=True)
    _hestenes(g, None)
    return np.sort(np.linalg.norm(g, axis=0))[::-1]


# ---------------------------------------------------------------------------
# Spectral operations
# ---------------------------------------------------------------------------


def _check_hermitian(op: str, a: np.ndarray, tol: Tolerances) -> None:
    _require_square(op, a)
    err = float(np.max(np.abs(a - a.conj().T)))
    if err > tol.recon_tol * (1.0 + _fro(a)):
        raise HypothesisError("hermitian", f"{op}: matrix is not Hermitian (max |A - A*| = {err:.3e})", value=err)


def hermitian_eig(a, tol: Tolerances = DEFAULT_TOLERANCES) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The Hermitian check uses the Frobenius norm as the scale of `a`, an upper
    bound for the operator norm that needs no decomposition.
    """
    a = as_matrix(a)
    _check_hermitian("hermitian_eig", a, tol)
    h = (a + a.conj().T) / 2.0

    if tol.solver == "lapack":
        vals, vecs = np.linalg.eigh(h)
    else:
        vals, vecs = _jacobi_eigh(h)

    order = np.argsort(-vals, kind="stable")
    return EigenDecomposition(freeze(np.asarray(vals[order], dtype=float)), freeze(vecs[:, order].copy()))


def svd(a, tol: Tolerances = DEFAULT_TOLERANCES) -> SvdDecomposition:
    a = as_matrix(a)
    if tol.solver == "lapack":
        u, s, vh = np.linalg.svd(a, full_matrices=False)
        v = vh.conj().T
    else:
        u, s, v = _jacobi_svd(a)
    spectrum = SingularSpectrum.from_values(s, tol.clip_tol)
    return SvdDecomposition(freeze(np.array(u)), spectrum, freeze(np.array(v)))


def singular_values(a, tol: Tolerances = DEFAULT_TOLERANCES) -> SingularSpectrum:
    a = as_matrix(a)
    if tol.solver == "lapack":
        s = np.linalg.svd(a, compute_uv=False)
    else:
        s = _jacobi_singular_values(a)
    return SingularSpectrum.from_values(s, tol.clip_tol)


def eigenvalues(a, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    return hermitian_eig(a, tol).eigenvalues


def is_psd(a, tol: Tolerances = DEFAULT_TOLERANCES) -> PsdReport:
    vals = hermitian_eig(a, tol).eigenvalues
    lam_min, lam_max = float(vals[-1]), float(vals[0])
    return PsdReport(lam_min >= -tol.psd_tol * max(1.0, lam_max), lam_min, lam_max)


def abs_op(a, tol: Tolerances = DEFAULT_TOLERANCES) -> ComplexMatrix:
    """|A| = (A*A)^{1/2}, assembled from the right singular vectors."""
    return abs_power(a, 1.0, tol)


def abs_power(a, p: float, tol: Tolerances = DEFAULT_TOLERANCES) -> ComplexMatrix:
    """|A|^p with the convention |A|^0 = I."""
    a = as_matrix(a)
    if p == 0:
        return identity(a.shape[1])
    d = svd(a, tol)
    s = d.singular_values.values
    if p < 0 and float(s.min()) <= tol.psd_tol * max(1.0, float(s[0])):
        raise DomainError(f"|A|^{p} is undefined: A is singular")
    v = d.v
    return hermitian_part((v * s**p) @ v.conj().T)


def power_op(a, alpha: float, tol: Tolerances = DEFAULT_TOLERANCES) -> ComplexMatrix:
    """A^alpha for PSD A through the spectral decomposition; 0^0 is taken as 1."""
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise ParameterError(f"power_op: exponent must be finite, got {alpha}")
    eig = hermitian_eig(a, tol)
    lam = eig.eigenvalues
    lam_max = max(1.0, float(lam[0]))
    if float(lam[-1]) < -tol.psd_tol * lam_max:
        raise HypothesisError(
            "psd",
            f"power_op: matrix is not positive semidefinite (lambda_min = {lam[-1]:.3e})",
            value=float(lam[-1]),
        )
    lam = np.clip(lam, 0.0, None)

    if alpha == 0.0:
        powered = np.ones_like(lam)
    else:
        if alpha < 0.0 and float(lam[-1]) <= tol.psd_tol * lam_max:
            raise DomainError(f"power_op: negative exponent {alpha} on a singular matrix")
        powered = lam**alpha

    v = eig.eigenvectors
    return hermitian_part((v * powered) @ v.conj().T)


def cartesian(a) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Re(A) = (A + A*)/2 and Im(A) = (A - A*)/2i, both exactly Hermitian."""
    a = as_matrix(a)
    _require_square("cartesian", a)
    ah = a.conj().T
    return freeze((a + ah) * 0.5), freeze((a - ah) * (-0.5j))


def operator_norm(a, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    return float(singular_values(a, tol)[0])


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


def is_hermitian(a, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a - a.conj().T))) <= tol.recon_tol * (1.0 + _fro(a))


def normality_residual(a) -> float:
    a = as_matrix(a)
    _require_square("normality_residual", a)
    ah = a.conj().T
    return float(np.max(np.abs(ah @ a - a @ ah)))


def is_normal(a, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """‖A*A − AA*‖_max ≤ recon_tol·(1 + ‖A‖_F²); the Frobenius norm bounds ‖A‖ without a decomposition."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return normality_residual(a) <= tol.recon_tol * (1.0 + _fro(a) ** 2)


def is_unitary(a, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    a = as_matrix(a)
    eye = np.eye(a.shape[1])
    return float(np.max(np.abs(a.conj().T @ a - eye))) <= tol.unitary_tol


def commutator_residual(b, c, a) -> float:
    """‖BC − CA‖_max, the intertwining defect of C between A and B."""
    a, b, c = as_matrix(a, "a"), as_matrix(b, "b"), as_matrix(c, "c")
    return float(np.max(np.abs(multiply(b, c) - multiply(c, a))))


def dilation_top_eigenvalues(x, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Top n eigenvalues of X ⊕ (−X) for Hermitian n×n X; they equal s(X)."""
    x = as_matrix(x)
    _check_hermitian("dilation_top_eigenvalues", x, tol)
    n = x.shape[0]
    d = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    d[:n, :n] = x
    d[n:, n:] = -x
    return freeze(hermitian_eig(d, tol).eigenvalues[:n].copy())
