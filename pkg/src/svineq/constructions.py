"""
Operator Constructions and Norm Functionals
===========================================

Builds the operators the inequalities talk about on top of `linalg_core`:
- direct sums A ⊕ B ⊕ ... (block diagonal assembly)
- 2x2 block operators [[A, B], [B*, C]] with their sign-flip companion and pinching
- merging of singular spectra (the spectrum of a direct sum)
- unitarily invariant norms: operator, Schatten p and Ky Fan k
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy.linalg import block_diag

from .errors import ArityError, ContractError, ParameterError, ShapeError
from .linalg_core import (
    DEFAULT_TOLERANCES,
    ComplexMatrix,
    SingularSpectrum,
    Tolerances,
    abs_op,
    adjoint,
    as_matrix,
    freeze,
    singular_values,
)


def direct_sum(parts: Sequence) -> ComplexMatrix:
    if len(parts) == 0:
        raise ArityError("direct_sum needs at least one part")
    mats = [as_matrix(p, f"part {i}") for i, p in enumerate(parts)]
    return freeze(np.asarray(block_diag(*mats), dtype=np.complex128))


@dataclass(frozen=True)
class BlockOperator:
    """The 2x2 operator matrix [[A, B], [B*, C]]; the (2,1) block is always B*."""

    a: ComplexMatrix
    b: ComplexMatrix
    c: ComplexMatrix
    realized: ComplexMatrix

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return self.c.shape[0]

    def companion(self) -> ComplexMatrix:
        """[[A, −B], [−B*, C]], unitarily similar to the block via diag(I, −I)."""
        return _assemble(self.a, -self.b, self.c)

    def pinching(self) -> ComplexMatrix:
        return direct_sum([self.a, self.c])

    def off_diagonal(self) -> ComplexMatrix:
        """[[0, B], [B*, 0]]."""
        return _assemble(np.zeros_like(self.a), self.b, np.zeros_like(self.c))


def _assemble(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> ComplexMatrix:
    return freeze(np.block([[a, b], [b.conj().T, c]]).astype(np.complex128))


def block2x2(a, b, c) -> BlockOperator:
    a, b, c = as_matrix(a, "a"), as_matrix(b, "b"), as_matrix(c, "c")
    n, m = a.shape[0], c.shape[0]
    if a.shape != (n, n) or c.shape != (m, m):
        raise ShapeError(f"block2x2: diagonal blocks must be square, got {a.shape} and {c.shape}")
    if b.shape != (n, m):
        raise ShapeError(f"block2x2: off-diagonal block must be {(n, m)}, got {b.shape}")
    return BlockOperator(a, b, c, _assemble(a, b, c))


def canonical_block(t, tol: Tolerances = DEFAULT_TOLERANCES, *, normal_form: bool = False) -> BlockOperator:
    """[[|T|, T*], [T, |T*|]], which is always PSD.

    With `normal_form` the lower corner is |T| instead of |T*|; that block is
    PSD when T is normal.
    """
    t = as_matrix(t, "t")
    t_star = adjoint(t)
    corner = abs_op(t, tol) if normal_form else abs_op(t_star, tol)
    return block2x2(abs_op(t, tol), t_star, corner)


def merge_spectra(s1: SingularSpectrum, s2: SingularSpectrum) -> SingularSpectrum:
    """Descending multiset union; realises the spectrum of a direct sum."""
    for label, s in (("first", s1), ("second", s2)):
        if not s.is_sorted():
            raise ContractError(f"merge_spectra: {label} spectrum is not sorted descending")
    merged = np.concatenate([s1.values, s2.values])
    return SingularSpectrum(merged[np.argsort(-merged, kind="stable")])


@dataclass(frozen=True)
class NormFamily:
    kind: Literal["operator", "schatten", "ky_fan"]
    param: float | int | None = None

    def __post_init__(self) -> None:
        if self.kind == "operator":
            object.__setattr__(self, "param", None)
        elif self.kind == "schatten":
            if self.param is None or not math.isfinite(float(self.param)) or float(self.param) < 1.0:
                raise ParameterError(f"Schatten norm needs finite p >= 1, got {self.param}")
            object.__setattr__(self, "param", float(self.param))
        elif self.kind == "ky_fan":
            if self.param is None or int(self.param) != self.param or int(self.param) < 1:
                raise ParameterError(f"Ky Fan norm needs an integer k >= 1, got {self.param}")
            object.__setattr__(self, "param", int(self.param))
        else:
            raise ParameterError(f"Unknown norm family: {self.kind}")

    @classmethod
    def operator(cls) -> "NormFamily":
        return cls("operator")

    @classmethod
    def schatten(cls, p: float) -> "NormFamily":
        return cls("schatten", p)

    @classmethod
    def ky_fan(cls, k: int) -> "NormFamily":
        return cls("ky_fan", k)

    @classmethod
    def parse(cls, text: str) -> "NormFamily":
        """Parse 'operator', 'schatten:p' or 'ky_fan:k'."""
        kind, _, value = text.strip().lower().partition(":")
        kind = kind.replace("-", "_")
        if kind == "operator":
            return cls.operator()
        if not value:
            raise ParameterError(f"Norm family '{text}' needs a parameter, e.g. schatten:2")
        try:
            number = float(value)
        except ValueError as exc:
            raise ParameterError(f"Bad norm parameter in '{text}'") from exc
        if kind == "schatten":
            return cls.schatten(number)
        if kind == "ky_fan":
            return cls.ky_fan(int(number) if number.is_integer() else number)
        raise ParameterError(f"Unknown norm family: {kind}")

    def __str__(self) -> str:
        if self.kind == "operator":
            return "operator"
        return f"{self.kind}:{self.param:g}"


def spectrum_norm(spectrum: SingularSpectrum, family: NormFamily) -> float:
    s = spectrum.values
    if family.kind == "operator":
        return float(s[0]) if s.size else 0.0
    if family.kind == "ky_fan":
        if family.param > s.size:
            raise ParameterError(f"Ky Fan k = {family.param} exceeds the {s.size} available singular values")
        return float(np.sum(s[: family.param]))
    top = float(s[0]) if s.size else 0.0
    if top == 0.0:
        return 0.0
    p = family.param
    return top * float(np.sum((s / top) ** p)) ** (1.0 / p)


def norm(a, family: NormFamily, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    return spectrum_norm(singular_values(a, tol), family)


def fan_dominated(x: SingularSpectrum, y: SingularSpectrum, slack: float = 0.0) -> bool:
    """s_j(x) ≤ s_j(y) + slack for every j, with the shorter list zero-padded."""
    length = max(len(x), len(y))
    return bool(np.all(x.padded(length) <= y.padded(length) + slack))
