"""
Seeded Random Matrix Generators
===============================

One generator per hypothesis class the inequality registry needs. Entries are
standard complex Gaussians (independent standard normal real and imaginary
parts) drawn from numpy's PCG64 bit generator, so a seed reproduces the same
matrices on any platform with IEEE doubles.

Every finite matrix is compact, so no decay structure is imposed.
"""

from __future__ import annotations

import math
import zlib
from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import ParameterError
from .linalg_core import ComplexMatrix, abs_op, adjoint, as_matrix, freeze, hermitian_part

GenClass = Literal[
    "ginibre",
    "hermitian",
    "psd",
    "positive_definite",
    "normal",
    "unitary",
    "contraction",
    "block_psd",
    "commuting_pair",
    "canonical_triple",
]

GENERATOR_CLASSES: tuple[str, ...] = GenClass.__args__
POSITIVE_SHIFT = 0.1
_SEED_MASK = (1 << 64) - 1

Sample = Union[ComplexMatrix, tuple[ComplexMatrix, ...]]


class GenConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int
    kind: str
    dim: int = Field(default=2, ge=1)
    dim2: int | None = Field(default=None, ge=1)
    scale: float = Field(default=1.0, gt=0.0, allow_inf_nan=False)


def _key(part: int | str) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    return int(part) & _SEED_MASK


def stream(seed: int, *keys: int | str) -> np.random.Generator:
    """Independent PCG64 stream for (seed, *keys); strings are hashed with CRC-32."""
    entropy = [_key(seed)] + [_key(k) for k in keys]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def ginibre(rng: np.random.Generator, rows: int, cols: int | None = None, scale: float = 1.0) -> ComplexMatrix:
    cols = rows if cols is None else cols
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    return freeze(scale * z)


def hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> ComplexMatrix:
    g = ginibre(rng, n, n, scale)
    return freeze((g + g.conj().T) * 0.5)


def psd(rng: np.random.Generator, n: int, scale: float = 1.0) -> ComplexMatrix:
    z = ginibre(rng, n, n)
    return hermitian_part(scale * (z.conj().T @ z) / n)


def positive_definite(rng: np.random.Generator, n: int, scale: float = 1.0) -> ComplexMatrix:
    return hermitian_part(psd(rng, n, scale) + POSITIVE_SHIFT * scale * np.eye(n))


def unitary(rng: np.random.Generator, n: int) -> ComplexMatrix:
    """Haar unitary: QR of a Ginibre draw with the phases of R divided out."""
    q, r = np.linalg.qr(ginibre(rng, n, n))
    d = np.diagonal(r)
    return freeze(q * (d / np.abs(d)))


def normal_with_spectrum(rng: np.random.Generator, n: int, scale: float = 1.0) -> tuple[ComplexMatrix, np.ndarray]:
    """U diag(d) U* together with the complex diagonal d used to build it."""
    u = unitary(rng, n)
    d = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return freeze((u * d) @ u.conj().T), freeze(d)


def normal(rng: np.random.Generator, n: int, scale: float = 1.0) -> ComplexMatrix:
    return normal_with_spectrum(rng, n, scale)[0]


def contraction(rng: np.random.Generator, rows: int, cols: int | None = None) -> ComplexMatrix:
    g = ginibre(rng, rows, cols)
    top = float(np.linalg.norm(g, 2))
    shrink = rng.uniform(0.5, 1.0)
    return freeze(g * (shrink / top))


def block_psd(
    rng: np.random.Generator, n: int, m: int | None = None, scale: float = 1.0
) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """Blocks (A, B, C) of W*W, so [[A, B], [B*, C]] is PSD by construction."""
    m = n if m is None else m
    w = ginibre(rng, n + m, n + m)
    g = hermitian_part(scale * (w.conj().T @ w) / (n + m))
    return freeze(g[:n, :n].copy()), freeze(g[:n, n:].copy()), freeze(g[n:, n:].copy())


def commuting_pair(rng: np.random.Generator, n: int, scale: float = 1.0) -> tuple[ComplexMatrix, ComplexMatrix]:
    """(P, q(P)) with P PSD and q(t) = t·r(t), deg r ≤ 2, complex coefficients.

    r is normalised to max |r(λ)| ≤ 1 on the spectrum of P, so with A = B = P
    and C = q(P) the block [[A, C*], [C, B]] is PSD as well as BC = CA.
    """
    u = unitary(rng, n)
    lam = scale * rng.chisquare(2, n) / 2.0
    coeffs = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    r = coeffs[0] + coeffs[1] * lam + coeffs[2] * lam**2
    peak = float(np.max(np.abs(r)))
    q = lam * r / peak if peak > 0.0 else np.zeros(n, dtype=np.complex128)
    p = hermitian_part((u * lam) @ u.conj().T)
    return p, freeze((u * q) @ u.conj().T)


def canonical_triple(rng: np.random.Generator, n: int, scale: float = 1.0) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """(|T|, |T*|, T) for a Ginibre T; |T*| T = T |T| holds exactly in theory."""
    t = ginibre(rng, n, n, scale)
    return abs_op(t), abs_op(adjoint(t)), t


def projector_pair_witness(angle: float = math.pi / 3) -> ComplexMatrix:
    """P + iQ for rank-one projectors P, Q at the given angle.

    At angle π/3 this non-normal matrix has s_2 = sqrt(1 − √7/4) ≈ 0.5819 while
    s_2(|Re| + |Im|) = s_2(P + Q) = 0.5.
    """
    e = np.array([1.0, 0.0])
    v = np.array([math.cos(angle), math.sin(angle)])
    return as_matrix(np.outer(e, e) + 1j * np.outer(v, v), "witness")


def generate(config: GenConfig) -> Sample:
    rng = stream(config.seed, config.kind, config.dim, config.dim2 or 0)
    n, s = config.dim, config.scale
    if config.kind == "ginibre":
        return ginibre(rng, n, config.dim2, s)
    if config.kind == "hermitian":
        return hermitian(rng, n, s)
    if config.kind == "psd":
        return psd(rng, n, s)
    if config.kind == "positive_definite":
        return positive_definite(rng, n, s)
    if config.kind == "normal":
        return normal(rng, n, s)
    if config.kind == "unitary":
        return unitary(rng, n)
    if config.kind == "contraction":
        return contraction(rng, n, config.dim2)
    if config.kind == "block_psd":
        return block_psd(rng, n, config.dim2, s)
    if config.kind == "commuting_pair":
        return commuting_pair(rng, n, s)
    if config.kind == "canonical_triple":
        return canonical_triple(rng, n, s)
    raise ParameterError(f"Unknown generator class: {config.kind}")


def perturb(a, magnitude: float, seed: int | np.random.Generator) -> ComplexMatrix:
    """a + magnitude·G for a Ginibre G; class structure is not preserved."""
    if magnitude < 0:
        raise ParameterError(f"perturb: magnitude must be >= 0, got {magnitude}")
    a = as_matrix(a)
    rng = seed if isinstance(seed, np.random.Generator) else stream(seed, "perturb")
    g = ginibre(rng, *a.shape)
    if magnitude == 0:
        return a
    return freeze(a + magnitude * g)
