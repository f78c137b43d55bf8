import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from pydantic import ValidationError

from svineq import generators as gen
from svineq.errors import ContractError, DomainError, HypothesisError, ParameterError, ShapeError
from svineq.linalg_core import (
    SingularSpectrum,
    Tolerances,
    abs_op,
    abs_power,
    add,
    adjoint,
    as_matrix,
    cartesian,
    commutator_residual,
    dilation_top_eigenvalues,
    eigenvalues,
    hermitian_eig,
    identity,
    is_hermitian,
    is_normal,
    is_psd,
    is_unitary,
    multiply,
    operator_norm,
    power_op,
    singular_values,
    svd,
)

ORACLE_TOL = 1e-10
RECON_TOL = 1e-9

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=8)


def _hermitian_oracle(h: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues of a 2x2 Hermitian matrix, descending."""
    a, d, b = h[0, 0].real, h[1, 1].real, h[0, 1]
    mean = (a + d) / 2.0
    radius = math.hypot((a - d) / 2.0, abs(b))
    return np.array([mean + radius, mean - radius])


def _singular_oracle(a: np.ndarray) -> np.ndarray:
    """Square roots of the eigenvalues of A*A; the small one through |det A| / s_1."""
    top = math.sqrt(_hermitian_oracle(a.conj().T @ a)[0])
    det = abs(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    return np.array([top, det / top if top > 0 else 0.0])


def _close(got, expected, scale: float = 1.0, atol: float = ORACLE_TOL) -> bool:
    return bool(np.allclose(got, expected, rtol=0.0, atol=atol * max(1.0, scale)))


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------


def test_adjoint_of_scalar():
    assert adjoint([[1j]])[0, 0] == -1j


def test_identity_is_neutral(rng):
    x = gen.ginibre(rng, 3, 2)
    assert np.array_equal(multiply(identity(3), x), x)


def test_adjoint_is_an_involution(rng):
    a = gen.ginibre(rng, 3)
    assert np.array_equal(adjoint(adjoint(a)), a)


def test_results_are_read_only(rng):
    out = add(gen.ginibre(rng, 2), gen.ginibre(rng, 2))
    with pytest.raises(ValueError):
        out[0, 0] = 1.0


@pytest.mark.parametrize(
    "op, left, right",
    [
        (add, np.eye(2), np.eye(3)),
        (multiply, np.ones((2, 3)), np.ones((2, 3))),
    ],
)
def test_shape_mismatch_is_rejected(op, left, right):
    with pytest.raises(ShapeError):
        op(left, right)


def test_as_matrix_rejects_bad_input():
    assert as_matrix(5).shape == (1, 1)
    with pytest.raises(ShapeError):
        as_matrix(np.zeros((2, 2, 2)))
    with pytest.raises(ParameterError):
        as_matrix([[np.nan]])


# ---------------------------------------------------------------------------
# Hermitian eigenvalues
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (np.diag([3.0, -4.0]), [3.0, -4.0]),
        (np.array([[0.0, 1.0], [1.0, 0.0]]), [1.0, -1.0]),
    ],
)
def test_hermitian_eig_examples(matrix, expected, tol):
    assert _close(eigenvalues(matrix, tol), expected)


@given(seed=seeds)
def test_hermitian_eig_matches_quadratic_oracle(seed):
    h = np.array(gen.hermitian(gen.stream(seed, "herm-oracle"), 2))
    got = eigenvalues(h)
    expected = _hermitian_oracle(h)
    assert _close(got, expected, scale=float(np.abs(expected).max()))


@given(seed=seeds, n=dims)
def test_hermitian_eig_reconstructs(seed, n):
    h = gen.hermitian(gen.stream(seed, "herm", n), n)
    eig = hermitian_eig(h)
    v = eig.eigenvectors
    assert np.all(np.diff(eig.eigenvalues) <= 0.0)
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=RECON_TOL)
    assert np.allclose(eig.reconstruct(), h, atol=RECON_TOL * max(1.0, np.abs(h).max()))


def test_hermitian_eig_rejects_non_hermitian(tol):
    with pytest.raises(HypothesisError) as excinfo:
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]), tol)
    assert excinfo.value.hypothesis == "hermitian"
    with pytest.raises(ShapeError):
        hermitian_eig(np.ones((2, 3)), tol)


def test_hermitian_eig_agrees_with_lapack(rng, lapack):
    h = gen.hermitian(rng, 6)
    assert _close(eigenvalues(h), eigenvalues(h, lapack), scale=operator_norm(h), atol=1e-12)


# ---------------------------------------------------------------------------
# Singular values
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (np.array([[0.0, 2.0], [0.0, 0.0]]), [2.0, 0.0]),
        (np.diag([3.0, -4.0]), [4.0, 3.0]),
    ],
)
def test_svd_examples(matrix, expected):
    assert _close(singular_values(matrix).values, expected)


@given(seed=seeds)
def test_svd_matches_quadratic_oracle(seed):
    a = np.array(gen.ginibre(gen.stream(seed, "svd-oracle"), 2))
    expected = _singular_oracle(a)
    assert _close(singular_values(a).values, expected, scale=expected[0])


@given(seed=seeds, rows=dims, cols=dims)
def test_svd_reconstructs_rectangular(seed, rows, cols):
    a = gen.ginibre(gen.stream(seed, "svd", rows, cols), rows, cols)
    d = svd(a)
    k = min(rows, cols)
    assert d.u.shape == (rows, k) and d.v.shape == (cols, k)
    assert d.singular_values.is_sorted()
    assert np.allclose(d.u.conj().T @ d.u, np.eye(k), atol=RECON_TOL)
    assert np.allclose(d.v.conj().T @ d.v, np.eye(k), atol=RECON_TOL)
    assert np.allclose(d.reconstruct(), a, atol=RECON_TOL * max(1.0, d.singular_values[0]))


def test_svd_of_rank_deficient_matrix_completes_the_basis():
    a = np.zeros((3, 2))
    a[0, 0] = 1.0
    d = svd(a)
    assert _close(d.singular_values.values, [1.0, 0.0])
    assert np.allclose(d.u.conj().T @ d.u, np.eye(2), atol=RECON_TOL)
    assert np.allclose(d.reconstruct(), a, atol=RECON_TOL)


@given(seed=seeds, n=dims)
def test_singular_values_are_unitarily_invariant(seed, n):
    rng = gen.stream(seed, "invariance", n)
    a = gen.ginibre(rng, n)
    u, v = gen.unitary(rng, n), gen.unitary(rng, n)
    s = singular_values(a).values
    assert _close(singular_values(adjoint(a)).values, s, scale=s[0], atol=1e-8)
    assert _close(singular_values(u @ a @ v).values, s, scale=s[0], atol=1e-8)


@given(seed=seeds, n=dims)
def test_normal_singular_values_are_eigenvalue_magnitudes(seed, n):
    a, d = gen.normal_with_spectrum(gen.stream(seed, "normal", n), n)
    expected = np.sort(np.abs(d))[::-1]
    assert _close(singular_values(a).values, expected, scale=expected[0], atol=1e-8)


def test_svd_agrees_with_lapack(rng, lapack):
    a = gen.ginibre(rng, 5, 3)
    assert _close(singular_values(a).values, singular_values(a, lapack).values, scale=operator_norm(a), atol=1e-12)


def test_spectrum_clips_rounding_noise_but_not_real_negatives():
    s = SingularSpectrum.from_values([1e-14 * -1, 2.0, 1.0])
    assert list(s) == [2.0, 1.0, 0.0]
    with pytest.raises(ContractError):
        SingularSpectrum.from_values([2.0, -0.5])
    assert np.array_equal(s.padded(5), [2.0, 1.0, 0.0, 0.0, 0.0])


# ---------------------------------------------------------------------------
# PSD, |A| and powers
# ---------------------------------------------------------------------------


def test_is_psd_examples(rng, tol):
    assert is_psd(np.eye(3), tol)
    report = is_psd(np.diag([1.0, -1.0]), tol)
    assert not report and report.min_eigenvalue == pytest.approx(-1.0)
    z = gen.ginibre(rng, 4)
    assert is_psd(z.conj().T @ z, tol)


def test_abs_op_examples(rng):
    assert np.allclose(abs_op(np.array([[0.0, 2.0], [0.0, 0.0]])), np.diag([0.0, 2.0]), atol=RECON_TOL)
    p = gen.psd(rng, 3)
    assert np.allclose(abs_op(p), p, atol=RECON_TOL)


@given(seed=seeds, n=dims)
def test_abs_op_squares_to_gram(seed, n):
    a = gen.ginibre(gen.stream(seed, "abs", n), n)
    m = abs_op(a)
    assert is_psd(m)
    assert np.allclose(m @ m, a.conj().T @ a, atol=RECON_TOL * max(1.0, operator_norm(a) ** 2))
    assert _close(singular_values(m).values, singular_values(a).values, atol=1e-8)


def test_abs_power_endpoints(rng):
    a = gen.ginibre(rng, 2, 3)
    assert np.array_equal(abs_power(a, 0.0), np.eye(3))
    with pytest.raises(DomainError):
        abs_power(np.diag([1.0, 0.0]), -1.0)


def test_power_op_examples(rng):
    assert np.allclose(power_op(np.diag([4.0, 9.0]), 0.5), np.diag([2.0, 3.0]), atol=RECON_TOL)
    p = gen.psd(rng, 3)
    assert np.allclose(power_op(p, 1.0), p, atol=RECON_TOL)
    cube_root = power_op(p, 1.0 / 3.0)
    assert np.allclose(cube_root @ cube_root @ cube_root, p, atol=RECON_TOL)


@pytest.mark.parametrize("alpha", [1.0 / 3.0, 0.5, 2.0])
@given(seed=seeds, n=st.integers(min_value=1, max_value=6))
def test_power_op_round_trip(alpha, seed, n):
    p = gen.positive_definite(gen.stream(seed, "pd", n), n)
    back = power_op(power_op(p, alpha), 1.0 / alpha)
    assert np.allclose(back, p, atol=RECON_TOL * max(1.0, operator_norm(p)))


def test_power_op_errors():
    with pytest.raises(HypothesisError):
        power_op(np.diag([1.0, -1.0]), 0.5)
    with pytest.raises(DomainError):
        power_op(np.diag([1.0, 0.0]), -0.5)
    with pytest.raises(ParameterError):
        power_op(np.eye(2), math.inf)
    assert np.allclose(power_op(np.zeros((2, 2)), 0.0), np.eye(2))


# ---------------------------------------------------------------------------
# Cartesian decomposition and predicates
# ---------------------------------------------------------------------------


def test_cartesian_of_i():
    re, im = cartesian([[1j]])
    assert re[0, 0] == 0 and im[0, 0] == 1


def test_cartesian_of_hermitian(rng):
    h = gen.hermitian(rng, 3)
    re, im = cartesian(h)
    assert np.allclose(re, h) and np.allclose(im, 0.0)


def test_cartesian_of_non_normal_example(cartesian_example):
    re, im = cartesian(cartesian_example)
    assert np.allclose(re, [[-1, (1 - 1j) / 2], [(1 + 1j) / 2, 1]])
    assert np.allclose(im, [[1, (1 - 1j) / 2], [(1 + 1j) / 2, 2]])
    assert np.allclose(re + 1j * im, cartesian_example, atol=1e-15)
    assert is_hermitian(re) and is_hermitian(im)


@given(seed=seeds, n=st.integers(min_value=2, max_value=6))
def test_normal_iff_cartesian_parts_commute(seed, n):
    rng = gen.stream(seed, "commute", n)
    for a, expected in ((gen.normal(rng, n), True), (gen.ginibre(rng, n), False)):
        re, im = cartesian(a)
        commutes = bool(np.max(np.abs(re @ im - im @ re)) <= 1e-9 * max(1.0, operator_norm(a) ** 2))
        assert is_normal(a) is expected
        assert commutes is expected


def test_cartesian_needs_square():
    with pytest.raises(ShapeError):
        cartesian(np.ones((2, 3)))


def test_operator_norm_examples(rng):
    assert operator_norm(np.eye(4)) == pytest.approx(1.0)
    assert operator_norm([[0.0, 2.0], [0.0, 0.0]]) == pytest.approx(2.0)
    assert operator_norm(gen.unitary(rng, 5)) == pytest.approx(1.0, abs=1e-10)


def test_unitary_and_commutator_predicates(rng):
    assert is_unitary(gen.unitary(rng, 4))
    assert not is_unitary(2.0 * np.eye(2))
    p, q = gen.commuting_pair(rng, 3)
    assert commutator_residual(p, q, p) <= 1e-9


@given(seed=seeds, n=dims)
def test_dilation_top_eigenvalues_are_singular_values(seed, n):
    x = gen.hermitian(gen.stream(seed, "dilation", n), n)
    s = singular_values(x).values
    assert _close(dilation_top_eigenvalues(x), s, scale=s[0], atol=1e-8)


def test_tolerances_are_frozen():
    tol = Tolerances()
    with pytest.raises(ValidationError):
        tol.psd_tol = 1.0


@given(seed=seeds, rows=dims, cols=dims)
def test_values_only_path_matches_the_full_svd(seed, rows, cols):
    a = gen.ginibre(gen.stream(seed, "values-only", rows, cols), rows, cols)
    assert np.array_equal(singular_values(a).values, svd(a).singular_values.values)


def test_normality_scale_needs_no_decomposition(rng):
    a = 1e4 * np.array(gen.normal(rng, 4))
    assert is_normal(a)
    assert not is_normal(a + 1e-1 * np.triu(np.ones((4, 4)), 1))


# ---------------------------------------------------------------------------
# Acceptance-size kernel sweeps
# ---------------------------------------------------------------------------


@pytest.mark.slow
def test_quadratic_oracles_over_500_seeds():
    for seed in range(500):
        rng = gen.stream(seed, "oracle-sweep")
        h = np.array(gen.hermitian(rng, 2))
        expected = _hermitian_oracle(h)
        assert _close(eigenvalues(h), expected, scale=float(np.abs(expected).max())), seed

        a = np.array(gen.ginibre(rng, 2))
        expected = _singular_oracle(a)
        assert _close(singular_values(a).values, expected, scale=expected[0]), seed


@pytest.mark.slow
def test_decomposition_invariants_over_1000_seeds(tol):
    for seed in range(1000):
        n = 1 + seed % 8
        rows, cols = n, 1 + (seed // 8) % 8
        rng = gen.stream(seed, "invariant-sweep", rows, cols)

        h = np.array(gen.hermitian(rng, n))
        eig = hermitian_eig(h, tol)
        v = eig.eigenvectors
        scale = 1.0 + operator_norm(h, tol)
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= tol.unitary_tol, seed
        assert np.max(np.abs(eig.reconstruct() - h)) <= tol.recon_tol * scale, seed

        a = np.array(gen.ginibre(rng, rows, cols))
        d = svd(a, tol)
        k = min(rows, cols)
        scale = 1.0 + d.singular_values[0]
        assert np.max(np.abs(d.u.conj().T @ d.u - np.eye(k))) <= tol.unitary_tol, seed
        assert np.max(np.abs(d.v.conj().T @ d.v - np.eye(k))) <= tol.unitary_tol, seed
        assert np.max(np.abs(d.reconstruct() - a)) <= tol.recon_tol * scale, seed
