import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh_tridiagonal

from ab_spectra.eigensolve import (dense_brute_force, gershgorin_bounds, inverse_iteration,
                                   lowest_k, sturm_count)
from ab_spectra.errors import InvalidArgumentError
from ab_spectra.radial import TridiagonalOperator, assemble_tridiagonal


def laplacian(n):
    return TridiagonalOperator.from_arrays(np.full(n, 2.0), np.full(n - 1, -1.0))


def random_tridiagonal(rng, n):
    return TridiagonalOperator.from_arrays(rng.normal(size=n), rng.normal(size=n - 1))


def test_lowest_k_laplacian():
    vals = lowest_k(laplacian(3), 3, 1e-14)
    np.testing.assert_allclose(vals, [2 - np.sqrt(2), 2, 2 + np.sqrt(2)], atol=1e-14)


def test_lowest_k_diagonal_with_multiplicity():
    T = TridiagonalOperator.from_arrays([1.0, 3.0, 2.0, 1.0], [0.0, 0.0, 0.0])
    assert lowest_k(T, 4, 1e-14) == pytest.approx([1.0, 1.0, 2.0, 3.0], abs=1e-13)


def test_lowest_k_one_by_one():
    assert lowest_k(TridiagonalOperator.from_arrays([5.0], []), 1) == [pytest.approx(5.0)]


def test_lowest_k_arguments():
    with pytest.raises(InvalidArgumentError):
        lowest_k(laplacian(3), 4)
    with pytest.raises(InvalidArgumentError):
        lowest_k(laplacian(3), 0)
    with pytest.raises(InvalidArgumentError):
        lowest_k(laplacian(3), 1, tol=0.0)


def test_sturm_count_examples():
    T = laplacian(3)
    assert sturm_count(T, 0.0) == 0
    assert sturm_count(T, 1.0) == 1
    assert sturm_count(T, 2.5) == 2
    assert sturm_count(T, 10.0) == 3


def test_sturm_count_zero_pivot_is_safe():
    # the first pivot is exactly zero at x = 2
    T = TridiagonalOperator.from_arrays([2.0, 2.0], [1.0])
    assert sturm_count(T, 2.0) == 1


def test_sturm_count_monotone():
    rng = np.random.default_rng(5)
    T = random_tridiagonal(rng, 40)
    lo, hi = gershgorin_bounds(T)
    counts = [sturm_count(T, x) for x in np.linspace(lo - 1, hi + 1, 400)]
    assert counts[0] == 0 and counts[-1] == 40
    assert all(b >= a for a, b in zip(counts, counts[1:]))


def test_gershgorin_bounds_contain_spectrum():
    rng = np.random.default_rng(6)
    T = random_tridiagonal(rng, 30)
    lo, hi = gershgorin_bounds(T)
    ev = dense_brute_force(T)
    assert lo <= ev[0] and ev[-1] <= hi


def test_random_matrices_against_dense_oracle():
    rng = np.random.default_rng(20240917)
    for _ in range(100):
        n = int(rng.integers(2, 51))
        T = random_tridiagonal(rng, n)
        got = np.array(lowest_k(T, n, 1e-14))
        ref = np.array(dense_brute_force(T))
        assert np.max(np.abs(got - ref)) / T.norm_inf() <= 1e-10


@settings(max_examples=60, deadline=None)
@given(n=st.integers(3, 40), seed=st.integers(0, 2**31 - 1))
def test_interlacing(n, seed):
    rng = np.random.default_rng(seed)
    T = random_tridiagonal(rng, n)
    lead = TridiagonalOperator.from_arrays(T.d[:-1], T.e[:-1])
    big = lowest_k(T, n, 1e-14)
    small = lowest_k(lead, n - 1, 1e-14)
    slack = 1e-12 * T.norm_inf()
    for i in range(n - 1):
        assert big[i] - slack <= small[i] <= big[i + 1] + slack


def test_dense_refuses_large():
    with pytest.raises(InvalidArgumentError):
        dense_brute_force(laplacian(201))
    assert len(dense_brute_force(laplacian(200))) == 200


def test_inverse_iteration_residual_and_sign():
    T = laplacian(50)
    lam = lowest_k(T, 1, 1e-14)[0]
    pair = inverse_iteration(T, lam)
    assert pair.residual <= 1e-8 * T.norm_inf()
    assert pair.value == pytest.approx(lam, abs=1e-12)
    assert np.linalg.norm(pair.vector) == pytest.approx(1.0)
    assert pair.vector[np.argmax(np.abs(pair.vector))] > 0
    exact = np.sin(np.pi * np.arange(1, 51) / 51)
    np.testing.assert_allclose(pair.vector, exact / np.linalg.norm(exact), atol=1e-8)


def test_inverse_iteration_at_exact_eigenvalue():
    # shift exactly equal to an eigenvalue: singular solve is nudged
    T = TridiagonalOperator.from_arrays([1.0, 2.0], [0.0])
    pair = inverse_iteration(T, 1.0)
    assert pair.value == pytest.approx(1.0)
    assert abs(pair.vector[0]) == pytest.approx(1.0)


def test_eigenvectors_orthogonal(spec, coarse_mesh):
    T = assemble_tridiagonal(0.3, 0, spec, coarse_mesh)
    vals = lowest_k(T, 3, 1e-13)
    vecs = [inverse_iteration(T, v, residual_tol=1e-10 * T.norm_inf()).vector for v in vals]
    gram = np.array([[u @ w for w in vecs] for u in vecs])
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-8)


def test_matches_lapack_on_radial_operator(spec, coarse_mesh):
    T = assemble_tridiagonal(0.2, 1, spec, coarse_mesh)
    ref = eigh_tridiagonal(T.d, T.e, eigvals_only=True, select="i", select_range=(0, 4))
    np.testing.assert_allclose(lowest_k(T, 5, 1e-13), ref, rtol=1e-12)


def test_positive_definite_flag(spec, coarse_mesh):
    assert assemble_tridiagonal(0.0, 0, spec, coarse_mesh).is_positive_definite()
    assert not TridiagonalOperator.from_arrays([1.0, -1.0], [0.0]).is_positive_definite()
