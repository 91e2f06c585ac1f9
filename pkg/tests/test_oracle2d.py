import numpy as np
import pytest

from ab_spectra.errors import InvalidArgumentError
from ab_spectra.oracle2d import (assemble_2d, compare_with_radial, gauge_multiplier,
                                 hermiticity_residual, lowest_eigenvalues_2d)
from ab_spectra.radial import assemble_tridiagonal
from ab_spectra.spectrum import ground_state, mode_ground_energy

R = 7.0


def random_grid(rng, T):
    return rng.normal(size=T.shape) + 1j * rng.normal(size=T.shape)


@pytest.mark.parametrize("kappa", [0.0, 0.3, 0.5, 1.7])
def test_hermitian(kappa, spec):
    T = assemble_2d(kappa, spec, 30, 16, R)
    rng = np.random.default_rng(1)
    assert hermiticity_residual(T, random_grid(rng, T), random_grid(rng, T)) <= 1e-13


def test_real_symmetric_at_zero(spec):
    T = assemble_2d(0.0, spec, 20, 8, R)
    rng = np.random.default_rng(2)
    u = rng.normal(size=T.shape)
    assert np.max(np.abs(T.apply(u).imag)) == 0.0


def test_theta_constant_restriction_at_zero(spec):
    T = assemble_2d(0.0, spec, 40, 16, R)
    radial = assemble_tridiagonal(0.0, 0, spec, T.mesh)
    g = np.linspace(1.0, 2.0, 40)
    u = np.repeat(g[:, None], 16, axis=1)
    out = T.apply(u)
    for j in range(16):
        np.testing.assert_allclose(out[:, j].real, radial.matvec(g), rtol=1e-13)


@pytest.mark.parametrize("kappa", [0.3, -0.2])
def test_gauge_shift(kappa, spec):
    T = assemble_2d(kappa, spec, 24, 16, R)
    T1 = assemble_2d(kappa + 1, spec, 24, 16, R)
    u = random_grid(np.random.default_rng(3), T)
    lhs = T1.apply(gauge_multiplier(T, u))
    rhs = gauge_multiplier(T, T.apply(u))
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * np.max(np.abs(rhs))


def test_flat_and_grid_apply_agree(spec):
    T = assemble_2d(0.3, spec, 20, 8, R)
    u = random_grid(np.random.default_rng(4), T)
    np.testing.assert_array_equal(T.apply(u.ravel()), T.apply(u).ravel())
    np.testing.assert_array_equal(T @ u, T.apply(u))


def test_argument_validation(spec):
    with pytest.raises(InvalidArgumentError):
        assemble_2d(0.0, spec, 4, 16, R)
    with pytest.raises(InvalidArgumentError):
        assemble_2d(0.0, spec, 20, 9, R)
    with pytest.raises(InvalidArgumentError):
        assemble_2d(0.0, spec, 20, 4, R)


def test_cg_solve(spec):
    T = assemble_2d(0.3, spec, 30, 16, R)
    b = random_grid(np.random.default_rng(5), T)
    x = T.solve(b, rtol=1e-12)
    assert np.linalg.norm(T.apply(x) - b) <= 1e-11 * np.linalg.norm(b)


def test_kappa_zero_matches_radial(spec, cfg):
    rep = compare_with_radial(0.0, spec, cfg, 100, 16, refine=False, R=R)
    assert rep.discrepancy <= 1e-8


def test_degenerate_pair_at_half(spec, cfg):
    T = assemble_2d(0.5, spec, 60, 16, R)
    lo, hi = lowest_eigenvalues_2d(T, k=2)
    assert abs(hi - lo) <= 1e-9 * lo
    lam = mode_ground_energy(0.5, 0, spec, T.mesh, 1e-13)
    # the discrete angular symbol 4 sin^2(x dtheta/2)/dtheta^2 lies below x^2
    assert lam * (1 - 1e-2) <= lo <= lam


@pytest.mark.slow
def test_theta_convergence(spec, cfg):
    T32 = assemble_2d(0.3, spec, 120, 32, R)
    ref = ground_state(0.3, spec, cfg, T32.mesh).lambda1
    errs = []
    for nt in (32, 64, 128):
        lam = lowest_eigenvalues_2d(assemble_2d(0.3, spec, 120, nt, R))[0]
        errs.append(abs(lam - ref) / ref)
    assert errs[0] > errs[1] > errs[2]
    # second order in dtheta
    assert 3.0 < errs[0] / errs[1] < 5.0
    assert 3.0 < errs[1] / errs[2] < 5.0
