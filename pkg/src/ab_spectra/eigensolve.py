"""Selected eigenpairs of symmetric tridiagonal matrices.

Eigenvalues come from bisection on the Sturm count (number of negative
pivots of the shifted LDL^T factorization); eigenvectors from inverse
iteration at a fixed shift. ``dense_brute_force`` is a LAPACK-backed oracle
that shares no code with the bisection path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
from scipy.linalg import solve_banded

from .errors import ConvergenceError, InvalidArgumentError

EPS = np.finfo(float).eps
DENSE_LIMIT = 200


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray
    residual: float = 0.0
    iterations: int = 0


@numba.njit(cache=True, nogil=True)
def _sturm_count(d, e, x, pivmin):
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, d.size):
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@numba.njit(cache=True, nogil=True)
def _bisect(d, e, j, lo, hi, tol, pivmin):
    # invariant: count(lo) < j <= count(hi)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if hi - lo <= tol * max(1.0, abs(mid)):
            break
        if _sturm_count(d, e, mid, pivmin) >= j:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _pivmin(T) -> float:
    return EPS * max(T.norm_inf(), np.finfo(float).tiny)


def gershgorin_bounds(T) -> tuple[float, float]:
    """Interval ``[lo, hi]`` containing the whole spectrum of ``T``."""
    radius = np.zeros(T.n)
    radius[:-1] += np.abs(T.e)
    radius[1:] += np.abs(T.e)
    return float(np.min(T.d - radius)), float(np.max(T.d + radius))


def sturm_count(T, x: float) -> int:
    """Number of eigenvalues of ``T`` strictly below ``x``."""
    if not np.isfinite(x):
        raise InvalidArgumentError("shift must be finite")
    return int(_sturm_count(T.d, T.e, float(x), _pivmin(T)))


def lowest_k(T, k: int, tol: float = 1e-10) -> list[float]:
    """The ``k`` smallest eigenvalues in ascending order, with multiplicity.

    Each value is located to ``tol * max(1, |lambda|)`` unless the bracket
    reaches floating-point resolution first.
    """
    if not 1 <= k <= T.n:
        raise InvalidArgumentError(f"k={k} must lie in [1, n={T.n}]")
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    lo, hi = gershgorin_bounds(T)
    pivmin = _pivmin(T)
    pad = 2.0 * pivmin + EPS * max(abs(lo), abs(hi)) + np.finfo(float).tiny
    lo, hi = lo - pad, hi + pad
    values = [float(_bisect(T.d, T.e, j, lo, hi, tol, pivmin)) for j in range(1, k + 1)]
    return values


def _residual(T, v, value) -> float:
    return float(np.linalg.norm(T.matvec(v) - value * v))


def _fix_sign(v: np.ndarray) -> np.ndarray:
    return -v if v[np.argmax(np.abs(v))] < 0 else v


def inverse_iteration(T, lambda_hat: float, max_iter: int = 50,
                      residual_tol: float | None = None) -> EigenPair:
    """Eigenvector for the eigenvalue nearest ``lambda_hat``.

    Starts from the normalized vector of ones. Stops once
    ``||T v - rho v|| <= residual_tol`` (default ``1e-8 * ||T||_inf``) where
    ``rho`` is the Rayleigh quotient, which is returned as the eigenvalue.
    """
    n = T.n
    scale = T.norm_inf()
    if residual_tol is None:
        residual_tol = 1e-8 * scale
    v = np.full(n, 1.0 / np.sqrt(n))
    if n == 1:
        return EigenPair(float(T.d[0]), np.ones(1), 0.0, 0)

    shift = float(lambda_hat)
    ab = np.zeros((3, n))
    ab[0, 1:] = T.e
    ab[1, :] = T.d - shift
    ab[2, :-1] = T.e
    residual = np.inf
    for it in range(1, max_iter + 1):
        try:
            y = solve_banded((1, 1), ab, v, check_finite=False)
        except np.linalg.LinAlgError:
            shift += 8 * EPS * max(scale, 1.0)
            ab[1, :] = T.d - shift
            continue
        norm = np.linalg.norm(y)
        if not np.isfinite(norm) or norm == 0.0:
            shift += 8 * EPS * max(scale, 1.0)
            ab[1, :] = T.d - shift
            continue
        v = y / norm
        rho = float(v @ T.matvec(v))
        residual = _residual(T, v, rho)
        if residual <= residual_tol:
            v = _fix_sign(v)
            return EigenPair(rho, v, residual, it)
    raise ConvergenceError(
        f"inverse iteration did not converge in {max_iter} steps (residual {residual:.3e})",
        residual=residual,
    )


def dense_brute_force(T) -> list[float]:
    """All eigenvalues via dense LAPACK ``syevd``; for verification only."""
    if T.n > DENSE_LIMIT:
        raise InvalidArgumentError(f"dense oracle refuses n={T.n} > {DENSE_LIMIT}")
    return [float(x) for x in np.linalg.eigvalsh(T.to_dense())]
