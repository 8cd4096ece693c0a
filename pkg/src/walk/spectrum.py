"""Closed-form eigenvalues of -L and a dense eigensolver oracle for them."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from walk.errors import DomainError, EigensolverError
from walk.graph import build_laplacian

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class WalkSpectrum:
    """Eigenvalues E_j of -L labelled by the circulant index j.

    alphas[0] is a placeholder (0.0) and is never read; eigenvalues[0] is 0.
    """

    n: int
    theta: float
    eigenvalues: np.ndarray
    alphas: np.ndarray

    def __post_init__(self):
        for name in ("eigenvalues", "alphas"):
            values = np.array(getattr(self, name), dtype=float)
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    def sorted_eigenvalues(self):
        return np.sort(self.eigenvalues)


def _check_index(j, n, lowest):
    if isinstance(j, bool) or not isinstance(j, (int, np.integer)):
        raise DomainError(f"index j must be an integer, got {j!r}")
    if not lowest <= j <= n - 1:
        raise DomainError(f"index j must be in {lowest}..{n - 1} for n={n}, got {j}")


def alpha(j, n):
    """cot(pi j/n) + csc(pi j/n) for odd j, cot(pi j/n) - csc(pi j/n) for even j."""
    _check_index(j, n, 1)
    x = math.pi * j / n
    cot, csc = 1.0 / math.tan(x), 1.0 / math.sin(x)
    return cot + csc if j % 2 else cot - csc


def alpha_from_sines(j, n):
    """alpha_j before the half-angle simplification."""
    _check_index(j, n, 1)
    u = 2 * math.pi * j / n
    return (math.sin(u) + 2 * math.sin(u * (n - 1) / 2)) / (1 - math.cos(u))


def root_of_unity_sum(j, n):
    """omega_j + omega_j^2 + ... + omega_j^{(n-1)/2}, summed term by term."""
    k = np.arange(1, (n - 1) // 2 + 1)
    return complex(np.sum(np.exp(2j * math.pi * j * k / n)))


def _alphas(n):
    j = np.arange(1, n)
    x = np.pi * j / n
    cot, csc = 1.0 / np.tan(x), 1.0 / np.sin(x)
    values = np.where(j % 2 == 1, cot + csc, cot - csc)
    return np.concatenate(([0.0], values))


def walk_eigenvalue(j, g):
    """E_j = n cos theta - alpha_j sin theta for j != 0, and E_0 = 0."""
    _check_index(j, g.n, 0)
    if j == 0:
        return 0.0
    return g.n * math.cos(g.theta) - alpha(j, g.n) * math.sin(g.theta)


def walk_spectrum(g):
    alphas = _alphas(g.n)
    eigenvalues = g.n * math.cos(g.theta) - alphas * math.sin(g.theta)
    eigenvalues[0] = 0.0
    return WalkSpectrum(n=g.n, theta=g.theta, eigenvalues=eigenvalues, alphas=alphas)


def negative_level_count(spectrum):
    """Number of walk eigenvalues below zero; grows by one at each critical theta."""
    return int(np.count_nonzero(spectrum.eigenvalues[1:] < 0))


def _diagnostics(matrix):
    finite = bool(np.all(np.isfinite(matrix)))
    asymmetry = float(np.max(np.abs(matrix - matrix.conj().T))) if finite else float("nan")
    norm = float(np.linalg.norm(matrix)) if finite else float("nan")
    return f"dimension={matrix.shape[0]}, frobenius_norm={norm:.6g}, hermitian_residual={asymmetry:.3g}, finite={finite}"


def hermitian_eigh(matrix, eigvals_only=False):
    """Dense Hermitian eigensolver with ascending eigenvalues.

    Raises:
        EigensolverError: when LAPACK fails or the input is not Hermitian.
    """
    matrix = np.asarray(getattr(matrix, "entries", matrix), dtype=complex)
    residual = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
    if not np.isfinite(residual) or residual > HERMITIAN_TOL * max(1.0, matrix.shape[0]):
        raise EigensolverError(f"matrix is not Hermitian: {_diagnostics(matrix)}")
    try:
        return linalg.eigh(matrix, eigvals_only=eigvals_only, check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise EigensolverError(f"Hermitian eigensolver failed ({e}): {_diagnostics(matrix)}") from e


def dense_walk_spectrum(g):
    """Eigenvalues of -L from a dense solve, sorted ascending."""
    values = hermitian_eigh(-build_laplacian(g).entries, eigvals_only=True)
    logger.debug("✓ Dense walk spectrum computed (n=%d, theta=%.6f)", g.n, g.theta)
    return np.sort(np.real(values))


def match_sorted(closed_form, dense):
    """Pair each closed-form eigenvalue with the dense value of the same rank.

    Returns:
        ndarray: dense value matched to each entry of ``closed_form`` in its
        original (j) order.
    """
    order = np.argsort(closed_form, kind="stable")
    matched = np.empty(len(closed_form))
    matched[order] = np.sort(dense)
    return matched
