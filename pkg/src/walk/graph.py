"""Chiral walk on the modified complete graph.

Vertices sit on a circle with indices 0..n-1. Each vertex carries a phase
e^{i theta} edge to the (n-1)/2 vertices ahead of it (increasing index mod n)
and receives the conjugate phase from the (n-1)/2 vertices behind it, so the
Laplacian is a circulant Hermitian matrix and every vertex looks the same.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import circulant

from walk.errors import InvalidParameterError

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2
TWO_PI = 2 * math.pi


def validate_vertex_count(n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidParameterError(f"n must be an integer, got {n!r}")
    if n < 3 or n % 2 == 0:
        raise InvalidParameterError(f"n must be odd and >= 3, got {n}")
    return int(n)


@dataclass(frozen=True)
class CanonicalWalkParams:
    theta_canonical: float
    arrows_reversed: bool
    gamma_sign: int


@dataclass(frozen=True)
class ChiralCompleteGraph:
    """Graph parameters after canonicalization: odd n >= 3, theta in [0, pi/2]."""

    n: int
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "n", validate_vertex_count(self.n))
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise InvalidParameterError(f"theta must be finite, got {self.theta!r}")
        if not 0.0 <= theta <= HALF_PI:
            raise InvalidParameterError(
                f"theta must lie in [0, pi/2], got {theta}; use ChiralCompleteGraph.from_raw"
            )
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_raw(cls, n, theta_raw):
        """Build the graph for any real phase.

        Returns:
            tuple: (graph, CanonicalWalkParams) where the params say how the
            arrows and the sign of gamma changed during the reduction.
        """
        params = canonicalize_theta(theta_raw)
        return cls(n, params.theta_canonical), params


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Dense complex matrix, Hermitian by construction. Entries are read-only."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidParameterError(f"expected a square matrix, got shape {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dimension(self):
        return self.entries.shape[0]


def canonicalize_theta(theta_raw):
    """Reduce any real phase to an equivalent one in [0, pi/2].

    The phase is first taken modulo 2 pi. A value r in (pi, 2 pi) is replaced by
    2 pi - r with the arrows reversed, since e^{+-ir} = e^{-+i(2 pi - r)}. A value
    in (pi/2, pi] is replaced by pi - r with the arrows reversed and the sign of
    gamma flipped, since e^{+-ir} = -e^{-+i(pi - r)}.
    """
    theta_raw = float(theta_raw)
    if not math.isfinite(theta_raw):
        raise InvalidParameterError(f"theta must be finite, got {theta_raw!r}")

    reduced = theta_raw % TWO_PI
    reversed_arrows = False
    gamma_sign = 1

    if reduced > math.pi:
        reduced = TWO_PI - reduced
        reversed_arrows = not reversed_arrows
    if reduced > HALF_PI:
        reduced = math.pi - reduced
        reversed_arrows = not reversed_arrows
        gamma_sign = -1

    return CanonicalWalkParams(
        theta_canonical=min(max(reduced, 0.0), HALF_PI),
        arrows_reversed=reversed_arrows,
        gamma_sign=gamma_sign,
    )


def _first_column(n, theta):
    half = (n - 1) // 2
    forward = complex(math.cos(theta), math.sin(theta))
    column = np.empty(n, dtype=complex)
    column[0] = -(n - 1) * math.cos(theta)
    column[1:half + 1] = forward
    # exact conjugates keep the assembled matrix exactly Hermitian
    column[half + 1:] = forward.conjugate()
    return column


def laplacian_first_column(g):
    """First column of L: [-(n-1) cos theta, (n-1)/2 x e^{i theta}, (n-1)/2 x e^{-i theta}]."""
    return _first_column(g.n, g.theta)


def circulant_laplacian(n, theta):
    """Circulant Laplacian for any real theta, without canonicalization."""
    n = validate_vertex_count(n)
    theta = float(theta)
    if not math.isfinite(theta):
        raise InvalidParameterError(f"theta must be finite, got {theta!r}")
    return circulant(_first_column(n, theta))


def build_laplacian(g):
    """Dense Laplacian whose column k is the first column shifted down by k."""
    logger.debug("Building chiral Laplacian n=%d theta=%.6f", g.n, g.theta)
    return HermitianMatrix(circulant(laplacian_first_column(g)))


def equivalent_laplacian(n, theta_raw):
    """Laplacian for a raw phase rebuilt from its canonical form.

    The result is gamma_sign * L(theta_canonical), transposed when the arrows
    were reversed; it equals circulant_laplacian(n, theta_raw).
    """
    graph, params = ChiralCompleteGraph.from_raw(n, theta_raw)
    laplacian = build_laplacian(graph).entries
    if params.arrows_reversed:
        laplacian = laplacian.T
    return params.gamma_sign * laplacian


def equal_superposition(n):
    """|s> = (1/sqrt n) sum_i |i>."""
    return np.full(n, 1.0 / math.sqrt(n), dtype=complex)


def basis_state(n, k):
    if not 0 <= k < n:
        raise InvalidParameterError(f"vertex index must be in 0..{n - 1}, got {k}")
    state = np.zeros(n, dtype=complex)
    state[k] = 1.0
    return state
