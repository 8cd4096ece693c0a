"""Search Hamiltonian H = -gamma L - |w><w| and its spectrum.

The spectrum comes from two independent paths: a dense Hermitian
eigendecomposition, and the roots of the secular equation F(E) = 1 where
F(E) = (1/n) sum_j 1/(gamma E_j - E) over the closed-form walk eigenvalues.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import optimize

from walk.errors import BracketingError, InvalidParameterError, NumericalError, PoleEvaluationError
from walk.graph import ChiralCompleteGraph, HermitianMatrix, build_laplacian, equal_superposition
from walk.spectrum import hermitian_eigh, walk_spectrum
from search.sums import DEFAULT_GUARD_MARGIN, is_near_critical, resolve_gamma

logger = logging.getLogger(__name__)

POLE_CLUSTER_TOL = 1e-9
POLE_TOL = 1e-13
ROOT_XTOL = 1e-12
BRACKET_DELTA = 1e-7
BRACKET_RETRIES = 12
MAX_EXPANSIONS = 200


@dataclass(frozen=True)
class SearchProblem:
    graph: ChiralCompleteGraph
    gamma: float
    marked: int = 0

    def __post_init__(self):
        gamma = float(self.gamma)
        if not math.isfinite(gamma):
            raise InvalidParameterError(f"gamma must be finite, got {self.gamma!r}")
        object.__setattr__(self, "gamma", gamma)
        if isinstance(self.marked, bool) or not 0 <= self.marked < self.graph.n:
            raise InvalidParameterError(f"marked vertex must be in 0..{self.graph.n - 1}, got {self.marked!r}")
        object.__setattr__(self, "marked", int(self.marked))


@dataclass(frozen=True, eq=False)
class SearchSpectrum:
    """Eigenpairs of H sorted by energy; states[:, a] is psi_a."""

    energies: np.ndarray
    states: np.ndarray
    overlaps_s: np.ndarray
    overlaps_w: np.ndarray


@dataclass(frozen=True)
class SupportPair:
    lower_index: int
    upper_index: int
    gap: float
    combined_support: float


def build_search_hamiltonian(p):
    hamiltonian = -p.gamma * build_laplacian(p.graph).entries
    hamiltonian[p.marked, p.marked] -= 1.0
    return HermitianMatrix(hamiltonian)


def _fix_phases(states):
    """Scale each column so its largest-magnitude entry is real and positive."""
    peaks = states[np.argmax(np.abs(states), axis=0), np.arange(states.shape[1])]
    return states * (np.abs(peaks) / peaks)


def diagonalize_search(p):
    energies, states = hermitian_eigh(build_search_hamiltonian(p))
    states = _fix_phases(states)
    s = equal_superposition(p.graph.n)
    overlaps_s = np.abs(s.conj() @ states) ** 2
    overlaps_w = np.abs(states[p.marked, :]) ** 2
    logger.debug("✓ Search Hamiltonian diagonalized (n=%d, theta=%.6f, gamma=%.6g)", p.graph.n, p.graph.theta, p.gamma)
    return SearchSpectrum(energies=energies, states=states, overlaps_s=overlaps_s, overlaps_w=overlaps_w)


def _poles(spectrum, gamma):
    return gamma * spectrum.eigenvalues


def secular_function(energy, spectrum, gamma, pole_tol=POLE_TOL):
    """F(E) = (1/n) sum_j 1/(gamma E_j - E), including the j = 0 pole at 0."""
    poles = _poles(spectrum, gamma)
    scale = max(1.0, float(np.max(np.abs(poles))))
    distance = np.abs(poles - energy)
    nearest = int(np.argmin(distance))
    if distance[nearest] <= pole_tol * scale:
        raise PoleEvaluationError(
            f"F(E) evaluated at E={energy!r}, on the pole gamma*E_{nearest}={poles[nearest]!r}"
        )
    return float(np.mean(1.0 / (poles - energy)))


def secular_curve(spectrum, gamma, energies, pole_tol=POLE_TOL):
    """F(E) on a grid; samples that land on a pole are NaN."""
    poles = _poles(spectrum, gamma)
    energies = np.asarray(energies, dtype=float)
    scale = max(1.0, float(np.max(np.abs(poles))))
    differences = poles[None, :] - energies[:, None]
    on_pole = np.any(np.abs(differences) <= pole_tol * scale, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.mean(1.0 / differences, axis=1)
    values[on_pole] = np.nan
    return values


def _cluster_poles(poles):
    ordered = np.sort(poles)
    tol = POLE_CLUSTER_TOL * max(float(np.max(np.abs(ordered))), np.finfo(float).tiny)
    starts = np.concatenate(([True], np.diff(ordered) > tol))
    first = np.flatnonzero(starts)
    multiplicities = np.diff(np.append(first, len(ordered)))
    values = np.add.reduceat(ordered, first) / multiplicities
    return values, multiplicities


def _bracket_interval(excess, left, right):
    width = right - left
    delta = BRACKET_DELTA * width
    for _ in range(BRACKET_RETRIES + 1):
        a, b = left + delta, right - delta
        fa, fb = excess(a), excess(b)
        if fa < 0 < fb:
            return a, b
        delta /= 10.0
    raise BracketingError(
        f"no sign change of F(E) - 1 in ({left!r}, {right!r}): "
        f"F-1 = {fa:.3e} at {a!r}, {fb:.3e} at {b!r}"
    )


def _bracket_below(excess, lowest, upper_width):
    delta = BRACKET_DELTA * upper_width
    for _ in range(BRACKET_RETRIES + 1):
        b = lowest - delta
        if excess(b) > 0:
            break
        delta /= 10.0
    else:
        raise BracketingError(f"F(E) - 1 stays negative just below the lowest pole {lowest!r}")
    offset = 1.0
    for _ in range(MAX_EXPANSIONS):
        a = lowest - offset
        if excess(a) < 0:
            return a, b
        offset *= 2.0
    raise BracketingError(f"F(E) - 1 never turns negative below the lowest pole {lowest!r}")


def search_energies_secular(spectrum, gamma, return_details=False):
    """All n eigenvalues of H from the secular equation F(E) = 1.

    One root lies below the lowest distinct pole and one between each pair of
    adjacent distinct poles; a pole of multiplicity m is itself an eigenvalue
    m - 1 times, since those walk eigenvectors are orthogonal to |w>.

    Returns:
        ndarray of energies sorted ascending, or with ``return_details`` a dict
        with "energies", "roots", "poles" and "multiplicities".
    """
    gamma = float(gamma)
    if gamma == 0.0 or not math.isfinite(gamma):
        raise InvalidParameterError(f"gamma must be finite and nonzero, got {gamma!r}")

    poles, multiplicities = _cluster_poles(_poles(spectrum, gamma))
    weights = multiplicities / spectrum.n

    def excess(energy):
        return float(np.sum(weights / (poles - energy))) - 1.0

    upper_width = poles[1] - poles[0] if len(poles) > 1 else 1.0
    brackets = [_bracket_below(excess, poles[0], upper_width)]
    brackets += [_bracket_interval(excess, left, right) for left, right in zip(poles[:-1], poles[1:])]

    roots = []
    for a, b in brackets:
        try:
            roots.append(optimize.bisect(excess, a, b, xtol=ROOT_XTOL, maxiter=400))
        except (RuntimeError, ValueError) as e:
            raise BracketingError(f"bisection failed on ({a!r}, {b!r}): {e}") from e
    roots = np.array(roots)

    degenerate = np.repeat(poles, multiplicities - 1)
    energies = np.sort(np.concatenate((roots, degenerate)))
    if len(energies) != spectrum.n:
        raise NumericalError(f"secular solve produced {len(energies)} energies, expected {spectrum.n}")
    if return_details:
        return {"energies": energies, "roots": roots, "poles": poles, "multiplicities": multiplicities}
    return energies


def support_pair(spec):
    """Adjacent eigenstates carrying the most |s> and |w> weight."""
    mass = spec.overlaps_s + spec.overlaps_w
    pair_mass = mass[:-1] + mass[1:]
    a = int(np.argmax(pair_mass))
    return SupportPair(
        lower_index=a,
        upper_index=a + 1,
        gap=float(spec.energies[a + 1] - spec.energies[a]),
        combined_support=float(pair_mass[a]),
    )


def closest_to_zero_pair(spec):
    """The two eigenenergies nearest zero, the levels the perturbative method follows."""
    lower, upper = sorted(int(a) for a in np.argsort(np.abs(spec.energies), kind="stable")[:2])
    return {
        "indices": (lower, upper),
        "gap": float(spec.energies[upper] - spec.energies[lower]),
    }


def _lowest_levels(n, theta, k, gamma_rule, margin):
    graph = ChiralCompleteGraph(n, theta)
    gamma = resolve_gamma(gamma_rule, walk_spectrum(graph))
    hamiltonian = build_search_hamiltonian(SearchProblem(graph, gamma))
    energies = hermitian_eigh(hamiltonian, eigvals_only=True)[:k]
    return [theta, gamma, is_near_critical(theta, n, margin), *energies]


def energy_level_sweep(n, theta_grid, k=6, gamma_rule="s1", margin=DEFAULT_GUARD_MARGIN, workers=1):
    """The k lowest energies of H at each theta of the grid.

    Returns:
        DataFrame with columns theta, gamma, near_critical, E0..E{k-1}, one row
        per grid point in grid order.

    Raises:
        CriticalThetaError: when gamma_rule is "s1" and a grid point sits on a theta_c.
    """
    if not 1 <= k <= n:
        raise InvalidParameterError(f"k must be in 1..{n}, got {k}")
    thetas = [float(theta) for theta in theta_grid]

    def level_row(theta):
        return _lowest_levels(n, theta, k, gamma_rule, margin)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(level_row, thetas))

    logger.info("✓ Energy level sweep complete (n=%d, %d grid points, k=%d)", n, len(thetas), k)
    return pd.DataFrame(rows, columns=["theta", "gamma", "near_critical", *[f"E{a}" for a in range(k)]])
