"""Unitary time evolution under a fixed Hamiltonian.

States evolve through one eigendecomposition of H:
psi(t) = sum_a e^{-i E_a t} psi_a <psi_a|psi0>. The decomposition is built
once per Hamiltonian and shared read-only by every time sample.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from walk.errors import InvalidParameterError, InvalidStateError, NumericalError
from walk.graph import HermitianMatrix, basis_state, build_laplacian, equal_superposition
from walk.spectrum import hermitian_eigh
from search.hamiltonian import build_search_hamiltonian

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10
TRACE_SAMPLES = 2000
PEAK_FRACTION = 0.5


@dataclass(frozen=True, eq=False)
class EvolutionTrace:
    times: np.ndarray
    success: np.ndarray
    norm_drift: float

    def __post_init__(self):
        if len(self.times) != len(self.success):
            raise InvalidParameterError("times and success must have the same length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise InvalidParameterError("trace times must be strictly increasing")


@dataclass(frozen=True)
class PeakReport:
    t_peak: float
    p_peak: float
    # no interior local maximum; t_peak/p_peak are the last sample
    at_endpoint: bool = False


def _check_state(psi0, n):
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (n,):
        raise InvalidStateError(f"state must have shape ({n},), got {psi0.shape}")
    norm = float(np.linalg.norm(psi0))
    if not math.isfinite(norm) or abs(norm - 1.0) > NORM_TOL:
        raise InvalidStateError(f"state must be normalised, |psi| = {norm!r}")
    return psi0


class SpectralPropagator:
    """Eigendecomposition of a Hermitian H, reused for every evolution time."""

    def __init__(self, hamiltonian):
        self.energies, self.states = hermitian_eigh(hamiltonian)
        self.dimension = len(self.energies)

    def coefficients(self, psi0):
        return self.states.conj().T @ _check_state(psi0, self.dimension)

    def evolve(self, psi0, t):
        return self.states @ (np.exp(-1j * self.energies * float(t)) * self.coefficients(psi0))

    def evolve_many(self, psi0, times):
        """Columns are psi(t) for each entry of ``times``."""
        times = np.asarray(times, dtype=float)
        phases = np.exp(-1j * np.outer(self.energies, times))
        return self.states @ (phases * self.coefficients(psi0)[:, None])


def evolve(hamiltonian, psi0, t):
    """psi(t) for one time. Pass a SpectralPropagator to reuse its decomposition.

    Raises:
        InvalidStateError: psi0 has the wrong shape or is not normalised within 1e-10.
    """
    propagator = hamiltonian if isinstance(hamiltonian, SpectralPropagator) else SpectralPropagator(hamiltonian)
    return propagator.evolve(psi0, t)


def _trace_times(t_max, dt):
    if not (math.isfinite(t_max) and t_max > 0):
        raise InvalidParameterError(f"t_max must be positive, got {t_max!r}")
    if dt is None:
        dt = t_max / TRACE_SAMPLES
    if not (math.isfinite(dt) and dt > 0):
        raise InvalidParameterError(f"dt must be positive, got {dt!r}")
    steps = int(math.floor(t_max / dt + 1e-9))
    return np.arange(steps + 1) * dt


def success_trace(p, t_max, dt=None, propagator=None):
    """|<w|psi(t)>|^2 from psi(0) = |s> on the grid 0, dt, 2 dt, ... <= t_max.

    dt defaults to t_max / 2000.
    """
    times = _trace_times(float(t_max), dt)
    if propagator is None:
        propagator = SpectralPropagator(build_search_hamiltonian(p))
    psi = propagator.evolve_many(equal_superposition(p.graph.n), times)

    norms = np.sum(np.abs(psi) ** 2, axis=0)
    norm_drift = float(np.max(np.abs(norms - 1.0)))
    if norm_drift >= 1e-9:
        raise NumericalError(f"evolution lost unitarity: norm drift {norm_drift:.3e}")

    success = np.abs(psi[p.marked, :]) ** 2
    logger.debug("✓ Success trace computed (n=%d, %d samples, max p=%.6f)", p.graph.n, len(times), success.max())
    return EvolutionTrace(times=times, success=success, norm_drift=norm_drift)


def first_peak(trace):
    """First local maximum above half the global maximum, refined by a parabola through three samples."""
    s = np.asarray(trace.success, dtype=float)
    t = np.asarray(trace.times, dtype=float)
    if s.size == 0:
        raise InvalidParameterError("cannot locate a peak in an empty trace")

    threshold = PEAK_FRACTION * float(np.max(s))
    for k in range(1, s.size - 1):
        if s[k] >= s[k - 1] and s[k] > s[k + 1] and s[k] > threshold:
            break
    else:
        return PeakReport(t_peak=float(t[-1]), p_peak=float(s[-1]), at_endpoint=True)

    curvature = s[k - 1] - 2.0 * s[k] + s[k + 1]
    shift = 0.5 * (s[k - 1] - s[k + 1]) / curvature if curvature < 0 else 0.0
    h = t[k + 1] - t[k]
    return PeakReport(
        t_peak=float(t[k] + shift * h),
        p_peak=float(s[k] - 0.25 * (s[k - 1] - s[k + 1]) * shift),
    )


def _start_state(start, n):
    if isinstance(start, (int, np.integer)) and not isinstance(start, bool):
        return basis_state(n, int(start))
    return _check_state(start, n)


def time_reversal_asymmetry(g, start, gamma, t):
    """max_j |p_j(t) - p_j(-t)| under H_walk = -gamma L; zero whenever H is real."""
    if not t > 0:
        raise InvalidParameterError(f"t must be positive, got {t!r}")
    propagator = SpectralPropagator(HermitianMatrix(-float(gamma) * build_laplacian(g).entries))
    psi0 = _start_state(start, g.n)
    forward = np.abs(propagator.evolve(psi0, t)) ** 2
    backward = np.abs(propagator.evolve(psi0, -t)) ** 2
    return float(np.max(np.abs(forward - backward)))


def integrate_schrodinger(hamiltonian, psi0, t, rtol=1e-11, atol=1e-12):
    """Integrate i dpsi/dt = H psi directly, an oracle independent of any eigensolver."""
    matrix = np.asarray(getattr(hamiltonian, "entries", hamiltonian), dtype=complex)
    psi0 = _check_state(psi0, matrix.shape[0])
    if t == 0:
        return psi0.copy()

    solution = solve_ivp(
        lambda _, psi: -1j * (matrix @ psi),
        (0.0, float(t)),
        psi0,
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    if not solution.success:
        raise NumericalError(f"Schrodinger integration failed: {solution.message}")
    return solution.y[:, -1]


def vertex_probabilities(hamiltonian, psi0, times):
    """Rows are |<j|psi(t)>|^2 over vertices j, one row per time."""
    propagator = hamiltonian if isinstance(hamiltonian, SpectralPropagator) else SpectralPropagator(hamiltonian)
    return (np.abs(propagator.evolve_many(psi0, times)) ** 2).T
