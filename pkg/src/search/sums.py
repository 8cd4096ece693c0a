"""Sums S_i over the walk spectrum and the quantities derived from them.

S_i = (1/n) sum_{E_j != 0} E_j^{-i}. For large n, S_1 is the critical jumping
rate, and S_1/sqrt(S_2) and (pi/2)(sqrt(S_2)/S_1) sqrt(n) predict the success
probability and the time at which it is reached.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from walk.errors import CriticalThetaError, DomainError, InvalidParameterError
from walk.graph import HALF_PI, validate_vertex_count
from walk.spectrum import alpha

logger = logging.getLogger(__name__)

ZERO_TOL_PER_VERTEX = 1e-12
DEFAULT_GUARD_MARGIN = 0.02
DEFAULT_J_MAX = 99


@dataclass(frozen=True)
class CGSums:
    s1: float
    s2: float
    gamma_c: float
    p_star: Optional[float]
    t_star: Optional[float]
    near_critical: bool
    min_abs_eigenvalue: float


class CriticalTheta(NamedTuple):
    j: int
    theta_c_exact: float
    theta_c_approx: float


@dataclass(frozen=True)
class CriticalThetaTable:
    entries: tuple

    @property
    def exact(self):
        return np.array([entry.theta_c_exact for entry in self.entries])


def zero_tol(n):
    return ZERO_TOL_PER_VERTEX * n


def _nonzero_eigenvalues(spectrum):
    values = spectrum.eigenvalues[1:]
    tol = zero_tol(spectrum.n)
    hits = np.flatnonzero(np.abs(values) <= tol)
    if hits.size:
        j = int(hits[0]) + 1
        raise CriticalThetaError(
            f"E_{j} = {values[hits[0]]:.3e} is zero at theta={spectrum.theta:.12g} (n={spectrum.n}); "
            "S_i and the critical gamma diverge here"
        )
    return values


def sum_s(i, spectrum, with_parts=False):
    """(1/n) sum over nonzero E_j of E_j^{-i}.

    Args:
        i: power, 1 and 2 are the ones the search analysis uses.
        spectrum: WalkSpectrum.
        with_parts: also return the odd/even pair split from ``partial_sums``.

    Raises:
        CriticalThetaError: when some E_j with j != 0 is within zero_tol of 0.
    """
    if i < 1:
        raise InvalidParameterError(f"power i must be >= 1, got {i}")
    values = _nonzero_eigenvalues(spectrum)
    total = float(np.sum(1.0 / values ** i) / spectrum.n)
    if with_parts:
        return total, partial_sums(spectrum, i)
    return total


def partial_sums(spectrum, i=1):
    """Split S_i into pairs (j, n-j) with j <= (n-1)/2, grouped by the parity of j.

    Returns:
        dict: {"odd": float, "even": float}; away from the critical thetas each
        part of S_1 is close to 1/(2 n cos theta).
    """
    values = np.concatenate(([np.nan], _nonzero_eigenvalues(spectrum)))
    n = spectrum.n
    j = np.arange(1, (n - 1) // 2 + 1)
    pairs = (1.0 / values[j] ** i + 1.0 / values[n - j] ** i) / n
    return {
        "odd": float(np.sum(pairs[j % 2 == 1])),
        "even": float(np.sum(pairs[j % 2 == 0])),
    }


def gamma_c(spectrum):
    """Critical jumping rate, approximated by S_1."""
    return sum_s(1, spectrum)


def _check_asymptotic_theta(theta):
    theta = float(theta)
    if not 0.0 <= theta <= HALF_PI:
        raise DomainError(f"theta must lie in [0, pi/2), got {theta}")
    cos_theta = math.cos(theta)
    if HALF_PI - theta < 1e-12 or cos_theta <= 0.0:
        raise DomainError("asymptotic sums divide by cos(theta), which vanishes at theta = pi/2")
    return cos_theta


def s1_asymptotic(n, theta):
    """1/(n cos theta)."""
    return 1.0 / (n * _check_asymptotic_theta(theta))


def s2_asymptotic(n, theta):
    """1/(n cos theta)^2."""
    return s1_asymptotic(n, theta) ** 2


def predicted_success_and_runtime(spectrum):
    """Return (p_star, t_star) from the exact sums.

    Only meaningful while S_1 > 0; a non-positive S_1 raises DomainError.
    """
    s1 = sum_s(1, spectrum)
    s2 = sum_s(2, spectrum)
    if s1 <= 0:
        raise DomainError(f"S_1 = {s1:.6g} is not positive at theta={spectrum.theta:.6f}; no prediction exists")
    p_star = s1 / math.sqrt(s2)
    t_star = (math.pi / 2) * (math.sqrt(s2) / s1) * math.sqrt(spectrum.n)
    return p_star, t_star


def _default_j_max(n):
    return min(DEFAULT_J_MAX, n - 2)


@lru_cache(maxsize=64)
def critical_thetas(n, j_max=None):
    """Phases where an odd-index walk eigenvalue crosses zero.

    theta_c = atan(n / alpha_j) exactly, and atan(pi j / 2) for large n.
    """
    n = validate_vertex_count(n)
    if j_max is None:
        j_max = _default_j_max(n)
    if j_max % 2 == 0 or not 1 <= j_max <= n - 2:
        raise InvalidParameterError(f"j_max must be odd and in 1..{n - 2}, got {j_max}")

    entries = tuple(
        CriticalTheta(j, math.atan(n / alpha(j, n)), math.atan(math.pi * j / 2))
        for j in range(1, j_max + 1, 2)
    )
    return CriticalThetaTable(entries)


def is_near_critical(theta, n, margin=DEFAULT_GUARD_MARGIN, j_max=None):
    """True within ``margin`` of any tabulated theta_c, or beyond the last one minus margin.

    The tail rule is conservative when the table is complete. For n = 3 the
    table holds only j = 1, so every theta past theta_c1 - margin is flagged
    even though no other eigenvalue of -L changes sign there.
    """
    if margin <= 0:
        raise InvalidParameterError(f"guard margin must be positive, got {margin}")
    exact = critical_thetas(n, j_max).exact
    if theta > exact[-1] - margin:
        return True
    return bool(np.any(np.abs(theta - exact) < margin))


def cg_sums(spectrum, margin=DEFAULT_GUARD_MARGIN):
    """Assemble S_1, S_2, gamma_c and the predictions for one spectrum."""
    s1 = sum_s(1, spectrum)
    s2 = sum_s(2, spectrum)
    near = is_near_critical(spectrum.theta, spectrum.n, margin)
    p_star = t_star = None
    if near:
        logger.info("⚠️ theta=%.6f is within %.3g of a critical theta; predictions withheld", spectrum.theta, margin)
    elif s1 <= 0:
        logger.info("⚠️ S_1=%.6g is not positive at theta=%.6f; predictions withheld", s1, spectrum.theta)
    else:
        p_star, t_star = predicted_success_and_runtime(spectrum)
    return CGSums(
        s1=s1,
        s2=s2,
        gamma_c=s1,
        p_star=p_star,
        t_star=t_star,
        near_critical=near,
        min_abs_eigenvalue=float(np.min(np.abs(spectrum.eigenvalues[1:]))),
    )


GAMMA_RULES = ("s1", "asymptotic")


def resolve_gamma(rule, spectrum):
    """Jumping rate for a rule: "s1" (exact S_1), "asymptotic" (1/(n cos theta)) or a number."""
    if isinstance(rule, str):
        key = rule.strip().lower().replace("exact-", "")
        if key == "s1":
            return gamma_c(spectrum)
        if key == "asymptotic":
            return s1_asymptotic(spectrum.n, spectrum.theta)
        try:
            rule = float(key)
        except ValueError:
            raise InvalidParameterError(f"gamma must be one of {GAMMA_RULES} or a number, got {rule!r}") from None
    gamma = float(rule)
    if not math.isfinite(gamma):
        raise InvalidParameterError(f"gamma must be finite, got {rule!r}")
    return gamma
