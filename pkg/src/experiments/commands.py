"""Experiment commands. Each one computes a table, writes it as CSV and
returns a status dict {"success", "message", "path", ...}."""

import dataclasses
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from walk.errors import ChiralWalkError, CriticalThetaError, DomainError, InvalidParameterError
from walk.graph import ChiralCompleteGraph, circulant_laplacian, validate_vertex_count
from walk.spectrum import dense_walk_spectrum, match_sorted, walk_eigenvalue, walk_spectrum
from search.sums import (
    GAMMA_RULES,
    cg_sums,
    critical_thetas,
    gamma_c,
    is_near_critical,
    resolve_gamma,
    s1_asymptotic,
    s2_asymptotic,
    sum_s,
)
from search.hamiltonian import (
    SearchProblem,
    closest_to_zero_pair,
    diagonalize_search,
    energy_level_sweep,
    search_energies_secular,
    secular_curve,
    support_pair,
)
from search.dynamics import first_peak, success_trace
from experiments.output import write_csv
from experiments.presets import COLUMNS, DEFAULTS, FIGURES, SECULAR_WINDOW

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = DEFAULTS["n"]
    theta: float = DEFAULTS["theta"]
    gamma: Union[str, float] = DEFAULTS["gamma"]
    marked: int = DEFAULTS["marked"]
    t_max: float = DEFAULTS["t_max"]
    dt: Optional[float] = DEFAULTS["dt"]
    guard_margin: float = DEFAULTS["guard_margin"]
    k_levels: int = DEFAULTS["k_levels"]
    theta_grid: Tuple[float, float, int] = DEFAULTS["theta_grid"]
    gamma_grid: Optional[Tuple[float, float, int]] = None
    output_path: Optional[str] = None
    output_dir: str = "results"
    threads: int = 1

    def __post_init__(self):
        validate_vertex_count(self.n)
        if not math.isfinite(self.theta):
            raise InvalidParameterError(f"theta must be finite, got {self.theta!r}")
        if not 0 <= self.marked < self.n:
            raise InvalidParameterError(f"marked vertex must be in 0..{self.n - 1}, got {self.marked}")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise InvalidParameterError(f"t_max must be positive, got {self.t_max!r}")
        if self.dt is not None and not (math.isfinite(self.dt) and self.dt > 0):
            raise InvalidParameterError(f"dt must be positive, got {self.dt!r}")
        if not self.guard_margin > 0:
            raise InvalidParameterError(f"guard margin must be positive, got {self.guard_margin!r}")
        if self.k_levels < 1:
            raise InvalidParameterError(f"k_levels must be >= 1, got {self.k_levels}")
        if self.threads < 1:
            raise InvalidParameterError(f"threads must be >= 1, got {self.threads}")

    def echo(self):
        """Every field that affects a command's output, for the CSV header."""
        return {
            field.name: getattr(self, field.name)
            for field in dataclasses.fields(self)
            if field.name not in ("output_path", "output_dir", "threads")
        }


def parse_grid(text):
    """Parse "start:stop:count" into (start, stop, count)."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise InvalidParameterError(f"grid must look like start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InvalidParameterError(f"grid must look like start:stop:count, got {text!r}") from None
    if not (math.isfinite(start) and math.isfinite(stop)) or count < 1:
        raise InvalidParameterError(f"grid needs finite bounds and count >= 1, got {text!r}")
    return start, stop, count


def _grid(spec):
    start, stop, count = spec
    return np.linspace(start, stop, count)


def _is_rule(gamma):
    return isinstance(gamma, str) and gamma.strip().lower().replace("exact-", "") in GAMMA_RULES


def _canonical(config):
    graph, params = ChiralCompleteGraph.from_raw(config.n, config.theta)
    if graph.theta != config.theta:
        logger.warning(
            "⚠️ theta=%.6f reduced to %.6f (arrows reversed: %s, gamma sign %+d)",
            config.theta, graph.theta, params.arrows_reversed, params.gamma_sign,
        )
    return graph, params


def _gamma(config, spectrum, params):
    """Rules resolve on the canonical spectrum; explicit rates pick up the canonical sign."""
    gamma = resolve_gamma(config.gamma, spectrum)
    if not _is_rule(config.gamma):
        gamma *= params.gamma_sign
    return gamma


def _output_path(config, command):
    return config.output_path or os.path.join(config.output_dir, f"{command}.csv")


def _metadata(command, config):
    return {"command": command, **config.echo()}


def _finish(command, config, frame, footer=None, message=None, **extra):
    path = write_csv(frame, _output_path(config, command), _metadata(command, config), footer)
    return {
        "success": True,
        "message": message or f"{command}: wrote {len(frame)} rows",
        "path": path,
        "data": frame,
        "footer": footer,
        **extra,
    }


def _map(config, fn, items):
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        return list(pool.map(fn, items))


def cmd_spectrum(config):
    graph, _ = _canonical(config)
    spectrum = walk_spectrum(graph)
    dense = dense_walk_spectrum(graph)
    alphas = spectrum.alphas.copy()
    alphas[0] = np.nan
    frame = pd.DataFrame({
        "j": np.arange(graph.n),
        "alpha_j": alphas,
        "E_closed": spectrum.eigenvalues,
        "E_dense_sorted_match": match_sorted(spectrum.eigenvalues, dense),
    }, columns=COLUMNS["spectrum"])
    return _finish("spectrum", config, frame)


def _sums_row(n, theta, margin):
    spectrum = walk_spectrum(ChiralCompleteGraph(n, theta))
    try:
        s1, s2 = sum_s(1, spectrum), sum_s(2, spectrum)
    except CriticalThetaError:
        s1 = s2 = np.nan
    try:
        s1_approx, s2_approx = s1_asymptotic(n, theta), s2_asymptotic(n, theta)
    except DomainError:
        s1_approx = s2_approx = np.nan
    return [theta, s1, s1_approx, s2, s2_approx, is_near_critical(theta, n, margin)]


def cmd_sums(config):
    thetas = _grid(config.theta_grid)
    rows = _map(config, lambda theta: _sums_row(config.n, float(theta), config.guard_margin), thetas)
    frame = pd.DataFrame(rows, columns=COLUMNS["sums"])
    flagged = int(frame["near_critical"].sum())
    return _finish("sums", config, frame, message=f"sums: {len(frame)} theta values, {flagged} near a critical theta")


def cmd_critical_thetas(config):
    rows = []
    for entry in critical_thetas(config.n).entries:
        residual = abs(walk_eigenvalue(entry.j, ChiralCompleteGraph(config.n, entry.theta_c_exact)))
        rows.append([entry.j, entry.theta_c_exact, entry.theta_c_approx, residual])
    frame = pd.DataFrame(rows, columns=COLUMNS["critical-thetas"])
    return _finish("critical-thetas", config, frame)


def cmd_overlaps(config):
    graph, _ = _canonical(config)
    spectrum = walk_spectrum(graph)
    s1 = gamma_c(spectrum)
    n = graph.n
    k = min(config.k_levels, n)

    if config.gamma_grid is not None:
        gamma_n_values = _grid(config.gamma_grid)
    else:
        gamma_n_values = np.linspace(0.0, DEFAULTS["gamma_grid_span"] * s1 * n, DEFAULTS["gamma_points"])

    def overlap_rows(gamma_n):
        spec = diagonalize_search(SearchProblem(graph, gamma_n / n, config.marked))
        return [
            [gamma_n, a, spec.overlaps_s[a], spec.overlaps_w[a], spec.energies[a]]
            for a in range(k)
        ]

    rows = [row for block in _map(config, overlap_rows, gamma_n_values) for row in block]
    frame = pd.DataFrame(rows, columns=COLUMNS["overlaps"])

    at_s1 = diagonalize_search(SearchProblem(graph, s1, config.marked))
    pair = support_pair(at_s1)
    nearest = closest_to_zero_pair(at_s1)
    footer = {
        "gamma_times_n": s1 * n,
        "support_lower": pair.lower_index,
        "support_upper": pair.upper_index,
        "support_gap": pair.gap,
        "closest_lower": nearest["indices"][0],
        "closest_upper": nearest["indices"][1],
        "closest_gap": nearest["gap"],
    }
    return _finish(
        "overlaps", config, frame, footer,
        message=f"overlaps: support pair ({pair.lower_index}, {pair.upper_index}) at gamma = S1",
        support_pair=pair,
    )


def cmd_levels(config):
    k = min(config.k_levels, config.n)
    sweep = energy_level_sweep(
        config.n,
        _grid(config.theta_grid),
        k=k,
        gamma_rule=config.gamma,
        margin=config.guard_margin,
        workers=config.threads,
    )
    levels = [f"E{a}" for a in range(k)]
    frame = sweep[["theta", *levels, "gamma", "near_critical"]]
    return _finish("levels", config, frame)


def cmd_evolve(config):
    graph, params = _canonical(config)
    spectrum = walk_spectrum(graph)
    gamma = _gamma(config, spectrum, params)
    trace = success_trace(SearchProblem(graph, gamma, config.marked), config.t_max, config.dt)
    peak = first_peak(trace)
    if peak.at_endpoint:
        logger.warning("⚠️ No interior peak below t_max=%.6g; reporting the last sample", config.t_max)

    try:
        sums = cg_sums(spectrum, config.guard_margin)
        predicted_t, predicted_p = sums.t_star, sums.p_star
    except CriticalThetaError:
        predicted_t = predicted_p = None

    frame = pd.DataFrame({"t": trace.times, "p": trace.success}, columns=COLUMNS["evolve"])
    footer = {
        "t_peak": peak.t_peak,
        "p_peak": peak.p_peak,
        "predicted_t_star": predicted_t,
        "predicted_p_star": predicted_p,
    }
    return _finish(
        "evolve", config, frame, footer,
        message=f"evolve: peak p={peak.p_peak:.6f} at t={peak.t_peak:.6f}",
        peak=peak,
        trace=trace,
    )


def cmd_secular(config):
    graph, params = _canonical(config)
    spectrum = walk_spectrum(graph)
    gamma = _gamma(config, spectrum, params)
    details = search_energies_secular(spectrum, gamma, return_details=True)

    points = np.concatenate((details["poles"], details["energies"]))
    margin = SECULAR_WINDOW["margin"]
    energies = np.linspace(points.min() - margin, points.max() + margin, SECULAR_WINDOW["points"])
    frame = pd.DataFrame({"E": energies, "F": secular_curve(spectrum, gamma, energies)}, columns=COLUMNS["secular"])
    footer = {f"E_root_{a}": float(root) for a, root in enumerate(details["energies"])}
    return _finish("secular", config, frame, footer, energies=details["energies"])


def cmd_laplacian(config):
    laplacian = circulant_laplacian(config.n, config.theta)
    rows, cols = np.indices(laplacian.shape)
    frame = pd.DataFrame({
        "row": rows.ravel(),
        "col": cols.ravel(),
        "re": laplacian.real.ravel(),
        "im": laplacian.imag.ravel(),
    }, columns=COLUMNS["laplacian"])
    return _finish("laplacian", config, frame)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sums": cmd_sums,
    "critical-thetas": cmd_critical_thetas,
    "overlaps": cmd_overlaps,
    "levels": cmd_levels,
    "evolve": cmd_evolve,
    "secular": cmd_secular,
    "laplacian": cmd_laplacian,
}


def cmd_reproduce(figure_id, config):
    """Run the command behind a figure with that figure's parameters.

    The CSV is the one the bound command writes for the same parameters;
    the default file name is fig<id>.csv.
    """
    preset = FIGURES.get(str(figure_id))
    if preset is None:
        raise InvalidParameterError(f"unknown figure id {figure_id!r}; choose from {', '.join(FIGURES)}")
    figure_config = dataclasses.replace(
        config,
        **preset["params"],
        output_path=config.output_path or os.path.join(config.output_dir, f"fig{figure_id}.csv"),
    )
    logger.info("Reproducing figure %s: %s", figure_id, preset["description"])
    result = COMMANDS[preset["command"]](figure_config)
    result["figure"] = str(figure_id)
    return result


def run_command(name, config, figure_id=None):
    """Run one command and turn library errors into a failed status dict."""
    try:
        if name == "reproduce":
            result = cmd_reproduce(figure_id, config)
        elif name in COMMANDS:
            result = COMMANDS[name](config)
        else:
            raise InvalidParameterError(f"unknown command {name!r}")
    except ChiralWalkError as e:
        logger.error("❌ %s failed: %s", name, e)
        return {"success": False, "message": str(e), "exit_code": e.exit_code}
    result["exit_code"] = 0
    return result
