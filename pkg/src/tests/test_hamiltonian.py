import math

import numpy as np
import pandas as pd
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from walk.errors import InvalidParameterError, PoleEvaluationError
from walk.graph import ChiralCompleteGraph
from walk.spectrum import dense_walk_spectrum, hermitian_eigh, walk_spectrum
from search.sums import gamma_c, is_near_critical
from search.hamiltonian import (
    SearchProblem,
    build_search_hamiltonian,
    closest_to_zero_pair,
    diagonalize_search,
    energy_level_sweep,
    search_energies_secular,
    secular_curve,
    secular_function,
    support_pair,
)

N = 1023


def problem(n, theta, gamma, marked=0):
    return SearchProblem(ChiralCompleteGraph(n, theta), gamma, marked)


def test_hamiltonian_is_hermitian_with_oracle_on_marked_vertex():
    p = problem(9, 0.6, 0.3, marked=4)
    entries = build_search_hamiltonian(p).entries
    assert np.array_equal(entries, entries.conj().T)
    walk_only = build_search_hamiltonian(problem(9, 0.6, 0.3, marked=0)).entries
    assert entries[4, 4] - walk_only[4, 4] == pytest.approx(-1.0)


@pytest.mark.parametrize("n", [101, pytest.param(1023, marks=pytest.mark.slow)])
def test_unphased_energies(n):
    spec = diagonalize_search(problem(n, 0.0, 1.0 / n))
    eps = 1 / math.sqrt(n)
    assert spec.energies[0] == pytest.approx(-eps, abs=1e-10)
    assert spec.energies[1] == pytest.approx(eps, abs=1e-10)
    np.testing.assert_allclose(spec.energies[2:], 1.0, atol=1e-10)


@pytest.mark.parametrize("theta, gamma", [(0.0, 1 / 101), (0.6, 0.02), (1.3, 0.05)])
def test_overlaps_are_complete(theta, gamma):
    spec = diagonalize_search(problem(101, theta, gamma))
    assert spec.overlaps_s.sum() == pytest.approx(1.0, abs=1e-10)
    assert spec.overlaps_w.sum() == pytest.approx(1.0, abs=1e-10)


def test_eigenvector_phase_convention():
    spec = diagonalize_search(problem(9, 0.6, 0.3))
    for a in range(9):
        column = spec.states[:, a]
        peak = column[np.argmax(np.abs(column))]
        assert abs(peak.imag) < 1e-12
        assert peak.real > 0


def test_marked_vertex_does_not_change_energies():
    reference = diagonalize_search(problem(5, 0.6, 1.0, marked=0)).energies
    for marked in range(1, 5):
        np.testing.assert_allclose(diagonalize_search(problem(5, 0.6, 1.0, marked)).energies, reference, atol=1e-10)


@pytest.mark.parametrize("kwargs", [{"marked": 5}, {"marked": -1}, {"marked": True}])
def test_search_problem_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        problem(5, 0.6, 1.0, **kwargs)


def test_search_problem_rejects_non_finite_gamma():
    with pytest.raises(InvalidParameterError):
        problem(5, 0.6, float("nan"))


def test_secular_roots_small_graph():
    spectrum = walk_spectrum(ChiralCompleteGraph(5, 0.6))
    roots = search_energies_secular(spectrum, 1.0)
    dense = hermitian_eigh(build_search_hamiltonian(problem(5, 0.6, 1.0)), eigvals_only=True)
    np.testing.assert_allclose(roots, dense, atol=1e-10)
    for root in roots:
        assert secular_function(root, spectrum, 1.0) == pytest.approx(1.0, abs=1e-6)


def test_secular_roots_with_degenerate_poles():
    n = 101
    spectrum = walk_spectrum(ChiralCompleteGraph(n, 0.0))
    details = search_energies_secular(spectrum, 1.0 / n, return_details=True)
    assert list(details["multiplicities"]) == [1, n - 1]
    assert len(details["roots"]) == 2
    np.testing.assert_allclose(details["energies"][:2], [-1 / math.sqrt(n), 1 / math.sqrt(n)], atol=1e-10)
    np.testing.assert_allclose(details["energies"][2:], 1.0, atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(
    n=st.sampled_from([3, 5, 7, 11, 21, 31, 51, 101]),
    theta=st.floats(min_value=0.05, max_value=1.5, allow_nan=False),
)
def test_secular_roots_match_dense_spectrum(n, theta):
    assume(not is_near_critical(theta, n))
    spectrum = walk_spectrum(ChiralCompleteGraph(n, theta))
    gamma = gamma_c(spectrum)
    dense = hermitian_eigh(build_search_hamiltonian(problem(n, theta, gamma)), eigvals_only=True)
    np.testing.assert_allclose(search_energies_secular(spectrum, gamma), dense, atol=1e-8)


def test_secular_zero_gamma_rejected():
    with pytest.raises(InvalidParameterError):
        search_energies_secular(walk_spectrum(ChiralCompleteGraph(5, 0.6)), 0.0)


def test_secular_function_on_pole():
    spectrum = walk_spectrum(ChiralCompleteGraph(5, 0.6))
    with pytest.raises(PoleEvaluationError):
        secular_function(0.0, spectrum, 1.0)


def test_secular_curve_masks_poles():
    spectrum = walk_spectrum(ChiralCompleteGraph(5, 0.6))
    energies = np.array([-1.0, 0.0, spectrum.eigenvalues[1], 7.0])
    curve = secular_curve(spectrum, 1.0, energies)
    assert np.isnan(curve[1]) and np.isnan(curve[2])
    assert curve[0] == pytest.approx(secular_function(-1.0, spectrum, 1.0))
    # above every pole each term is negative
    assert curve[3] < 0


def test_unphased_support_pair():
    n = 101
    spec = diagonalize_search(problem(n, 0.0, 1.0 / n))
    pair = support_pair(spec)
    assert (pair.lower_index, pair.upper_index) == (0, 1)
    assert pair.gap == pytest.approx(2 / math.sqrt(n), rel=1e-9)
    assert pair.combined_support == pytest.approx(2.0, abs=1e-9)
    assert closest_to_zero_pair(spec)["indices"] == (0, 1)


@pytest.mark.slow
@pytest.mark.parametrize("theta, expected", [(0.8, (0, 1)), (1.2, (1, 2)), (1.4, (2, 3))])
def test_support_shifts_past_critical_thetas(large_spectra, theta, expected):
    spec = diagonalize_search(problem(N, theta, gamma_c(large_spectra[theta])))
    pair = support_pair(spec)
    assert (pair.lower_index, pair.upper_index) == expected


@pytest.mark.slow
@pytest.mark.parametrize("theta", [0.0, 0.4, 0.8, 1.2, 1.4])
def test_support_gap_is_constant(large_spectra, theta):
    spec = diagonalize_search(problem(N, theta, gamma_c(large_spectra[theta])))
    assert support_pair(spec).gap == pytest.approx(2 / math.sqrt(N), rel=0.1)


def test_energy_level_sweep():
    thetas = [0.0, 0.3, 0.6]
    sweep = energy_level_sweep(11, thetas, k=3)
    assert isinstance(sweep, pd.DataFrame)
    assert list(sweep.columns) == ["theta", "gamma", "near_critical", "E0", "E1", "E2"]
    assert list(sweep["theta"]) == thetas

    spectrum = walk_spectrum(ChiralCompleteGraph(11, 0.6))
    dense = hermitian_eigh(build_search_hamiltonian(problem(11, 0.6, gamma_c(spectrum))), eigvals_only=True)
    np.testing.assert_allclose(sweep.loc[2, ["E0", "E1", "E2"]].to_numpy(dtype=float), dense[:3], atol=1e-12)

    pd.testing.assert_frame_equal(energy_level_sweep(11, thetas, k=3, workers=3), sweep)


def test_energy_level_sweep_rejects_bad_k():
    with pytest.raises(InvalidParameterError):
        energy_level_sweep(5, [0.1], k=6)


@pytest.mark.parametrize("n", range(5, 102, 2))
def test_secular_roots_match_dense_spectrum_on_grid(n):
    for theta in np.linspace(0.0, math.pi / 2, 20):
        theta = float(theta)
        if is_near_critical(theta, n):
            continue
        spectrum = walk_spectrum(ChiralCompleteGraph(n, theta))
        gamma = gamma_c(spectrum)
        dense = hermitian_eigh(build_search_hamiltonian(problem(n, theta, gamma)), eigvals_only=True)
        np.testing.assert_allclose(search_energies_secular(spectrum, gamma), dense, atol=1e-8)


def test_secular_function_decays_far_from_poles():
    spectrum = walk_spectrum(ChiralCompleteGraph(5, 0.6))
    reach = np.max(np.abs(spectrum.eigenvalues))
    for scale in (10, 100, 1000):
        for sign in (-1, 1):
            assert abs(secular_function(sign * scale * reach, spectrum, 1.0)) < 1 / ((scale - 1) * reach)


def test_secular_function_increases_between_poles():
    spectrum = walk_spectrum(ChiralCompleteGraph(5, 0.6))
    poles = np.sort(spectrum.eigenvalues)
    edges = np.concatenate(([poles[0] - 10.0], poles))
    for lower, upper in zip(edges[:-1], edges[1:]):
        width = upper - lower
        energies = np.linspace(lower + 1e-3 * width, upper - 1e-3 * width, 50)
        assert np.all(np.diff(secular_curve(spectrum, 1.0, energies)) > 0)


def test_secular_function_agrees_with_dense_eigenvalues():
    g = ChiralCompleteGraph(5, 0.6)
    direct = np.sum(1.0 / (dense_walk_spectrum(g) + 1.0)) / 5
    assert secular_function(-1.0, walk_spectrum(g), 1.0) == pytest.approx(direct, abs=1e-10)


@pytest.mark.slow
def test_weak_coupling_leaves_uniform_state_nearly_stationary(large_spectra):
    spec = diagonalize_search(problem(N, 0.0, gamma_c(large_spectra[0.0]) / 2))
    assert spec.overlaps_s.max() >= 0.9


def test_marked_vertex_does_not_change_overlaps():
    reference = diagonalize_search(problem(9, 0.6, 0.3, marked=0))
    other = diagonalize_search(problem(9, 0.6, 0.3, marked=7))
    np.testing.assert_allclose(other.overlaps_s, reference.overlaps_s, atol=1e-10)
    np.testing.assert_allclose(other.overlaps_w, reference.overlaps_w, atol=1e-10)


@pytest.mark.slow
def test_level_sweep_gains_a_negative_level_past_each_crossing():
    # brackets the first and second theta_c (1.0039 and 1.3617)
    sweep = energy_level_sweep(N, [0.95, 1.05, 1.34, 1.40], k=6)
    levels = sweep[[f"E{a}" for a in range(6)]].to_numpy(dtype=float)
    assert list((levels < 0).sum(axis=1)) == [1, 2, 2, 3]
    assert (sweep["gamma"] > 0).all()


@pytest.mark.slow
def test_negative_level_sits_below_tracked_pair():
    spectrum = walk_spectrum(ChiralCompleteGraph(N, 1.05))
    spec = diagonalize_search(problem(N, 1.05, gamma_c(spectrum)))
    pair = support_pair(spec)
    assert pair.lower_index == 1
    assert spec.energies[0] < 0
    assert spec.energies[0] <= gamma_c(spectrum) * float(np.min(spectrum.eigenvalues))
