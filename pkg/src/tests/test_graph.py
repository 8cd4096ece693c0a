import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walk.errors import InvalidParameterError
from walk.graph import (
    ChiralCompleteGraph,
    basis_state,
    build_laplacian,
    canonicalize_theta,
    circulant_laplacian,
    equal_superposition,
    equivalent_laplacian,
    laplacian_first_column,
)

raw_thetas = st.floats(min_value=-20.0, max_value=20.0, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("theta_raw, expected", [
    (0.3, (0.3, False, 1)),
    (2.0, (math.pi - 2.0, True, -1)),
    (4.0, (math.pi - (2 * math.pi - 4.0), False, -1)),
    (0.3 + 2 * math.pi, (0.3, False, 1)),
])
def test_canonicalize_theta_examples(theta_raw, expected):
    params = canonicalize_theta(theta_raw)
    assert params.theta_canonical == pytest.approx(expected[0], abs=1e-12)
    assert params.arrows_reversed is expected[1]
    assert params.gamma_sign == expected[2]


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), -float("inf")])
def test_canonicalize_theta_rejects_non_finite(bad):
    with pytest.raises(InvalidParameterError):
        canonicalize_theta(bad)


@given(raw_thetas)
def test_canonical_theta_is_in_range_and_fixed(theta_raw):
    params = canonicalize_theta(theta_raw)
    assert 0.0 <= params.theta_canonical <= math.pi / 2

    again = canonicalize_theta(params.theta_canonical)
    assert again.theta_canonical == params.theta_canonical
    assert not again.arrows_reversed
    assert again.gamma_sign == 1


@settings(max_examples=60)
@given(raw_thetas)
def test_equivalent_laplacian_reproduces_raw_phase(theta_raw):
    np.testing.assert_allclose(equivalent_laplacian(5, theta_raw), circulant_laplacian(5, theta_raw), atol=1e-9)


@pytest.mark.parametrize("theta_raw", [2.0, 4.0])
def test_equivalent_laplacian_examples(theta_raw):
    np.testing.assert_allclose(equivalent_laplacian(5, theta_raw), circulant_laplacian(5, theta_raw), atol=1e-12)


def test_first_column_pattern():
    theta = 0.6
    g = ChiralCompleteGraph(5, theta)
    forward, backward = np.exp(1j * theta), np.exp(-1j * theta)
    expected = [-4 * math.cos(theta), forward, forward, backward, backward]
    np.testing.assert_allclose(laplacian_first_column(g), expected, atol=1e-15)


def test_first_column_seven_vertices():
    column = laplacian_first_column(ChiralCompleteGraph(7, math.pi / 4))
    assert column[0] == pytest.approx(-6 * math.cos(math.pi / 4))
    np.testing.assert_allclose(column[1:4], np.exp(1j * math.pi / 4))
    np.testing.assert_allclose(column[4:], np.exp(-1j * math.pi / 4))


def test_unphased_laplacian_is_complete_graph():
    entries = build_laplacian(ChiralCompleteGraph(5, 0.0)).entries
    expected = np.ones((5, 5)) - 5 * np.eye(5)
    np.testing.assert_allclose(entries, expected, atol=1e-15)


@pytest.mark.parametrize("n, theta", [(5, 0.6), (9, 0.6), (21, 1.3), (9, math.pi / 2)])
def test_laplacian_structure(n, theta):
    entries = build_laplacian(ChiralCompleteGraph(n, theta)).entries
    assert np.array_equal(entries, entries.conj().T)
    np.testing.assert_allclose(entries.sum(axis=1), 0.0, atol=1e-12)
    np.testing.assert_allclose(entries @ equal_superposition(n), 0.0, atol=1e-12)
    # every vertex looks the same
    np.testing.assert_allclose(np.roll(np.roll(entries, 1, axis=0), 1, axis=1), entries, atol=1e-15)


def test_laplacian_is_read_only():
    entries = build_laplacian(ChiralCompleteGraph(5, 0.3)).entries
    with pytest.raises(ValueError):
        entries[0, 0] = 1.0


@pytest.mark.parametrize("n", [4, 1, 2, 0, -3, True, 5.0])
def test_vertex_count_validation(n):
    with pytest.raises(InvalidParameterError):
        ChiralCompleteGraph(n, 0.3)


def test_even_vertex_count_message():
    with pytest.raises(InvalidParameterError, match="n must be odd"):
        ChiralCompleteGraph(4, 0.0)


@pytest.mark.parametrize("theta", [-0.1, 1.6, float("nan")])
def test_graph_requires_canonical_theta(theta):
    with pytest.raises(InvalidParameterError):
        ChiralCompleteGraph(5, theta)


def test_from_raw_returns_reduction_params():
    graph, params = ChiralCompleteGraph.from_raw(5, 2.0)
    assert graph.theta == pytest.approx(math.pi - 2.0)
    assert params.arrows_reversed
    assert params.gamma_sign == -1


def test_states():
    s = equal_superposition(9)
    assert np.linalg.norm(s) == pytest.approx(1.0)
    assert basis_state(9, 4)[4] == 1.0
    with pytest.raises(InvalidParameterError):
        basis_state(9, 9)
