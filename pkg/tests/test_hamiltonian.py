import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from structured_cluster.errors import InvalidArgument, UnsupportedConfiguration
from structured_cluster.hamiltonian import FreqWindow, binned_G, comb_G, quadripartite_G
from structured_cluster.modes import ModeId, PumpComponent, PumpSpec

from .oracles import comb_couplings_by_enumeration

angles = st.floats(min_value=-4, max_value=4, allow_nan=False)
S2 = 1 / math.sqrt(2)


def nonzero_pairs(G, tol=0.0):
    n = G.shape[0]
    return {(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if abs(G[i, j]) > tol}


def test_quadripartite_theta_zero():
    G = quadripartite_G(0.0).G
    assert nonzero_pairs(G) == {(1, 3), (2, 4)}
    assert G[0, 2] == pytest.approx(S2, abs=1e-15)
    assert G[1, 3] == pytest.approx(-S2, abs=1e-15)


def test_quadripartite_theta_pi_over_4():
    G = quadripartite_G(math.pi / 4).G
    assert nonzero_pairs(G) == {(1, 4), (2, 3)}
    assert G[0, 3] == pytest.approx(S2, abs=1e-15)
    assert G[1, 2] == pytest.approx(S2, abs=1e-15)


def test_quadripartite_theta_pi_over_8():
    G = quadripartite_G(math.pi / 8).G
    np.testing.assert_allclose(G[:2, 2:], 0.5 * np.array([[1, 1], [1, -1]]), atol=1e-15)


@given(angles)
def test_quadripartite_squares_to_half_identity(theta):
    graph = quadripartite_G(theta)
    assert graph.is_symmetric()
    assert np.all(np.diag(graph.G) == 0)
    np.testing.assert_allclose(graph.G @ graph.G, 0.5 * np.eye(4), atol=1e-12)
    np.testing.assert_allclose(np.linalg.eigvalsh(graph.G), [-S2, -S2, S2, S2], atol=1e-12)


def test_comb_dual_rail_bulk_degree():
    graph = comb_G(PumpSpec.dual(1, math.pi / 8, 3, math.pi / 8), FreqWindow(-2, 4))
    for n in range(-2, 5):
        bulk = (1 - n) in range(-2, 5) and (3 - n) in range(-2, 5)
        if not bulk:
            continue
        for s in "hv":
            i = graph.index(ModeId(n, s))
            partners = {graph.modes[j] for j in np.flatnonzero(graph.G[i])}
            assert partners == {ModeId(1 - n, "h"), ModeId(1 - n, "v"), ModeId(3 - n, "h"), ModeId(3 - n, "v")}


def test_comb_single_component_theta_zero():
    graph = comb_G(PumpSpec((PumpComponent(1, 0.0),)), FreqWindow(0, 1))
    assert nonzero_pairs(graph.G) == {(1, 3), (2, 4)}
    assert graph.modes == (ModeId(0, "h"), ModeId(0, "v"), ModeId(1, "h"), ModeId(1, "v"))


def test_comb_restricted_to_one_pair_equals_quadripartite():
    theta = 0.37
    graph = comb_G(PumpSpec((PumpComponent(1, theta),)), FreqWindow(0, 1))
    np.testing.assert_array_equal(graph.G, quadripartite_G(theta).G)


@pytest.mark.parametrize("window", [(0, 1), (-2, 4), (-5, 7), (2, 6)])
def test_comb_frequency_pairs_match_enumeration(window):
    graph = comb_G(PumpSpec.dual(1, 0.3, 3, 0.7), FreqWindow(*window))
    found = set()
    for i, j in zip(*np.nonzero(graph.G)):
        found.add(frozenset((graph.modes[i].freq, graph.modes[j].freq)))
    assert found == comb_couplings_by_enumeration([1, 3], window)


def test_comb_window_excludes_outer_pump():
    graph = comb_G(PumpSpec.dual(1, 0.3, 3, 0.7), FreqWindow(0, 1))
    assert nonzero_pairs(graph.G) == {(1, 3), (1, 4), (2, 3), (2, 4)}


@given(angles, angles)
def test_comb_energy_conservation_and_symmetry(t1, t2):
    graph = comb_G(PumpSpec.dual(1, t1, 3, t2), FreqWindow(-3, 5))
    assert graph.is_symmetric()
    for i, j in zip(*np.nonzero(graph.G)):
        assert graph.modes[i].freq + graph.modes[j].freq in (1, 3)


@given(angles, angles, st.integers(-6, 6))
def test_comb_translation_relabelling(t1, t2, shift):
    base = comb_G(PumpSpec.dual(1, t1, 3, t2), FreqWindow(-2, 4))
    moved = comb_G(PumpSpec.dual(1 + 2 * shift, t1, 3 + 2 * shift, t2), FreqWindow(-2 + shift, 4 + shift))
    np.testing.assert_array_equal(base.G, moved.G)


def test_comb_degenerate_index_is_excluded_with_warning():
    graph = comb_G(PumpSpec.dual(2, 0.3, 5, 0.1), FreqWindow(0, 4))
    assert any("n=1" in w for w in graph.warnings)
    i = graph.index(ModeId(1, "h"))
    assert graph.G[i, i] == 0 and graph.G[i, graph.index(ModeId(1, "v"))] == 0


def test_comb_rejects_equal_pumps_and_too_many():
    with pytest.raises(InvalidArgument):
        comb_G(PumpSpec.dual(1, 0.0, 1, 0.0), FreqWindow(0, 3))
    with pytest.raises(UnsupportedConfiguration):
        comb_G(PumpSpec((PumpComponent(1, 0), PumpComponent(3, 0), PumpComponent(5, 0))), FreqWindow(0, 3))
    with pytest.raises(InvalidArgument):
        FreqWindow(2, 2)


def test_binned_graph_is_block_diagonal_in_time():
    pump = PumpSpec(
        (PumpComponent(1, 0.0, schedule={0: 0.0, 1: 0.5}), PumpComponent(3, 0.0, schedule={0: 0.2, 1: 0.0}))
    )
    graph = binned_G(pump, FreqWindow(-1, 3), [0, 1])
    for i, j in zip(*np.nonzero(graph.G)):
        assert graph.modes[i].time == graph.modes[j].time
    block0 = comb_G(pump.frozen_at(0), FreqWindow(-1, 3)).G
    idx = [graph.index(ModeId(m.freq, m.spatial, 0)) for m in comb_G(pump.frozen_at(0), FreqWindow(-1, 3)).modes]
    np.testing.assert_array_equal(graph.G[np.ix_(idx, idx)], block0)
