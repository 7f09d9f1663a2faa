import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from structured_cluster.clusters import QuadratureForm, dual_rail_nullifiers, edge_weights, nullifier_variances
from structured_cluster.errors import InvalidArgument, UnsupportedConfiguration
from structured_cluster.gaussian import evolve
from structured_cluster.hamiltonian import FreqWindow, binned_G
from structured_cluster.modes import ModeId, PumpSpec
from structured_cluster.staggering import (
    BinRange,
    PumpSchedule,
    bin_signature,
    bulk_components,
    lattice_2d,
    macronode_nullifiers,
    recombined_nullifiers,
    stagger_state,
    staggered_nullifiers,
    staggering_matrix,
    staggering_substitution,
    substituted_nullifiers,
    time_varying_lattice,
)

angles = st.floats(min_value=-4, max_value=4, allow_nan=False)
WINDOW = FreqWindow(-2, 4)
BINS = BinRange(0, 5)
S2 = 1 / math.sqrt(2)
PI4 = math.pi / 4


def Q(n, s, k):
    return (ModeId(n, s, k), "Q")


def form(*pairs):
    return QuadratureForm(dict(pairs))


def by_anchor(forms):
    return {f.anchor: f for f in forms}


def test_substitution_examples():
    assert staggering_substitution(form((Q(0, "h", 0), 1.0))).terms == {Q(0, "h", 0): S2, Q(0, "v", 0): -S2}
    assert staggering_substitution(form((Q(0, "v", 0), 1.0))).terms == {Q(0, "h", 1): S2, Q(0, "v", 1): S2}


def test_substitution_rejects_momentum():
    with pytest.raises(UnsupportedConfiguration):
        staggering_substitution(QuadratureForm({(ModeId(0, "h"), "P"): 1.0}))


coef_lists = st.lists(st.floats(min_value=-3, max_value=3, allow_nan=False), min_size=8, max_size=8)
KEYS = [Q(n, s, k) for n in (0, 1) for s in "hv" for k in (0, 1)]


@given(coef_lists, coef_lists)
def test_substitution_is_orthogonal(x, y):
    fx, fy = QuadratureForm(dict(zip(KEYS, x))), QuadratureForm(dict(zip(KEYS, y)))
    gx, gy = staggering_substitution(fx), staggering_substitution(fy)
    assert gx.norm() == pytest.approx(fx.norm(), abs=1e-12)
    assert gx.dot(gy) == pytest.approx(fx.dot(fy), abs=1e-10)


def test_staggering_matrix_has_orthonormal_rows():
    modes = [ModeId(n, s, k) for n in (0, 1) for s in "hv" for k in (0, 1, 2)]
    T, out = staggering_matrix(modes)
    np.testing.assert_allclose(T @ T.T, np.eye(len(modes)), atol=1e-15)
    assert max(m.time for m in out) == 3


def test_staggered_forms_have_ten_terms_over_two_bins():
    forms = staggered_nullifiers(PumpSpec.dual(1, 0.3, 3, 0.5), WINDOW, BINS)
    for f in forms:
        assert len(f) == 10
        times = {m.time for m in f.modes}
        assert len(times) == 2 and max(times) - min(times) == 1


def test_no_cross_bin_terms_when_b_and_d_vanish():
    forms = staggered_nullifiers(PumpSpec.dual(1, 0.0, 3, 0.0), WINDOW, BINS)
    for f in forms:
        assert len({m.time for m in f.modes}) == 1


@given(angles, angles)
def test_staggered_forms_equal_root_two_times_substitution(t1, t2):
    pump = PumpSpec.dual(1, t1, 3, t2)
    staged = by_anchor([staggering_substitution(f).with_anchor(*f.anchor) for f in dual_rail_nullifiers(pump, WINDOW, time=2)])
    closed = [f for f in staggered_nullifiers(pump, WINDOW, BINS)]
    # closed forms are produced per bin in (n, h/v) order; bin 2 is the third block
    per_bin = len(closed) // (len(BINS) - 1)
    block = closed[2 * per_bin : 3 * per_bin]
    for f, key in zip(block, sorted(staged, key=lambda a: (a[0].freq, a[0].spatial))):
        assert (f * S2).max_difference(staged[key]) < 1e-12


def test_macronode_sign_examples():
    pump = PumpSpec.dual(1, 0.3, 3, 0.5)
    w = edge_weights(0.3, 0.5)
    plus = by_anchor(macronode_nullifiers(pump, WINDOW, BINS))[Q(0, "h", 2)]
    # "-[-a Q]" gives +a; "-[b/2 (... - Q)]" gives +b/2
    assert plus.coefficient(ModeId(1, "v", 2)) == pytest.approx(w.a, abs=1e-15)
    assert plus.coefficient(ModeId(1, "v", 1)) == pytest.approx(w.b / 2, abs=1e-15)
    # the graph weight is the bracket coefficient, so that edge carries -b/2
    g = lattice_2d(pump, WINDOW, BINS)
    assert g.weight(ModeId(0, "h", 2), ModeId(1, "v", 1)) == pytest.approx(-w.b / 2, abs=1e-15)


def pipeline_difference(t1, t2):
    pump = PumpSpec.dual(1, t1, 3, t2)
    closed = by_anchor(macronode_nullifiers(pump, WINDOW, BINS))
    worst = 0.0
    for other in (recombined_nullifiers(pump, WINDOW, BINS), substituted_nullifiers(pump, WINDOW, BINS)):
        other = by_anchor(other)
        assert set(other) == set(closed)
        worst = max(worst, max(closed[k].max_difference(other[k]) for k in closed))
    return worst


@given(angles, angles)
def test_pipeline_equivalence(t1, t2):
    assert pipeline_difference(t1, t2) < 1e-12


def test_macronode_requires_constant_pump():
    pump = PumpSchedule.alternating((0, PI4), (PI4, 0), BINS).pump(1, 3)
    with pytest.raises(InvalidArgument):
        macronode_nullifiers(pump, WINDOW, BINS)


def test_square_lattice_has_two_bulk_components():
    g = lattice_2d(PumpSpec.dual(1, PI4, 3, PI4), WINDOW, BINS)
    assert bulk_components(g) == 2
    assert not g.same_bin_edges()
    np.testing.assert_allclose([abs(w) for _, _, w in g.edges], 1 / (2 * math.sqrt(2)), atol=1e-15)


def macronode_degrees(graph):
    """Degree of each bulk macronode in the graph induced on bulk nodes."""
    bulk = graph.bulk()
    group = {}
    for h, v in bulk.macronodes:
        group[h] = group[v] = (h.freq, h.time)
    adj = {key: set() for key in group.values()}
    for u, v, _ in bulk.edges:
        if group[u] != group[v]:
            adj[group[u]].add(group[v])
            adj[group[v]].add(group[u])
    return adj


def test_square_lattice_interior_macronodes_have_degree_four():
    g = lattice_2d(PumpSpec.dual(1, PI4, 3, PI4), WINDOW, BINS)
    adj = macronode_degrees(g)
    interior = [key for key in adj if key[1] in (2, 3) and key[0] in (0, 1)]
    assert interior and all(len(adj[key]) == 4 for key in interior)


@pytest.mark.parametrize("angles, same_bin", [((0.0, PI4), "a"), ((PI4, 0.0), "c")])
def test_hexagonal_cases(angles, same_bin):
    g = lattice_2d(PumpSpec.dual(1, angles[0], 3, angles[1]), WINDOW, BINS)
    w = getattr(edge_weights(*angles), same_bin)
    assert g.temporal_edges()
    assert {round(x, 12) for _, _, x in g.same_bin_edges()} == {round(-w, 12)}
    adj = macronode_degrees(g)
    interior = [key for key in adj if key[1] in (2, 3) and key[0] in (0, 1)]
    assert all(len(adj[key]) == 3 for key in interior)


def test_theta_zero_loses_temporal_edges():
    g = lattice_2d(PumpSpec.dual(1, 0.0, 3, 0.0), WINDOW, BINS)
    assert g.edges and not g.temporal_edges()


def test_generic_lattice_is_connected():
    assert bulk_components(lattice_2d(PumpSpec.dual(1, math.pi / 8, 3, math.pi / 8), WINDOW, BINS)) == 1


@given(angles, angles)
def test_lattice_translation_invariant_in_time(t1, t2):
    g = lattice_2d(PumpSpec.dual(1, t1, 3, t2), WINDOW, BinRange(0, 6))
    assert bin_signature(g, 2) == bin_signature(g, 3)


def test_constant_schedule_reduces_to_static_lattice():
    pump = PumpSchedule.constant(0.3, 0.5, BINS).pump(1, 3)
    a = lattice_2d(PumpSpec.dual(1, 0.3, 3, 0.5), WINDOW, BINS)
    b = time_varying_lattice(pump, WINDOW, BINS)
    assert a.nodes == b.nodes and a.edges == b.edges and a.anchors == b.anchors


SWAP = ((0.0, PI4), (PI4, 0.0))
HALF_SWAP = ((0.0, PI4), (PI4, PI4))


@pytest.mark.parametrize("schedule", [SWAP, HALF_SWAP])
def test_alternating_schedules_have_period_two(schedule):
    bins = BinRange(0, 7)
    g = time_varying_lattice(PumpSchedule.alternating(*schedule, bins).pump(1, 3), WINDOW, bins)
    assert bin_signature(g, 2) == bin_signature(g, 4)
    assert bin_signature(g, 3) == bin_signature(g, 5)
    assert bin_signature(g, 2) != bin_signature(g, 3)


def weighted_bulk(graph):
    g = graph.bulk().to_networkx()
    for u, v, data in g.edges(data=True):
        data["w"] = round(data["weight"], 9)
    return g


def test_switching_schedules_are_not_isomorphic():
    graphs = [
        weighted_bulk(time_varying_lattice(PumpSchedule.alternating(*s, BINS).pump(1, 3), WINDOW, BINS))
        for s in (SWAP, HALF_SWAP)
    ]
    match = nx.algorithms.isomorphism.numerical_edge_match("w", 0.0)
    assert not nx.is_isomorphic(graphs[0], graphs[1], edge_match=match)


def test_unscheduled_bin_raises():
    pump = PumpSchedule({0: (0, 0), 1: (0, 0), 2: (0, 0)}).pump(1, 3)
    with pytest.raises(InvalidArgument):
        time_varying_lattice(pump, WINDOW, BinRange(0, 3))


def test_bin_range_needs_three_bins():
    with pytest.raises(InvalidArgument):
        BinRange(0, 1)
    assert list(BINS.bulk()) == [1, 2, 3, 4]


@pytest.mark.parametrize("theta", [(0.3, 0.5), (PI4, PI4)])
def test_staggering_preserves_variances(theta):
    bins = [0, 1, 2]
    pump = PumpSchedule.constant(*theta, bins).pump(1, 3)
    state = evolve(binned_G(pump, WINDOW, bins), 0.2)
    staged = stagger_state(state)
    forms = [f for k in bins for f in dual_rail_nullifiers(pump, WINDOW, time=k)]
    before = nullifier_variances(state, forms)
    after = nullifier_variances(staged, [staggering_substitution(f) for f in forms])
    np.testing.assert_allclose(after, before, atol=1e-12)
    assert max(before) < 1
