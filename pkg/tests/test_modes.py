import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from structured_cluster.errors import InvalidArgument, UnsupportedConfiguration
from structured_cluster.modes import (
    H,
    HG02,
    HG11,
    HG20,
    V,
    HGIndex,
    ModeId,
    PumpComponent,
    PumpSpec,
    allowed_processes,
    hg_profile_1d,
    overlap_integral,
    parity_allowed,
    pump_amplitudes,
    pump_mode_amplitudes,
)

from .oracles import hg_1d, overlap_by_dblquad

angles = st.floats(min_value=-10, max_value=10, allow_nan=False)


@pytest.mark.parametrize(
    "theta, expected",
    [
        (math.pi / 4, (0.0, 1.0, 0.0)),
        (0.0, (1 / math.sqrt(2), 0.0, -1 / math.sqrt(2))),
        (math.pi / 8, (0.5, 1 / math.sqrt(2), -0.5)),
    ],
)
def test_pump_amplitudes_examples(theta, expected):
    assert pump_amplitudes(theta) == pytest.approx(expected, abs=1e-15)


def test_pure_hg11_has_exact_zeros():
    a20, a11, a02 = pump_amplitudes(math.pi / 4)
    assert a20 == 0.0 and a02 == 0.0 and a11 == 1.0


@given(angles)
def test_pump_amplitudes_normalised(theta):
    assert sum(a * a for a in pump_amplitudes(theta)) == pytest.approx(1.0, abs=1e-12)


@given(angles)
def test_pump_amplitudes_period_pi(theta):
    assert pump_amplitudes(theta + math.pi) == pytest.approx(pump_amplitudes(theta), abs=1e-12)


def test_mode_ordering_is_freq_spatial_time():
    modes = [ModeId(1, "v"), ModeId(0, "v", 2), ModeId(1, "h"), ModeId(0, "h", 5), ModeId(0, "h", 1)]
    assert sorted(modes) == [ModeId(0, "h", 1), ModeId(0, "h", 5), ModeId(0, "v", 2), ModeId(1, "h"), ModeId(1, "v")]


def test_mode_rejects_bad_spatial_label():
    with pytest.raises(InvalidArgument):
        ModeId(0, "x")


def test_hg_index_orders():
    assert H.order == V.order == 1
    assert {HG20.order, HG11.order, HG02.order} == {2}
    with pytest.raises(InvalidArgument):
        HGIndex(-1, 0)


def test_pump_component_validation_and_schedule():
    with pytest.raises(InvalidArgument):
        PumpComponent(1, 0.0, amplitude=0.0)
    with pytest.raises(InvalidArgument):
        PumpComponent(1, float("nan"))
    comp = PumpComponent(1, 0.0, schedule={0: 0.1, 1: 0.2})
    assert comp.theta_at(1) == 0.2
    with pytest.raises(InvalidArgument):
        comp.theta_at(7)
    assert PumpSpec.dual(1, 0.3, 3, 0.4).angles_at(12) == (0.3, 0.4)


def test_overlap_forbidden_by_parity_is_exact_zero():
    assert overlap_integral(HG20, H, V) == 0.0
    assert overlap_integral(HG11, H, H) == 0.0


def test_overlap_allowed_is_nonzero():
    assert abs(overlap_integral(HG11, H, V)) > 0.1


def test_overlap_rejects_coarse_quadrature():
    with pytest.raises(InvalidArgument):
        overlap_integral(HG11, H, V, n_points=16)


FIRST = [(1, 0), (0, 1)]
SECOND = [(2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("pump, signal, idler", list(product(SECOND, FIRST, FIRST)))
def test_overlap_matches_brute_force_quadrature(pump, signal, idler):
    expected = overlap_by_dblquad(pump, signal, idler)
    got = overlap_integral(HGIndex(*pump), HGIndex(*signal), HGIndex(*idler))
    assert got == pytest.approx(expected, abs=1e-9)
    # parity rule and brute force agree on which integrals vanish
    assert (abs(expected) > 1e-6) == parity_allowed(HGIndex(*pump), HGIndex(*signal), HGIndex(*idler))


@pytest.mark.parametrize("pump, signal, idler", list(product(SECOND, FIRST, FIRST)))
def test_overlap_symmetric_in_signal_idler(pump, signal, idler):
    a = overlap_integral(HGIndex(*pump), HGIndex(*signal), HGIndex(*idler))
    b = overlap_integral(HGIndex(*pump), HGIndex(*idler), HGIndex(*signal))
    assert a == b


def test_allowed_processes_order_two_family():
    procs = allowed_processes(2)
    assert (HG20, H, H) in procs and (HG02, V, V) in procs and (HG11, H, V) in procs
    # the even-even cross terms survive the parity rule too
    assert (HG02, H, H) in procs and (HG20, V, V) in procs
    assert len(procs) == 5
    assert len({frozenset((s, i)) for _, s, i in procs}) == 3


def test_allowed_processes_match_quadrature():
    by_quadrature = set()
    for pump, signal, idler in product(SECOND, FIRST, FIRST):
        if abs(overlap_by_dblquad(pump, signal, idler)) > 1e-6:
            by_quadrature.add((HGIndex(*pump), frozenset((HGIndex(*signal), HGIndex(*idler)))))
    assert by_quadrature == {(p, frozenset((s, i))) for p, s, i in allowed_processes(2)}


def test_allowed_processes_restricted_family():
    assert allowed_processes(2, []) == []
    # a pure HG11 pump (theta = pi/4) only drives the h + v process
    assert allowed_processes(2, pump_mode_amplitudes(math.pi / 4)) == [(HG11, H, V)]


def test_allowed_processes_unsupported_order():
    with pytest.raises(UnsupportedConfiguration):
        allowed_processes(3)
    with pytest.raises(UnsupportedConfiguration):
        allowed_processes(2, [HGIndex(3, 0)])


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_hg_profile_matches_oracle_and_is_normalised(m):
    x = np.linspace(-8, 8, 4001)
    u = hg_profile_1d(m, x)
    np.testing.assert_allclose(u, [hg_1d(m, xi) for xi in x], atol=1e-14)
    assert np.trapezoid(u * u, x) == pytest.approx(1.0, abs=1e-10)
