import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import BASE
from vlcsee.channel import (DegenerateChannelError, OpticalParams, RoomScenario, Scheme,
                            build_channel, channel_gain, dbm_to_dc_bias, lambertian_order,
                            noise_variance, normalized_noise)

OPT = OpticalParams()
xy = st.tuples(st.floats(-2.5, 2.5), st.floats(-2.5, 2.5))


@given(st.floats(1.0, 89.0))
def test_lambertian_order_positive_and_decreasing_in_angle(a):
    assert lambertian_order(a) > 0
    assert lambertian_order(a) >= lambertian_order(min(a + 0.5, 89.5))


@given(xy)
def test_gain_is_nonnegative_and_zero_outside_fov(p):
    tx = (0.0, 0.0, 3.0)
    h = channel_gain(tx, (*p, 0.5), OPT)
    psi = math.degrees(math.atan2(math.hypot(*p), 2.5))
    assert h >= 0
    if psi > OPT.fov_Psi:
        assert h == 0


@given(st.lists(st.floats(0, 1e-4), min_size=1, max_size=6), st.floats(0.01, 10))
def test_noise_is_positive_and_monotone_in_bias(g, idc):
    s1 = noise_variance(g, idc, OPT)
    assert s1 > 0
    assert noise_variance(g, 2 * idc, OPT) >= s1


def test_dbm_conversion():
    assert math.isclose(dbm_to_dc_bias(30.0, 0.44), 1 / 0.44)
    assert math.isclose(normalized_noise(2.0, OPT) / normalized_noise(1.0, OPT), 2.0)


@pytest.mark.parametrize("scheme", list(Scheme))
@given(bob=xy, eve=xy)
@settings(max_examples=40, deadline=None)
def test_build_channel_shapes_and_signs(scheme, bob, eve):
    ch = build_channel(BASE, bob, [eve], scheme)
    n = BASE.n_luminaires
    if scheme is Scheme.MISO:
        assert ch.n_info == n and ch.n_an == n
    else:
        assert ch.n_info == 1 and ch.n_an == n - 1
    assert ch.eve_alice_gains.shape == (1, ch.n_info)
    for arr in (ch.bob_alice_gain, ch.bob_jammer_gains, ch.eve_alice_gains, ch.eve_jammer_gains):
        assert np.all(arr >= 0)
    assert ch.bob_noise_norm > 0 and np.all(ch.eve_noise_norm > 0)
    if scheme is Scheme.SELECTIVE_SISO:
        assert ch.bob_alice_gain[0] == ch.bob_gains.max()
    if scheme is Scheme.FIXED_SISO:
        assert ch.alice_index == 0


def test_receiver_outside_room_is_rejected():
    with pytest.raises(ValueError):
        build_channel(BASE, (3.0, 0.0), [], Scheme.MISO)


def test_invisible_bob_is_degenerate():
    narrow = RoomScenario(optical=OpticalParams(fov_Psi=5.0))
    with pytest.raises(DegenerateChannelError):
        build_channel(narrow, (0.0, 0.0), [], Scheme.SELECTIVE_SISO)


@pytest.mark.parametrize("bad", [dict(responsivity_gamma=0.0), dict(ambient_photocurrent_chi=-1.0),
                                 dict(fov_Psi=95.0)])
def test_optical_params_validation(bad):
    with pytest.raises(ValueError):
        OpticalParams(**bad)


def test_scenario_validation():
    with pytest.raises(ValueError):
        RoomScenario(luminaire_positions=((0, 0, 2.0), (1, 1, 3.0)))
    with pytest.raises(ValueError):
        RoomScenario(dc_bias_Idc=3.0)
