import numpy as np
import pytest

from helpers import random_channel
from vlcsee.channel import Scheme
from vlcsee.known_csi import MaxMinConfig, maxmin_see, rate_ceiling, secrecy_margins
from vlcsee.metrics import delta_dc, min_see


@pytest.mark.parametrize("scheme", list(Scheme))
@pytest.mark.parametrize("use_an", [True, False])
def test_outcome_is_consistent(scheme, use_an):
    sc, ch = random_channel(21, scheme, 2, 26.0)
    cfg = MaxMinConfig(use_an=use_an)
    out = maxmin_see(ch, sc, cfg)
    assert out.solved
    d = delta_dc(sc.dc_bias_Idc, sc.i_min, sc.i_max)
    assert out.sol.satisfies_amplitude(d, tol=1e-7)
    assert out.sol.an_matrix.shape == (ch.n_an, ch.n_eves)
    if not use_an:
        assert np.all(out.sol.an_matrix == 0)
    assert 0 <= out.t_star <= rate_ceiling(ch, sc)
    assert out.see >= out.t_star - cfg.eps_bisect
    assert np.all(secrecy_margins(sc, ch, out.sol, out.see) >= -1e-12)
    assert out.see == min_see(sc, ch, out.sol)


def test_an_never_hurts_the_maxmin_level():
    sc, ch = random_channel(22, Scheme.SELECTIVE_SISO, 2, 26.0)
    with_an = maxmin_see(ch, sc).t_star
    without = maxmin_see(ch, sc, MaxMinConfig(use_an=False)).t_star
    assert with_an >= without - MaxMinConfig().eps_bisect


def test_needs_an_eavesdropper():
    sc, ch = random_channel(1, Scheme.MISO, 0, 26.0)
    with pytest.raises(ValueError):
        maxmin_see(ch, sc)


def test_config_validation():
    with pytest.raises(ValueError):
        MaxMinConfig(t_low=1.0, t_high=0.5)
    with pytest.raises(ValueError):
        MaxMinConfig(eps_bisect=0)
