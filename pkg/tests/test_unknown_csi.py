import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import BASE, random_channel
from vlcsee.channel import Scheme, build_channel
from vlcsee.metrics import delta_dc, sinr
from vlcsee.unknown_csi import (DesignConfig, design_unknown, max_an_norm2, p2_feasible,
                                zf_feasible)


@given(st.lists(st.floats(0, 5), min_size=2, max_size=4), st.floats(0, 20))
@settings(max_examples=60)
def test_max_an_norm_is_exact_against_a_lattice(hbar, r2):
    hbar = np.array(hbar)
    best, w = max_an_norm2(hbar, r2)
    r = math.sqrt(r2)
    grid = np.array(list(itertools.product(np.linspace(-1, 1, 21), repeat=hbar.size)))
    ok = np.abs(grid @ hbar) <= r
    lattice = float((grid[ok] ** 2).sum(1).max()) if ok.any() else -math.inf
    assert best >= lattice - 1e-12
    if w is not None:
        assert np.all(np.abs(w) <= 1 + 1e-12) and abs(hbar @ w) <= r * (1 + 1e-9) + 1e-12


def _check_solution(ch, sc, cfg, out):
    d = delta_dc(sc.dc_bias_Idc, sc.i_min, sc.i_max)
    sol = out.sol
    assert sol.satisfies_amplitude(d, tol=1e-7)
    assert sinr(ch, sol) >= cfg.delta_b * (1 - 1e-6)
    assert float(sol.an_precoder @ sol.an_precoder) >= cfg.p_th * (1 - 1e-6) - 1e-12


@pytest.mark.parametrize("scheme", list(Scheme))
@pytest.mark.parametrize("variant", ["an", "zf", "noan"])
@pytest.mark.parametrize("seed", range(4))
def test_designs_respect_their_constraints(scheme, variant, seed):
    sc, ch = random_channel(100 + seed, scheme, 1, 30.0)
    cfg = DesignConfig.from_rho(sc, 0.2 if variant != "noan" else 0.0)
    out = design_unknown(ch, sc, cfg, variant)
    feasible = {"an": p2_feasible(ch, sc, cfg)[0], "zf": zf_feasible(ch, sc, cfg)[0], "noan": True}
    assert out.solved == feasible[variant]
    if out.solved:
        _check_solution(ch, sc, cfg, out)
        if variant == "zf":
            assert abs(ch.bob_jammer_gains @ out.sol.an_precoder) <= 1e-10
        if variant == "noan":
            assert np.all(out.sol.an_precoder == 0)


def test_infeasible_power_floor_is_reported():
    sc, ch = random_channel(1, Scheme.SELECTIVE_SISO, 1, 30.0)
    out = design_unknown(ch, sc, DesignConfig.from_rho(sc, 1.0, delta_b_db=10.0))
    assert not out.solved and out.sol is None and out.message


def test_an_design_never_beats_noan_efficiency():
    sc = BASE.with_power_dbm(30.0)
    ch = build_channel(sc, (0.3, -0.4), [(1.0, 1.0)], Scheme.SELECTIVE_SISO)
    an = design_unknown(ch, sc, DesignConfig.from_rho(sc, 0.2), "an")
    noan = design_unknown(ch, sc, DesignConfig.from_rho(sc, 0.0), "noan")
    assert an.ee_bob <= noan.ee_bob * (1 + 1e-3)


def test_rejects_unknown_variant():
    sc, ch = random_channel(1, Scheme.MISO, 1, 30.0)
    with pytest.raises(ValueError):
        design_unknown(ch, sc, DesignConfig(), "bogus")
