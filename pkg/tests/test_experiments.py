import math

import numpy as np
import pytest

from vlcsee.experiments import SchemeVariant, SweepSpec, run_sweep, summarize, Record


def small(**kw):
    base = dict(variable="p_t_dbm", values=(28.0, 32.0), n_realizations=2, rng_seed=7,
                schemes=("selective_siso", "miso:zf"))
    base.update(kw)
    return SweepSpec(**base)


def test_parallel_run_matches_serial():
    spec = small()
    a, b = run_sweep(spec, 1), run_sweep(spec, 2)
    for key, st in a.stats.items():
        sa, sb = st, b.stats[key]
        for f in ("mean_ee", "mean_see", "feas_prob", "mean_sinr_gap_db"):
            x, y = getattr(sa, f), getattr(sb, f)
            assert (math.isnan(x) and math.isnan(y)) or x == y


def test_rows_follow_value_and_scheme_order():
    res = run_sweep(small())
    rows = [(v, s.label) for v, s, _ in res.rows()]
    assert rows == [(28.0, "selective_siso"), (28.0, "miso:zf"), (32.0, "selective_siso"),
                    (32.0, "miso:zf")]
    assert res.optimum("selective_siso", "mean_ee") in (28.0, 32.0)


def test_see_is_averaged_over_paired_realizations():
    spec = small(values=(30.0,), schemes=("fixed_siso", "miso"))
    recs = [{(30.0, "fixed_siso"): Record(True, see=1.0), (30.0, "miso"): Record(True, see=3.0)},
            {(30.0, "fixed_siso"): Record(False), (30.0, "miso"): Record(True, see=9.0)},
            {(30.0, "fixed_siso"): Record(False, error=True), (30.0, "miso"): Record(True, see=5.0)}]
    st = summarize(spec, recs)
    assert st[(30.0, "miso")].mean_see == 3.0 and st[(30.0, "miso")].n_paired == 1
    assert st[(30.0, "fixed_siso")].feas_prob == 0.5  # errors leave the denominator
    assert st[(30.0, "miso")].mean_ee is not None


def test_feasibility_only_sweep_probabilities():
    spec = small(variable="rho", values=(0.0, 1.0), feasibility_only=True,
                 schemes=("selective_siso", "selective_siso:zf", "miso:noan"))
    res = run_sweep(spec)
    for (rho, label), st in res.stats.items():
        assert 0 <= st.feas_prob <= 1
        if label == "miso:noan":
            assert st.feas_prob == 1


@pytest.mark.parametrize("bad", [dict(variable="height"), dict(csi_mode="partial"),
                                 dict(n_realizations=0), dict(values=()),
                                 dict(csi_mode="known", schemes=("miso:zf",)),
                                 dict(variable="k_eves", values=(0,)), dict(eps=0.0)])
def test_spec_validation(bad):
    with pytest.raises(ValueError):
        small(**bad)


def test_variant_labels_round_trip():
    for text in ("miso", "fixed_siso:zf", "selective_siso:noan"):
        assert SchemeVariant.parse(text).label == text
    with pytest.raises(ValueError):
        SchemeVariant.parse("mimo")
