import math

import numpy as np
import pytest

from floquet_tur.bath import MachineParams
from floquet_tur.errors import NotApplicableError, OrderingError
from floquet_tur.fcs import CumulantSet, cumulants_analytic
from floquet_tur.metrics import (carnot_bounds, classify_regime, delta_critical,
                                 efficiency_fluctuation_ratios, machine_report,
                                 relative_fluctuation_gap, tur_ratios)
from floquet_tur.modulation import sinusoidal_three_mode

from conftest import SINUSOIDAL

OM, BH, BC, LAM = (SINUSOIDAL[k] for k in ("omega0", "beta_h", "beta_c", "lam"))
PARAMS = MachineParams(OM, BH, BC)
HOT, COLD = PARAMS.split_baths()


def three_mode(D, precision=None):
    return cumulants_analytic(sinusoidal_three_mode(OM, LAM, D), HOT, COLD, precision)


def synthetic(J_h, J_c, var=1.0, S_dot=2.0):
    return CumulantSet(J_h=J_h, J_c=J_c, P=-J_h - J_c, var_h=var, var_c=var, cov_hc=0.0,
                       var_P=2 * var, S_dot=S_dot, mixed_hc=J_h * J_c)


def test_delta_critical():
    assert delta_critical(30, 0.005, 0.01) == pytest.approx(10.0)
    assert delta_critical(10, 0.5, 1.0) == pytest.approx(10 / 3)
    assert delta_critical(30, 0.01 - 1e-9, 0.01) == pytest.approx(0.0, abs=1e-5)
    with pytest.raises(OrderingError):
        delta_critical(30, 0.01, 0.01)


def test_carnot_bounds():
    assert carnot_bounds(0.005, 0.01) == pytest.approx((0.25, 1.0))
    with pytest.raises(OrderingError):
        carnot_bounds(0.02, 0.01)


def test_tur_arithmetic_and_undefined_component():
    R = tur_ratios(synthetic(1.0, -0.5))
    assert R[0] == pytest.approx(2.0)
    assert R[1] == pytest.approx(8.0)
    R = tur_ratios(synthetic(0.0, 0.0))
    assert all(math.isnan(r) for r in R)
    # a dead-zone current is undefined without touching the other components
    R = tur_ratios(synthetic(1e-14, -0.5), scale=30.0)
    assert math.isnan(R[0]) and R[1] == pytest.approx(8.0)


@pytest.mark.parametrize("D, regime", [(5.0, "engine"), (15.0, "refrigerator"), (10.0, "other")])
def test_classify_sinusoidal(D, regime):
    assert classify_regime(three_mode(D), PARAMS.scale) == regime


def test_classify_accelerator_and_other():
    assert classify_regime(synthetic(1.0, -0.5)) == "engine"
    assert classify_regime(synthetic(0.5, -1.0)) == "accelerator"
    assert classify_regime(synthetic(1.0, 1.0)) == "other"


@pytest.mark.parametrize("D", [0.5, 3.0, 9.0, 11.0, 20.0, 29.0])
def test_tur_floor_and_equality(D):
    R_h, R_c, R_P = tur_ratios(three_mode(D, 50), PARAMS.scale)
    assert R_h >= 2 - 1e-9 and R_P >= 2 - 1e-9
    assert R_c == pytest.approx(R_h, rel=1e-10)


def test_engine_chain():
    for D in np.linspace(0.5, 9.5, 10):
        c = three_mode(D, 50)
        R_h, _, R_P = tur_ratios(c, PARAMS.scale)
        assert R_P >= R_h >= 2 - 1e-9


def test_efficiency_ratios():
    eng = efficiency_fluctuation_ratios(three_mode(5.0, 50), "engine", BH, BC)
    assert eng["eta2"] >= eng["eta_mean_sq"]
    assert eng["eta_C_sq"] == 0.25 and eng["eta_R_sq"] == 1.0
    ref = efficiency_fluctuation_ratios(three_mode(15.0, 50), "refrigerator", BH, BC)
    assert ref["eta2"] < ref["eta_mean_sq"] <= ref["eta_R_sq"]
    with pytest.raises(NotApplicableError):
        efficiency_fluctuation_ratios(three_mode(5.0), "accelerator", BH, BC)


def test_fluctuation_gap():
    assert relative_fluctuation_gap(three_mode(10.0), OM, 10.0)[1] == 4.0
    D, D_an, _ = relative_fluctuation_gap(three_mode(6.0, 50), OM, 6.0)
    assert D == pytest.approx(D_an, rel=1e-8)
    D, _, DS = relative_fluctuation_gap(three_mode(10.0 + 1e-7, 50), OM, 10.0 + 1e-7)
    assert D == pytest.approx(4.0, rel=1e-6) and abs(DS) < 1e-12
    assert math.isnan(relative_fluctuation_gap(synthetic(0.0, 0.0))[0])
    assert math.isnan(relative_fluctuation_gap(three_mode(5.0))[1])


def test_machine_report():
    r = machine_report(three_mode(5.0, 50), BH, BC, PARAMS.scale, OM, 5.0)
    assert r.regime == "engine" and r.engine_lower_bound_ok
    assert r.refrigerator_upper_bound_ok is None
    r = machine_report(three_mode(15.0, 50), BH, BC, PARAMS.scale, OM, 15.0)
    assert r.regime == "refrigerator" and r.refrigerator_upper_bound_ok
    r = machine_report(three_mode(10.0), BH, BC, PARAMS.scale, OM, 10.0)
    assert r.regime == "other" and math.isnan(r.eta2) and math.isnan(r.D)
    assert set(r.as_dict()) >= {"R_h", "eta_gap", "D_times_Sdot"}
