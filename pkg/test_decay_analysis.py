"""
Tests for the exponent tables, rate fits and decay reports
"""

import numpy as np
import pytest

from src.analysis import decay_report, fit_exponent, theorem_exponent
from src.errors import FitError, InadmissibleParametersError, ParameterError
from src.models import Grid, InitialData, ModelParams, NormSeries, SimConfig, SystemKind
from src.solver import simulate

PRESSURELESS = SystemKind.PRESSURELESS
PRESSURED = SystemKind.PRESSURED


def test_pressureless_density_exponent():
    e = theorem_exponent(PRESSURELESS, -1, 1, 0.5, None, 0.0, "n")
    assert e.physical == pytest.approx(0.0)
    assert e.rescaled == pytest.approx(0.5)


def test_pressured_strong_interaction_exponent():
    e = theorem_exponent(PRESSURED, -1, 3, 1.5, 1.5, 1.0, "n")
    assert e.physical == pytest.approx(-0.25)
    assert e.rescaled == pytest.approx(0.75)


def test_pressured_repulsive_weak_interaction_exponent():
    e = theorem_exponent(PRESSURED, -1, 1, 0.5, 1.5, 0.0, "w")
    assert e.physical == pytest.approx(0.25)
    assert e.rescaled == pytest.approx(0.25)


@pytest.mark.parametrize("quantity", ["n", "w"])
def test_exponent_decreases_with_unit_slope_in_ell(quantity):
    values = [theorem_exponent(PRESSURELESS, -1, 2, 0.7, None, ell, quantity).physical for ell in [0, 1, 2, 3]]
    np.testing.assert_allclose(np.diff(values), -1.0)
    values = [theorem_exponent(PRESSURED, 1, 2, 0.5, 1.3, ell, quantity).physical for ell in [0, 1, 2, 3]]
    np.testing.assert_allclose(np.diff(values), -1.0)


@pytest.mark.parametrize("d,sigma", [(1, 0.5), (2, 1.5), (3, 0.2)])
def test_pressureless_density_gains_half_sigma(d, sigma):
    n = theorem_exponent(PRESSURELESS, -1, d, sigma, None, 1.0, "n")
    w = theorem_exponent(PRESSURELESS, -1, d, sigma, None, 1.0, "w")
    assert w.physical - n.physical == pytest.approx(sigma / 2)


def test_repulsive_rate_never_exceeds_attractive_rate():
    for d in (1, 2):
        for sigma in (0.2, 0.5, 0.8):
            for gamma in (1.1, 1.3, 1.5):
                try:
                    repulsive = theorem_exponent(PRESSURED, -1, d, sigma, gamma, 0.0, "n")
                    attractive = theorem_exponent(PRESSURED, 1, d, sigma, gamma, 0.0, "n")
                except InadmissibleParametersError:
                    continue
                assert repulsive.rescaled <= attractive.rescaled + 1e-12


def test_interpolated_rate_endpoints():
    d, sigma, s = 3, 0.5, 3.0
    standard = theorem_exponent(PRESSURELESS, -1, d, sigma, None, s, "n", s=s)
    improved = theorem_exponent(PRESSURELESS, -1, d, sigma, None, s, "n", s=s, improved=True)
    assert improved.physical == pytest.approx(standard.physical)
    at_zero = theorem_exponent(PRESSURELESS, -1, d, sigma, None, 0.0, "n", s=s, improved=True)
    assert at_zero.physical == pytest.approx(0.0)
    with pytest.raises(ParameterError):
        theorem_exponent(PRESSURELESS, -1, d, sigma, None, 1.0, "n", improved=True)


def test_inadmissible_gamma_names_hypothesis():
    with pytest.raises(InadmissibleParametersError) as info:
        theorem_exponent(PRESSURED, -1, 1, 0.5, 1.9, 0.0, "n")
    assert "d = 1,2" in info.value.hypothesis
    theorem_exponent(PRESSURED, 1, 3, 0.5, 1.5, 0.0, "n")
    with pytest.raises(InadmissibleParametersError):
        theorem_exponent(PRESSURED, 1, 3, 0.5, 1.82, 0.0, "n")


def test_other_inadmissible_sets():
    with pytest.raises(InadmissibleParametersError):
        theorem_exponent(PRESSURED, -1, 1, 1.5, 1.5, 0.0, "n")
    with pytest.raises(InadmissibleParametersError):
        theorem_exponent(PRESSURELESS, 1, 1, 0.5, None, 0.0, "n")
    with pytest.raises(InadmissibleParametersError):
        theorem_exponent(PRESSURELESS, -1, 1, 0.5, None, 1.0, "n", p=4.0)
    with pytest.raises(InadmissibleParametersError):
        theorem_exponent(PRESSURELESS, -1, 1, 0.5, None, 0.0, "n", p=1.5)
    with pytest.raises(InadmissibleParametersError):
        theorem_exponent(PRESSURELESS, -1, 1, 0.5, None, 0.0, "n", s=1.5)
    with pytest.raises(ParameterError):
        theorem_exponent(PRESSURELESS, -1, 1, 0.5, None, 0.0, "rho")


def test_lp_exponent_and_note():
    e = theorem_exponent(PRESSURED, -1, 2, 1.2, 1.5, 0.0, "w", p=3.0)
    assert e.physical == pytest.approx(2 / 3 - 0.5)
    assert e.rescaled == pytest.approx(0.5)
    assert e.note
    assert theorem_exponent(PRESSURED, -1, 2, 1.2, 1.5, 0.0, "w", p=np.inf).note == ""


def test_near_boundary_flag():
    assert theorem_exponent(PRESSURED, -1, 2, 1.99, 1.5, 0.0, "n").near_boundary
    assert not theorem_exponent(PRESSURED, -1, 2, 1.5, 1.5, 0.0, "n").near_boundary


def test_fit_exact_exponential():
    tau = np.linspace(0.0, 10.0, 101)
    fit = fit_exponent(tau, 5 * np.exp(-0.3 * tau))
    assert fit.rate == pytest.approx(0.3, abs=1e-10)
    assert fit.r2 == pytest.approx(1.0, abs=1e-10)
    assert fit.samples == 51


def test_fit_loglog_mode():
    t = np.linspace(0.0, 1000.0, 200)
    fit = fit_exponent(t, (1 + t) ** -2.0, mode="loglog")
    assert fit.exponent == pytest.approx(-2.0, abs=1e-10)


def test_fit_modulated_exponential():
    tau = np.linspace(0.0, 40.0, 401)
    fit = fit_exponent(tau, np.exp(-0.4 * tau) * (1 + 0.05 * np.sin(tau)))
    assert fit.rate == pytest.approx(0.4, abs=0.02)


def test_fit_errors():
    tau = np.linspace(0.0, 1.0, 10)
    with pytest.raises(FitError):
        fit_exponent(tau, np.exp(-tau))
    tau = np.linspace(0.0, 1.0, 40)
    values = np.exp(-tau)
    values[-1] = 0.0
    with pytest.raises(FitError):
        fit_exponent(tau, values)
    with pytest.raises(ParameterError):
        fit_exponent(tau, np.exp(-tau), mode="semilog")


def synthetic_series(n_rate, w_rate, taus=np.linspace(0.0, 4.0, 41)):
    series = NormSeries()
    for tau in taus:
        series.add(tau, "n", 0.0, 2.0, np.exp(-n_rate * tau), np.exp(-n_rate * tau))
        series.add(tau, "w", 0.0, 2.0, np.exp(-w_rate * tau), np.exp(-w_rate * tau))
    return series


def pressureless_config(**overrides):
    kwargs = dict(params=ModelParams(PRESSURELESS, -1, 0.5), grid=Grid(d=1, n=32), ell_list=[0.0])
    kwargs.update(overrides)
    return SimConfig(**kwargs)


def test_report_verdicts_on_synthetic_series():
    report = decay_report(synthetic_series(0.5, 0.2), pressureless_config())
    assert report.passed
    assert report.row("n").verdict == "pass"
    assert report.row("w").verdict == "pass"
    assert report.row("mass law").fitted_rate == pytest.approx(0.5, abs=1e-10)
    failing = decay_report(synthetic_series(0.5, 0.1), pressureless_config())
    assert not failing.passed
    assert failing.row("w").verdict == "fail"
    assert failing.row("w").sharpness == pytest.approx(0.1 - 0.25)


def test_report_without_prediction():
    config = pressureless_config(params=ModelParams(PRESSURED, -1, 0.5, gamma=1.9))
    report = decay_report(synthetic_series(0.5, 0.5), config)
    assert report.row("n").verdict == "no prediction"
    assert report.passed


def test_report_frame_columns():
    frame = decay_report(synthetic_series(0.5, 0.3), pressureless_config()).to_frame()
    assert list(frame.columns) == [
        "quantity", "l", "p", "predicted_physical", "predicted_rate", "fitted_rate",
        "r2", "verdict", "sharpness", "near_boundary", "note",
    ]
    assert len(frame) == 3


def test_zero_run_is_degenerate():
    config = pressureless_config(tau_end=0.5, initial=InitialData(n_amplitude=0.0), ell_list=[0.0, 1.0])
    report = decay_report(simulate(config).series, config)
    assert report.rows
    assert all(row.verdict == "degenerate: zero signal" for row in report.rows)


def test_blown_up_run_rejected():
    series = synthetic_series(0.5, 0.5)
    series.mark_blowup(4.1)
    with pytest.raises(ParameterError):
        decay_report(series, pressureless_config())


@pytest.mark.slow
def test_small_data_run_meets_predicted_rates():
    config = SimConfig(
        params=ModelParams(PRESSURELESS, -1, 0.5),
        grid=Grid(d=1, n=256),
        dt=0.01,
        tau_end=4.0,
        initial=InitialData(n_amplitude=0.01),
    )
    report = decay_report(simulate(config).series, config)
    assert report.row("mass law").fitted_rate == pytest.approx(0.5, abs=1e-3)
    assert report.row("w", 0.0).fitted_rate >= 0.25 - 0.1
    for ell in (0.0, 1.0, 2.0):
        assert report.row("n", ell).verdict == "pass"
