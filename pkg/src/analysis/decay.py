"""
Decay-exponent tables, rate fitting and fitted-versus-predicted reports
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score

from ..errors import FitError, InadmissibleParametersError, ParameterError, RieszLabError
from ..models import NormSeries, SimConfig, SystemKind

logger = logging.getLogger(__name__)

NEAR_BOUNDARY = 0.02
MIN_FIT_SAMPLES = 8


@dataclass
class TheoremExponent:
    physical: float
    rescaled: float
    theorem: str
    near_boundary: bool = False
    note: str = ""


@dataclass
class FitResult:
    slope: float
    intercept: float
    r2: float
    mode: str = "tau"
    samples: int = 0

    @property
    def rate(self) -> float:
        """Exponential decay rate in tau (tau mode)"""
        return -self.slope

    @property
    def exponent(self) -> float:
        """Power of (1+t) (loglog mode)"""
        return self.slope


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def _near(value: float, bound: float) -> bool:
    scale = max(abs(bound), 1e-12)
    return abs(value - bound) < NEAR_BOUNDARY * scale


def _check_s(s: Optional[float], bound: float, theorem: str) -> None:
    if s is not None and not s > bound:
        raise InadmissibleParametersError(
            f"{theorem} needs s > {bound:.4g}, got s = {s}", hypothesis=f"s > {bound:.4g}"
        )


def _check_gamma_regularity(gamma: float, sigma: float, s: Optional[float], theorem: str) -> None:
    """If 2/(gamma-1) is not an integer, s < 2/(gamma-1) + sigma - 1/2"""
    if s is None:
        return
    ratio = 2.0 / (gamma - 1)
    if abs(ratio - round(ratio)) > 1e-12 and not s < ratio + sigma - 0.5:
        raise InadmissibleParametersError(
            f"{theorem}: 2/(gamma-1) = {ratio:.4g} is not an integer, so s must be below "
            f"{ratio + sigma - 0.5:.4g}, got s = {s}",
            hypothesis="s < 2/(gamma-1) + sigma - 1/2",
        )


def theorem_exponent(system, lam: int, d: int, sigma: float, gamma: Optional[float], ell: float,
                     quantity: str, p: float = 2.0, s: Optional[float] = None,
                     improved: bool = False) -> TheoremExponent:
    """
    Predicted decay exponent of ||Lambda^ell n||_{L^p} or ||Lambda^ell w||_{L^p}

    Args:
        system: SystemKind or its value
        lam: interaction sign, -1 repulsive, +1 attractive
        d: dimension
        sigma: interaction order
        gamma: pressure exponent (pressured only)
        ell: smoothness index
        quantity: "n" or "w"
        p: Lebesgue exponent; p != 2 is supported for ell = 0
        s: regularity index, checked against the theorem when given
        improved: interpolated density rate of the pressureless system

    Returns:
        Physical exponent of (1+t) and the matching exponential rate in tau
    """
    system = SystemKind(system) if not isinstance(system, SystemKind) else system
    if quantity not in ("n", "w"):
        raise ParameterError(f"quantity must be 'n' or 'w', got {quantity}")
    if not (p >= 2):
        raise InadmissibleParametersError(f"decay rates are stated for p >= 2, got {p}", hypothesis="p >= 2")
    if p != 2 and ell != 0:
        raise InadmissibleParametersError("L^p rates are stated for ell = 0 only", hypothesis="ell = 0")
    if ell < 0:
        raise ParameterError(f"ell must be nonnegative, got {ell}")
    inv_p = _inv(p)
    near = False
    note = ""

    if system is SystemKind.PRESSURELESS:
        theorem = "pressureless"
        if lam != -1:
            raise InadmissibleParametersError("the pressureless system is only covered for lam = -1", hypothesis="lam = -1")
        if d < 1 or not 0 < sigma < min(d, 2):
            raise InadmissibleParametersError(
                f"need 0 < sigma < min(d, 2) = {min(d, 2)}, got {sigma}", hypothesis="0 < sigma < min(d,2)"
            )
        _check_s(s, max(2.0, d / 2 + 1), theorem)
        m = min(1.0, (d - sigma) / 2)
        near = _near(sigma, min(d, 2)) or _near(sigma, 0.0)
        gap = 1 - (d - sigma) / 2
        if p != 2:
            if quantity == "w":
                physical = d * inv_p - m
            else:
                if s is None:
                    raise ParameterError("the L^p density rate needs the regularity index s")
                spread = d / 2 - d * inv_p
                physical = -spread - min(spread * gap / s, 0.0)
        elif quantity == "n" and improved:
            if s is None:
                raise ParameterError("the interpolated density rate needs the regularity index s")
            if ell > s:
                raise ParameterError(f"interpolated rate holds for 0 <= ell <= s, got ell = {ell}")
            physical = -ell - min(ell * gap / s, 0.0)
        elif quantity == "n":
            physical = d / 2 - ell - sigma / 2 - m
        else:
            physical = d / 2 - ell - m
    else:
        if gamma is None or not gamma > 1:
            raise InadmissibleParametersError(f"pressured rates need gamma > 1, got {gamma}", hypothesis="gamma > 1")
        if lam not in (1, -1):
            raise ParameterError(f"interaction sign must be +1 or -1, got {lam}")
        dg = d * (gamma - 1) / 2
        if 1 <= sigma < 2:
            theorem = "pressured, 1 <= sigma < 2"
            if d < 2:
                raise InadmissibleParametersError("the range 1 <= sigma < 2 is covered for d >= 2", hypothesis="d >= 2")
            _check_s(s, d / 2 + 1, theorem)
            m = min(1.0, dg)
            near = _near(sigma, 1.0) or _near(sigma, 2.0)
            thresholds = [max(d, 2 / (gamma - 1))]
        elif 0 < sigma < 1 and lam == -1:
            theorem = "pressured repulsive, 0 < sigma < 1"
            if not gamma <= 2:
                raise InadmissibleParametersError(f"{theorem} needs gamma <= 2, got {gamma}", hypothesis="1 < gamma <= 2")
            if d in (1, 2):
                bound = 1 + 2 * (d - sigma) / (d + sigma)
                if not gamma < bound:
                    raise InadmissibleParametersError(
                        f"{theorem} needs gamma < 1 + 2(d-sigma)/(d+sigma) = {bound:.4g} if d = 1,2, got {gamma}",
                        hypothesis="gamma < 1 + 2(d-sigma)/(d+sigma) if d = 1,2",
                    )
                near = near or _near(gamma, bound)
            _check_s(s, max(2 + sigma / 2, d / 2 + 1), theorem)
            m = min(1.0, dg, (d - sigma) / 2)
            near = near or _near(gamma, 2.0) or _near(sigma, 1.0)
            thresholds = [max(d, 2 / (gamma - 1)), 2 * d / (d - sigma)]
        elif 0 < sigma < 1 and lam == 1:
            theorem = "pressured attractive, 0 < sigma < 1"
            upper = 2 - sigma / d
            if not gamma <= upper:
                raise InadmissibleParametersError(
                    f"{theorem} needs gamma <= 2 - sigma/d = {upper:.4g}, got {gamma}",
                    hypothesis="1 < gamma <= 2 - sigma/d",
                )
            if d >= 3:
                bound = 1 + 2 / (sigma + 2)
                if not gamma < bound:
                    raise InadmissibleParametersError(
                        f"{theorem} needs gamma < 1 + 2/(sigma+2) = {bound:.4g} if d >= 3, got {gamma}",
                        hypothesis="gamma < 1 + 2/(sigma+2) if d >= 3",
                    )
                near = near or _near(gamma, bound)
            _check_s(s, max(3 - sigma / 2, d / 2 + 1), theorem)
            m = min(1.0, dg)
            near = near or _near(gamma, upper) or _near(sigma, 1.0)
            thresholds = [max(d, 2 / (gamma - 1))]
        else:
            raise InadmissibleParametersError(f"sigma must lie in (0, 2), got {sigma}", hypothesis="0 < sigma < 2")
        _check_gamma_regularity(gamma, sigma, s, theorem)
        if p != 2:
            physical = d * inv_p - m
            if p < max(thresholds):
                note = f"p below {max(thresholds):.4g}: bound holds but need not decay"
        else:
            physical = d / 2 - ell - m

    if near:
        logger.warning("parameters lie within %.0f%% of a hypothesis boundary (%s)", 100 * NEAR_BOUNDARY, theorem)
    rescaled = (d * inv_p - ell) - physical
    return TheoremExponent(physical=physical, rescaled=rescaled, theorem=theorem, near_boundary=near, note=note)


def fit_exponent(times: Sequence[float], values: Sequence[float], window: float = 0.5,
                 mode: str = "tau") -> FitResult:
    """
    Least-squares slope of log(value) over the trailing window

    Args:
        times: tau values (mode "tau") or physical t values (mode "loglog")
        values: positive norm values
        window: trailing fraction of the time range used
        mode: "tau" fits against tau, "loglog" against log(1+t)

    Returns:
        FitResult with slope, intercept and R^2
    """
    if mode not in ("tau", "loglog"):
        raise ParameterError(f"fit mode must be 'tau' or 'loglog', got {mode}")
    if not 0 < window <= 1:
        raise ParameterError(f"window must lie in (0, 1], got {window}")
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    start = times[-1] - window * (times[-1] - times[0])
    keep = times >= start - 1e-12 * max(1.0, abs(start))
    x, y = times[keep], values[keep]
    if x.size < MIN_FIT_SAMPLES:
        raise FitError(f"need at least {MIN_FIT_SAMPLES} samples in the fit window, got {x.size}")
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        raise FitError("nonpositive or non-finite values in the fit window")
    if mode == "loglog":
        x = np.log1p(x)
    logy = np.log(y)
    model = LinearRegression().fit(x.reshape(-1, 1), logy)
    r2 = float(r2_score(logy, model.predict(x.reshape(-1, 1))))
    return FitResult(
        slope=float(model.coef_[0]),
        intercept=float(model.intercept_),
        r2=r2,
        mode=mode,
        samples=int(x.size),
    )


@dataclass
class DecayRow:
    quantity: str
    ell: float
    p: float
    predicted_physical: Optional[float]
    predicted_rate: Optional[float]
    fitted_rate: Optional[float]
    r2: Optional[float]
    verdict: str
    sharpness: Optional[float] = None
    near_boundary: bool = False
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.verdict == "fail"


@dataclass
class DecayReport:
    rows: List[DecayRow]
    window: float
    tol: float
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not any(row.failed for row in self.rows)

    def row(self, quantity: str, ell: float = 0.0, p: float = 2.0) -> DecayRow:
        for r in self.rows:
            if r.quantity == quantity and math.isclose(r.ell, ell) and (r.p == p or math.isclose(r.p, p)):
                return r
        raise KeyError((quantity, ell, p))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{
            "quantity": r.quantity,
            "l": r.ell,
            "p": r.p,
            "predicted_physical": r.predicted_physical,
            "predicted_rate": r.predicted_rate,
            "fitted_rate": r.fitted_rate,
            "r2": r.r2,
            "verdict": r.verdict,
            "sharpness": r.sharpness,
            "near_boundary": r.near_boundary,
            "note": r.note,
        } for r in self.rows])


MASS_LABEL = "mass law"
MASS_TOL = 1e-3


def _fit_row(frame: pd.DataFrame, window: float):
    return fit_exponent(frame["tau"].to_numpy(), frame["rescaled_value"].to_numpy(), window)


def decay_report(series: NormSeries, config: SimConfig, tol: float = 0.1, window: float = 0.5) -> DecayReport:
    """
    Compare fitted rescaled decay rates with the theorem predictions

    Fit failures and inadmissible parameters annotate rows instead of aborting.
    """
    if series.blowup_tau() is not None:
        raise ParameterError(f"run blew up at tau = {series.blowup_tau()}; no decay report")
    params, d = config.params, config.grid.d
    rows: List[DecayRow] = []

    for quantity, ell, p in series.keys():
        if quantity not in ("n", "w"):
            continue
        frame = series.select(quantity, ell, p)
        values = frame["rescaled_value"].to_numpy()
        if np.all(values == 0):
            rows.append(DecayRow(quantity, ell, p, None, None, None, None, "degenerate: zero signal"))
            continue
        try:
            predicted = theorem_exponent(params.system, params.lam, d, params.sigma, params.gamma,
                                         ell, quantity, p, s=config.s)
        except (InadmissibleParametersError, ParameterError) as e:
            predicted = None
            note = f"no prediction: {e}"
        try:
            fit = _fit_row(frame, window)
        except FitError as e:
            logger.warning("fit failed for %s l=%g p=%g: %s", quantity, ell, p, e)
            rows.append(DecayRow(quantity, ell, p,
                                 predicted.physical if predicted else None,
                                 predicted.rescaled if predicted else None,
                                 None, None, "fit error", note=str(e)))
            continue
        if predicted is None:
            rows.append(DecayRow(quantity, ell, p, None, None, fit.rate, fit.r2, "no prediction", note=note))
            continue
        verdict = "pass" if fit.rate >= predicted.rescaled - tol else "fail"
        rows.append(DecayRow(
            quantity, ell, p, predicted.physical, predicted.rescaled, fit.rate, fit.r2, verdict,
            sharpness=fit.rate - predicted.rescaled, near_boundary=predicted.near_boundary, note=predicted.note,
        ))

    if params.system is SystemKind.PRESSURELESS and ("n", 0.0, 2.0) in series.keys():
        frame = series.select("n", 0.0, 2.0)
        values = frame["rescaled_value"].to_numpy()
        expected = d / 2
        if np.all(values == 0):
            rows.append(DecayRow(MASS_LABEL, 0.0, 2.0, 0.0, expected, None, None, "degenerate: zero signal"))
        else:
            try:
                fit = _fit_row(frame, window)
                verdict = "pass" if abs(fit.rate - expected) <= MASS_TOL else "fail"
                rows.append(DecayRow(MASS_LABEL, 0.0, 2.0, 0.0, expected, fit.rate, fit.r2, verdict,
                                     sharpness=fit.rate - expected))
            except FitError as e:
                rows.append(DecayRow(MASS_LABEL, 0.0, 2.0, 0.0, expected, None, None, "fit error", note=str(e)))

    return DecayReport(rows=rows, window=window, tol=tol, config=config.to_dict())
