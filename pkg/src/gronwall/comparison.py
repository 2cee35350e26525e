"""
Comparison integration of the Gronwall-type differential inequality

    dY/dt + a Y/(1+t) <= C* (Y^2 + Y/(1+t)^2 + c_P sum_i Y^{b_i+1} / (1+t)^{1-c_i})

taken as an equality, which dominates every admissible Y. The decay envelope
2 e^{C* t/(1+t)} (1+t)^{-a} Y(0) is checked on a log-spaced record of [0, T].
"""

import logging
import math
from typing import Any, Dict, Optional, Tuple
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from ..errors import NumericError, ParameterError
from ..models.validation import reject_unknown, require

logger = logging.getLogger(__name__)

RTOL = 1e-10
ATOL = 1e-12
ENVELOPE_SLACK = 1e-9
BLOWUP_CAP = 1e8
DEFAULT_HORIZON = 1e4
RECORD_POINTS = 1000
SLOPE_TOL = 0.01


@dataclass(frozen=True)
class GronwallParams:
    a: float
    C_star: float
    b: Tuple[float, ...] = ()
    c: Tuple[float, ...] = ()
    c_P: int = 0

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        object.__setattr__(self, "c", tuple(float(x) for x in self.c))
        if not self.a > 1:
            raise ParameterError(f"decay exponent a must exceed 1, got {self.a}")
        if not self.C_star >= 0:
            raise ParameterError(f"C* must be nonnegative, got {self.C_star}")
        if self.c_P not in (0, 1):
            raise ParameterError(f"c_P must be 0 or 1, got {self.c_P}")
        if len(self.b) != len(self.c):
            raise ParameterError(f"b and c must have equal length, got {len(self.b)} and {len(self.c)}")
        for i, (bi, ci) in enumerate(zip(self.b, self.c)):
            if not bi > 0:
                raise ParameterError(f"b[{i}] must be positive, got {bi}")
            if not ci < self.a * bi:
                raise ParameterError(f"c[{i}] = {ci} must be below a*b[{i}] = {self.a * bi}")

    @property
    def N(self) -> int:
        return len(self.b)

    def to_dict(self) -> Dict[str, Any]:
        return {"a": self.a, "C_star": self.C_star, "b": list(self.b), "c": list(self.c), "c_P": self.c_P}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GronwallParams":
        reject_unknown(data, {"a", "C_star", "b", "c", "c_P"}, "gronwall")
        return cls(
            a=float(require(data, "a", "gronwall")),
            C_star=float(require(data, "C_star", "gronwall")),
            b=tuple(data.get("b", ())),
            c=tuple(data.get("c", ())),
            c_P=int(data.get("c_P", 0)),
        )


@dataclass
class GronwallTrajectory:
    t: np.ndarray
    y: np.ndarray
    blowup_time: Optional[float] = None
    asymptotic_slope: Optional[float] = None
    slope_ok: Optional[bool] = None

    @property
    def blew_up(self) -> bool:
        return self.blowup_time is not None


@dataclass
class ThresholdResult:
    M: float
    unbounded: bool
    evaluations: int
    bootstrap_at_half: float
    bootstrap_threshold: float
    bracket: Tuple[float, float] = field(default=(0.0, 0.0))

    @property
    def consistent(self) -> bool:
        """The analytic smallness condition is sufficient, so M must not fall below its threshold"""
        return self.unbounded or self.M >= self.bootstrap_threshold * (1 - 1e-6)


def envelope(params: GronwallParams, Y0: float, t):
    """2 e^{C* t/(1+t)} (1+t)^{-a} Y0"""
    t = np.asarray(t, dtype=float)
    value = 2.0 * np.exp(params.C_star * t / (1 + t)) * (1 + t) ** (-params.a) * Y0
    return float(value) if value.ndim == 0 else value


def _log_rhs(params: GronwallParams):
    b = np.asarray(params.b)
    c = np.asarray(params.c)

    def rhs(r, u):
        one_t = math.exp(r)
        with np.errstate(over="ignore"):
            Y = np.exp(u[0])
            forcing = one_t * Y + 1.0 / one_t
            if params.c_P and params.N:
                forcing += float(np.sum(Y ** b * one_t ** c))
        return [-params.a + params.C_star * forcing]

    return rhs


def _slope(r: np.ndarray, u: np.ndarray) -> float:
    """Log-log slope over the last decade of the record"""
    start = np.searchsorted(r, r[-1] - math.log(10.0))
    start = min(start, r.size - 2)
    return float((u[-1] - u[start]) / (r[-1] - r[start]))


def integrate_inequality(params: GronwallParams, Y0: float, T: float = DEFAULT_HORIZON,
                         points: int = RECORD_POINTS, blowup_cap: float = BLOWUP_CAP) -> GronwallTrajectory:
    """
    Integrate the equality case from Y(0) = Y0 on [0, T]

    Args:
        params: validated inequality parameters
        Y0: initial value, nonnegative
        T: horizon
        points: size of the log-spaced record
        blowup_cap: Y above blowup_cap * max(1, Y0) counts as finite-time blowup

    Returns:
        GronwallTrajectory truncated at the blowup time if one occurs
    """
    if not Y0 >= 0:
        raise ParameterError(f"Y0 must be nonnegative, got {Y0}")
    if not T > 0:
        raise ParameterError(f"horizon must be positive, got {T}")
    r_eval = np.linspace(0.0, math.log1p(T), points)
    t_eval = np.expm1(r_eval)
    if Y0 == 0:
        return GronwallTrajectory(t=t_eval, y=np.zeros_like(t_eval), asymptotic_slope=None, slope_ok=None)

    log_cap = math.log(blowup_cap) + max(0.0, math.log(Y0))

    def blowup(r, u):
        return u[0] - log_cap

    blowup.terminal = True
    blowup.direction = 1

    rhs = _log_rhs(params)
    solution = solve_ivp(
        rhs, (0.0, r_eval[-1]), [math.log(Y0)], method="DOP853",
        t_eval=r_eval, events=blowup, rtol=RTOL, atol=ATOL,
    )
    r, u = solution.t, solution.y[0]
    t = np.expm1(r)
    if solution.status == -1:
        # a step-size collapse while u is still rising is a blowup short of the cap
        reached = solve_ivp(rhs, (0.0, r_eval[-1]), [math.log(Y0)], method="DOP853", rtol=RTOL, atol=ATOL)
        r_last, u_last = float(reached.t[-1]), float(reached.y[0, -1])
        if not rhs(r_last, [u_last])[0] > 0:
            raise NumericError(f"Gronwall integration failed at t={math.expm1(r_last):g}: {solution.message}")
        blowup_time = math.expm1(r_last)
        logger.debug("trajectory from Y0=%g blows up near t=%g (step size collapsed)", Y0, blowup_time)
        return GronwallTrajectory(t=t, y=np.exp(u), blowup_time=blowup_time)

    if solution.status == 1:
        blowup_time = float(np.expm1(solution.t_events[0][0]))
        logger.debug("trajectory from Y0=%g blows up at t=%g", Y0, blowup_time)
        return GronwallTrajectory(t=t, y=np.exp(u), blowup_time=blowup_time)

    slope = _slope(r, u)
    return GronwallTrajectory(
        t=t,
        y=np.exp(u),
        asymptotic_slope=slope,
        slope_ok=bool(abs(slope + params.a) <= SLOPE_TOL * params.a),
    )


def verify_lemma(params: GronwallParams, Y0: float, T: float = DEFAULT_HORIZON,
                 slack: float = ENVELOPE_SLACK) -> bool:
    """True iff the comparison trajectory stays below the envelope on the record"""
    trajectory = integrate_inequality(params, Y0, T)
    if trajectory.blew_up:
        return False
    bound = envelope(params, Y0, trajectory.t)
    return bool(np.all(trajectory.y <= bound * (1 + slack)))


def bootstrap_constant(params: GronwallParams, Z0: float) -> float:
    """Left side of the analytic smallness condition; the envelope follows when it is below 1"""
    a, C = params.a, params.C_star
    value = 4 * C * math.exp(C) / (a - 1) * Z0
    if params.c_P:
        for bi, ci in zip(params.b, params.c):
            value += 2 ** (bi + 1) * C * math.exp(C * bi) / (a * bi - ci) * Z0 ** bi
    return value


def bootstrap_threshold(params: GronwallParams) -> float:
    """Largest Z0 with bootstrap_constant(Z0) <= 1; infinite when C* = 0"""
    if params.C_star == 0:
        return math.inf

    def excess(z):
        return bootstrap_constant(params, z) - 1.0

    def log_excess(x):
        return excess(math.exp(x))

    hi = 0.0
    while log_excess(hi) < 0:
        hi += 1.0
    step = 1.0
    lo = hi - step
    while log_excess(lo) >= 0:
        step *= 2
        lo = hi - step
    return math.exp(brentq(log_excess, lo, hi, xtol=1e-13, rtol=1e-13))


def linear_threshold(params: GronwallParams, T: float = DEFAULT_HORIZON) -> float:
    """
    Exact threshold when c_P = 0

    The equality is then a Bernoulli equation with Y = phi Y0 / (1 - C* Y0 I(t)),
    phi = (1+t)^{-a} e^{C* t/(1+t)}, I = integral of phi, so the envelope holds
    on [0, T] iff Y0 <= 1 / (2 C* I(T)).
    """
    if params.c_P and params.N:
        raise ParameterError("closed-form threshold needs c_P = 0")
    if params.C_star == 0:
        return math.inf
    a, C = params.a, params.C_star

    def integrand(r):
        t = math.expm1(r)
        return math.exp(r) * (1 + t) ** (-a) * math.exp(C * t / (1 + t))

    integral, _ = quad(integrand, 0.0, math.log1p(T), limit=200, epsabs=0.0, epsrel=1e-12)
    return 1.0 / (2 * C * integral)


def find_threshold_M(params: GronwallParams, T: float = DEFAULT_HORIZON, resolution: float = 1e-3,
                     start: float = 1.0, max_expansions: int = 60) -> ThresholdResult:
    """
    Largest Y0 for which the envelope holds on [0, T], by bracketing and bisection

    Args:
        params: validated inequality parameters
        T: horizon
        resolution: relative width of the final bracket
        start: first trial value
        max_expansions: doublings (or halvings) allowed while bracketing

    Returns:
        ThresholdResult; unbounded is set when every tested Y0 satisfied the envelope
    """
    if not 0 < resolution < 1:
        raise ParameterError(f"resolution must lie in (0, 1), got {resolution}")
    evaluations = 0

    def certified(y0: float) -> bool:
        nonlocal evaluations
        evaluations += 1
        return verify_lemma(params, y0, T)

    boot = bootstrap_threshold(params)
    y = start
    if certified(y):
        lo = y
        for _ in range(max_expansions):
            y *= 2
            if not certified(y):
                break
            lo = y
        else:
            logger.info("envelope held up to Y0=%g; threshold unbounded at this scale", lo)
            return ThresholdResult(M=lo, unbounded=True, evaluations=evaluations,
                                   bootstrap_at_half=bootstrap_constant(params, lo / 2),
                                   bootstrap_threshold=boot, bracket=(lo, lo))
        hi = y
    else:
        hi = y
        # analytic threshold is certified by construction
        if 0 < boot < hi and certified(boot):
            lo = boot
        else:
            for _ in range(max_expansions):
                y /= 2
                if certified(y):
                    break
                hi = y
            else:
                raise NumericError(f"no certified Y0 found down to {y:g}")
            lo = y

    logger.debug("threshold bracket [%g, %g]", lo, hi)
    while hi - lo > resolution * lo:
        mid = math.sqrt(lo * hi) if hi > 2 * lo else 0.5 * (lo + hi)
        if certified(mid):
            lo = mid
        else:
            hi = mid

    return ThresholdResult(M=lo, unbounded=False, evaluations=evaluations,
                           bootstrap_at_half=bootstrap_constant(params, lo / 2),
                           bootstrap_threshold=boot, bracket=(lo, hi))


def random_admissible_params(rng: np.random.Generator) -> GronwallParams:
    """Draw a parameter set satisfying the hypotheses: a in (1,4], C* in (0,3], N in {0..3}"""
    a = float(rng.uniform(1.0, 4.0))
    while a <= 1.0:
        a = float(rng.uniform(1.0, 4.0))
    C_star = float(3.0 - rng.uniform(0.0, 3.0))
    N = int(rng.integers(0, 4))
    b = tuple(float(2.0 - rng.uniform(0.0, 2.0)) for _ in range(N))
    c = tuple(float(rng.uniform(-1.0, a * bi)) for bi in b)
    c_P = 1 if N else int(rng.integers(0, 2))
    return GronwallParams(a=a, C_star=C_star, b=b, c=c, c_P=c_P)


def trajectory_table(params: GronwallParams, trajectory: GronwallTrajectory, Y0: float):
    """Rows (t, Y, envelope, margin) with margin = envelope - Y"""
    bound = envelope(params, Y0, trajectory.t)
    return pd.DataFrame({
        "t": trajectory.t,
        "Y": trajectory.y,
        "envelope": bound,
        "margin": bound - trajectory.y,
    })

