"""
Resolution-stability studies over field ensembles
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..errors import DegenerateInputError, ParameterError
from ..models import Grid, ScalarField
from .ensemble import FieldEnsemble
from .ratios import (
    kato_ponce_exponents,
    ratio_composition,
    ratio_kato_ponce,
    ratio_linfty_interp,
    ratio_moser,
    ratio_tech1,
    ratio_tech2,
    ratio_tech5,
)

logger = logging.getLogger(__name__)

STABILITY_TOL = 0.2

PairRatio = Callable[[ScalarField, ScalarField], float]


def _kato_ponce(sigma: float, s: float) -> PairRatio:
    def ratio(f, g):
        exps = kato_ponce_exponents(f.grid.d, sigma)
        return ratio_kato_ponce(f, g, s, **exps)
    return ratio


INEQUALITIES: Dict[str, PairRatio] = {
    "kato_ponce": lambda f, g: ratio_kato_ponce(f, g, 1.5),
    "kato_ponce_interaction": _kato_ponce(0.5, 1.5),
    "tech1": lambda f, g: ratio_tech1(f, g, 1.5),
    "tech2": lambda f, g: ratio_tech2(f, g, 1.5),
    "tech5": lambda f, g: ratio_tech5(f, g, 0.5),
    "moser": lambda f, g: ratio_moser(f, g, 1.5),
    "moser_small": lambda f, g: ratio_moser(f, g, 0.5),
    "linfty_interp": lambda f, g: ratio_linfty_interp(f, 0.5, 0.25),
    "composition_1.3": lambda f, g: ratio_composition(f, 1.3, 1.0),
    "composition_2": lambda f, g: ratio_composition(f, 2.0, 1.0),
    "composition_2.5": lambda f, g: ratio_composition(f, 2.5, 1.0),
}


@dataclass
class InequalitySummary:
    name: str
    n_low: int
    n_high: int
    max_low: float
    max_high: float
    p95_low: float
    p95_high: float
    delta: float
    ratios: pd.DataFrame

    @property
    def stable(self) -> bool:
        return self.delta < STABILITY_TOL

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "n_low": self.n_low,
            "n_high": self.n_high,
            "max_low": self.max_low,
            "max_high": self.max_high,
            "p95_low": self.p95_low,
            "p95_high": self.p95_high,
            "delta": self.delta,
            "stable": self.stable,
        }


def ensemble_ratios(name: str, grid: Grid, count: int, seed: int, beta: float = 2.0,
                    max_mode: int = 16) -> np.ndarray:
    """Ratio of one inequality for every member pair (f_i, g_i); degenerate members give NaN"""
    if name not in INEQUALITIES:
        raise ParameterError(f"unknown inequality {name}; choose from {sorted(INEQUALITIES)}")
    ratio = INEQUALITIES[name]
    fs = FieldEnsemble.generate(grid, count, seed, beta, max_mode, stream=0)
    gs = FieldEnsemble.generate(grid, count, seed, beta, max_mode, stream=1)
    out = np.empty(count)
    for i, (f, g) in enumerate(zip(fs, gs)):
        try:
            out[i] = ratio(f, g)
        except DegenerateInputError as e:
            logger.warning("%s member %d skipped: %s", name, i, e)
            out[i] = np.nan
    return out


def stability_study(name: str, n_low: int = 128, n_high: int = 256, count: int = 200, seed: int = 0,
                    beta: float = 2.0, max_mode: int = 16, d: int = 1,
                    L: float = 2 * np.pi) -> InequalitySummary:
    """
    Compare ensemble ratios of one inequality at two resolutions

    Args:
        name: key of INEQUALITIES
        n_low, n_high: grid sizes; the same continuous fields are sampled on both
        count: ensemble size
        seed: ensemble seed
        beta: spectral decay exponent
        max_mode: band limit, at most n_low/3
        d: dimension
        L: box length

    Returns:
        InequalitySummary with max, 95th percentile and the relative change of the max
    """
    low = ensemble_ratios(name, Grid(d=d, n=n_low, L=L), count, seed, beta, max_mode)
    high = ensemble_ratios(name, Grid(d=d, n=n_high, L=L), count, seed, beta, max_mode)
    max_low, max_high = float(np.nanmax(low)), float(np.nanmax(high))
    delta = abs(max_high - max_low) / max_low if max_low > 0 else (0.0 if max_high == 0 else np.inf)
    summary = InequalitySummary(
        name=name,
        n_low=n_low,
        n_high=n_high,
        max_low=max_low,
        max_high=max_high,
        p95_low=float(np.nanpercentile(low, 95)),
        p95_high=float(np.nanpercentile(high, 95)),
        delta=float(delta),
        ratios=pd.DataFrame({"member": np.arange(count), "ratio_low": low, "ratio_high": high}),
    )
    logger.info("%s: max ratio %.4g -> %.4g (delta %.3g)", name, max_low, max_high, summary.delta)
    return summary


def run_studies(names: Optional[Sequence[str]] = None, **kwargs) -> List[InequalitySummary]:
    return [stability_study(name, **kwargs) for name in (names or list(INEQUALITIES))]
