from typing import Any, Dict, List, Optional
import math

import numpy as np
import pandas as pd

from ..errors import ParameterError

COLUMNS = ["tau", "t", "quantity", "l", "p", "rescaled_value", "physical_value"]
BLOWUP_LABEL = "blowup"


class NormSeries:
    """Per-(quantity, l, p) norm records along a trajectory"""

    def __init__(self):
        self.rows: List[Dict[str, Any]] = []
        self._last_tau: Dict[tuple, float] = {}
        self.terminated = False

    def add(self, tau: float, quantity: str, ell: float, p: float,
            rescaled_value: float, physical_value: float) -> None:
        """Append one record; tau must increase per (quantity, l, p)"""
        if self.terminated:
            raise ParameterError("series already carries a blowup marker")
        key = (quantity, float(ell), float(p))
        last = self._last_tau.get(key)
        if last is not None and not tau > last:
            raise ParameterError(f"tau must increase for {key}: {tau} after {last}")
        self._last_tau[key] = tau
        self.rows.append({
            "tau": float(tau),
            "t": math.expm1(tau),
            "quantity": quantity,
            "l": float(ell),
            "p": float(p),
            "rescaled_value": float(rescaled_value),
            "physical_value": float(physical_value),
        })

    def mark_blowup(self, tau: float) -> None:
        self.rows.append({
            "tau": float(tau),
            "t": math.expm1(tau),
            "quantity": BLOWUP_LABEL,
            "l": 0.0,
            "p": 0.0,
            "rescaled_value": float("nan"),
            "physical_value": float("nan"),
        })
        self.terminated = True

    def blowup_tau(self) -> Optional[float]:
        for row in self.rows:
            if row["quantity"] == BLOWUP_LABEL:
                return row["tau"]
        return None

    def keys(self) -> List[tuple]:
        """Distinct (quantity, l, p) triples in first-seen order"""
        seen = []
        for row in self.rows:
            key = (row["quantity"], row["l"], row["p"])
            if row["quantity"] != BLOWUP_LABEL and key not in seen:
                seen.append(key)
        return seen

    def select(self, quantity: str, ell: float = 0.0, p: float = 2.0) -> pd.DataFrame:
        frame = self.to_frame()
        mask = (frame["quantity"] == quantity) & np.isclose(frame["l"], ell) & (
            (frame["p"] == p) | np.isclose(frame["p"], p)
        )
        return frame[mask].reset_index(drop=True)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=COLUMNS)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> 'NormSeries':
        missing = [c for c in COLUMNS if c not in frame.columns]
        if missing:
            raise ParameterError(f"series table lacks columns {', '.join(missing)}")
        series = cls()
        for row in frame[COLUMNS].itertuples(index=False):
            if row.quantity == BLOWUP_LABEL:
                series.mark_blowup(row.tau)
            else:
                series.add(row.tau, row.quantity, row.l, row.p, row.rescaled_value, row.physical_value)
        return series

    def __len__(self) -> int:
        return len(self.rows)
