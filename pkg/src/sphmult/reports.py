"""Estimate reports and the regression helpers behind them.

Every quantitative bound checked by the package is reported as an
EstimateReport: the claimed exponents/rates, the fitted ones, a PASS/FAIL
verdict, and enough detail to reproduce the fit.  Fitted constants are
reported, never asserted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

__all__ = [
    "EstimateReport",
    "loglog_fit",
    "loglog_fit_2d",
    "exp_rate_fit",
]


@dataclass
class EstimateReport:
    name: str
    claimed: dict[str, float] = field(default_factory=dict)
    fitted: dict[str, float] = field(default_factory=dict)
    passed: bool | None = None
    details: dict[str, Any] = field(default_factory=dict)
    notes: str = ""

    def to_dict(self) -> dict:
        def clean(x):
            if isinstance(x, dict):
                return {k: clean(v) for k, v in x.items()}
            if isinstance(x, (list, tuple)):
                return [clean(v) for v in x]
            if isinstance(x, np.ndarray):
                return clean(x.tolist())
            if isinstance(x, (np.floating, np.integer)):
                return x.item()
            if isinstance(x, complex):
                return {"re": x.real, "im": x.imag}
            return x

        return {
            "name": self.name,
            "claimed": clean(self.claimed),
            "fitted": clean(self.fitted),
            "passed": self.passed,
            "details": clean(self.details),
            "notes": self.notes,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @property
    def verdict(self) -> str:
        if self.passed is None:
            return "INCONCLUSIVE"
        return "PASS" if self.passed else "FAIL"


def loglog_fit(x, y):
    """Slope/intercept/scatter of log|y| against log x; y values must be nonzero."""
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y))
    if np.any(y <= 0.0):
        raise ValueError("log-log fit needs strictly positive |y|")
    lx, ly = np.log(x), np.log(y)
    A = np.stack([lx, np.ones_like(lx)], axis=1)
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    scatter = float(np.sqrt(np.mean(resid**2)))
    return float(coef[0]), float(np.exp(coef[1])), scatter


def loglog_fit_2d(x1, x2, y):
    """Fit log|y| = s1 log x1 + s2 log x2 + c on flattened grids."""
    x1 = np.asarray(x1, dtype=float).ravel()
    x2 = np.asarray(x2, dtype=float).ravel()
    y = np.abs(np.asarray(y)).ravel()
    if np.any(y <= 0.0):
        raise ValueError("log-log fit needs strictly positive |y|")
    A = np.stack([np.log(x1), np.log(x2), np.ones_like(x1)], axis=1)
    coef, *_ = np.linalg.lstsq(A, np.log(y), rcond=None)
    resid = np.log(y) - A @ coef
    scatter = float(np.sqrt(np.mean(resid**2)))
    return float(coef[0]), float(coef[1]), float(np.exp(coef[2])), scatter


def exp_rate_fit(t, y):
    """Fit log|y| = -r t + c; returns (rate r, prefactor, scatter)."""
    t = np.asarray(t, dtype=float)
    y = np.abs(np.asarray(y))
    if np.any(y <= 0.0):
        raise ValueError("exponential-rate fit needs strictly positive |y|")
    A = np.stack([t, np.ones_like(t)], axis=1)
    coef, *_ = np.linalg.lstsq(A, np.log(y), rcond=None)
    resid = np.log(y) - A @ coef
    scatter = float(np.sqrt(np.mean(resid**2)))
    return float(-coef[0]), float(np.exp(coef[1])), scatter
