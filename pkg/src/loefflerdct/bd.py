"""Bjontegaard delta metrics between two rate-distortion curves.

PSNR is fitted as a cubic in ``log10(rate)`` (interpolating for four points,
least squares beyond) and the difference is averaged over the overlapping
interval.  A worse test curve gives a positive BD-Rate and a negative BD-PSNR.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class InsufficientPoints(ValueError):
    pass


class DisjointRanges(ValueError):
    pass


@dataclass(frozen=True)
class RDCurve:
    rates: tuple[float, ...]
    psnr_db: tuple[float, ...]

    def __post_init__(self):
        if len(self.rates) != len(self.psnr_db):
            raise ValueError("rates and PSNR values differ in length")
        if len(self.rates) < 4:
            raise InsufficientPoints(f"need at least 4 points, got {len(self.rates)}")
        if any(r <= 0 for r in self.rates):
            raise ValueError("rates must be positive")
        if any(b <= a for a, b in zip(self.rates, self.rates[1:])):
            raise ValueError("rates must be strictly increasing")

    @classmethod
    def from_points(cls, points: Sequence[tuple[float, float]]) -> "RDCurve":
        pts = sorted(points)
        return cls(tuple(float(p[0]) for p in pts), tuple(float(p[1]) for p in pts))

    @property
    def log_rates(self) -> np.ndarray:
        return np.log10(np.asarray(self.rates))


def _mean_of_fit(x: np.ndarray, y: np.ndarray, lo: float, hi: float) -> float:
    coeffs = np.polyfit(x, y, 3)
    integral = np.polyint(coeffs)
    return float((np.polyval(integral, hi) - np.polyval(integral, lo)) / (hi - lo))


def _overlap(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    lo, hi = max(a.min(), b.min()), min(a.max(), b.max())
    if hi <= lo:
        raise DisjointRanges("curves do not overlap")
    return float(lo), float(hi)


def bd_psnr(reference: RDCurve, test: RDCurve) -> float:
    lr_ref, lr_test = reference.log_rates, test.log_rates
    lo, hi = _overlap(lr_ref, lr_test)
    return (_mean_of_fit(lr_test, np.asarray(test.psnr_db), lo, hi)
            - _mean_of_fit(lr_ref, np.asarray(reference.psnr_db), lo, hi))


def bd_rate(reference: RDCurve, test: RDCurve) -> float:
    p_ref, p_test = np.asarray(reference.psnr_db), np.asarray(test.psnr_db)
    lo, hi = _overlap(p_ref, p_test)
    diff = (_mean_of_fit(p_test, test.log_rates, lo, hi)
            - _mean_of_fit(p_ref, reference.log_rates, lo, hi))
    return float((10.0**diff - 1.0) * 100.0)


def bd_metrics(reference: RDCurve, test: RDCurve) -> tuple[float, float]:
    """``(bd_rate_percent, bd_psnr_db)`` of ``test`` relative to ``reference``."""
    return bd_rate(reference, test), bd_psnr(reference, test)
