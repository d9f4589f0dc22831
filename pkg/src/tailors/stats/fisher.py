"""Comparison of two correlation-scale coefficients via the atanh transform."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import stats as _scipy_stats

from ..errors import CoefficientOutOfRange


def significance_stars(p_value: float) -> str:
    """Strict thresholds: *** below 0.001, ** below 0.01, * below 0.05."""
    if not 0.0 <= p_value <= 1.0:
        raise ValueError(f"p_value must lie in [0, 1], got {p_value}")
    if p_value < 0.001:
        return "***"
    if p_value < 0.01:
        return "**"
    if p_value < 0.05:
        return "*"
    return ""


@dataclass(frozen=True)
class FisherComparison:
    r1: float
    n1: int
    r2: float
    n2: int
    z_stat: float
    p_value: float
    stars: str

    def __post_init__(self) -> None:
        if not math.isfinite(self.z_stat):
            raise ValueError("z_stat must be finite")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError("p_value must lie in [0, 1]")
        if self.stars != significance_stars(self.p_value):
            raise ValueError("stars must match the p_value thresholds")


def fisher_compare(r1: float, n1: int, r2: float, n2: int) -> FisherComparison:
    """Two-sided z test of whether two independent coefficients differ.

    z = (atanh(r1) - atanh(r2)) / sqrt(1/(n1-3) + 1/(n2-3)). Sample sizes
    must exceed 3 and both coefficients must lie strictly inside (-1, 1).
    """
    if n1 <= 3 or n2 <= 3:
        raise ValueError("both sample sizes must exceed 3")
    for label, r in (("r1", r1), ("r2", r2)):
        if not math.isfinite(r) or abs(r) >= 1.0:
            raise CoefficientOutOfRange(f"{label}={r} not strictly inside (-1, 1)")
    z1 = math.atanh(r1)
    z2 = math.atanh(r2)
    se = math.sqrt(1.0 / (n1 - 3) + 1.0 / (n2 - 3))
    z = (z1 - z2) / se
    p = min(1.0, 2.0 * float(_scipy_stats.norm.sf(abs(z))))
    return FisherComparison(
        r1=float(r1), n1=n1, r2=float(r2), n2=n2,
        z_stat=z, p_value=p, stars=significance_stars(p),
    )
