"""Rank-based tests: Kruskal-Wallis and the Wilcoxon signed-rank test.

Both tests rank ties as midranks. Wilcoxon p-values come from the exact
null distribution of the signed rank sum for n <= 25 pairs, and from a
normal approximation with tie and continuity corrections above that.
scipy supplies only distribution tails here, never the statistics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats as _scipy_stats

from ..errors import AllZeroDifferences, DegenerateInput

EXACT_LIMIT = 25


@dataclass(frozen=True)
class TestResult:
    method: str
    statistic: float
    p_value: float
    n: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.statistic) or self.statistic < 0:
            raise ValueError("statistic must be finite and non-negative")
        if not 0.0 < self.p_value <= 1.0:
            raise ValueError("p_value must lie in (0, 1]")
        if self.n < 1:
            raise ValueError("n must be positive")


def midranks(values: Sequence[float] | np.ndarray) -> np.ndarray:
    """1-based ranks with tied values sharing the mean of their positions."""
    arr = np.asarray(values, dtype=np.float64)
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(arr.size, dtype=np.float64)
    i = 0
    while i < arr.size:
        j = i
        while j + 1 < arr.size and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _tie_counts(values: np.ndarray) -> np.ndarray:
    _, counts = np.unique(values, return_counts=True)
    return counts


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> TestResult:
    """H statistic with tie correction; p from the chi-square upper tail.

    A pooled sample with no variation at all yields H = 0 and p = 1.
    """
    arrays = [np.asarray(g, dtype=np.float64) for g in groups]
    if len(arrays) < 2:
        raise DegenerateInput("need at least two groups")
    if any(a.size == 0 for a in arrays):
        raise DegenerateInput("every group needs at least one observation")
    pooled = np.concatenate(arrays)
    if not np.all(np.isfinite(pooled)):
        raise DegenerateInput("observations must be finite")
    n_total = pooled.size
    if n_total < 3:
        raise DegenerateInput("need at least three observations overall")

    ranks = midranks(pooled)
    h = 0.0
    offset = 0
    for a in arrays:
        rank_sum = float(np.sum(ranks[offset : offset + a.size]))
        h += rank_sum**2 / a.size
        offset += a.size
    h = 12.0 / (n_total * (n_total + 1)) * h - 3.0 * (n_total + 1)

    counts = _tie_counts(pooled)
    correction = 1.0 - float(np.sum(counts**3 - counts)) / (n_total**3 - n_total)
    if correction == 0.0:
        h = 0.0  # all observations identical
    else:
        h = max(0.0, h / correction)
    df = len(arrays) - 1
    p = float(_scipy_stats.chi2.sf(h, df)) if h > 0.0 else 1.0
    return TestResult(method="kruskal_wallis", statistic=h, p_value=p, n=n_total)


def _exact_signed_rank_p(ranks: np.ndarray, w_small: float) -> float:
    """Two-sided tail mass of the exact signed-rank-sum null distribution.

    Works on doubled ranks so midranks (multiples of 0.5) stay integral.
    counts[s] is the number of sign patterns whose doubled positive-rank
    sum equals s; built by the standard subset-sum recurrence.
    """
    doubled = np.rint(2.0 * ranks).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts += shifted
    w2 = int(np.rint(2.0 * w_small))
    low_tail = float(counts[: w2 + 1].sum())
    high_tail = float(counts[total - w2 :].sum())
    return min(1.0, (low_tail + high_tail) / 2.0 ** len(ranks))


def wilcoxon_signed_rank(pairs: Iterable[tuple[float, float]]) -> TestResult:
    """Two-sided signed-rank test on (x, y) pairs.

    Zero differences are discarded before ranking. The statistic is the
    smaller of the positive and negative rank sums.
    """
    pair_list = [(float(x), float(y)) for x, y in pairs]
    if not pair_list:
        raise DegenerateInput("no pairs given")
    diffs = np.array([x - y for x, y in pair_list])
    if not np.all(np.isfinite(diffs)):
        raise DegenerateInput("differences must be finite")
    diffs = diffs[diffs != 0.0]
    if diffs.size == 0:
        raise AllZeroDifferences("every paired difference is zero")

    ranks = midranks(np.abs(diffs))
    w_plus = float(np.sum(ranks[diffs > 0]))
    w_minus = float(np.sum(ranks[diffs < 0]))
    w = min(w_plus, w_minus)
    n = diffs.size

    if n <= EXACT_LIMIT:
        p = _exact_signed_rank_p(ranks, w)
    else:
        mean = n * (n + 1) / 4.0
        counts = _tie_counts(np.abs(diffs))
        tie_term = float(np.sum(counts**3 - counts))
        variance = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
        if variance <= 0.0:
            raise DegenerateInput("zero variance in signed ranks")
        centered = w - mean
        centered -= 0.5 * np.sign(centered)  # continuity correction
        z = centered / np.sqrt(variance)
        p = min(1.0, 2.0 * float(_scipy_stats.norm.sf(abs(z))))
    return TestResult(method="wilcoxon_signed_rank", statistic=w, p_value=p, n=n)
