"""Ordinary least squares with the summary statistics the tables report.

The solver is written against the normal-equation quantities directly
(QR-backed lstsq for the fit, explicit covariance for the errors) so the
reported t, p, R-squared and F values are auditable. scipy contributes
only the t and F distribution tails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as _scipy_stats

from ..errors import RankDeficient


@dataclass(frozen=True)
class CoefficientRow:
    iv_name: str
    coefficient: float
    std_err: float
    t_value: float
    p_value: float

    def __post_init__(self) -> None:
        if self.std_err < 0:
            raise ValueError("std_err must be non-negative")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError("p_value must lie in [0, 1]")


@dataclass(frozen=True)
class RegressionResult:
    rows: tuple[CoefficientRow, ...]
    intercept: float
    intercept_std_err: float
    r_squared: float
    adj_r_squared: float
    f_statistic: float
    f_p_value: float
    df_model: int
    df_resid: int
    condition_number: float
    n_obs: int

    def __post_init__(self) -> None:
        if self.df_model != len(self.rows):
            raise ValueError("df_model must equal the predictor count")
        if self.df_resid < 1:
            raise ValueError("df_resid must be at least 1")
        if self.n_obs != self.df_model + self.df_resid + 1:
            raise ValueError("n_obs must equal df_model + df_resid + 1")
        if not -1e-12 <= self.r_squared <= 1.0 + 1e-12:
            raise ValueError("r_squared must lie in [0, 1]")
        if self.adj_r_squared > self.r_squared + 1e-12:
            raise ValueError("adj_r_squared cannot exceed r_squared")

    def coefficient(self, iv_name: str) -> CoefficientRow:
        for row in self.rows:
            if row.iv_name == iv_name:
                return row
        raise KeyError(iv_name)


def ols_fit(
    x: np.ndarray,
    y: np.ndarray,
    iv_names: Sequence[str] | None = None,
) -> RegressionResult:
    """Fit y on x with an intercept; raises RankDeficient when columns collapse.

    Needs n >= k + 2 observations so the residual variance has at least
    one degree of freedom.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, np.newaxis]
    if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.size:
        raise ValueError("x must be (n, k) and y must be (n,)")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("design and response must be finite")
    n, k = x.shape
    if iv_names is None:
        iv_names = [f"x{i + 1}" for i in range(k)]
    if len(iv_names) != k:
        raise ValueError("iv_names length must match the column count")
    if n < k + 2:
        raise ValueError(f"need at least {k + 2} observations for {k} predictors, got {n}")

    design = np.hstack([np.ones((n, 1)), x])
    rank = int(np.linalg.matrix_rank(design))
    if rank < k + 1:
        raise RankDeficient(f"design matrix rank {rank} < {k + 1} columns")

    beta, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - design @ beta
    rss = float(residuals @ residuals)
    df_resid = n - k - 1
    sigma2 = rss / df_resid
    covariance = sigma2 * np.linalg.inv(design.T @ design)
    std_errs = np.sqrt(np.diag(covariance))

    with np.errstate(divide="ignore", invalid="ignore"):
        t_values = np.where(std_errs > 0, beta / np.where(std_errs > 0, std_errs, 1.0), np.inf)
    p_values = 2.0 * _scipy_stats.t.sf(np.abs(t_values), df_resid)

    tss = float(np.sum((y - y.mean()) ** 2))
    if tss > 0.0:
        r_squared = 1.0 - rss / tss
    else:
        r_squared = 1.0 if rss <= 1e-30 else 0.0
    r_squared = min(1.0, max(0.0, r_squared))
    adj = 1.0 - (1.0 - r_squared) * (n - 1) / df_resid
    if r_squared < 1.0:
        f_stat = (r_squared / k) / ((1.0 - r_squared) / df_resid)
    else:
        f_stat = float("inf")
    f_p = float(_scipy_stats.f.sf(f_stat, k, df_resid)) if np.isfinite(f_stat) else 0.0

    rows = tuple(
        CoefficientRow(
            iv_name=str(iv_names[i]),
            coefficient=float(beta[i + 1]),
            std_err=float(std_errs[i + 1]),
            t_value=float(t_values[i + 1]),
            p_value=float(min(1.0, p_values[i + 1])),
        )
        for i in range(k)
    )
    return RegressionResult(
        rows=rows,
        intercept=float(beta[0]),
        intercept_std_err=float(std_errs[0]),
        r_squared=float(r_squared),
        adj_r_squared=float(adj),
        f_statistic=float(f_stat),
        f_p_value=f_p,
        df_model=k,
        df_resid=df_resid,
        condition_number=float(np.linalg.cond(design)),
        n_obs=n,
    )
