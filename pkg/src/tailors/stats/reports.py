"""Assembles the survey analysis tables from validated records.

Three table families, mirroring the analysis workflow:

* per-condition regressions of imagery on timbre and of entertainment on
  imagery (participant means as observations),
* Fisher z comparisons of matching coefficients between each stem-aware
  condition and the baseline condition C,
* per-feature Wilcoxon signed-rank comparisons between condition pairs,
  split into significant and non-significant rows.

Every p-value in the rendered output carries its significance stars.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DegenerateInput, MissingCell, ReportError, TailorsError
from .fisher import FisherComparison, fisher_compare, significance_stars
from .nonparametric import TestResult, wilcoxon_signed_rank
from .regression import RegressionResult, ols_fit
from .survey import (
    SURVEY_FEATURES,
    SurveyRecord,
    aggregate_participant_means,
    paired_scores,
    participant_ids,
)

# (name, iv survey, dv survey)
DIRECTIONS: tuple[tuple[str, str, str], ...] = (
    ("timbre_imagery", "timbre", "imagery"),
    ("imagery_entertainment", "imagery", "entertainment"),
)
FISHER_PAIRS: tuple[tuple[str, str], ...] = (("A", "C"), ("B", "C"))
WILCOXON_PAIRS: tuple[tuple[str, str], ...] = (("B", "C"), ("A", "C"), ("A", "B"))
SIGNIFICANCE_LEVEL = 0.05


@dataclass(frozen=True)
class FisherRow:
    iv: str
    dv: str
    r_left: float
    r_right: float
    comparison: FisherComparison


@dataclass(frozen=True)
class WilcoxonRow:
    survey: str
    feature: str
    pair: tuple[str, str]
    result: TestResult
    mean_left: float
    mean_right: float

    @property
    def significant(self) -> bool:
        return self.result.p_value < SIGNIFICANCE_LEVEL


@dataclass(frozen=True)
class ReportBundle:
    # direction -> condition -> dv -> fit
    regressions: dict[str, dict[str, dict[str, RegressionResult]]]
    # direction -> condition -> condition number of the shared design
    condition_numbers: dict[str, dict[str, float]]
    # direction -> "X_vs_Y" -> rows
    fisher: dict[str, dict[str, list[FisherRow]]]
    # survey -> "X_vs_Y" -> rows
    wilcoxon: dict[str, dict[str, list[WilcoxonRow]]]
    n_participants: int
    wilcoxon_pairing: str
    drop_ivs: tuple[str, ...]


def _design_matrix(
    records: list[SurveyRecord],
    survey: str,
    features: tuple[str, ...],
    condition: str,
    participants: list[str],
) -> np.ndarray:
    columns = []
    for feature in features:
        means = aggregate_participant_means(records, survey, feature, condition)
        missing = [p for p in participants if p not in means]
        if missing:
            raise MissingCell(
                f"participant {missing[0]} has no ({survey!r}, {feature!r}, "
                f"{condition!r}) records"
            )
        columns.append([means[p] for p in participants])
    return np.array(columns, dtype=np.float64).T


def build_reports(
    records: list[SurveyRecord],
    wilcoxon_pairing: str = "music",
    drop_ivs: tuple[str, ...] = (),
) -> ReportBundle:
    """Run every table's statistics; any cell failure names its table."""
    if not records:
        raise DegenerateInput("no survey records")
    participants = participant_ids(records)
    conditions = sorted({r.condition for r in records})

    regressions: dict[str, dict[str, dict[str, RegressionResult]]] = {}
    condition_numbers: dict[str, dict[str, float]] = {}
    for direction, iv_survey, dv_survey in DIRECTIONS:
        iv_features = tuple(f for f in SURVEY_FEATURES[iv_survey] if f not in drop_ivs)
        if not iv_features:
            raise DegenerateInput(f"{direction}: every predictor was dropped")
        regressions[direction] = {}
        condition_numbers[direction] = {}
        for condition in conditions:
            try:
                design = _design_matrix(
                    records, iv_survey, iv_features, condition, participants
                )
                fits: dict[str, RegressionResult] = {}
                for dv in SURVEY_FEATURES[dv_survey]:
                    means = aggregate_participant_means(records, dv_survey, dv, condition)
                    missing = [p for p in participants if p not in means]
                    if missing:
                        raise MissingCell(
                            f"participant {missing[0]} has no ({dv_survey!r}, {dv!r}, "
                            f"{condition!r}) records"
                        )
                    response = np.array([means[p] for p in participants])
                    fits[dv] = ols_fit(design, response, iv_names=iv_features)
            except TailorsError as exc:
                raise ReportError(
                    f"regression table {direction}, condition {condition}: {exc}"
                ) from exc
            regressions[direction][condition] = fits
            condition_numbers[direction][condition] = fits[
                SURVEY_FEATURES[dv_survey][0]
            ].condition_number

    fisher: dict[str, dict[str, list[FisherRow]]] = {}
    n = len(participants)
    for direction, iv_survey, dv_survey in DIRECTIONS:
        iv_features = tuple(f for f in SURVEY_FEATURES[iv_survey] if f not in drop_ivs)
        fisher[direction] = {}
        for left, right in FISHER_PAIRS:
            if left not in regressions[direction] or right not in regressions[direction]:
                continue
            rows: list[FisherRow] = []
            for dv in SURVEY_FEATURES[dv_survey]:
                for iv in iv_features:
                    r_left = regressions[direction][left][dv].coefficient(iv).coefficient
                    r_right = regressions[direction][right][dv].coefficient(iv).coefficient
                    try:
                        comparison = fisher_compare(r_left, n, r_right, n)
                    except TailorsError as exc:
                        raise ReportError(
                            f"fisher table {direction} {left}_vs_{right}, "
                            f"iv {iv}, dv {dv}: {exc}"
                        ) from exc
                    rows.append(
                        FisherRow(iv=iv, dv=dv, r_left=r_left, r_right=r_right,
                                  comparison=comparison)
                    )
            fisher[direction][f"{left}_vs_{right}"] = rows

    wilcoxon: dict[str, dict[str, list[WilcoxonRow]]] = {}
    for survey, features in SURVEY_FEATURES.items():
        wilcoxon[survey] = {}
        for left, right in WILCOXON_PAIRS:
            if left not in conditions or right not in conditions:
                continue
            rows = []
            for feature in features:
                try:
                    pairs = paired_scores(
                        records, survey, feature, left, right, pairing=wilcoxon_pairing
                    )
                    result = wilcoxon_signed_rank(pairs)
                except TailorsError as exc:
                    raise ReportError(
                        f"wilcoxon table {survey} {left}_vs_{right}, "
                        f"feature {feature}: {exc}"
                    ) from exc
                rows.append(
                    WilcoxonRow(
                        survey=survey,
                        feature=feature,
                        pair=(left, right),
                        result=result,
                        mean_left=float(np.mean([p[0] for p in pairs])),
                        mean_right=float(np.mean([p[1] for p in pairs])),
                    )
                )
            wilcoxon[survey][f"{left}_vs_{right}"] = rows

    return ReportBundle(
        regressions=regressions,
        condition_numbers=condition_numbers,
        fisher=fisher,
        wilcoxon=wilcoxon,
        n_participants=n,
        wilcoxon_pairing=wilcoxon_pairing,
        drop_ivs=tuple(drop_ivs),
    )


# --- rendering ------------------------------------------------------------


def _fit_dict(fit: RegressionResult) -> dict:
    return {
        "intercept": fit.intercept,
        "intercept_std_err": fit.intercept_std_err,
        "r_squared": fit.r_squared,
        "adj_r_squared": fit.adj_r_squared,
        "f_statistic": fit.f_statistic,
        "f_p_value": fit.f_p_value,
        "f_stars": significance_stars(fit.f_p_value),
        "df_model": fit.df_model,
        "df_resid": fit.df_resid,
        "n_obs": fit.n_obs,
        "condition_number": fit.condition_number,
        "coefficients": {
            row.iv_name: {
                "coefficient": row.coefficient,
                "std_err": row.std_err,
                "t_value": row.t_value,
                "p_value": row.p_value,
                "stars": significance_stars(row.p_value),
            }
            for row in fit.rows
        },
    }


def regression_table_dict(bundle: ReportBundle, direction: str) -> dict:
    return {
        "table": f"regression_{direction}",
        "n_participants": bundle.n_participants,
        "drop_ivs": list(bundle.drop_ivs),
        "conditions": {
            condition: {
                "condition_number": bundle.condition_numbers[direction][condition],
                "fits": {dv: _fit_dict(fit) for dv, fit in fits.items()},
            }
            for condition, fits in bundle.regressions[direction].items()
        },
    }


def fisher_table_dict(bundle: ReportBundle, direction: str, pair_key: str) -> dict:
    left, right = pair_key.split("_vs_")
    return {
        "table": f"fisher_{direction}_{pair_key}",
        "left_condition": left,
        "right_condition": right,
        "n_per_side": bundle.n_participants,
        "rows": [
            {
                "iv": row.iv,
                "dv": row.dv,
                "r_left": row.r_left,
                "r_right": row.r_right,
                "z_stat": row.comparison.z_stat,
                "p_value": row.comparison.p_value,
                "stars": row.comparison.stars,
            }
            for row in bundle.fisher[direction][pair_key]
        ],
    }


def wilcoxon_table_dict(bundle: ReportBundle, survey: str) -> dict:
    def row_dict(row: WilcoxonRow) -> dict:
        return {
            "feature": row.feature,
            "pair": f"{row.pair[0]}_vs_{row.pair[1]}",
            "statistic": row.result.statistic,
            "p_value": row.result.p_value,
            "stars": significance_stars(row.result.p_value),
            "n": row.result.n,
            "mean_left": row.mean_left,
            "mean_right": row.mean_right,
            "significant": row.significant,
        }

    return {
        "table": f"wilcoxon_{survey}",
        "pairing": bundle.wilcoxon_pairing,
        "pairs": {
            pair_key: {
                "significant": [row_dict(r) for r in rows if r.significant],
                "not_significant": [row_dict(r) for r in rows if not r.significant],
            }
            for pair_key, rows in bundle.wilcoxon[survey].items()
        },
    }


def _format_columns(header: list[str], body: list[list[str]]) -> list[str]:
    widths = [len(h) for h in header]
    for row in body:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip())
    return lines


def _num(x: float, digits: int = 4) -> str:
    return f"{x:.{digits}f}"


def _p_str(p: float) -> str:
    return f"{p:.4f}" if p >= 0.0001 else f"{p:.2e}"


def regression_table_text(bundle: ReportBundle, direction: str) -> str:
    chunks: list[str] = [f"regression: {direction.replace('_', ' -> ')}"]
    chunks.append(f"observations per fit: {bundle.n_participants} participant means")
    if bundle.drop_ivs:
        chunks.append(f"dropped predictors: {', '.join(bundle.drop_ivs)}")
    for condition, fits in bundle.regressions[direction].items():
        dvs = list(fits)
        ivs = [row.iv_name for row in fits[dvs[0]].rows]
        chunks.append("")
        chunks.append(
            f"condition {condition}  "
            f"(design condition number {_num(bundle.condition_numbers[direction][condition], 1)})"
        )
        header = ["iv"] + dvs
        body = []
        for iv in ivs:
            cells = [iv]
            for dv in dvs:
                row = fits[dv].coefficient(iv)
                cells.append(f"{_num(row.coefficient)}{significance_stars(row.p_value)}")
            body.append(cells)
        chunks.extend(_format_columns(header, body))
        stat_body = []
        for label, getter in (
            ("r_squared", lambda f: _num(f.r_squared)),
            ("adj_r_squared", lambda f: _num(f.adj_r_squared)),
            (
                "F(df_model, df_resid)",
                lambda f: f"{_num(f.f_statistic, 2)} ({f.df_model}, {f.df_resid})",
            ),
            ("F p-value", lambda f: _p_str(f.f_p_value) + significance_stars(f.f_p_value)),
        ):
            stat_body.append([label] + [getter(fits[dv]) for dv in dvs])
        chunks.extend(_format_columns(["fit statistic"] + dvs, stat_body))
    chunks.append("")
    chunks.append("stars: * p<0.05, ** p<0.01, *** p<0.001")
    return "\n".join(chunks) + "\n"


def fisher_table_text(bundle: ReportBundle, direction: str, pair_key: str) -> str:
    left, right = pair_key.split("_vs_")
    rows = bundle.fisher[direction][pair_key]
    header = ["dv", "iv", f"coef {left}", f"coef {right}", "z", "p", "sig"]
    body = [
        [
            row.dv,
            row.iv,
            _num(row.r_left),
            _num(row.r_right),
            _num(row.comparison.z_stat, 3),
            _p_str(row.comparison.p_value),
            row.comparison.stars,
        ]
        for row in rows
    ]
    lines = [
        f"coefficient comparison: {direction.replace('_', ' -> ')}, {left} vs {right}",
        f"n per side: {bundle.n_participants}",
        "",
    ]
    lines.extend(_format_columns(header, body))
    lines.append("")
    lines.append("stars: * p<0.05, ** p<0.01, *** p<0.001")
    return "\n".join(lines) + "\n"


def wilcoxon_table_text(bundle: ReportBundle, survey: str) -> str:
    lines = [f"wilcoxon signed-rank: {survey} survey", f"pairing: {bundle.wilcoxon_pairing}"]
    for pair_key, rows in bundle.wilcoxon[survey].items():
        left, right = pair_key.split("_vs_")
        for title, subset in (
            (f"{left} vs {right}: significant (p < {SIGNIFICANCE_LEVEL})",
             [r for r in rows if r.significant]),
            (f"{left} vs {right}: not significant",
             [r for r in rows if not r.significant]),
        ):
            lines.append("")
            lines.append(title)
            if not subset:
                lines.append("(none)")
                continue
            header = ["feature", "W", "n", "p", "sig", f"mean {left}", f"mean {right}"]
            body = [
                [
                    r.feature,
                    _num(r.result.statistic, 1),
                    str(r.result.n),
                    _p_str(r.result.p_value),
                    significance_stars(r.result.p_value),
                    _num(r.mean_left, 3),
                    _num(r.mean_right, 3),
                ]
                for r in subset
            ]
            lines.extend(_format_columns(header, body))
    lines.append("")
    lines.append("stars: * p<0.05, ** p<0.01, *** p<0.001")
    return "\n".join(lines) + "\n"


def render_report_files(bundle: ReportBundle, out_dir: str | Path) -> list[Path]:
    """Write each table as .json and .txt; returns every path written."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(stem: str, payload: dict, text: str) -> None:
        json_path = out_dir / f"{stem}.json"
        json_path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        text_path = out_dir / f"{stem}.txt"
        text_path.write_text(text, encoding="utf-8")
        written.extend([json_path, text_path])

    for direction, _, _ in DIRECTIONS:
        emit(
            f"regression_{direction}",
            regression_table_dict(bundle, direction),
            regression_table_text(bundle, direction),
        )
        for pair_key in bundle.fisher[direction]:
            emit(
                f"fisher_{direction}_{pair_key}",
                fisher_table_dict(bundle, direction, pair_key),
                fisher_table_text(bundle, direction, pair_key),
            )
    for survey in SURVEY_FEATURES:
        if bundle.wilcoxon.get(survey):
            emit(
                f"wilcoxon_{survey}",
                wilcoxon_table_dict(bundle, survey),
                wilcoxon_table_text(bundle, survey),
            )
    return written
