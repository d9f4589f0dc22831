from .fisher import FisherComparison, fisher_compare, significance_stars
from .nonparametric import TestResult, kruskal_wallis, wilcoxon_signed_rank
from .regression import CoefficientRow, RegressionResult, ols_fit
from .reports import ReportBundle, build_reports, render_report_files
from .survey import (
    CONDITIONS,
    ENTERTAINMENT_FEATURES,
    IMAGERY_FEATURES,
    SURVEY_FEATURES,
    TIMBRE_FEATURES,
    SurveyRecord,
    aggregate_participant_means,
    load_survey_csv,
)

__all__ = [
    "CONDITIONS",
    "ENTERTAINMENT_FEATURES",
    "IMAGERY_FEATURES",
    "SURVEY_FEATURES",
    "TIMBRE_FEATURES",
    "CoefficientRow",
    "FisherComparison",
    "RegressionResult",
    "ReportBundle",
    "SurveyRecord",
    "TestResult",
    "aggregate_participant_means",
    "build_reports",
    "fisher_compare",
    "kruskal_wallis",
    "load_survey_csv",
    "ols_fit",
    "render_report_files",
    "significance_stars",
    "wilcoxon_signed_rank",
]
