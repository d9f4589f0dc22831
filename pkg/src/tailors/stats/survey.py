"""Survey CSV ingestion with strict validation, plus cell aggregation.

Expected columns: participant_id, music_id, condition, survey, feature,
score. Conditions are A, B, C; scores are integers 1..7; each feature
word must belong to the vocabulary of its survey.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from ..errors import (
    BadHeader,
    DuplicateKey,
    InvalidCondition,
    InvalidFeature,
    InvalidMusicId,
    MissingCell,
    ScoreOutOfRange,
    SurveyFormatError,
)

TIMBRE_FEATURES = (
    "hard", "soft", "deep", "shallow", "bright", "dark",
    "warm", "cold", "rough", "smooth", "sharp", "blunt",
)
IMAGERY_FEATURES = ("flow", "force", "interior", "movement", "wandering")
ENTERTAINMENT_FEATURES = (
    "stimulated", "dancing", "entertained", "energized",
    "moving", "animated", "excited", "rhythm",
)
SURVEY_FEATURES: dict[str, tuple[str, ...]] = {
    "timbre": TIMBRE_FEATURES,
    "imagery": IMAGERY_FEATURES,
    "entertainment": ENTERTAINMENT_FEATURES,
}
CONDITIONS = ("A", "B", "C")
SCORE_MIN, SCORE_MAX = 1, 7

EXPECTED_HEADER = ("participant_id", "music_id", "condition", "survey", "feature", "score")


@dataclass(frozen=True)
class SurveyRecord:
    participant_id: str
    music_id: int
    condition: str
    survey: str
    feature: str
    score: int

    def __post_init__(self) -> None:
        if not self.participant_id:
            raise SurveyFormatError("participant_id must be non-empty")
        if self.music_id < 1:
            raise InvalidMusicId(f"music_id must be a positive integer, got {self.music_id}")
        if self.condition not in CONDITIONS:
            raise InvalidCondition(f"condition {self.condition!r}, expected one of {CONDITIONS}")
        vocabulary = SURVEY_FEATURES.get(self.survey)
        if vocabulary is None:
            raise InvalidFeature(
                f"survey {self.survey!r}, expected one of {tuple(SURVEY_FEATURES)}"
            )
        if self.feature not in vocabulary:
            raise InvalidFeature(f"feature {self.feature!r} not in the {self.survey} vocabulary")
        if not SCORE_MIN <= self.score <= SCORE_MAX:
            raise ScoreOutOfRange(
                f"score {self.score} outside [{SCORE_MIN}, {SCORE_MAX}]"
            )

    @property
    def key(self) -> tuple[str, int, str, str, str]:
        return (self.participant_id, self.music_id, self.condition, self.survey, self.feature)


def load_survey_csv(path: str | Path) -> list[SurveyRecord]:
    """Parse and validate; every failure names its line number."""
    path = Path(path)
    records: list[SurveyRecord] = []
    seen: set[tuple] = set()
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise BadHeader(f"{path}: file is empty") from None
        if tuple(h.strip() for h in header) != EXPECTED_HEADER:
            raise BadHeader(f"{path}: header {header}, expected {list(EXPECTED_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(EXPECTED_HEADER):
                raise SurveyFormatError(
                    f"line {lineno}: {len(row)} columns, expected {len(EXPECTED_HEADER)}"
                )
            participant, music_raw, condition, survey, feature, score_raw = (
                cell.strip() for cell in row
            )
            try:
                music_id = int(music_raw)
            except ValueError:
                raise InvalidMusicId(f"line {lineno}: music_id {music_raw!r}") from None
            try:
                score = int(score_raw)
            except ValueError:
                raise ScoreOutOfRange(f"line {lineno}: score {score_raw!r}") from None
            try:
                record = SurveyRecord(
                    participant_id=participant,
                    music_id=music_id,
                    condition=condition,
                    survey=survey,
                    feature=feature,
                    score=score,
                )
            except SurveyFormatError as exc:
                raise type(exc)(f"line {lineno}: {exc}") from None
            if record.key in seen:
                raise DuplicateKey(f"line {lineno}: repeated key {record.key}")
            seen.add(record.key)
            records.append(record)
    return records


def participant_ids(records: list[SurveyRecord]) -> list[str]:
    return sorted({r.participant_id for r in records})


def aggregate_participant_means(
    records: list[SurveyRecord],
    survey: str,
    feature: str,
    condition: str,
) -> dict[str, float]:
    """Per-participant mean score over musics for one (survey, feature, condition)."""
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for record in records:
        if (record.survey, record.feature, record.condition) == (survey, feature, condition):
            sums[record.participant_id] = sums.get(record.participant_id, 0.0) + record.score
            counts[record.participant_id] = counts.get(record.participant_id, 0) + 1
    if not sums:
        raise MissingCell(f"no records for ({survey!r}, {feature!r}, {condition!r})")
    return {p: sums[p] / counts[p] for p in sorted(sums)}


def paired_scores(
    records: list[SurveyRecord],
    survey: str,
    feature: str,
    condition_x: str,
    condition_y: str,
    pairing: str = "music",
) -> list[tuple[float, float]]:
    """Score pairs for a Wilcoxon comparison of two conditions.

    pairing="music" pairs raw scores per (participant, music);
    pairing="participant" pairs per-participant means.
    """
    if pairing == "participant":
        means_x = aggregate_participant_means(records, survey, feature, condition_x)
        means_y = aggregate_participant_means(records, survey, feature, condition_y)
        shared = sorted(set(means_x) & set(means_y))
        if not shared:
            raise MissingCell(
                f"no participants shared between {condition_x} and {condition_y} "
                f"for ({survey!r}, {feature!r})"
            )
        return [(means_x[p], means_y[p]) for p in shared]
    if pairing != "music":
        raise ValueError(f"unknown pairing {pairing!r}")

    side_x: dict[tuple[str, int], int] = {}
    side_y: dict[tuple[str, int], int] = {}
    for record in records:
        if (record.survey, record.feature) != (survey, feature):
            continue
        unit = (record.participant_id, record.music_id)
        if record.condition == condition_x:
            side_x[unit] = record.score
        elif record.condition == condition_y:
            side_y[unit] = record.score
    if not side_x or not side_y:
        raise MissingCell(
            f"no records for ({survey!r}, {feature!r}) under "
            f"{condition_x if not side_x else condition_y}"
        )
    unmatched = set(side_x) ^ set(side_y)
    if unmatched:
        example = sorted(unmatched)[0]
        raise MissingCell(
            f"({survey!r}, {feature!r}): unit {example} present in only one of "
            f"{condition_x}/{condition_y}"
        )
    return [(float(side_x[u]), float(side_y[u])) for u in sorted(side_x)]
