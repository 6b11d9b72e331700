"""Video corpus data model, ingestion, dedup, language filter, and summary stats.

Records are persisted as UTF-8 line-delimited JSON, one record per line,
field names snake_case. Fields the library does not know about are kept in
``extra`` and written back verbatim, so round-tripping a corpus file is
lossless.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Optional

__all__ = [
    "VideoRecord",
    "ActorAnnotation",
    "LabelSet",
    "SummaryTable",
    "IngestReport",
    "FixtureCatalogClient",
    "LiveCatalogClient",
    "ingest_search",
    "dedupe",
    "filter_language",
    "summarize",
    "ascii_ratio",
    "read_corpus",
    "write_corpus",
    "read_annotations",
    "write_annotations",
    "read_labels",
    "write_labels",
]

GENDERS = ("male", "female", "unknown")
AGE_BRACKETS = ("under20", "b20_30", "b30_40", "b40_50", "over50", "unknown")
DETECTION_SOURCES = ("face", "speech", "manual")
LABEL_VALUES = ("high", "low", "unlabeled")


class CorpusError(ValueError):
    """Raised for malformed records or inconsistent corpus inputs."""


@dataclass
class VideoRecord:
    """One video's metadata as returned by the catalog search endpoint."""

    video_id: str
    channel_id: str = ""
    publish_time: Optional[datetime] = None
    title: str = ""
    description: str = ""
    tags: list[str] = field(default_factory=list)
    duration_seconds: int = 0
    definition: str = "sd"
    captions_available: bool = False
    rating: Optional[float] = None
    view_count: int = 0
    like_count: int = 0
    dislike_count: int = 0
    comment_count: int = 0
    language: Optional[str] = None
    search_term: Optional[str] = None
    search_rank: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.video_id:
            raise CorpusError("video_id must be non-empty")
        for name in ("duration_seconds", "view_count", "like_count",
                     "dislike_count", "comment_count"):
            if getattr(self, name) < 0:
                raise CorpusError(f"{name} must be >= 0 ({self.video_id})")
        if self.definition not in ("sd", "hd"):
            raise CorpusError(f"definition must be sd|hd, got {self.definition!r}")
        if self.search_rank is not None and not (1 <= self.search_rank <= 50):
            raise CorpusError(f"search_rank out of [1, 50]: {self.search_rank}")

    @property
    def text(self) -> str:
        """Title, description and tags joined, the metadata text block."""
        return " ".join([self.title, self.description, " ".join(self.tags)]).strip()

    def to_json_dict(self) -> dict:
        d = {
            "video_id": self.video_id,
            "channel_id": self.channel_id,
            "publish_time": self.publish_time.isoformat() if self.publish_time else None,
            "title": self.title,
            "description": self.description,
            "tags": self.tags,
            "duration_seconds": self.duration_seconds,
            "definition": self.definition,
            "captions_available": self.captions_available,
            "rating": self.rating,
            "view_count": self.view_count,
            "like_count": self.like_count,
            "dislike_count": self.dislike_count,
            "comment_count": self.comment_count,
            "language": self.language,
        }
        if self.search_rank is not None:
            d["search_rank"] = {"search_term": self.search_term, "rank": self.search_rank}
        d.update(self.extra)
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "VideoRecord":
        d = dict(d)
        rank = d.pop("search_rank", None)
        term, rank_val = None, None
        if isinstance(rank, dict):
            term, rank_val = rank.get("search_term"), rank.get("rank")
        elif isinstance(rank, (list, tuple)):
            term, rank_val = rank[0], rank[1]
        pt = d.pop("publish_time", None)
        if isinstance(pt, str):
            pt = datetime.fromisoformat(pt)
            if pt.tzinfo is None:
                pt = pt.replace(tzinfo=timezone.utc)
        known = {
            name: d.pop(name)
            for name in ("video_id", "channel_id", "title", "description", "tags",
                         "duration_seconds", "definition", "captions_available",
                         "rating", "view_count", "like_count", "dislike_count",
                         "comment_count", "language")
            if name in d
        }
        return cls(publish_time=pt, search_term=term, search_rank=rank_val,
                   extra=d, **known)


@dataclass
class ActorAnnotation:
    """Precomputed demographic annotation for the people appearing in a video."""

    video_id: str
    actor_count: int
    face_visible: bool
    gender: str = "unknown"
    age_bracket: str = "unknown"
    detection_source: str = "manual"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.video_id:
            raise CorpusError("video_id must be non-empty")
        if self.actor_count < 0:
            raise CorpusError("actor_count must be >= 0")
        if self.gender not in GENDERS:
            raise CorpusError(f"gender must be one of {GENDERS}")
        if self.age_bracket not in AGE_BRACKETS:
            raise CorpusError(f"age_bracket must be one of {AGE_BRACKETS}")
        if self.detection_source not in DETECTION_SOURCES:
            raise CorpusError(f"detection_source must be one of {DETECTION_SOURCES}")
        if self.actor_count == 0 and self.face_visible:
            raise CorpusError(f"face_visible requires actor_count > 0 ({self.video_id})")
        # A modality can only leave an attribute unknown when it cannot
        # observe it: face detection yields both age and gender, speech
        # yields gender only. Manual review may record either attribute as
        # indeterminate (e.g. a video with no face and no narration).
        if self.detection_source == "face":
            if self.gender == "unknown" or self.age_bracket == "unknown":
                raise CorpusError(
                    f"face annotation cannot leave gender/age unknown ({self.video_id})")
        elif self.detection_source == "speech" and self.gender == "unknown":
            raise CorpusError(f"speech annotation must carry gender ({self.video_id})")

    def to_json_dict(self) -> dict:
        d = {
            "video_id": self.video_id,
            "actor_count": self.actor_count,
            "face_visible": self.face_visible,
            "gender": self.gender,
            "age_bracket": self.age_bracket,
            "detection_source": self.detection_source,
        }
        d.update(self.extra)
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "ActorAnnotation":
        d = dict(d)
        known = {
            name: d.pop(name)
            for name in ("video_id", "actor_count", "face_visible", "gender",
                         "age_bracket", "detection_source")
            if name in d
        }
        return cls(extra=d, **known)


@dataclass
class LabelSet:
    """Per-video MED/UND labels with provenance.

    ``source`` is required as soon as either dimension is labeled;
    auto-labels additionally record the co-training round that produced them.
    """

    video_id: str
    med: str = "unlabeled"
    und: str = "unlabeled"
    source: Optional[str] = None
    round: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.video_id:
            raise CorpusError("video_id must be non-empty")
        if self.med not in LABEL_VALUES or self.und not in LABEL_VALUES:
            raise CorpusError(f"labels must be one of {LABEL_VALUES}")
        labeled = self.med != "unlabeled" or self.und != "unlabeled"
        if labeled and self.source not in ("human", "auto_cotrain"):
            raise CorpusError(f"labeled video needs a source ({self.video_id})")
        if self.source == "auto_cotrain" and self.round is None:
            raise CorpusError(f"auto_cotrain label needs a round ({self.video_id})")

    def to_json_dict(self) -> dict:
        d = {"video_id": self.video_id, "med": self.med, "und": self.und,
             "source": self.source, "round": self.round}
        d.update(self.extra)
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "LabelSet":
        d = dict(d)
        known = {name: d.pop(name)
                 for name in ("video_id", "med", "und", "source", "round")
                 if name in d}
        return cls(extra=d, **known)


# ---------------------------------------------------------------------------
# line-delimited persistence


def _read_jsonl(path, parse) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(parse(json.loads(line)))
            except (json.JSONDecodeError, CorpusError, KeyError, TypeError) as e:
                raise CorpusError(f"{path}:{lineno}: {e}") from e
    return out


def _write_jsonl(path, items) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for item in items:
            fh.write(json.dumps(item.to_json_dict(), ensure_ascii=False,
                                sort_keys=True) + "\n")


def read_corpus(path) -> list[VideoRecord]:
    records = _read_jsonl(path, VideoRecord.from_json_dict)
    seen = set()
    for r in records:
        if r.video_id in seen:
            raise CorpusError(f"duplicate video_id in corpus file: {r.video_id}")
        seen.add(r.video_id)
    return records


def write_corpus(path, records: Iterable[VideoRecord]) -> None:
    _write_jsonl(path, records)


def read_annotations(path) -> list[ActorAnnotation]:
    return _read_jsonl(path, ActorAnnotation.from_json_dict)


def write_annotations(path, annotations: Iterable[ActorAnnotation]) -> None:
    _write_jsonl(path, annotations)


def read_labels(path) -> list[LabelSet]:
    return _read_jsonl(path, LabelSet.from_json_dict)


def write_labels(path, labels: Iterable[LabelSet]) -> None:
    _write_jsonl(path, labels)


# ---------------------------------------------------------------------------
# ingestion


class FixtureCatalogClient:
    """Catalog client reading per-term result files from a directory.

    Each search term maps to ``<dir>/<term with spaces as underscores>.jsonl``
    holding ranked records, best first.
    """

    def __init__(self, directory):
        self.directory = Path(directory)

    def search(self, term: str, max_results: int) -> list[VideoRecord]:
        path = self.directory / (term.replace(" ", "_") + ".jsonl")
        if not path.exists():
            raise FileNotFoundError(f"no fixture results for term {term!r}: {path}")
        return _read_jsonl(path, VideoRecord.from_json_dict)[:max_results]


class LiveCatalogClient:
    """Catalog client for the hosted search endpoint.

    Requires an API key in the ``VIDCURATE_API_KEY`` environment variable.
    Only the documented search endpoint is called; no scraping.
    """

    ENDPOINT = "https://www.googleapis.com/youtube/v3/search"

    def __init__(self, api_key: Optional[str] = None):
        self.api_key = api_key or os.environ.get("VIDCURATE_API_KEY")
        if not self.api_key:
            raise CorpusError("live ingest needs VIDCURATE_API_KEY in the environment")

    def search(self, term: str, max_results: int) -> list[VideoRecord]:
        import urllib.parse
        import urllib.request

        query = urllib.parse.urlencode({
            "part": "snippet", "q": term, "type": "video",
            "maxResults": min(max_results, 50), "key": self.api_key,
        })
        with urllib.request.urlopen(f"{self.ENDPOINT}?{query}") as resp:
            payload = json.load(resp)
        records = []
        for item in payload.get("items", []):
            snippet = item.get("snippet", {})
            pt = snippet.get("publishedAt")
            records.append(VideoRecord(
                video_id=item["id"]["videoId"],
                channel_id=snippet.get("channelId", ""),
                publish_time=datetime.fromisoformat(pt.replace("Z", "+00:00")) if pt else None,
                title=snippet.get("title", ""),
                description=snippet.get("description", ""),
            ))
        return records


@dataclass
class IngestReport:
    requested_terms: int
    fetched: int
    failures: list[tuple[str, str]] = field(default_factory=list)


def ingest_search(terms: list[str], per_term: int, client,
                  on_error: Optional[Callable[[str, Exception], None]] = None,
                  ) -> tuple[list[VideoRecord], IngestReport]:
    """Fetch up to ``per_term`` ranked results for each term.

    Each returned record carries its search term and 1-based rank. A failing
    term is recorded in the report and skipped; the partial ingest is still
    returned. Results are merged in term order so the output is deterministic
    no matter how the per-term fetches are scheduled.
    """
    if per_term < 1:
        raise CorpusError("per_term must be >= 1")
    merged: list[VideoRecord] = []
    report = IngestReport(requested_terms=len(terms), fetched=0)
    for term in terms:
        try:
            results = client.search(term, per_term)
        except Exception as e:  # noqa: BLE001 - partial ingest is permitted
            report.failures.append((term, str(e)))
            if on_error is not None:
                on_error(term, e)
            continue
        for rank, rec in enumerate(results[:per_term], start=1):
            merged.append(VideoRecord(**{
                **rec.__dict__,
                "search_term": term,
                "search_rank": rank,
            }))
        report.fetched += min(len(results), per_term)
    return merged, report


def dedupe(records: list[VideoRecord]) -> list[VideoRecord]:
    """Drop repeated video ids, keeping the occurrence with the best rank.

    Best rank = lowest ``search_rank``; records without a rank lose to any
    ranked one; remaining ties go to the earliest occurrence. Output order
    follows each id's first appearance in the input.
    """
    best: dict[str, tuple[float, int]] = {}
    order: list[str] = []
    for pos, rec in enumerate(records):
        rank = rec.search_rank if rec.search_rank is not None else float("inf")
        if rec.video_id not in best:
            order.append(rec.video_id)
            best[rec.video_id] = (rank, pos)
        elif (rank, pos) < best[rec.video_id]:
            best[rec.video_id] = (rank, pos)
    by_pos = {vid: records[pos] for vid, (_, pos) in best.items()}
    return [by_pos[vid] for vid in order]


def ascii_ratio(text: str) -> float:
    """Share of characters with code points below 128; 1.0 for empty text."""
    if not text:
        return 1.0
    return sum(1 for ch in text if ord(ch) < 128) / len(text)


def filter_language(records: list[VideoRecord], keep: str,
                    ascii_threshold: float = 0.9) -> list[VideoRecord]:
    """Keep records tagged with ``keep``'s primary language subtag.

    Untagged records fall back to an ASCII-ratio heuristic over
    title+description: ratio >= ``ascii_threshold`` passes. The catalog never
    reports how language was detected, so the heuristic is explicit and
    configurable.
    """
    if not keep:
        raise CorpusError("keep language tag must be non-empty")
    primary = keep.split("-")[0].lower()
    kept = []
    for rec in records:
        if rec.language is not None:
            if rec.language.split("-")[0].lower() == primary:
                kept.append(rec)
        elif ascii_ratio(rec.title + rec.description) >= ascii_threshold:
            kept.append(rec)
    return kept


def merge_labels(labels: Iterable[LabelSet]) -> dict[str, LabelSet]:
    """Fold per-axis label rows into one LabelSet per video.

    MED and UND often arrive in separate files (one co-training run per
    axis); a labeled axis always wins over "unlabeled", later rows win on
    direct conflicts.
    """
    merged: dict[str, LabelSet] = {}
    for lab in labels:
        existing = merged.get(lab.video_id)
        if existing is None:
            merged[lab.video_id] = LabelSet(
                video_id=lab.video_id, med=lab.med, und=lab.und,
                source=lab.source, round=lab.round)
            continue
        if lab.med != "unlabeled":
            existing.med = lab.med
        if lab.und != "unlabeled":
            existing.und = lab.und
        if lab.source is not None:
            existing.source = lab.source
            existing.round = lab.round
    return merged


# ---------------------------------------------------------------------------
# summary statistics


@dataclass
class SummaryStratum:
    axis: str           # "MED" | "UND"
    level: str          # "low" | "high"
    n_videos: int
    mean_views: Optional[float]
    mean_subscribers: Optional[float]


@dataclass
class SummaryTable:
    strata: list[SummaryStratum]
    n_records: int
    n_labeled_med: int
    n_labeled_und: int

    def row(self, axis: str, level: str) -> SummaryStratum:
        for s in self.strata:
            if s.axis == axis and s.level == level:
                return s
        raise KeyError((axis, level))


def _subscriber_count(rec: VideoRecord) -> Optional[float]:
    # Channel-level subscriber counts are an optional enrichment carried in
    # the record's extra fields; absent values are excluded from means.
    v = rec.extra.get("subscriber_count")
    return float(v) if v is not None else None


def summarize(records: list[VideoRecord], labels: list[LabelSet]) -> SummaryTable:
    """Per-stratum counts and means over the low/high MED and UND partitions.

    Label rows are merged per video first, so a video labeled on each axis
    in a separate file still counts once per axis.
    """
    by_id = {r.video_id: r for r in records}
    for lab in labels:
        if lab.video_id not in by_id:
            raise CorpusError(f"label references unknown video_id: {lab.video_id}")
    merged = merge_labels(labels)
    strata = []
    n_labeled = {"MED": 0, "UND": 0}
    for axis, attr in (("MED", "med"), ("UND", "und")):
        for level in ("low", "high"):
            members = [by_id[lab.video_id] for lab in merged.values()
                       if getattr(lab, attr) == level]
            views = [r.view_count for r in members]
            subs = [s for s in (_subscriber_count(r) for r in members)
                    if s is not None]
            strata.append(SummaryStratum(
                axis=axis, level=level, n_videos=len(members),
                mean_views=sum(views) / len(views) if views else None,
                mean_subscribers=sum(subs) / len(subs) if subs else None,
            ))
            n_labeled[axis] += len(members)
    return SummaryTable(strata=strata, n_records=len(records),
                        n_labeled_med=n_labeled["MED"],
                        n_labeled_und=n_labeled["UND"])
