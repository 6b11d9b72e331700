"""Two-view featurization: metadata view and content view per video.

The two views are kept structurally separate (distinct vocabularies, distinct
vectors) so the downstream co-training contract of conditionally independent
views holds by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .corpus import VideoRecord
from .textmeasure import tokenize

__all__ = [
    "Vocab",
    "FeatureVector",
    "ViewPair",
    "fit_vocab",
    "tfidf",
    "build_metadata_view",
    "build_content_view",
    "read_transcripts",
    "read_visual_features",
]

# Trailing numeric block of the metadata view, after the tf-idf block.
METADATA_NUMERIC_FIELDS = ("log_duration", "captions", "hd", "log_views")


@dataclass
class Vocab:
    """Term index with document frequencies; indices are dense 0..V-1."""

    entries: dict[str, tuple[int, int]] = field(default_factory=dict)
    n_docs: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    def index(self, term: str) -> Optional[int]:
        e = self.entries.get(term)
        return e[0] if e else None

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# n_docs={self.n_docs}\n")
            for term, (idx, df) in sorted(self.entries.items(), key=lambda kv: kv[1][0]):
                fh.write(f"{term}\t{idx}\t{df}\n")

    @classmethod
    def load(cls, path) -> "Vocab":
        entries, n_docs = {}, 0
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line.startswith("# n_docs="):
                    n_docs = int(line.split("=", 1)[1])
                    continue
                if not line:
                    continue
                term, idx, df = line.split("\t")
                entries[term] = (int(idx), int(df))
        return cls(entries=entries, n_docs=n_docs)


def fit_vocab(texts: Sequence[str], min_df: int = 1) -> Vocab:
    """Collect terms with document frequency >= min_df, indexed lexicographically."""
    if min_df < 1:
        raise ValueError(f"min_df must be >= 1, got {min_df}")
    df: dict[str, int] = {}
    for text in texts:
        for term in {tok for tok, _, _ in tokenize(text)}:
            df[term] = df.get(term, 0) + 1
    kept = sorted(term for term, count in df.items() if count >= min_df)
    return Vocab(entries={term: (i, df[term]) for i, term in enumerate(kept)},
                 n_docs=len(texts))


@dataclass(frozen=True)
class FeatureVector:
    """Sparse vector as an index -> weight map with an explicit dimension."""

    weights: dict[int, float]
    dimension: int

    def __post_init__(self):
        for idx, w in self.weights.items():
            if not 0 <= idx < self.dimension:
                raise ValueError(f"index {idx} out of dimension {self.dimension}")
            if not math.isfinite(w):
                raise ValueError(f"non-finite weight at index {idx}")

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dimension)
        for idx, w in self.weights.items():
            dense[idx] = w
        return dense

    def l2_norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights.values()))

    def to_json_dict(self) -> dict:
        return {"dimension": self.dimension,
                "weights": {str(i): w for i, w in sorted(self.weights.items())}}

    @classmethod
    def from_json_dict(cls, d: dict) -> "FeatureVector":
        return cls(weights={int(i): float(w) for i, w in d["weights"].items()},
                   dimension=int(d["dimension"]))


@dataclass(frozen=True)
class ViewPair:
    video_id: str
    metadata_view: FeatureVector
    content_view: FeatureVector

    def to_json_dict(self) -> dict:
        return {"video_id": self.video_id,
                "metadata_view": self.metadata_view.to_json_dict(),
                "content_view": self.content_view.to_json_dict()}

    @classmethod
    def from_json_dict(cls, d: dict) -> "ViewPair":
        return cls(video_id=d["video_id"],
                   metadata_view=FeatureVector.from_json_dict(d["metadata_view"]),
                   content_view=FeatureVector.from_json_dict(d["content_view"]))


def tfidf(text: str, vocab: Vocab) -> FeatureVector:
    """L2-normalized tf-idf with smoothed idf: ln((1+N)/(1+df)) + 1.

    Out-of-vocabulary terms are ignored; a text with no in-vocabulary terms
    maps to the zero vector.
    """
    counts: dict[str, int] = {}
    for tok, _, _ in tokenize(text):
        counts[tok] = counts.get(tok, 0) + 1
    weights: dict[int, float] = {}
    for term, tf in counts.items():
        entry = vocab.entries.get(term)
        if entry is None:
            continue
        idx, df = entry
        weights[idx] = tf * (math.log((1 + vocab.n_docs) / (1 + df)) + 1.0)
    norm = math.sqrt(sum(w * w for w in weights.values()))
    if norm > 0:
        weights = {i: w / norm for i, w in weights.items()}
    return FeatureVector(weights=dict(sorted(weights.items())), dimension=len(vocab))


def build_metadata_view(record: VideoRecord, vocab: Vocab,
                        include_view_count: bool = True) -> FeatureVector:
    """tf-idf over title+description+tags plus a fixed trailing numeric block.

    Trailing indices (after the vocabulary block) hold ln(1+duration),
    captions flag, HD flag, and ln(1+views). The view-count slot stays zero
    when ``include_view_count`` is off, so the dimension is stable either way.
    """
    text_vec = tfidf(record.text, vocab)
    dim = len(vocab) + len(METADATA_NUMERIC_FIELDS)
    weights = dict(text_vec.weights)
    base = len(vocab)
    numeric = [
        math.log1p(record.duration_seconds),
        1.0 if record.captions_available else 0.0,
        1.0 if record.definition == "hd" else 0.0,
        math.log1p(record.view_count) if include_view_count else 0.0,
    ]
    for offset, value in enumerate(numeric):
        if value != 0.0:
            weights[base + offset] = value
    return FeatureVector(weights=weights, dimension=dim)


def build_content_view(transcript: Optional[str],
                       visual_features: Optional[FeatureVector],
                       vocab_c: Vocab,
                       visual_dim: int = 0) -> FeatureVector:
    """Transcript tf-idf block concatenated with an optional visual block.

    ``visual_dim`` reserves space for the visual block even when a given
    video has no visual vector, keeping dimensions uniform across a corpus.
    """
    if transcript is None and visual_features is None:
        raise ValueError("content view unavailable: need a transcript or visual features")
    if visual_features is not None:
        if visual_dim and visual_features.dimension != visual_dim:
            raise ValueError(
                f"visual features dimension {visual_features.dimension} "
                f"!= declared {visual_dim}")
        visual_dim = visual_features.dimension
    text_block = tfidf(transcript or "", vocab_c)
    weights = dict(text_block.weights)
    if visual_features is not None:
        base = len(vocab_c)
        for idx, w in visual_features.weights.items():
            if w != 0.0:
                weights[base + idx] = w
    return FeatureVector(weights=weights, dimension=len(vocab_c) + visual_dim)


def read_transcripts(path) -> dict[str, str]:
    """Read per-video ``video_id<TAB>text`` transcript rows."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise ValueError(f"{path}:{lineno}: expected video_id<TAB>text")
            vid, text = line.split("\t", 1)
            out[vid] = text
    return out


def read_visual_features(path) -> dict[str, FeatureVector]:
    """Read dense per-video vectors; first line declares ``# dim=<D>``."""
    out: dict[str, FeatureVector] = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if line.startswith("# dim="):
                dim = int(line.split("=", 1)[1])
                continue
            if not line or line.startswith("#"):
                continue
            if dim is None:
                raise ValueError(f"{path}: missing '# dim=<D>' header line")
            parts = line.split("\t")
            vid, values = parts[0], [float(v) for v in parts[1:]]
            if len(values) != dim:
                raise ValueError(f"{path}:{lineno}: expected {dim} values, got {len(values)}")
            out[vid] = FeatureVector(
                weights={i: v for i, v in enumerate(values) if v != 0.0},
                dimension=dim)
    return out
