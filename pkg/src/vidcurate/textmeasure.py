"""Medical-term extraction, understandability scoring, and rater concordance.

Terms are matched against a semantic-type lexicon (a stand-in for a licensed
UMLS extract; the loader accepts any two-column tab-separated file).
Understandability follows the agree/(non-N/A) rubric convention.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

__all__ = [
    "SEMANTIC_TYPES",
    "Lexicon",
    "TermHit",
    "PematRubric",
    "tokenize",
    "extract_terms",
    "med_score",
    "classify_med",
    "pemat_score",
    "classify_und",
    "cohen_kappa",
    "load_lexicon",
    "read_rubrics",
]

SEMANTIC_TYPES = (
    "disease",
    "treatment",
    "test",
    "procedure",
    "medical_device",
    "medical_professional",
)

# Tokens are maximal runs of letters/digits; whitespace and punctuation split.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """Lowercased tokens with their (start, end) character spans."""
    return [(m.group(0).lower(), m.start(), m.end())
            for m in _TOKEN_RE.finditer(text)]


def _normalize_term(term: str) -> str:
    return " ".join(tok for tok, _, _ in tokenize(term))


class LexiconError(ValueError):
    pass


@dataclass
class Lexicon:
    """Normalized term -> semantic type map; multiword terms allowed."""

    entries: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        normalized = {}
        for term, semtype in self.entries.items():
            norm = _normalize_term(term)
            if not norm:
                raise LexiconError(f"empty term after normalization: {term!r}")
            if semtype not in SEMANTIC_TYPES:
                raise LexiconError(f"unknown semantic type {semtype!r} for {term!r}")
            if norm in normalized and normalized[norm] != semtype:
                raise LexiconError(f"conflicting semantic types for {norm!r}")
            normalized[norm] = semtype
        self.entries = normalized
        self._max_tokens = max((t.count(" ") + 1 for t in normalized), default=0)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, term: str) -> bool:
        return _normalize_term(term) in self.entries


def load_lexicon(path) -> Lexicon:
    """Load a tab-separated ``term<TAB>semtype`` file; '#' lines are comments."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise LexiconError(f"{path}:{lineno}: expected term<TAB>semtype")
            entries[parts[0]] = parts[1].strip()
    return Lexicon(entries=entries)


@dataclass(frozen=True)
class TermHit:
    char_span: tuple[int, int]
    surface: str
    canonical: str
    semtype: str
    n_tokens: int

    def __post_init__(self):
        if self.char_span[1] <= self.char_span[0]:
            raise ValueError(f"empty span: {self.char_span}")
        if _normalize_term(self.surface) != self.canonical:
            raise ValueError(
                f"surface {self.surface!r} does not normalize to {self.canonical!r}")


def extract_terms(text: str, lexicon: Lexicon) -> list[TermHit]:
    """Case-insensitive leftmost-longest lexicon matching on token boundaries.

    Returned hits never overlap and are sorted by start offset.
    """
    if len(lexicon) == 0:
        raise LexiconError("lexicon is empty")
    tokens = tokenize(text)
    hits: list[TermHit] = []
    i = 0
    while i < len(tokens):
        matched = 0
        for length in range(min(lexicon._max_tokens, len(tokens) - i), 0, -1):
            candidate = " ".join(tok for tok, _, _ in tokens[i:i + length])
            semtype = lexicon.entries.get(candidate)
            if semtype is not None:
                start = tokens[i][1]
                end = tokens[i + length - 1][2]
                hits.append(TermHit(char_span=(start, end),
                                    surface=text[start:end],
                                    canonical=candidate,
                                    semtype=semtype,
                                    n_tokens=length))
                matched = length
                break
        i += matched if matched else 1
    return hits


def med_score(hits: Sequence[TermHit], text: str) -> float:
    """Fraction of the text's tokens covered by term hits; 0 for empty text."""
    total = len(tokenize(text))
    if total == 0:
        return 0.0
    covered = sum(h.n_tokens for h in hits)
    return covered / total


def classify_med(score: float, threshold: float = 0.05) -> str:
    """Binary medical-information label; boundary scores classify as high."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    return "high" if score >= threshold else "low"


@dataclass
class PematRubric:
    """Agree/disagree/N-A responses to understandability criteria."""

    items: list[tuple[str, str]]

    def __post_init__(self):
        if not self.items:
            raise ValueError("rubric needs at least one item")
        seen = set()
        for cid, response in self.items:
            if cid in seen:
                raise ValueError(f"duplicate criterion_id: {cid}")
            seen.add(cid)
            if response not in ("agree", "disagree", "na"):
                raise ValueError(f"response must be agree|disagree|na, got {response!r}")


def pemat_score(rubric: PematRubric) -> float:
    """Agreed criteria over scoreable (non-N/A) criteria."""
    scored = [r for _, r in rubric.items if r != "na"]
    if not scored:
        raise ValueError("undefined score: all rubric items are N/A")
    return sum(1 for r in scored if r == "agree") / len(scored)


def classify_und(score: float, threshold: float = 0.7) -> str:
    """Binary understandability label; boundary scores classify as high."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    return "high" if score >= threshold else "low"


def read_rubrics(path) -> dict[str, PematRubric]:
    """Read per-video rubric rows ``video_id,criterion_id,response``."""
    rows: dict[str, list[tuple[str, str]]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected video_id,criterion_id,response")
            rows.setdefault(parts[0], []).append((parts[1], parts[2]))
    return {vid: PematRubric(items=items) for vid, items in rows.items()}


def cohen_kappa(a: Sequence, b: Sequence) -> float:
    """Chance-corrected agreement between two raters' label vectors.

    kappa = (p_o - p_e) / (1 - p_e); when chance agreement is total
    (p_e = 1, which forces p_o = 1) the result is defined as 1.0.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise ValueError("need at least one rating pair")
    n = len(a)
    p_o = sum(1 for x, y in zip(a, b) if x == y) / n
    counts_a, counts_b = Counter(a), Counter(b)
    p_e = sum((counts_a[c] / n) * (counts_b[c] / n) for c in counts_a if c in counts_b)
    if p_e == 1.0:
        return 1.0
    return (p_o - p_e) / (1.0 - p_e)
