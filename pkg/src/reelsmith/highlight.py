"""Map each premise info point to its most similar dialog line.

An info point gets at most one highlight: the argmax dialog line, included
only when its similarity clears the threshold (default 0.5). Only dialog
lines are candidates; information is spoken in roleplay reels.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from .errors import ValidationError
from .model import (
    COLOR_PALETTE,
    Dialog,
    HighlightEntry,
    HighlightSet,
    Script,
)
from .providers import ProviderSession

DEFAULT_THRESHOLD = 0.5

# Fixed 50-word stopword list for the lexical fallback backend.
STOPWORDS = frozenset(
    """
    a about after all an and are as at be been but by can could did do for
    from had has have he her his in is it its more not of on or she so that
    the their they this to was we were what which will with you
    """.split()
)
assert len(STOPWORDS) == 50

_TOKEN = re.compile(r"[a-z0-9]+(?:'[a-z]+)?")


class Backend(str, Enum):
    EMBEDDING_COSINE = "embedding_cosine"
    LEXICAL_FALLBACK = "lexical_fallback"


@dataclass(frozen=True)
class HighlightConfig:
    threshold: float = DEFAULT_THRESHOLD
    backend: Backend = Backend.LEXICAL_FALLBACK

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValidationError("highlight threshold must be in [0, 1]")


def tokenize(text: str) -> set[str]:
    return {t for t in _TOKEN.findall(text.lower()) if t not in STOPWORDS}


def _normalize(text: str) -> str:
    return " ".join(text.lower().split())


def lexical_similarity(a: str, b: str) -> float:
    """Binary cosine over stopword-filtered word sets."""
    set_a, set_b = tokenize(a), tokenize(b)
    if not set_a or not set_b:
        return 0.0
    overlap = len(set_a & set_b)
    return overlap / math.sqrt(len(set_a) * len(set_b))


def embedding_similarity(a: str, b: str, session: ProviderSession) -> float:
    vec_a = session.embed(a)
    vec_b = session.embed(b)
    dot = sum(x * y for x, y in zip(vec_a, vec_b))
    norm = math.sqrt(sum(x * x for x in vec_a)) * math.sqrt(sum(y * y for y in vec_b))
    if norm == 0:
        return 0.0
    # Negative cosine clamps to 0 to keep scores displayable in [0, 1].
    return max(0.0, min(1.0, dot / norm))


def text_similarity(
    a: str,
    b: str,
    backend: Backend = Backend.LEXICAL_FALLBACK,
    session: ProviderSession | None = None,
) -> float:
    if not a.strip() or not b.strip():
        raise ValidationError("similarity inputs must be non-empty")
    if _normalize(a) == _normalize(b):
        return 1.0
    if backend is Backend.LEXICAL_FALLBACK:
        return lexical_similarity(a, b)
    if session is None:
        raise ValidationError("embedding backend needs a provider session")
    return embedding_similarity(a, b, session)


def assign_highlights(
    script: Script,
    info_points: list[str],
    config: HighlightConfig = HighlightConfig(),
    session: ProviderSession | None = None,
) -> HighlightSet:
    dialogs = script.dialog_lines()
    if not dialogs:
        raise ValidationError("script has no dialog lines to highlight")
    entries = []
    for point_index, point in enumerate(info_points):
        best_score = -1.0
        best_line = -1
        for line_index, line in dialogs:
            if not line.text.strip():
                continue
            score = text_similarity(point, line.text, config.backend, session)
            if score > best_score:  # ties keep the lowest line index
                best_score = score
                best_line = line_index
        if best_line >= 0 and best_score >= config.threshold:
            entries.append(
                HighlightEntry(
                    info_point_index=point_index,
                    line_index=best_line,
                    score=best_score,
                    color_index=point_index % len(COLOR_PALETTE),
                )
            )
    return HighlightSet(entries=tuple(entries))
