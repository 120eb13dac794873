"""Domain types shared by the whole pipeline.

All types are immutable values: mutation happens by constructing new
versions. Every type serializes to a documented snake_case JSON schema via
``to_dict`` / ``from_dict``; that schema is the wire and storage format.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Optional, Union

from .errors import ValidationError

MAX_ARTICLE_BODY_CHARS = 30_000

# Highlight colors are referenced by index only; rendering is a UI concern.
COLOR_PALETTE = (
    "#f94144",
    "#f8961e",
    "#f9c74f",
    "#90be6d",
    "#43aa8b",
    "#577590",
)


class Framing(str, Enum):
    EXPOSITORY_DIALOG = "expository_dialog"
    REENACTMENT = "reenactment"
    COMEDIC_ANALOGY = "comedic_analogy"

    @property
    def role_labels(self) -> tuple[str, str]:
        if self is Framing.EXPOSITORY_DIALOG:
            return ("expert", "naive newcomer")
        return ("dominant stakeholder", "dominant stakeholder")

    @property
    def info_point_count(self) -> int:
        return 4 if self is Framing.COMEDIC_ANALOGY else 3


class Condition(str, Enum):
    WITH_PREMISE = "with_premise"
    WITHOUT_PREMISE = "without_premise"


class Provenance(str, Enum):
    GENERATED = "generated"
    EDITED = "edited"


class Actor(str, Enum):
    HUMAN = "human"
    MACHINE = "machine"


class Stage(str, Enum):
    ARTICLE = "article"
    EXTRACTED = "extracted"
    PREMISE_READY = "premise_ready"
    SCRIPT_ACTIVE = "script_active"
    BOARD_READY = "board_ready"
    STORYBOARD_READY = "storyboard_ready"


STAGE_ORDER = (
    Stage.ARTICLE,
    Stage.EXTRACTED,
    Stage.PREMISE_READY,
    Stage.SCRIPT_ACTIVE,
    Stage.BOARD_READY,
    Stage.STORYBOARD_READY,
)


def stage_index(stage: Stage) -> int:
    return STAGE_ORDER.index(stage)


@dataclass(frozen=True)
class Article:
    headline: str
    body: str
    source_url: Optional[str] = None
    ingested_at: str = ""

    def __post_init__(self):
        if not self.headline.strip():
            raise ValidationError("article headline must be non-empty")
        if not self.body.strip():
            raise ValidationError("article body must be non-empty")
        if len(self.body) > MAX_ARTICLE_BODY_CHARS:
            raise ValidationError(
                f"article body exceeds {MAX_ARTICLE_BODY_CHARS} characters"
            )

    def to_dict(self) -> dict:
        return {
            "headline": self.headline,
            "body": self.body,
            "source_url": self.source_url,
            "ingested_at": self.ingested_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Article":
        return cls(
            headline=d["headline"],
            body=d["body"],
            source_url=d.get("source_url"),
            ingested_at=d.get("ingested_at", ""),
        )


@dataclass(frozen=True)
class Stakeholder:
    name: str
    activity: str = ""

    def __post_init__(self):
        if not self.name.strip():
            raise ValidationError("stakeholder name must be non-empty")

    def to_dict(self) -> dict:
        return {"name": self.name, "activity": self.activity}

    @classmethod
    def from_dict(cls, d: dict) -> "Stakeholder":
        return cls(name=d["name"], activity=d.get("activity", ""))


@dataclass(frozen=True)
class NewsFacts:
    setting: str
    stakeholders: tuple[Stakeholder, ...]
    plot_summary: str
    info_points: tuple[str, ...]
    plot_elements: tuple[str, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.stakeholders:
            raise ValidationError("news facts need at least one stakeholder")
        if not self.info_points:
            raise ValidationError("news facts need at least one info point")
        if not self.plot_elements:
            raise ValidationError("news facts need at least one plot element")

    def to_dict(self) -> dict:
        return {
            "setting": self.setting,
            "stakeholders": [s.to_dict() for s in self.stakeholders],
            "plot_summary": self.plot_summary,
            "info_points": list(self.info_points),
            "plot_elements": list(self.plot_elements),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NewsFacts":
        return cls(
            setting=d["setting"],
            stakeholders=tuple(Stakeholder.from_dict(s) for s in d["stakeholders"]),
            plot_summary=d["plot_summary"],
            info_points=tuple(d["info_points"]),
            plot_elements=tuple(d["plot_elements"]),
            warnings=tuple(d.get("warnings", ())),
        )


@dataclass(frozen=True)
class PremiseCharacter:
    name: str
    role_label: str

    def to_dict(self) -> dict:
        return {"name": self.name, "role_label": self.role_label}

    @classmethod
    def from_dict(cls, d: dict) -> "PremiseCharacter":
        return cls(name=d["name"], role_label=d["role_label"])


@dataclass(frozen=True)
class Premise:
    id: str
    framing: Framing
    characters: tuple[PremiseCharacter, ...]
    plot: str
    setting: str
    info_points: tuple[str, ...]
    provenance: Provenance = Provenance.GENERATED
    candidate_plots: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "framing": self.framing.value,
            "characters": [c.to_dict() for c in self.characters],
            "plot": self.plot,
            "setting": self.setting,
            "info_points": list(self.info_points),
            "provenance": self.provenance.value,
            "candidate_plots": list(self.candidate_plots),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Premise":
        return cls(
            id=d["id"],
            framing=Framing(d["framing"]),
            characters=tuple(PremiseCharacter.from_dict(c) for c in d["characters"]),
            plot=d["plot"],
            setting=d["setting"],
            info_points=tuple(d["info_points"]),
            provenance=Provenance(d["provenance"]),
            candidate_plots=tuple(d.get("candidate_plots", ())),
        )


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str

    def to_dict(self) -> dict:
        return {"field": self.field, "rule": self.rule}


def validate_premise(premise: Premise) -> list[Violation]:
    """Report every invariant the premise breaks; empty list means valid."""
    violations: list[Violation] = []
    if len(premise.characters) != 2:
        violations.append(Violation("characters", "exactly two principal characters"))
    for i, ch in enumerate(premise.characters):
        if not ch.name.strip():
            violations.append(Violation(f"characters[{i}].name", "non-empty"))
    if not premise.plot.strip():
        violations.append(Violation("plot", "non-empty"))
    if not premise.setting.strip():
        violations.append(Violation("setting", "non-empty"))
    if any(not p.strip() for p in premise.info_points):
        violations.append(Violation("info_points", "entries non-empty"))
    expected = premise.framing.info_point_count
    if len(premise.info_points) != expected:
        violations.append(
            Violation("info_points", f"exactly {expected} for {premise.framing.value}")
        )
    if premise.framing is Framing.EXPOSITORY_DIALOG and len(premise.characters) == 2:
        labels = {c.role_label for c in premise.characters}
        if labels != {"expert", "naive newcomer"}:
            violations.append(
                Violation("role_labels", "exactly {expert, naive newcomer}")
            )
    return violations


@dataclass(frozen=True)
class Dialog:
    speaker: str
    text: str
    parenthetical: Optional[str] = None

    def __post_init__(self):
        if not self.speaker.strip():
            raise ValidationError("dialog speaker must be non-empty")

    def to_dict(self) -> dict:
        return {
            "kind": "dialog",
            "speaker": self.speaker,
            "parenthetical": self.parenthetical,
            "text": self.text,
        }


@dataclass(frozen=True)
class Direction:
    text: str

    def to_dict(self) -> dict:
        return {"kind": "direction", "text": self.text}


@dataclass(frozen=True)
class SceneHeading:
    text: str

    def to_dict(self) -> dict:
        return {"kind": "scene_heading", "text": self.text}


ScriptLine = Union[Dialog, Direction, SceneHeading]


def script_line_from_dict(d: dict) -> ScriptLine:
    kind = d["kind"]
    if kind == "dialog":
        return Dialog(
            speaker=d["speaker"],
            text=d["text"],
            parenthetical=d.get("parenthetical"),
        )
    if kind == "direction":
        return Direction(text=d["text"])
    if kind == "scene_heading":
        return SceneHeading(text=d["text"])
    raise ValidationError(f"unknown script line kind: {kind!r}")


@dataclass(frozen=True)
class Script:
    id: str
    condition: Condition
    lines: tuple[ScriptLine, ...]
    premise_id: Optional[str] = None
    provenance: Provenance = Provenance.GENERATED
    starred: bool = False
    created_at: str = ""

    def __post_init__(self):
        if not self.lines:
            raise ValidationError("script must have at least one line")

    def dialog_lines(self) -> list[tuple[int, Dialog]]:
        return [(i, ln) for i, ln in enumerate(self.lines) if isinstance(ln, Dialog)]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "premise_id": self.premise_id,
            "condition": self.condition.value,
            "lines": [ln.to_dict() for ln in self.lines],
            "provenance": self.provenance.value,
            "starred": self.starred,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Script":
        return cls(
            id=d["id"],
            premise_id=d.get("premise_id"),
            condition=Condition(d["condition"]),
            lines=tuple(script_line_from_dict(ln) for ln in d["lines"]),
            provenance=Provenance(d["provenance"]),
            starred=d.get("starred", False),
            created_at=d.get("created_at", ""),
        )


@dataclass(frozen=True)
class HighlightEntry:
    info_point_index: int
    line_index: int
    score: float
    color_index: int

    def to_dict(self) -> dict:
        return {
            "info_point_index": self.info_point_index,
            "line_index": self.line_index,
            "score": self.score,
            "color_index": self.color_index,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HighlightEntry":
        return cls(
            info_point_index=d["info_point_index"],
            line_index=d["line_index"],
            score=d["score"],
            color_index=d["color_index"],
        )


@dataclass(frozen=True)
class HighlightSet:
    entries: tuple[HighlightEntry, ...] = ()

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.info_point_index in seen:
                raise ValidationError(
                    "at most one highlight entry per info point index"
                )
            seen.add(e.info_point_index)

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, d: dict) -> "HighlightSet":
        return cls(entries=tuple(HighlightEntry.from_dict(e) for e in d["entries"]))


@dataclass(frozen=True)
class CharacterCard:
    character_name: str
    description: str
    props: tuple[str, ...]
    background_description: str
    background_image_prompt: str
    portrait_image: Optional[str] = None
    background_image: Optional[str] = None

    def __post_init__(self):
        if not self.props:
            raise ValidationError("character card needs at least one prop")

    def to_dict(self) -> dict:
        return {
            "character_name": self.character_name,
            "description": self.description,
            "props": list(self.props),
            "background_description": self.background_description,
            "background_image_prompt": self.background_image_prompt,
            "portrait_image": self.portrait_image,
            "background_image": self.background_image,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CharacterCard":
        return cls(
            character_name=d["character_name"],
            description=d["description"],
            props=tuple(d["props"]),
            background_description=d["background_description"],
            background_image_prompt=d["background_image_prompt"],
            portrait_image=d.get("portrait_image"),
            background_image=d.get("background_image"),
        )


@dataclass(frozen=True)
class StoryboardPanel:
    line_index: int
    expression: str
    gesture: str
    action: str
    image: Optional[str] = None

    def __post_init__(self):
        for name in ("expression", "gesture", "action"):
            if not getattr(self, name).strip():
                raise ValidationError(f"storyboard panel {name} must be non-empty")

    def to_dict(self) -> dict:
        return {
            "line_index": self.line_index,
            "expression": self.expression,
            "gesture": self.gesture,
            "action": self.action,
            "image": self.image,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StoryboardPanel":
        return cls(
            line_index=d["line_index"],
            expression=d["expression"],
            gesture=d["gesture"],
            action=d["action"],
            image=d.get("image"),
        )


@dataclass(frozen=True)
class EventRecord:
    timestamp: str
    actor: Actor
    action: str
    payload: dict = field(default_factory=dict)
    payload_digest: str = ""

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "actor": self.actor.value,
            "action": self.action,
            "payload": self.payload,
            "payload_digest": self.payload_digest,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EventRecord":
        return cls(
            timestamp=d["timestamp"],
            actor=Actor(d["actor"]),
            action=d["action"],
            payload=d.get("payload", {}),
            payload_digest=d.get("payload_digest", ""),
        )


@dataclass(frozen=True)
class Project:
    id: str
    article: Article
    stage: Stage = Stage.ARTICLE
    news_facts: Optional[NewsFacts] = None
    premises: tuple[Premise, ...] = ()
    scripts: tuple[Script, ...] = ()
    active_script_id: Optional[str] = None
    highlights: Optional[HighlightSet] = None
    character_board: Optional[tuple[CharacterCard, ...]] = None
    board_generation: int = 0
    storyboard: Optional[tuple[StoryboardPanel, ...]] = None
    storyboard_board_generation: Optional[int] = None
    stale: tuple[str, ...] = ()
    provider_calls: int = 0
    event_log: tuple[EventRecord, ...] = ()

    def __post_init__(self):
        if self.active_script_id is not None:
            if all(s.id != self.active_script_id for s in self.scripts):
                raise ValidationError("active_script_id references no known script")

    def script_by_id(self, script_id: str) -> Optional[Script]:
        for s in self.scripts:
            if s.id == script_id:
                return s
        return None

    def premise_by_id(self, premise_id: str) -> Optional[Premise]:
        for p in self.premises:
            if p.id == premise_id:
                return p
        return None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "article": self.article.to_dict(),
            "stage": self.stage.value,
            "news_facts": self.news_facts.to_dict() if self.news_facts else None,
            "premises": [p.to_dict() for p in self.premises],
            "scripts": [s.to_dict() for s in self.scripts],
            "active_script_id": self.active_script_id,
            "highlights": self.highlights.to_dict() if self.highlights else None,
            "character_board": (
                [c.to_dict() for c in self.character_board]
                if self.character_board is not None
                else None
            ),
            "board_generation": self.board_generation,
            "storyboard": (
                [p.to_dict() for p in self.storyboard]
                if self.storyboard is not None
                else None
            ),
            "storyboard_board_generation": self.storyboard_board_generation,
            "stale": list(self.stale),
            "provider_calls": self.provider_calls,
            "event_log": [e.to_dict() for e in self.event_log],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Project":
        return cls(
            id=d["id"],
            article=Article.from_dict(d["article"]),
            stage=Stage(d["stage"]),
            news_facts=(
                NewsFacts.from_dict(d["news_facts"]) if d.get("news_facts") else None
            ),
            premises=tuple(Premise.from_dict(p) for p in d.get("premises", ())),
            scripts=tuple(Script.from_dict(s) for s in d.get("scripts", ())),
            active_script_id=d.get("active_script_id"),
            highlights=(
                HighlightSet.from_dict(d["highlights"]) if d.get("highlights") else None
            ),
            character_board=(
                tuple(CharacterCard.from_dict(c) for c in d["character_board"])
                if d.get("character_board") is not None
                else None
            ),
            board_generation=d.get("board_generation", 0),
            storyboard=(
                tuple(StoryboardPanel.from_dict(p) for p in d["storyboard"])
                if d.get("storyboard") is not None
                else None
            ),
            storyboard_board_generation=d.get("storyboard_board_generation"),
            stale=tuple(d.get("stale", ())),
            provider_calls=d.get("provider_calls", 0),
            event_log=tuple(EventRecord.from_dict(e) for e in d.get("event_log", ())),
        )


def canonical_json(data: Any) -> str:
    """Stable JSON rendering used for digests and on-disk documents."""
    return json.dumps(data, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def digest(data: Any) -> str:
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def with_changes(obj, **kwargs):
    """dataclasses.replace re-exported under a domain-friendly name."""
    return replace(obj, **kwargs)
