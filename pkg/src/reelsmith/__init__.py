"""reelsmith: turn print news articles into short-video scripts and storyboards.

The pipeline runs in two stages. Scriptwriting: extract news facts, choose a
narrative framing, build an editable premise, and generate a screenplay whose
dialog lines are matched back to the key information. Storyboarding: design a
character board (description, props, background per character) and render one
illustrated panel per dialog line. All model access goes through a
record/replay provider session, so every workflow is testable offline.
"""

from __future__ import annotations

from .errors import (
    CassetteMiss,
    Degenerate,
    EmptyCompletion,
    IOFailure,
    NotFound,
    ParseFailure,
    ProviderUnavailable,
    ReelsmithError,
    StageViolation,
    StorageCorrupt,
    UnknownScript,
    UnknownSpeaker,
    ValidationError,
)
from .model import (
    Article,
    CharacterCard,
    Condition,
    Dialog,
    Direction,
    Framing,
    HighlightEntry,
    HighlightSet,
    NewsFacts,
    Premise,
    PremiseCharacter,
    Project,
    Provenance,
    SceneHeading,
    Script,
    Stage,
    Stakeholder,
    StoryboardPanel,
    validate_premise,
)
from .providers import Cassette, CompletionRequest, Mode, ProviderSession
from .workspace import ProjectStore, export_bundle, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "Article",
    "Cassette",
    "CassetteMiss",
    "CharacterCard",
    "CompletionRequest",
    "Condition",
    "Degenerate",
    "Dialog",
    "Direction",
    "EmptyCompletion",
    "Framing",
    "HighlightEntry",
    "HighlightSet",
    "IOFailure",
    "Mode",
    "NewsFacts",
    "NotFound",
    "ParseFailure",
    "Premise",
    "PremiseCharacter",
    "Project",
    "ProjectStore",
    "Provenance",
    "ProviderSession",
    "ProviderUnavailable",
    "ReelsmithError",
    "SceneHeading",
    "Script",
    "Stage",
    "StageViolation",
    "Stakeholder",
    "StorageCorrupt",
    "StoryboardPanel",
    "UnknownScript",
    "UnknownSpeaker",
    "ValidationError",
    "export_bundle",
    "run_pipeline",
    "validate_premise",
    "__version__",
]
