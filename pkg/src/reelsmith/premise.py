"""Stage 1, panel 2: generate, validate, and edit framing-specific premises."""

from __future__ import annotations

import re

from .errors import ParseFailure, ValidationError
from .extraction import parse_numbered_list
from .model import (
    Article,
    Framing,
    NewsFacts,
    Premise,
    PremiseCharacter,
    Provenance,
    validate_premise,
    with_changes,
)
from .prompts import (
    EXPOSITORY_PLOT,
    REENACTMENT_PLOT_PREFIX,
    build_premise_characters_prompt,
    build_premise_plot_prompt,
    build_premise_setting_prompt,
)
from .providers import (
    CREATIVE_TEMPERATURE,
    DEFAULT_MAX_OUTPUT_TOKENS,
    CompletionRequest,
    ProviderSession,
)

ANALOGY_CANDIDATE_COUNT = 3

EDITABLE_FIELDS = {"characters", "plot", "setting", "info_points"}

_LABEL = re.compile(r"^\s*(?:characters|setting)\s*:\s*", re.IGNORECASE)


def _strip_label(text: str) -> str:
    return _LABEL.sub("", text.strip()).strip()


def parse_character_names(raw: str) -> tuple[list[str], list[str]]:
    """Two names from a numbered list (preferred) or an "A and B" sentence."""
    warnings: list[str] = []
    try:
        names = [_strip_label(item) for item in parse_numbered_list(raw)]
    except ParseFailure:
        text = _strip_label(raw)
        names = [part.strip() for part in text.split(" and ") if part.strip()]
    names = [n for n in names if n]
    if len(names) < 2:
        raise ParseFailure(f"expected two character names, got {len(names)}")
    if len(names) > 2:
        warnings.append(f"characters reply named {len(names)}; keeping the first two")
        names = names[:2]
    return names, warnings


def _ask(session: ProviderSession, prompt: str, tag: str) -> str:
    return session.complete(
        CompletionRequest(
            prompt=prompt,
            temperature=CREATIVE_TEMPERATURE,
            max_output_tokens=DEFAULT_MAX_OUTPUT_TOKENS,
            request_tag=tag,
        )
    )


def generate_premise(
    premise_id: str,
    framing: Framing,
    article: Article,
    facts: NewsFacts,
    session: ProviderSession,
) -> tuple[Premise, dict[str, str], list[str]]:
    """Returns the premise, raw replies keyed by tag, and any warnings."""
    if facts is None:
        raise ValidationError("premise generation needs extracted news facts")
    raw_replies: dict[str, str] = {}
    warnings: list[str] = []

    characters_prompt = build_premise_characters_prompt(framing, facts, article)
    raw = _ask(session, characters_prompt.text, characters_prompt.tag)
    raw_replies[characters_prompt.tag] = raw
    names, parse_warnings = parse_character_names(raw)
    warnings.extend(parse_warnings)
    labels = framing.role_labels
    characters = (
        PremiseCharacter(name=names[0], role_label=labels[0]),
        PremiseCharacter(name=names[1], role_label=labels[1]),
    )

    candidate_plots: tuple[str, ...] = ()
    if framing is Framing.EXPOSITORY_DIALOG:
        plot = EXPOSITORY_PLOT
        info_points = facts.info_points
    elif framing is Framing.REENACTMENT:
        plot = REENACTMENT_PLOT_PREFIX + facts.plot_summary
        info_points = facts.info_points
    else:
        plot_prompt = build_premise_plot_prompt(facts, names, article)
        raw = _ask(session, plot_prompt.text, plot_prompt.tag)
        raw_replies[plot_prompt.tag] = raw
        candidates = parse_numbered_list(raw)
        if len(candidates) != ANALOGY_CANDIDATE_COUNT:
            warnings.append(
                f"expected {ANALOGY_CANDIDATE_COUNT} analogy candidates, "
                f"got {len(candidates)}"
            )
        candidate_plots = tuple(candidates)
        plot = candidates[0]
        info_points = facts.plot_elements

    setting_prompt = build_premise_setting_prompt(framing, article, plot=plot)
    raw = _ask(session, setting_prompt.text, setting_prompt.tag)
    raw_replies[setting_prompt.tag] = raw
    setting = _strip_label(raw)

    premise = Premise(
        id=premise_id,
        framing=framing,
        characters=characters,
        plot=plot,
        setting=setting,
        info_points=tuple(info_points),
        provenance=Provenance.GENERATED,
        candidate_plots=candidate_plots,
    )
    violations = validate_premise(premise)
    if violations:
        raise ValidationError(
            "generated premise is invalid: "
            + "; ".join(f"{v.field}: {v.rule}" for v in violations)
        )
    return premise, raw_replies, warnings


def apply_premise_edit(premise: Premise, patch: dict, new_id: str | None = None) -> Premise:
    """A new, Edited premise; the caller keeps the original in history."""
    unknown = set(patch) - EDITABLE_FIELDS
    if unknown:
        raise ValidationError(f"patch touches non-premise fields: {sorted(unknown)}")
    changes: dict = {}
    if "characters" in patch:
        names = list(patch["characters"])
        if len(names) != 2:
            raise ValidationError("premise always has exactly two characters")
        changes["characters"] = tuple(
            PremiseCharacter(name=str(n), role_label=c.role_label)
            for n, c in zip(names, premise.characters)
        )
    if "plot" in patch:
        changes["plot"] = str(patch["plot"])
    if "setting" in patch:
        changes["setting"] = str(patch["setting"])
    if "info_points" in patch:
        changes["info_points"] = tuple(str(p) for p in patch["info_points"])
    edited = with_changes(
        premise,
        provenance=Provenance.EDITED,
        id=new_id if new_id is not None else premise.id,
        **changes,
    )
    violations = validate_premise(edited)
    if violations:
        raise ValidationError(
            "patched premise is invalid: "
            + "; ".join(f"{v.field}: {v.rule}" for v in violations)
        )
    return edited
