"""Stage 2: character board and per-dialog-line storyboard generation.

Character/group names are mapped to a single performable person by the
board prompts; storyboard panels exist only for dialog lines, one per line.
Generated images are handed to a caller-supplied sink and referenced by the
returned name (content digest), never embedded.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

from .errors import ParseFailure, UnknownSpeaker, ValidationError
from .extraction import parse_numbered_list
from .model import CharacterCard, Dialog, Premise, Script, StoryboardPanel
from .prompts import (
    build_background_image_prompt,
    build_board_background_descriptions_prompt,
    build_board_background_image_prompt,
    build_board_descriptions_prompt,
    build_board_props_prompt,
    build_board_visual_setting_prompt,
    build_portrait_image_prompt,
    build_storyboard_image_prompt,
    build_storyboard_shot_prompt,
    render_script,
)
from .providers import (
    CREATIVE_TEMPERATURE,
    DEFAULT_PARALLELISM,
    DEFAULT_MAX_OUTPUT_TOKENS,
    CompletionRequest,
    ImageBlob,
    ProviderSession,
)

BlobSink = Callable[[ImageBlob], str]

SHOT_REASK = "Answer as Expression: [phrase] Gesture: [phrase] Action: [phrase]."

_SHOT_LABELS = re.compile(
    r"expression\s*:\s*(?P<expression>.+?)\s*"
    r"gesture\s*:\s*(?P<gesture>.+?)\s*"
    r"action\s*:\s*(?P<action>.+?)\s*$",
    re.IGNORECASE | re.DOTALL,
)


def _normalize_name(name: str) -> str:
    return " ".join(name.lower().split())


def match_speaker_to_card(
    speaker: str, cards: list[CharacterCard]
) -> CharacterCard:
    """Exact name match, then unique substring containment either way."""
    wanted = _normalize_name(speaker)
    for card in cards:
        if _normalize_name(card.character_name) == wanted:
            return card
    contained = [
        card
        for card in cards
        if wanted in _normalize_name(card.character_name)
        or _normalize_name(card.character_name) in wanted
    ]
    if len(contained) == 1:
        return contained[0]
    raise UnknownSpeaker(
        f"speaker {speaker!r} matches no character card unambiguously"
    )


def parse_per_character(raw: str, names: list[str]) -> dict[str, str]:
    """Parse a numbered reply with one "Name: value" item per character."""
    items = parse_numbered_list(raw)
    if len(items) < len(names):
        raise ParseFailure(
            f"expected {len(names)} entries, reply has {len(items)}"
        )
    values: dict[str, str] = {}
    leftovers = []
    for item in items:
        if ":" in item:
            label, value = item.split(":", 1)
            matched = _match_label(label.strip(), names)
            if matched is not None and matched not in values:
                values[matched] = value.strip()
                continue
        leftovers.append(item)
    for name in names:  # positional fallback for unlabeled items
        if name not in values and leftovers:
            values[name] = leftovers.pop(0).strip()
    missing = [n for n in names if n not in values]
    if missing:
        raise ParseFailure(f"reply missing entries for: {missing}")
    return values


def _match_label(label: str, names: list[str]) -> str | None:
    norm = _normalize_name(label)
    for name in names:
        wanted = _normalize_name(name)
        if norm == wanted or norm in wanted or wanted in norm:
            return name
    return None


def split_props(value: str) -> list[str]:
    parts = [p.strip() for p in value.split(",") if p.strip()]
    if len(parts) == 1 and " and " in parts[0]:
        parts = [p.strip() for p in parts[0].split(" and ") if p.strip()]
    cleaned = []
    for part in parts:
        if part.lower().startswith("and "):
            part = part[4:]
        cleaned.append(part)
    return [p for p in cleaned if p]


def _ask(session: ProviderSession, prompt: str, tag: str) -> str:
    return session.complete(
        CompletionRequest(
            prompt=prompt,
            temperature=CREATIVE_TEMPERATURE,
            max_output_tokens=DEFAULT_MAX_OUTPUT_TOKENS,
            request_tag=tag,
        )
    )


def build_character_board(
    script: Script,
    premise: Premise,
    session: ProviderSession,
    save_blob: BlobSink,
) -> tuple[list[CharacterCard], dict[str, str]]:
    """One card per premise character; returns (cards, raw replies)."""
    names = [c.name for c in premise.characters]
    script_text = render_script(script)
    raw_replies: dict[str, str] = {}

    descriptions_prompt = build_board_descriptions_prompt(script_text, premise)
    raw = _ask(session, descriptions_prompt.text, descriptions_prompt.tag)
    raw_replies[descriptions_prompt.tag] = raw
    descriptions = parse_per_character(raw, names)
    descriptions_text = " ".join(f"{n}: {descriptions[n]}." for n in names)

    props_prompt = build_board_props_prompt(descriptions_text)
    raw = _ask(session, props_prompt.text, props_prompt.tag)
    raw_replies[props_prompt.tag] = raw
    props_by_name = {n: split_props(v) for n, v in parse_per_character(raw, names).items()}
    for name, props in props_by_name.items():
        if not props:
            raise ParseFailure(f"no props parsed for {name!r}")

    setting_prompt = build_board_visual_setting_prompt(script_text)
    visual_setting = _ask(session, setting_prompt.text, setting_prompt.tag).strip()
    raw_replies[setting_prompt.tag] = visual_setting

    backgrounds_prompt = build_board_background_descriptions_prompt(
        visual_setting, premise, descriptions_text
    )
    raw = _ask(session, backgrounds_prompt.text, backgrounds_prompt.tag)
    raw_replies[backgrounds_prompt.tag] = raw
    backgrounds = parse_per_character(raw, names)

    cards = []
    for index, name in enumerate(names):
        bg_prompt_prompt = build_board_background_image_prompt(
            visual_setting, backgrounds[name], index
        )
        background_image_prompt = _ask(
            session, bg_prompt_prompt.text, bg_prompt_prompt.tag
        ).strip()
        raw_replies[bg_prompt_prompt.tag] = background_image_prompt

        portrait = session.generate_image(
            build_portrait_image_prompt(descriptions[name], props_by_name[name])
        )
        background = session.generate_image(
            build_background_image_prompt(background_image_prompt)
        )
        cards.append(
            CharacterCard(
                character_name=name,
                description=descriptions[name],
                props=tuple(props_by_name[name]),
                background_description=backgrounds[name],
                background_image_prompt=background_image_prompt,
                portrait_image=save_blob(portrait),
                background_image=save_blob(background),
            )
        )
    return cards, raw_replies


def parse_shot_phrases(raw: str) -> tuple[str, str, str]:
    match = _SHOT_LABELS.search(raw)
    if match:
        phrases = tuple(
            " ".join(match.group(g).split()).rstrip(".,;")
            for g in ("expression", "gesture", "action")
        )
        if all(phrases):
            return phrases  # type: ignore[return-value]
    # Comma-separated triple, e.g. "apologetic, slightly frowning, and ...".
    parts = [p.strip().rstrip(".") for p in raw.strip().split(",")]
    if len(parts) == 3:
        last = parts[2]
        if last.lower().startswith("and "):
            last = last[4:]
        if all((parts[0], parts[1], last)):
            return parts[0], parts[1], last
    raise ParseFailure("could not find expression/gesture/action phrases")


def describe_shot(
    line: Dialog, line_index: int, session: ProviderSession
) -> tuple[str, str, str]:
    if not isinstance(line, Dialog):
        raise ValidationError("shots are described for dialog lines only")
    prompt = build_storyboard_shot_prompt(line)
    tag = f"storyboard.shot.{line_index}"
    raw = _ask(session, prompt, tag)
    try:
        return parse_shot_phrases(raw)
    except ParseFailure:
        raw = _ask(session, f"{prompt}\n{SHOT_REASK}", f"{tag}.reask")
        return parse_shot_phrases(raw)


def build_storyboard(
    script: Script,
    board: list[CharacterCard],
    session: ProviderSession,
    save_blob: BlobSink,
    parallelism: int = DEFAULT_PARALLELISM,
) -> list[StoryboardPanel]:
    """One panel per dialog line, in script order."""
    if not board:
        raise ValidationError("storyboard needs a character board")
    dialogs = script.dialog_lines()
    shots = []
    for line_index, line in dialogs:
        card = match_speaker_to_card(line.speaker, board)
        expression, gesture, action = describe_shot(line, line_index, session)
        shots.append((line_index, card, expression, gesture, action))

    def render(shot) -> StoryboardPanel:
        line_index, card, expression, gesture, action = shot
        image = session.generate_image(
            build_storyboard_image_prompt(card.description, expression, gesture, action)
        )
        return StoryboardPanel(
            line_index=line_index,
            expression=expression,
            gesture=gesture,
            action=action,
            image=save_blob(image),
        )

    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        panels = list(pool.map(render, shots))
    return panels
