"""Single source of truth for every generation prompt.

Templates are versioned resource files under ``templates/v1``; builders fill
slots with single-space joins and no re-punctuation, so slot values appear in
the assembled prompt verbatim. Every news-stage prompt (extraction, premise,
script) is prefixed with the article; board and storyboard prompts are not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from .errors import ValidationError
from .model import (
    Article,
    Condition,
    Dialog,
    Direction,
    Framing,
    NewsFacts,
    Premise,
    SceneHeading,
    Script,
    ScriptLine,
)

TEMPLATE_VERSION = "v1"

# Fixed plot descriptions: the framings whose plot needs no generation.
EXPOSITORY_PLOT = "a person (expert) explaining the information to another (naive newcomer)"
REENACTMENT_PLOT_PREFIX = "Key stakeholders acting out what happens—"

GENERIC_PLOTS = {
    Framing.EXPOSITORY_DIALOG: EXPOSITORY_PLOT,
    Framing.REENACTMENT: "the key stakeholders acting out what happens in real time",
    Framing.COMEDIC_ANALOGY: "a comedic analogy for the situation in the story",
}

STYLE_BLOCK = (
    "It should be entertaining. The dialogue should be colloquial and engaging. "
    "The dialogue should be 10 to 12 lines long. Each line of dialogue should be "
    "short—less than 20 words. End it with a punchline."
)

FORMATTING_BLOCK = (
    "Put parenthetical between parentheses. Put non-dialog parts between square "
    "brackets. Capitalize the character names and put a colon after. Separate "
    "each dialog line with double new line characters."
)

PORTRAIT_STYLE_SUFFIX = "in the style of black-and-white vector line art."
STORYBOARD_STYLE_SUFFIX = "in the style of black-and-white vector line art"
BACKGROUND_STYLE_SUFFIX = "in the style of a digital painting background."


class PromptStep(str, Enum):
    EXTRACTION = "extraction"
    PREMISE_PLOT = "premise_plot"
    PREMISE_CHARACTERS = "premise_characters"
    PREMISE_SETTING = "premise_setting"
    SCRIPT_GEN = "script_gen"
    CHARACTER_BOARD = "character_board"
    STORYBOARD = "storyboard"


@dataclass(frozen=True)
class AssembledPrompt:
    tag: str
    text: str
    slot_values: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PromptBundle:
    step: PromptStep
    prompts: tuple[AssembledPrompt, ...]


def load_template(name: str) -> str:
    path = resources.files("reelsmith.templates") / TEMPLATE_VERSION / f"{name}.txt"
    return path.read_text(encoding="utf-8")


def _fill(template_name: str, **slots: str) -> tuple[str, dict]:
    template = load_template(template_name)
    text = template
    for key, value in slots.items():
        marker = "{" + key + "}"
        if marker not in text:
            raise ValidationError(f"template {template_name} has no slot {key}")
        text = text.replace(marker, value)
    if "{" in text and "}" in text:
        import re

        leftover = re.search(r"\{[a-z_]+\}", text)
        if leftover:
            raise ValidationError(
                f"template {template_name} left slot unfilled: {leftover.group()}"
            )
    return text, dict(slots)


def article_prefix(article: Article) -> str:
    return f"{article.headline}\n\n{article.body}\n\n"


def join_pair(a: str, b: str) -> str:
    return f"{a} and {b}"


def join_list(items) -> str:
    """Oxford-style prose join: "a, b, c, and d"."""
    items = list(items)
    if not items:
        return ""
    if len(items) == 1:
        return items[0]
    if len(items) == 2:
        return f"{items[0]} and {items[1]}"
    return ", ".join(items[:-1]) + f", and {items[-1]}"


def render_stakeholders(facts: NewsFacts) -> str:
    parts = []
    for s in facts.stakeholders:
        parts.append(f"{s.name} ({s.activity})" if s.activity else s.name)
    return ", ".join(parts)


def render_characters(premise_or_names) -> str:
    if isinstance(premise_or_names, Premise):
        names = [c.name for c in premise_or_names.characters]
    else:
        names = list(premise_or_names)
    if len(names) != 2:
        raise ValidationError("character rendering expects exactly two names")
    return join_pair(names[0], names[1])


def render_info_points(points) -> str:
    return " ".join(points)


def render_script_line(line: ScriptLine) -> str:
    if not isinstance(line, Dialog):
        raise ValidationError("only dialog lines are rendered into shot prompts")
    return f"{line.speaker}: {line.text}"


def render_script(script: Script) -> str:
    """Compact one-line-per-block rendering used inside board prompts."""
    parts = []
    for line in script.lines:
        if isinstance(line, Dialog):
            paren = f"({line.parenthetical}) " if line.parenthetical else ""
            parts.append(f"{line.speaker.upper()}: {paren}{line.text}")
        elif isinstance(line, Direction):
            parts.append(f"[{line.text}]")
        elif isinstance(line, SceneHeading):
            parts.append(line.text.upper())
    return " ".join(parts)


def render_premise(premise: Premise) -> str:
    return f"{premise.plot}, set in {premise.setting}"


EXTRACTION_TEMPLATES = (
    ("extract.setting", "extraction_setting"),
    ("extract.stakeholders", "extraction_stakeholders"),
    ("extract.plot_summary", "extraction_plot_summary"),
    ("extract.info_points", "extraction_info_points"),
    ("extract.plot_elements", "extraction_plot_elements"),
)


def build_extraction_prompts(article: Article) -> PromptBundle:
    prefix = article_prefix(article)
    prompts = []
    for tag, template_name in EXTRACTION_TEMPLATES:
        text, slots = _fill(template_name)
        prompts.append(AssembledPrompt(tag=tag, text=prefix + text, slot_values=slots))
    return PromptBundle(step=PromptStep.EXTRACTION, prompts=tuple(prompts))


def build_premise_characters_prompt(
    framing: Framing, facts: NewsFacts, article: Article
) -> AssembledPrompt:
    prefix = article_prefix(article)
    if framing is Framing.EXPOSITORY_DIALOG:
        text, slots = _fill(
            "premise_characters_expository",
            news_characters=render_stakeholders(facts),
        )
    else:
        text, slots = _fill(
            "premise_characters_dominant",
            news_characters=render_stakeholders(facts),
            news_plot_summary=facts.plot_summary,
        )
    return AssembledPrompt(tag="premise.characters", text=prefix + text, slot_values=slots)


def build_premise_plot_prompt(
    facts: NewsFacts, character_names: list[str], article: Article
) -> AssembledPrompt:
    """Only comedic analogy needs a plot prompt; other framings copy fields."""
    text, slots = _fill(
        "premise_plot_comedic",
        news_plot_summary=facts.plot_summary,
        script_characters=render_characters(character_names),
    )
    return AssembledPrompt(
        tag="premise.plot", text=article_prefix(article) + text, slot_values=slots
    )


def build_premise_setting_prompt(
    framing: Framing, article: Article, plot: str | None = None
) -> AssembledPrompt:
    prefix = article_prefix(article)
    if framing is Framing.COMEDIC_ANALOGY:
        if not plot:
            raise ValidationError("comedic analogy setting prompt needs the plot")
        text, slots = _fill("premise_setting_analogy", script_plot=plot)
    else:
        text, slots = _fill("premise_setting_news")
    return AssembledPrompt(tag="premise.setting", text=prefix + text, slot_values=slots)


def build_premise_prompts(
    framing: Framing,
    facts: NewsFacts,
    article: Article,
    character_names: list[str] | None = None,
    plot: str | None = None,
) -> PromptBundle:
    """All premise prompts for a framing.

    Prompts whose slots depend on earlier replies (comedic plot needs the
    characters; comedic setting needs the plot) are included only when those
    values are supplied. Fields the protocol fills directly from the
    extracted facts emit no prompt.
    """
    if facts is None:
        raise ValidationError("premise prompts need extracted news facts")
    prompts = [build_premise_characters_prompt(framing, facts, article)]
    if framing is Framing.COMEDIC_ANALOGY:
        if character_names is not None:
            prompts.append(build_premise_plot_prompt(facts, character_names, article))
        if plot is not None:
            prompts.append(build_premise_setting_prompt(framing, article, plot))
    else:
        prompts.append(build_premise_setting_prompt(framing, article))
    return PromptBundle(step=PromptStep.PREMISE_CHARACTERS, prompts=tuple(prompts))


def build_script_prompt(
    article: Article,
    condition: Condition,
    framing: Framing,
    premise: Premise | None = None,
) -> str:
    prefix = article_prefix(article)
    if condition is Condition.WITH_PREMISE:
        if premise is None:
            raise ValidationError("with-premise script prompt requires a premise")
        text, _ = _fill(
            "script_with_premise",
            script_plot=premise.plot,
            script_info_points=render_info_points(premise.info_points),
            script_characters=render_characters(premise),
            script_setting=premise.setting,
        )
    else:
        text, _ = _fill("script_without_premise", generic_plot=GENERIC_PLOTS[framing])
    return prefix + text


def build_board_descriptions_prompt(script_text: str, premise: Premise) -> AssembledPrompt:
    text, slots = _fill(
        "board_descriptions",
        script_plot=premise.plot,
        script=script_text,
        script_characters=render_characters(premise),
    )
    return AssembledPrompt(tag="board.descriptions", text=text, slot_values=slots)


def build_board_props_prompt(character_descriptions: str) -> AssembledPrompt:
    text, slots = _fill("board_props", character_descriptions=character_descriptions)
    return AssembledPrompt(tag="board.props", text=text, slot_values=slots)


def build_board_visual_setting_prompt(script_text: str) -> AssembledPrompt:
    text, slots = _fill("board_visual_setting", script=script_text)
    return AssembledPrompt(tag="board.visual_setting", text=text, slot_values=slots)


def build_board_background_descriptions_prompt(
    visual_setting: str, premise: Premise, character_descriptions: str
) -> AssembledPrompt:
    text, slots = _fill(
        "board_background_descriptions",
        visual_setting=visual_setting,
        script_premise=render_premise(premise),
        character_descriptions=character_descriptions,
    )
    return AssembledPrompt(
        tag="board.background_descriptions", text=text, slot_values=slots
    )


def build_board_background_image_prompt(
    visual_setting: str, background_description: str, index: int
) -> AssembledPrompt:
    text, slots = _fill(
        "board_background_image_prompt",
        visual_setting=visual_setting,
        background_description=background_description,
    )
    return AssembledPrompt(
        tag=f"board.background_prompt.{index}", text=text, slot_values=slots
    )


def build_portrait_image_prompt(description: str, props: list[str]) -> str:
    text, _ = _fill(
        "image_portrait",
        character_description=description,
        character_props=join_list(props),
    )
    return text


def build_background_image_prompt(generated_prompt: str) -> str:
    text, _ = _fill("image_background", background_image_prompt=generated_prompt)
    return text


def build_character_board_prompts(script: Script, premise: Premise) -> PromptBundle:
    """The board prompts buildable before any provider reply arrives.

    Later steps (props, background descriptions, background image prompts)
    need earlier replies spliced in; their builders are exposed separately.
    """
    script_text = render_script(script)
    prompts = (
        build_board_descriptions_prompt(script_text, premise),
        build_board_visual_setting_prompt(script_text),
    )
    return PromptBundle(step=PromptStep.CHARACTER_BOARD, prompts=prompts)


def build_storyboard_shot_prompt(line: ScriptLine) -> str:
    text, _ = _fill("storyboard_shot", script_line=render_script_line(line))
    return text


def build_storyboard_image_prompt(
    character_description: str, expression: str, gesture: str, action: str
) -> str:
    text, _ = _fill(
        "image_storyboard",
        character_description=character_description,
        expression=expression,
        gesture=gesture,
        action=action,
    )
    return text


def build_storyboard_prompts(line: ScriptLine) -> dict:
    return {
        "shot_prompt": build_storyboard_shot_prompt(line),
        "image_prompt_template": load_template("image_storyboard"),
    }
