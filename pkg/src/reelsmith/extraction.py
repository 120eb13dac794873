"""Stage 1, panel 1: run the extraction prompts and parse replies into facts."""

from __future__ import annotations

import re

from .errors import ParseFailure
from .model import Article, NewsFacts, Stakeholder
from .prompts import build_extraction_prompts
from .providers import (
    DEFAULT_MAX_OUTPUT_TOKENS,
    EXTRACTION_TEMPERATURE,
    CompletionRequest,
    ProviderSession,
)

TARGET_STAKEHOLDERS = 5
TARGET_INFO_POINTS = 3
TARGET_PLOT_ELEMENTS = 4

REASK_CLARIFIER = "Answer as a numbered list."

_ENUMERATOR = re.compile(r"^\s*(?:\d+[.)]|[-•*])\s+(.*\S)\s*$")

# Name/activity separators, tried in priority order.
_SEPARATORS = ("—", "-", ":")


def parse_numbered_list(raw: str) -> list[str]:
    """Items on enumerator-led lines; order preserved, empties dropped."""
    items = []
    for line in raw.splitlines():
        match = _ENUMERATOR.match(line)
        if match:
            items.append(match.group(1))
    if not items:
        raise ParseFailure("no list items found in reply")
    return items


def split_stakeholder(item: str) -> tuple[Stakeholder, list[str]]:
    for sep in _SEPARATORS:
        if sep in item:
            name, activity = item.split(sep, 1)
            if name.strip():
                return Stakeholder(name=name.strip(), activity=activity.strip()), []
    return (
        Stakeholder(name=item.strip(), activity=""),
        [f"stakeholder item has no separator: {item!r}"],
    )


def _ask(session: ProviderSession, prompt: str, tag: str) -> str:
    return session.complete(
        CompletionRequest(
            prompt=prompt,
            temperature=EXTRACTION_TEMPERATURE,
            max_output_tokens=DEFAULT_MAX_OUTPUT_TOKENS,
            request_tag=tag,
        )
    )


def _ask_list(session: ProviderSession, prompt: str, tag: str) -> tuple[list[str], str]:
    """One automatic re-ask with a list clarifier before giving up."""
    raw = _ask(session, prompt, tag)
    try:
        return parse_numbered_list(raw), raw
    except ParseFailure:
        raw = _ask(session, f"{prompt}\n{REASK_CLARIFIER}", f"{tag}.reask")
        return parse_numbered_list(raw), raw


def extract_news_facts(
    article: Article, session: ProviderSession
) -> tuple[NewsFacts, dict[str, str]]:
    """Returns the parsed facts plus the raw replies for the event log."""
    bundle = build_extraction_prompts(article)
    by_tag = {p.tag: p.text for p in bundle.prompts}
    raw_replies: dict[str, str] = {}
    warnings: list[str] = []

    setting = _ask(session, by_tag["extract.setting"], "extract.setting").strip()
    raw_replies["extract.setting"] = setting

    items, raw = _ask_list(
        session, by_tag["extract.stakeholders"], "extract.stakeholders"
    )
    raw_replies["extract.stakeholders"] = raw
    stakeholders = []
    for item in items:
        stakeholder, item_warnings = split_stakeholder(item)
        stakeholders.append(stakeholder)
        warnings.extend(item_warnings)
    if len(stakeholders) != TARGET_STAKEHOLDERS:
        warnings.append(
            f"expected {TARGET_STAKEHOLDERS} stakeholders, got {len(stakeholders)}"
        )

    plot_summary = _ask(
        session, by_tag["extract.plot_summary"], "extract.plot_summary"
    ).strip()
    raw_replies["extract.plot_summary"] = plot_summary

    info_points, raw = _ask_list(
        session, by_tag["extract.info_points"], "extract.info_points"
    )
    raw_replies["extract.info_points"] = raw
    if len(info_points) != TARGET_INFO_POINTS:
        warnings.append(
            f"expected {TARGET_INFO_POINTS} info points, got {len(info_points)}"
        )

    plot_elements, raw = _ask_list(
        session, by_tag["extract.plot_elements"], "extract.plot_elements"
    )
    raw_replies["extract.plot_elements"] = raw
    if len(plot_elements) != TARGET_PLOT_ELEMENTS:
        warnings.append(
            f"expected {TARGET_PLOT_ELEMENTS} plot elements, got {len(plot_elements)}"
        )

    facts = NewsFacts(
        setting=setting,
        stakeholders=tuple(stakeholders),
        plot_summary=plot_summary,
        info_points=tuple(info_points),
        plot_elements=tuple(plot_elements),
        warnings=tuple(warnings),
    )
    return facts, raw_replies
