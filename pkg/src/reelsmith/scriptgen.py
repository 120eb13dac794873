"""Stage 1, panel 3: script generation, screenplay parsing/formatting, linting.

The generation prompt asks the model to capitalize speaker names, put a colon
after them, and separate dialog lines with double newlines; the parser
inverts that contract. Speaker names are stored title-cased and displayed
upper-cased.
"""

from __future__ import annotations

import math
import re
import textwrap
from dataclasses import dataclass

from .errors import ParseFailure, UnknownScript, ValidationError
from .model import (
    Article,
    Condition,
    Dialog,
    Direction,
    Framing,
    Premise,
    Project,
    Provenance,
    SceneHeading,
    Script,
    ScriptLine,
    with_changes,
)
from .prompts import FORMATTING_BLOCK, build_script_prompt
from .providers import (
    CREATIVE_TEMPERATURE,
    DEFAULT_MAX_OUTPUT_TOKENS,
    CompletionRequest,
    ProviderSession,
)

PAGE_WIDTH = 60
DIALOG_MEASURE = 40

_SPEAKER_CHARS = re.compile(r"^[A-Za-z0-9 .,'&-]+$")
_PAREN_PREFIX = re.compile(r"^\(([^)]*)\)\s*")


def _looks_like_speaker(text: str) -> bool:
    text = text.strip()
    return (
        0 < len(text) <= 40
        and len(text.split()) <= 5
        and bool(_SPEAKER_CHARS.match(text))
        and any(ch.isalpha() for ch in text)
    )


def _title_case(name: str) -> str:
    return " ".join(w[:1].upper() + w[1:].lower() if w else w for w in name.split())


def _is_all_caps(text: str) -> bool:
    return text == text.upper() and any(ch.isalpha() for ch in text)


def _split_parenthetical(body: str) -> tuple[str | None, str]:
    match = _PAREN_PREFIX.match(body.strip())
    if match:
        return match.group(1).strip(), body.strip()[match.end():].strip()
    return None, body.strip()


def _classify_block(block: str) -> ScriptLine:
    lines = [ln.strip() for ln in block.strip().splitlines() if ln.strip()]
    flat = " ".join(lines)

    if flat.startswith("[") and flat.endswith("]"):
        return Direction(text=flat[1:-1].strip())

    if len(lines) == 1 and ":" not in lines[0] and _is_all_caps(lines[0]):
        return SceneHeading(text=lines[0])

    # "NAME: body" — the generation contract's primary dialog shape.
    if ":" in lines[0]:
        speaker_part, first_rest = lines[0].split(":", 1)
        if _looks_like_speaker(speaker_part):
            body = " ".join([first_rest.strip()] + lines[1:]).strip()
            parenthetical, text = _split_parenthetical(body)
            if text or parenthetical:
                return Dialog(
                    speaker=_title_case(speaker_part.strip()),
                    parenthetical=parenthetical,
                    text=text,
                )

    # Formatted-display shape: all-caps speaker line, optional parenthetical
    # line, then the spoken text.
    if len(lines) >= 2 and _is_all_caps(lines[0]) and _looks_like_speaker(lines[0]):
        rest = lines[1:]
        parenthetical = None
        if rest and rest[0].startswith("(") and rest[0].endswith(")"):
            parenthetical = rest[0][1:-1].strip()
            rest = rest[1:]
        text = " ".join(rest).strip()
        if text:
            return Dialog(
                speaker=_title_case(lines[0]),
                parenthetical=parenthetical,
                text=text,
            )

    return Direction(text=flat)


def parse_script(raw: str) -> tuple[ScriptLine, ...]:
    """Split on blank-line boundaries and classify each block."""
    blocks = [b for b in re.split(r"\n\s*\n", raw) if b.strip()]
    if not blocks:
        raise ParseFailure("empty script text")
    lines = tuple(_classify_block(b) for b in blocks)
    if not any(isinstance(ln, Dialog) for ln in lines):
        raise ParseFailure("no dialog lines found")
    return lines


def _center(text: str) -> str:
    return text.center(PAGE_WIDTH).rstrip()


def format_script(script: Script) -> str:
    """Plain-text screenplay: headings flush-left caps, dialog centered."""
    blocks = []
    for line in script.lines:
        if isinstance(line, SceneHeading):
            blocks.append(line.text.upper())
        elif isinstance(line, Direction):
            blocks.append(f"[{line.text}]")
        else:
            rows = [_center(line.speaker.upper())]
            if line.parenthetical:
                rows.append(_center(f"({line.parenthetical})"))
            for wrapped in textwrap.wrap(line.text, DIALOG_MEASURE) or [""]:
                rows.append(_center(wrapped))
            blocks.append("\n".join(rows))
    return "\n\n".join(blocks) + "\n"


@dataclass(frozen=True)
class LintPolicy:
    min_dialog_lines: int = 10
    max_dialog_lines: int = 12
    word_limit: int = 20  # a dialog line with >= this many words is flagged
    punchline_word_limit: int = 15


@dataclass(frozen=True)
class LintFinding:
    code: str
    message: str
    line_index: int | None = None

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "message": self.message,
            "line_index": self.line_index,
        }


def word_count(line: Dialog) -> int:
    # Parentheticals are stage direction, not spoken dialog.
    return len(line.text.split())


def lint_script(script: Script, policy: LintPolicy = LintPolicy()) -> list[LintFinding]:
    """Advisory findings against the reel-script style bounds; never blocking."""
    findings: list[LintFinding] = []
    dialogs = script.dialog_lines()
    if len(dialogs) < policy.min_dialog_lines:
        findings.append(
            LintFinding(
                code="line_count_low",
                message=f"{len(dialogs)} dialog lines; "
                f"target at least {policy.min_dialog_lines}",
            )
        )
    if len(dialogs) > policy.max_dialog_lines:
        findings.append(
            LintFinding(
                code="line_count_high",
                message=f"{len(dialogs)} dialog lines; "
                f"target at most {policy.max_dialog_lines}",
            )
        )
    for index, line in dialogs:
        words = word_count(line)
        if not math.isinf(policy.word_limit) and words >= policy.word_limit:
            findings.append(
                LintFinding(
                    code="line_too_long",
                    message=f"dialog line has {words} words",
                    line_index=index,
                )
            )
    if dialogs:
        _, last = dialogs[-1]
        # Humor is not machine-checkable; only flag a bare factual closer.
        if (
            not math.isinf(policy.punchline_word_limit)
            and last.text.rstrip().endswith(".")
            and word_count(last) > policy.punchline_word_limit
        ):
            findings.append(
                LintFinding(
                    code="missing_punchline",
                    message="final dialog line reads like a bare factual statement",
                    line_index=dialogs[-1][0],
                )
            )
    return findings


def generate_script(
    script_id: str,
    article: Article,
    framing: Framing,
    condition: Condition,
    session: ProviderSession,
    premise: Premise | None = None,
    created_at: str = "",
) -> tuple[Script, str]:
    """Generate and parse one script; returns (script, raw completion)."""
    if condition is Condition.WITH_PREMISE and premise is None:
        raise ValidationError("with-premise generation requires a premise")
    prompt = build_script_prompt(article, condition, framing, premise)

    def ask(text: str, tag: str) -> str:
        return session.complete(
            CompletionRequest(
                prompt=text,
                temperature=CREATIVE_TEMPERATURE,
                max_output_tokens=DEFAULT_MAX_OUTPUT_TOKENS,
                request_tag=tag,
            )
        )

    raw = ask(prompt, "script.generate")
    try:
        lines = parse_script(raw)
    except ParseFailure:
        # One retry with the formatting contract re-appended.
        raw = ask(f"{prompt}\n{FORMATTING_BLOCK}", "script.generate.reask")
        lines = parse_script(raw)
    script = Script(
        id=script_id,
        premise_id=premise.id if condition is Condition.WITH_PREMISE and premise else None,
        condition=condition,
        lines=lines,
        provenance=Provenance.GENERATED,
        starred=False,
        created_at=created_at,
    )
    return script, raw


def save_edit(
    project: Project, script_id: str, new_lines: tuple[ScriptLine, ...],
    new_id: str, created_at: str = "",
) -> tuple[Project, Script]:
    """Edits never mutate history: a new Edited script is appended."""
    original = project.script_by_id(script_id)
    if original is None:
        raise UnknownScript(f"no script with id {script_id!r}")
    edited = Script(
        id=new_id,
        premise_id=original.premise_id,
        condition=original.condition,
        lines=new_lines,
        provenance=Provenance.EDITED,
        starred=False,
        created_at=created_at,
    )
    updated = with_changes(
        project, scripts=project.scripts + (edited,), active_script_id=edited.id
    )
    return updated, edited


def star_script(project: Project, script_id: str) -> tuple[Project, Script]:
    target = project.script_by_id(script_id)
    if target is None:
        raise UnknownScript(f"no script with id {script_id!r}")
    toggled = with_changes(target, starred=not target.starred)
    scripts = tuple(toggled if s.id == script_id else s for s in project.scripts)
    return with_changes(project, scripts=scripts), toggled


def script_history(project: Project) -> list[Script]:
    return sorted(project.scripts, key=lambda s: (s.created_at, s.id))
