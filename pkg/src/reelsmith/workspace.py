"""Project persistence, the staged workflow state machine, and exports.

Storage is one directory per project: a JSON document plus content-addressed
image blobs. Every state change flows through ``apply_event``, so replaying
the append-only event log reconstructs the project exactly. Upstream redo
marks downstream artifacts stale; nothing generated is ever deleted.
"""

from __future__ import annotations

import json
import shutil
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Optional
from uuid import uuid4

from . import scriptgen, visuals
from .errors import (
    IOFailure,
    NotFound,
    StageViolation,
    StorageCorrupt,
    UnknownScript,
    ValidationError,
)
from .extraction import extract_news_facts
from .highlight import HighlightConfig, assign_highlights
from .model import (
    Actor,
    Article,
    CharacterCard,
    Condition,
    EventRecord,
    Framing,
    HighlightSet,
    NewsFacts,
    Premise,
    Project,
    Provenance,
    Script,
    Stage,
    StoryboardPanel,
    digest,
    stage_index,
    with_changes,
)
from .premise import apply_premise_edit, generate_premise
from .prompts import build_storyboard_image_prompt
from .providers import ImageBlob, ProviderSession


class SystemClock:
    def now(self) -> str:
        return datetime.now(timezone.utc).isoformat()


class DeterministicClock:
    """Monotonic fake clock for replay runs: reproducible timestamps."""

    def __init__(self, start: str = "2000-01-01T00:00:00+00:00", step_seconds: int = 1):
        self._current = datetime.fromisoformat(start)
        self._step = timedelta(seconds=step_seconds)

    def now(self) -> str:
        value = self._current.isoformat()
        self._current += self._step
        return value


def _pretty_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


DOWNSTREAM_OF = {
    Stage.ARTICLE: ("news_facts", "premise", "script", "character_board", "storyboard"),
    Stage.EXTRACTED: ("premise", "script", "character_board", "storyboard"),
    Stage.PREMISE_READY: ("script", "character_board", "storyboard"),
    Stage.SCRIPT_ACTIVE: ("character_board", "storyboard"),
    Stage.BOARD_READY: ("storyboard",),
    Stage.STORYBOARD_READY: (),
}


def _mark_stale(project: Project, artifacts: tuple[str, ...]) -> Project:
    present = {
        "character_board": project.character_board is not None,
        "storyboard": project.storyboard is not None,
        "script": bool(project.scripts),
        "premise": bool(project.premises),
        "news_facts": project.news_facts is not None,
    }
    stale = set(project.stale)
    stale.update(a for a in artifacts if present.get(a))
    return with_changes(project, stale=tuple(sorted(stale)))


def apply_event(project: Optional[Project], event: EventRecord) -> Project:
    """The single state-transition function; replaying the log uses it too."""
    action = event.action
    payload = event.payload

    if action == "project.created":
        return Project(
            id=payload["id"],
            article=Article.from_dict(payload["article"]),
            event_log=(event,),
        )
    if project is None:
        raise ValidationError("only project.created may start an event stream")

    updated = project
    if action == "facts.extracted":
        updated = _mark_stale(updated, DOWNSTREAM_OF[Stage.EXTRACTED])
        updated = with_changes(
            updated,
            news_facts=NewsFacts.from_dict(payload["news_facts"]),
            stage=Stage.EXTRACTED,
        )
    elif action in ("premise.generated", "premise.edited"):
        updated = _mark_stale(updated, DOWNSTREAM_OF[Stage.PREMISE_READY])
        updated = with_changes(
            updated,
            premises=updated.premises + (Premise.from_dict(payload["premise"]),),
            stage=Stage.PREMISE_READY,
        )
    elif action in ("script.generated", "script.edited"):
        script = Script.from_dict(payload["script"])
        updated = _mark_stale(updated, DOWNSTREAM_OF[Stage.SCRIPT_ACTIVE])
        updated = with_changes(
            updated,
            scripts=updated.scripts + (script,),
            active_script_id=script.id,
            highlights=None,
            stage=Stage.SCRIPT_ACTIVE,
        )
    elif action == "script.starred":
        updated, _ = scriptgen.star_script(updated, payload["script_id"])
    elif action == "script.activated":
        if updated.script_by_id(payload["script_id"]) is None:
            raise UnknownScript(payload["script_id"])
        updated = with_changes(updated, active_script_id=payload["script_id"])
    elif action == "highlights.assigned":
        updated = with_changes(
            updated, highlights=HighlightSet.from_dict(payload["highlights"])
        )
    elif action == "board.generated":
        updated = _mark_stale(updated, DOWNSTREAM_OF[Stage.BOARD_READY])
        stale = tuple(s for s in updated.stale if s != "character_board")
        updated = with_changes(
            updated,
            character_board=tuple(
                CharacterCard.from_dict(c) for c in payload["cards"]
            ),
            board_generation=updated.board_generation + 1,
            stage=Stage.BOARD_READY,
            stale=stale,
        )
    elif action == "storyboard.generated":
        stale = tuple(s for s in updated.stale if s != "storyboard")
        updated = with_changes(
            updated,
            storyboard=tuple(
                StoryboardPanel.from_dict(p) for p in payload["panels"]
            ),
            storyboard_board_generation=payload["board_generation"],
            stage=Stage.STORYBOARD_READY,
            stale=stale,
        )
    elif action == "stage.back":
        target = Stage(payload["target"])
        updated = _mark_stale(updated, DOWNSTREAM_OF[target])
        updated = with_changes(updated, stage=target)
    else:
        raise ValidationError(f"unknown event action: {action!r}")

    # Provider usage is carried on the event itself so that replaying the
    # log reconstructs the call counter along with everything else.
    updated = with_changes(
        updated,
        provider_calls=updated.provider_calls + payload.get("provider_calls", 0),
    )
    return with_changes(updated, event_log=updated.event_log + (event,))


def replay_events(events: list[EventRecord]) -> Project:
    if not events:
        raise ValidationError("cannot replay an empty event log")
    project: Optional[Project] = None
    for event in events:
        project = apply_event(project, event)
    assert project is not None
    return project


def advance_stage(
    project: Project, action: str, condition: Condition | None = None,
    target: Stage | None = None,
) -> Project:
    """Validate a workflow action and move the stage pointer.

    Backward jumps are always legal; forward actions require their
    prerequisites and raise StageViolation otherwise.
    """
    if action == "back":
        if target is None:
            raise ValidationError("backward jump needs a target stage")
        if stage_index(target) > stage_index(project.stage):
            raise StageViolation("back action cannot jump forward")
        return _mark_stale(with_changes(project, stage=target), DOWNSTREAM_OF[target])

    check_action(project, action, condition)
    next_stage = {
        "extract": Stage.EXTRACTED,
        "premise": Stage.PREMISE_READY,
        "script": Stage.SCRIPT_ACTIVE,
        "board": Stage.BOARD_READY,
        "storyboard": Stage.STORYBOARD_READY,
    }[action]
    return with_changes(project, stage=next_stage)


def check_action(
    project: Project, action: str, condition: Condition | None = None
) -> None:
    if action == "extract":
        return
    if action == "premise":
        if project.news_facts is None:
            raise StageViolation("premise generation requires extracted news facts")
        return
    if action == "script":
        if condition is Condition.WITH_PREMISE and not project.premises:
            raise StageViolation("with-premise script requires a premise first")
        if condition is Condition.WITHOUT_PREMISE and project.news_facts is None:
            # The without-premise prompt still embeds the article only, but
            # the workflow orders extraction first.
            raise StageViolation("script generation requires extraction first")
        return
    if action == "board":
        if project.active_script_id is None:
            raise StageViolation("character board requires an active script")
        return
    if action == "storyboard":
        if project.character_board is None:
            raise StageViolation("storyboard requires a character board")
        return
    raise ValidationError(f"unknown workflow action: {action!r}")


class ProjectStore:
    """One directory per project; single writer enforced by an advisory lock."""

    def __init__(self, root: Path, clock=None):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.clock = clock or SystemClock()

    def project_dir(self, project_id: str) -> Path:
        return self.root / project_id

    def blob_dir(self, project_id: str) -> Path:
        return self.project_dir(project_id) / "blobs"

    def blob_path(self, project_id: str, name: str) -> Path:
        return self.blob_dir(project_id) / name

    def blob_sink(self, project_id: str):
        def save(blob: ImageBlob) -> str:
            ext = "png" if blob.media_type == "image/png" else "bin"
            name = f"{blob.digest}.{ext}"
            directory = self.blob_dir(project_id)
            directory.mkdir(parents=True, exist_ok=True)
            path = directory / name
            if not path.exists():
                path.write_bytes(blob.data)
            return name

        return save

    @contextmanager
    def lock(self, project_id: str):
        import fcntl

        directory = self.project_dir(project_id)
        directory.mkdir(parents=True, exist_ok=True)
        lock_path = directory / ".lock"
        with open(lock_path, "w") as handle:
            fcntl.flock(handle, fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(handle, fcntl.LOCK_UN)

    def list_projects(self) -> list[str]:
        return sorted(
            p.name for p in self.root.iterdir()
            if p.is_dir() and (p / "project.json").exists()
        )

    def create_project(
        self, article: Article, project_id: str | None = None
    ) -> Project:
        project_id = project_id or uuid4().hex[:12]
        if (self.project_dir(project_id) / "project.json").exists():
            raise ValidationError(f"project id already exists: {project_id}")
        event = self._event(
            Actor.HUMAN, "project.created",
            {"id": project_id, "article": article.to_dict()},
        )
        project = apply_event(None, event)
        self.save(project)
        return project

    def save(self, project: Project) -> None:
        directory = self.project_dir(project.id)
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / "project.json"
        tmp = directory / "project.json.tmp"
        try:
            tmp.write_text(_pretty_json(project.to_dict()), encoding="utf-8")
            tmp.replace(path)  # atomic: a truncated write never clobbers
        except OSError as exc:
            raise IOFailure(f"could not persist project: {exc}")

    def load(self, project_id: str) -> Project:
        path = self.project_dir(project_id) / "project.json"
        if not path.exists():
            raise NotFound(f"no project with id {project_id!r}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            return Project.from_dict(data)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise StorageCorrupt(f"project document unreadable: {exc}")

    def _event(self, actor: Actor, action: str, payload: dict) -> EventRecord:
        return EventRecord(
            timestamp=self.clock.now(),
            actor=actor,
            action=action,
            payload=payload,
            payload_digest=digest(payload),
        )

    def _commit(self, project: Project, actor: Actor, action: str, payload: dict) -> Project:
        updated = apply_event(project, self._event(actor, action, payload))
        self.save(updated)
        return updated


def do_extract(store: ProjectStore, project_id: str, session: ProviderSession) -> Project:
    with store.lock(project_id):
        project = store.load(project_id)
        check_action(project, "extract")
        before = session.calls.total
        facts, raw_replies = extract_news_facts(project.article, session)
        return store._commit(
            project, Actor.MACHINE, "facts.extracted",
            {
                "news_facts": facts.to_dict(),
                "raw_replies": raw_replies,
                "provider_calls": session.calls.total - before,
            },
        )


def do_generate_premise(
    store: ProjectStore, project_id: str, framing: Framing | str,
    session: ProviderSession,
) -> tuple[Project, Premise]:
    framing = Framing(framing)
    with store.lock(project_id):
        project = store.load(project_id)
        check_action(project, "premise")
        premise_id = f"premise-{len(project.premises) + 1}"
        before = session.calls.total
        premise, raw_replies, warnings = generate_premise(
            premise_id, framing, project.article, project.news_facts, session
        )
        project = store._commit(
            project, Actor.MACHINE, "premise.generated",
            {
                "premise": premise.to_dict(),
                "raw_replies": raw_replies,
                "warnings": warnings,
                "provider_calls": session.calls.total - before,
            },
        )
        return project, premise


def do_edit_premise(
    store: ProjectStore, project_id: str, premise_id: str, patch: dict
) -> tuple[Project, Premise]:
    with store.lock(project_id):
        project = store.load(project_id)
        original = project.premise_by_id(premise_id)
        if original is None:
            raise NotFound(f"no premise with id {premise_id!r}")
        edited = apply_premise_edit(
            original, patch, new_id=f"premise-{len(project.premises) + 1}"
        )
        project = store._commit(
            project, Actor.HUMAN, "premise.edited",
            {"premise": edited.to_dict(), "edited_from": premise_id},
        )
        return project, edited


def do_generate_script(
    store: ProjectStore,
    project_id: str,
    condition: Condition,
    session: ProviderSession,
    framing: Framing | str | None = None,
    premise_id: str | None = None,
) -> tuple[Project, Script]:
    if framing is not None:
        framing = Framing(framing)
    with store.lock(project_id):
        project = store.load(project_id)
        check_action(project, "script", condition)
        premise = None
        if condition is Condition.WITH_PREMISE:
            premise = (
                project.premise_by_id(premise_id)
                if premise_id
                else project.premises[-1]
            )
            if premise is None:
                raise NotFound(f"no premise with id {premise_id!r}")
            framing = premise.framing
        if framing is None:
            raise ValidationError("without-premise generation needs a framing")
        script_id = f"script-{len(project.scripts) + 1}"
        before = session.calls.total
        script, raw = scriptgen.generate_script(
            script_id, project.article, framing, condition, session,
            premise=premise, created_at=store.clock.now(),
        )
        project = store._commit(
            project, Actor.MACHINE, "script.generated",
            {
                "script": script.to_dict(),
                "raw_completion": raw,
                "provider_calls": session.calls.total - before,
            },
        )
        return project, script


def do_edit_script(
    store: ProjectStore, project_id: str, script_id: str, raw_text: str
) -> tuple[Project, Script]:
    with store.lock(project_id):
        project = store.load(project_id)
        original = project.script_by_id(script_id)
        if original is None:
            raise UnknownScript(f"no script with id {script_id!r}")
        lines = scriptgen.parse_script(raw_text)
        edited = Script(
            id=f"script-{len(project.scripts) + 1}",
            premise_id=original.premise_id,
            condition=original.condition,
            lines=lines,
            provenance=Provenance.EDITED,
            created_at=store.clock.now(),
        )
        project = store._commit(
            project, Actor.HUMAN, "script.edited",
            {"script": edited.to_dict(), "edited_from": script_id},
        )
        return project, edited


def do_star_script(
    store: ProjectStore, project_id: str, script_id: str
) -> tuple[Project, Script]:
    with store.lock(project_id):
        project = store.load(project_id)
        if project.script_by_id(script_id) is None:
            raise UnknownScript(f"no script with id {script_id!r}")
        project = store._commit(
            project, Actor.HUMAN, "script.starred", {"script_id": script_id}
        )
        return project, project.script_by_id(script_id)


def info_points_for(project: Project, script: Script) -> list[str]:
    if script.premise_id:
        premise = project.premise_by_id(script.premise_id)
        if premise is not None:
            return list(premise.info_points)
    if project.news_facts is not None:
        return list(project.news_facts.info_points)
    raise ValidationError("no info points available to highlight against")


def do_assign_highlights(
    store: ProjectStore,
    project_id: str,
    config: HighlightConfig = HighlightConfig(),
    session: ProviderSession | None = None,
) -> tuple[Project, HighlightSet]:
    with store.lock(project_id):
        project = store.load(project_id)
        if project.active_script_id is None:
            raise StageViolation("highlighting requires an active script")
        script = project.script_by_id(project.active_script_id)
        before = session.calls.total if session is not None else 0
        highlights = assign_highlights(
            script, info_points_for(project, script), config, session
        )
        after = session.calls.total if session is not None else 0
        project = store._commit(
            project, Actor.MACHINE, "highlights.assigned",
            {
                "highlights": highlights.to_dict(),
                "script_id": script.id,
                "provider_calls": after - before,
            },
        )
        return project, highlights


def do_character_board(
    store: ProjectStore, project_id: str, session: ProviderSession
) -> Project:
    with store.lock(project_id):
        project = store.load(project_id)
        check_action(project, "board")
        script = project.script_by_id(project.active_script_id)
        premise = None
        if script.premise_id:
            premise = project.premise_by_id(script.premise_id)
        if premise is None and project.premises:
            premise = project.premises[-1]
        if premise is None:
            raise StageViolation("character board requires a premise")
        before = session.calls.total
        cards, raw_replies = visuals.build_character_board(
            script, premise, session, store.blob_sink(project_id)
        )
        return store._commit(
            project, Actor.MACHINE, "board.generated",
            {
                "cards": [c.to_dict() for c in cards],
                "raw_replies": raw_replies,
                "provider_calls": session.calls.total - before,
            },
        )


def do_storyboard(
    store: ProjectStore, project_id: str, session: ProviderSession
) -> Project:
    with store.lock(project_id):
        project = store.load(project_id)
        check_action(project, "storyboard")
        script = project.script_by_id(project.active_script_id)
        before = session.calls.total
        panels = visuals.build_storyboard(
            script, list(project.character_board), session,
            store.blob_sink(project_id),
        )
        return store._commit(
            project, Actor.MACHINE, "storyboard.generated",
            {
                "panels": [p.to_dict() for p in panels],
                "board_generation": project.board_generation,
                "provider_calls": session.calls.total - before,
            },
        )


def do_back(store: ProjectStore, project_id: str, target: Stage) -> Project:
    with store.lock(project_id):
        project = store.load(project_id)
        if stage_index(target) > stage_index(project.stage):
            raise StageViolation("back action cannot jump forward")
        return store._commit(
            project, Actor.HUMAN, "stage.back", {"target": target.value}
        )


def run_pipeline(
    store: ProjectStore,
    article: Article,
    framing: Framing | str,
    session: ProviderSession,
    highlight_config: HighlightConfig = HighlightConfig(),
) -> Project:
    """Batch, non-interactive: article through storyboard in one pass.

    The project id derives from the article digest, so repeated runs over
    the same article and cassette are byte-identical end to end.
    """
    framing = Framing(framing)
    project_id = f"run-{digest(article.to_dict())[:12]}"
    project = store.create_project(article, project_id=project_id)
    do_extract(store, project_id, session)
    do_generate_premise(store, project_id, framing, session)
    do_generate_script(store, project_id, Condition.WITH_PREMISE, session)
    do_assign_highlights(store, project_id, highlight_config)
    do_character_board(store, project_id, session)
    do_storyboard(store, project_id, session)
    return store.load(project_id)


def export_bundle(project: Project, destination: Path, store: ProjectStore) -> dict:
    """Write a filming bundle; the manifest lists every file with its digest.

    Sections absent from the project (no storyboard yet, say) are omitted
    from the bundle and flagged in the manifest.
    """
    import hashlib

    destination = Path(destination)
    try:
        destination.mkdir(parents=True, exist_ok=True)

        written: list[Path] = []

        def write_text(rel: str, text: str) -> None:
            path = destination / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
            written.append(path)

        def copy_blob(rel: str, name: str) -> None:
            path = destination / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            shutil.copyfile(store.blob_path(project.id, name), path)
            written.append(path)

        write_text("project.json", _pretty_json(project.to_dict()))

        sections = {"project": True, "script": False, "highlights": False,
                    "character_board": False, "storyboard": False}

        script = (
            project.script_by_id(project.active_script_id)
            if project.active_script_id
            else None
        )
        if script is not None:
            write_text("script.txt", scriptgen.format_script(script))
            sections["script"] = True
        if project.highlights is not None:
            write_text("highlights.json", _pretty_json(project.highlights.to_dict()))
            sections["highlights"] = True

        if project.character_board:
            checklist = []
            for index, card in enumerate(project.character_board):
                checklist.append(f"{card.character_name}:")
                checklist.extend(f"  - {prop}" for prop in card.props)
                if card.portrait_image:
                    copy_blob(
                        f"character_board/{index:02d}_portrait.png",
                        card.portrait_image,
                    )
                if card.background_image:
                    copy_blob(
                        f"character_board/{index:02d}_background.png",
                        card.background_image,
                    )
            write_text(
                "character_board/props_checklist.txt", "\n".join(checklist) + "\n"
            )
            sections["character_board"] = True

        if project.storyboard and script is not None:
            board = list(project.character_board or ())
            panel_manifest = []
            for index, panel in enumerate(project.storyboard):
                line = script.lines[panel.line_index]
                entry = {
                    "line_index": panel.line_index,
                    "speaker": line.speaker,
                    "dialog": line.text,
                    "expression": panel.expression,
                    "gesture": panel.gesture,
                    "action": panel.action,
                    "image": None,
                    "image_prompt": None,
                }
                if board:
                    card = visuals.match_speaker_to_card(line.speaker, board)
                    entry["image_prompt"] = build_storyboard_image_prompt(
                        card.description, panel.expression, panel.gesture, panel.action
                    )
                if panel.image:
                    rel = f"storyboard/{index:02d}_panel.png"
                    copy_blob(rel, panel.image)
                    entry["image"] = rel
                panel_manifest.append(entry)
            write_text("storyboard/manifest.json", _pretty_json(panel_manifest))
            sections["storyboard"] = True

        files = []
        for path in sorted(written):
            data = path.read_bytes()
            files.append(
                {
                    "path": str(path.relative_to(destination)),
                    "sha256": hashlib.sha256(data).hexdigest(),
                    "bytes": len(data),
                }
            )
        manifest = {"project_id": project.id, "sections": sections, "files": files}
        write_text("manifest.json", _pretty_json(manifest))
        return manifest
    except OSError as exc:
        raise IOFailure(f"export failed: {exc}")
