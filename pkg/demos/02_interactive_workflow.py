"""Staged human-in-the-loop workflow on a single project.

Walks the stage machine forward (extract, premise, script, board,
storyboard), edits artifacts along the way, jumps backward, and finishes by
replaying the append-only event log to rebuild the final state from scratch.
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from reelsmith.demo import DEMO_ARTICLE, build_demo_cassette
from reelsmith.errors import StageViolation
from reelsmith.model import Condition, Stage
from reelsmith.providers import Cassette, Mode, ProviderSession
from reelsmith.workspace import (
    DeterministicClock,
    ProjectStore,
    do_assign_highlights,
    do_back,
    do_character_board,
    do_edit_premise,
    do_edit_script,
    do_extract,
    do_generate_premise,
    do_generate_script,
    do_star_script,
    do_storyboard,
    replay_events,
)


def main() -> None:
    with tempfile.TemporaryDirectory() as scratch:
        root = Path(scratch)
        build_demo_cassette(root / "cassette.json", root / "record_storage")
        session = ProviderSession(
            mode=Mode.REPLAY, cassette=Cassette.load(root / "cassette.json")
        )
        store = ProjectStore(root / "storage", clock=DeterministicClock())
        store.create_project(DEMO_ARTICLE, project_id="workbench")

        # The stage machine refuses to skip ahead.
        try:
            do_storyboard(store, "workbench", session)
        except StageViolation as exc:
            print(f"guarded: {exc}")

        do_extract(store, "workbench", session)
        project, premise = do_generate_premise(
            store, "workbench", "comedic_analogy", session
        )
        print(f"premise {premise.id}: set in {premise.setting}")

        # Human edits append a new version; the original survives.
        project, edited = do_edit_premise(
            store, "workbench", premise.id, {"setting": "A mall food court"}
        )
        print(f"edited premise {edited.id}: set in {edited.setting}")

        project, script = do_generate_script(
            store, "workbench", Condition.WITH_PREMISE, session,
            premise_id=premise.id,
        )
        do_star_script(store, "workbench", script.id)
        project, highlights = do_assign_highlights(store, "workbench")
        print(f"script {script.id}: {len(highlights.entries)} highlighted lines")

        project = do_character_board(store, "workbench", session)
        project = do_storyboard(store, "workbench", session)
        print(f"storyboard: {len(project.storyboard)} panels")

        # Rewriting the script marks downstream artifacts stale, not deleted.
        project, rewrite = do_edit_script(
            store, "workbench", script.id,
            "ED DELANEY: One plain cookie, please!\n\nCREDIT UNION: Coming up!",
        )
        print(f"after edit {rewrite.id}: stale={list(project.stale)}")
        print(f"board still present: {project.character_board is not None}")

        project = do_back(store, "workbench", Stage.EXTRACTED)
        print(f"jumped back to: {project.stage.value}")

        rebuilt = replay_events(list(project.event_log))
        print(f"event log has {len(project.event_log)} events; "
              f"replay reconstructs state: {rebuilt.to_dict() == project.to_dict()}")


if __name__ == "__main__":
    main()
