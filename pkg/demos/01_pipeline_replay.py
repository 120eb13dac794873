"""End-to-end batch run: article in, filming bundle out, fully offline.

Records a cassette against the bundled demo transport once, then replays
the whole pipeline from it twice and shows that the runs agree byte for
byte. No network is touched at any point.
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from reelsmith.demo import DEMO_ARTICLE, build_demo_cassette
from reelsmith.providers import Cassette, Mode, ProviderSession
from reelsmith.workspace import (
    DeterministicClock,
    ProjectStore,
    export_bundle,
    run_pipeline,
)


def run_once(cassette_path: Path, out: Path) -> dict:
    session = ProviderSession(mode=Mode.REPLAY, cassette=Cassette.load(cassette_path))
    store = ProjectStore(out / "storage", clock=DeterministicClock())
    project = run_pipeline(store, DEMO_ARTICLE, "comedic_analogy", session)
    manifest = export_bundle(project, out / "bundle", store)

    print(f"project {project.id}: stage={project.stage.value}")
    premise = project.premises[0]
    print(f"  premise: {premise.plot[:60]}... (set in {premise.setting})")
    script = project.script_by_id(project.active_script_id)
    print(f"  script: {len(script.dialog_lines())} dialog lines")
    print(f"  highlights: {len(project.highlights.entries)} info points matched")
    print(f"  board: {len(project.character_board)} character cards")
    print(f"  storyboard: {len(project.storyboard)} panels")
    print(f"  bundle: {len(manifest['files'])} files")
    return manifest


def main() -> None:
    with tempfile.TemporaryDirectory() as scratch:
        root = Path(scratch)
        cassette_path = root / "cassette.json"
        build_demo_cassette(cassette_path, root / "record_storage")
        print(f"recorded cassette with {len(Cassette.load(cassette_path).entries)} entries\n")

        first = run_once(cassette_path, root / "first")
        second = run_once(cassette_path, root / "second")
        identical = first == second
        print(f"\ntwo replay runs produced identical manifests: {identical}")


if __name__ == "__main__":
    main()
