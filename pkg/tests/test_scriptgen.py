from __future__ import annotations

import math
from pathlib import Path

import pytest

from reelsmith.errors import ParseFailure, UnknownScript, ValidationError
from reelsmith.model import (
    Article,
    Condition,
    Dialog,
    Direction,
    Framing,
    Project,
    SceneHeading,
    Script,
)
from reelsmith.prompts import FORMATTING_BLOCK
from reelsmith.providers import Cassette, Mode, ProviderSession
from reelsmith.scriptgen import (
    LintPolicy,
    format_script,
    generate_script,
    lint_script,
    parse_script,
    save_edit,
    script_history,
    star_script,
    word_count,
)

FIXTURES = Path(__file__).parent / "fixtures"


def _load(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def test_parse_reenactment_fixture_structure():
    lines = parse_script(_load("reenactment_script.txt"))
    assert all(isinstance(ln, Dialog) for ln in lines)
    assert len(lines) == 6
    first = lines[0]
    assert first.speaker == "Ed Delaney"
    assert first.parenthetical is None
    assert first.text == "Excuse me, where's my new card? It's been 6 weeks!"
    third = lines[2]
    assert third.speaker == "Ed Delaney"
    assert third.parenthetical == "incredulous"
    assert third.text == (
        "A global shortage of potato chips? What's that got to do with my card?"
    )


def test_parse_expository_fixture_parentheticals():
    lines = parse_script(_load("expository_script.txt"))
    assert [ln.speaker for ln in lines] == [
        "Patrick Penfield",
        "Ed Delaney",
        "Patrick Penfield",
        "Ed Delaney",
        "Patrick Penfield",
    ]
    assert lines[2].parenthetical == "Smiles"


def test_parse_comedic_fixture_speakers_alternate():
    lines = parse_script(_load("comedic_script.txt"))
    assert len(lines) == 8
    assert {ln.speaker for ln in lines} == {"Ed Delaney", "Credit Union"}
    assert lines[5].parenthetical == "nervously"


def test_parse_direction_block():
    lines = parse_script("[The customer walks in.]\n\nA: Hello!")
    assert lines[0] == Direction(text="The customer walks in.")


def test_parse_scene_heading_block():
    lines = parse_script("INT. CREDIT UNION\n\nED: Hi there.")
    assert lines[0] == SceneHeading(text="INT. CREDIT UNION")


def test_parse_without_dialog_fails():
    with pytest.raises(ParseFailure):
        parse_script("[Only a direction.]\n\n[Another one.]")
    with pytest.raises(ParseFailure):
        parse_script("   \n\n  ")


def test_unrecognized_block_becomes_direction():
    lines = parse_script("Some loose prose paragraph.\n\nED: Hi.")
    assert lines[0] == Direction(text="Some loose prose paragraph.")


def _script(lines):
    return Script(id="s", condition=Condition.WITH_PREMISE, lines=tuple(lines))


def test_format_scene_heading_flush_left_caps():
    text = format_script(_script([SceneHeading(text="int. credit union"),
                                  Dialog(speaker="Ed", text="Hi.")]))
    assert text.startswith("INT. CREDIT UNION\n\n")


def test_format_dialog_is_centered():
    text = format_script(_script([Dialog(speaker="Ed Delaney", text="Hello.")]))
    rows = text.splitlines()
    assert rows[0].strip() == "ED DELANEY"
    assert rows[0].startswith(" ")
    assert rows[1].strip() == "Hello."


def test_format_parenthetical_on_own_line():
    text = format_script(
        _script([Dialog(speaker="Ed", text="Hello.", parenthetical="angry")])
    )
    rows = [r.strip() for r in text.splitlines()]
    assert rows[:3] == ["ED", "(angry)", "Hello."]


def _structurally_equal(a, b) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Dialog):
        return (
            a.speaker == b.speaker
            and a.parenthetical == b.parenthetical
            and " ".join(a.text.split()) == " ".join(b.text.split())
        )
    return " ".join(a.text.upper().split()) == " ".join(b.text.upper().split())


ROUND_TRIP_CORPUS = [
    parse_script(_load("reenactment_script.txt")),
    parse_script(_load("expository_script.txt")),
    parse_script(_load("comedic_script.txt")),
    (
        SceneHeading(text="INT. BAKERY - DAY"),
        Dialog(speaker="Ed Delaney", text="One cookie please."),
        Direction(text="The line grows longer."),
        Dialog(speaker="Credit Union", text="No chips left!", parenthetical="panicked"),
    ),
    (
        Dialog(speaker="Anchor", text="Breaking news tonight from the chip world."),
        Dialog(speaker="Reporter", text="Thanks. I am standing outside the factory."),
    ),
    (
        Direction(text="A long queue snakes around the block."),
        Dialog(speaker="Customer One", text="Have you been waiting long?"),
        Dialog(speaker="Customer Two", text="Only since February.", parenthetical="deadpan"),
    ),
    (
        SceneHeading(text="EXT. FACTORY GATES"),
        Dialog(
            speaker="Manager",
            text=(
                "We are producing as fast as we can but the orders keep "
                "arriving faster than the silicon."
            ),
        ),
    ),
    (
        Dialog(speaker="Professor", text="Lead times doubled in a single year."),
        Dialog(speaker="Student", text="So when do I get my card?"),
        Dialog(speaker="Professor", text="Ask me again in 2024.", parenthetical="wry"),
    ),
    (
        Dialog(speaker="Teller", text="Next please!"),
        Direction(text="Nobody moves."),
        Dialog(speaker="Teller", text="Anyone?"),
    ),
    (
        SceneHeading(text="INT. NEWSROOM"),
        Direction(text="Phones ring everywhere."),
        Dialog(speaker="Editor", text="Find me a chip shortage angle by noon."),
        Dialog(speaker="Journalist", text="On it."),
    ),
]


@pytest.mark.parametrize("lines", ROUND_TRIP_CORPUS, ids=range(len(ROUND_TRIP_CORPUS)))
def test_format_parse_round_trip_structure_identity(lines):
    script = _script(lines)
    reparsed = parse_script(format_script(script))
    assert len(reparsed) == len(script.lines)
    for original, back in zip(script.lines, reparsed):
        assert _structurally_equal(original, back)


def test_round_trip_corpus_is_large_enough():
    assert len(ROUND_TRIP_CORPUS) >= 10


def test_parsing_never_loses_dialog_text():
    raw = _load("reenactment_script.txt")
    lines = parse_script(raw)
    flattened = " ".join(raw.split())
    for line in lines:
        assert " ".join(line.text.split()) in flattened


def _dialogs(n, words_each=5):
    text = " ".join(["word"] * (words_each - 1)) + " end!"
    return [Dialog(speaker=f"Speaker {i}", text=text) for i in range(n)]


def test_lint_passes_within_bounds():
    assert lint_script(_script(_dialogs(10))) == []
    assert lint_script(_script(_dialogs(12))) == []
    eleven = _script(_dialogs(11, words_each=18))
    assert lint_script(eleven) == []


def test_lint_flags_line_count_bounds():
    codes = [f.code for f in lint_script(_script(_dialogs(9)))]
    assert codes == ["line_count_low"]
    codes = [f.code for f in lint_script(_script(_dialogs(13)))]
    assert codes == ["line_count_high"]


def test_lint_word_limit_boundary():
    nineteen = _script(_dialogs(10, words_each=19))
    assert all(f.code != "line_too_long" for f in lint_script(nineteen))
    twenty = _dialogs(10)
    twenty[3] = Dialog(speaker="S", text=" ".join(["w"] * 20))
    findings = lint_script(_script(twenty))
    assert [f.code for f in findings] == ["line_too_long"]
    assert findings[0].line_index == 3


def test_word_count_excludes_parenthetical():
    line = Dialog(speaker="S", text="three words here", parenthetical="very long cue")
    assert word_count(line) == 3


def test_missing_punchline_heuristic():
    lines = _dialogs(10)
    lines[-1] = Dialog(speaker="S", text=" ".join(["fact"] * 16) + ".")
    assert "missing_punchline" in [f.code for f in lint_script(_script(lines))]
    lines[-1] = Dialog(speaker="S", text="Hold the chip!")
    assert "missing_punchline" not in [f.code for f in lint_script(_script(lines))]


def test_widened_policy_passes_everything():
    policy = LintPolicy(
        min_dialog_lines=0,
        max_dialog_lines=math.inf,
        word_limit=math.inf,
        punchline_word_limit=math.inf,
    )
    lines = _dialogs(25)
    lines[0] = Dialog(speaker="S", text=" ".join(["w"] * 50) + ".")
    assert lint_script(_script(lines), policy) == []


def test_generate_script_replay(demo_article, comedic_premise, replay_session):
    script, raw = generate_script(
        "s1",
        demo_article,
        Framing.COMEDIC_ANALOGY,
        Condition.WITH_PREMISE,
        replay_session,
        premise=comedic_premise,
    )
    assert script.premise_id == comedic_premise.id
    assert len(script.dialog_lines()) == 11
    assert script.lines[0].speaker == "Ed Delaney"
    assert "ED DELANEY" in raw


def test_generate_script_requires_premise_when_conditioned(demo_article, replay_session):
    with pytest.raises(ValidationError):
        generate_script(
            "s1",
            demo_article,
            Framing.COMEDIC_ANALOGY,
            Condition.WITH_PREMISE,
            replay_session,
        )


def test_generate_reasks_once_with_formatting_block(demo_article, tmp_path):
    class Transport:
        def __init__(self):
            self.prompts = []

        def complete(self, request):
            self.prompts.append((request.request_tag, request.prompt))
            if request.request_tag == "script.generate":
                return "no screenplay structure at all"
            return "ED: Hello there!\n\nBOB: Hi!"

        def generate_image(self, prompt):
            raise AssertionError

        def embed(self, text):
            raise AssertionError

    transport = Transport()
    session = ProviderSession(
        mode=Mode.RECORD, transport=transport, cassette=Cassette(tmp_path / "c.json")
    )
    script, _ = generate_script(
        "s1",
        demo_article,
        Framing.REENACTMENT,
        Condition.WITHOUT_PREMISE,
        session,
    )
    assert script.premise_id is None
    tags = [t for t, _ in transport.prompts]
    assert tags == ["script.generate", "script.generate.reask"]
    assert transport.prompts[1][1].endswith(FORMATTING_BLOCK)


def _project_with(script):
    article = Article(headline="h", body="b")
    return Project(id="p", article=article, scripts=(script,), active_script_id=script.id)


def test_save_edit_appends_history():
    original = _script(_dialogs(3))
    project = _project_with(original)
    updated, edited = save_edit(
        project, "s", tuple(_dialogs(4)), new_id="s2", created_at="t2"
    )
    assert len(updated.scripts) == 2
    assert updated.active_script_id == "s2"
    assert edited.provenance.value == "edited"
    assert updated.scripts[0] == original


def test_star_toggles():
    project = _project_with(_script(_dialogs(3)))
    project, starred = star_script(project, "s")
    assert starred.starred is True
    project, unstarred = star_script(project, "s")
    assert unstarred.starred is False


def test_unknown_script_errors():
    project = _project_with(_script(_dialogs(3)))
    with pytest.raises(UnknownScript):
        star_script(project, "nope")
    with pytest.raises(UnknownScript):
        save_edit(project, "nope", tuple(_dialogs(2)), new_id="x")


def test_history_sorted_by_created_at():
    s1 = Script(id="a", condition=Condition.WITH_PREMISE, lines=tuple(_dialogs(2)), created_at="2")
    s2 = Script(id="b", condition=Condition.WITH_PREMISE, lines=tuple(_dialogs(2)), created_at="1")
    project = Project(id="p", article=Article(headline="h", body="b"), scripts=(s1, s2))
    assert [s.id for s in script_history(project)] == ["b", "a"]
