"""Screenplay parsing, formatting, linting, and highlight assignment.

Everything here is pure computation: no providers, no storage.
"""

from __future__ import annotations

from reelsmith.highlight import HighlightConfig, assign_highlights
from reelsmith.model import COLOR_PALETTE, Condition, Script
from reelsmith.scriptgen import format_script, lint_script, parse_script

RAW_SCRIPT = """\
INT. BAKERY COUNTER

ED DELANEY: Excuse me, when can I expect my chip cookies?

CREDIT UNION: (apologetic) We are short on chips! The shortage is delaying \
debit and credit cards by six weeks or more.

ED DELANEY: Six weeks? It used to take five to ten days!

CREDIT UNION: Card issuance has stretched from days to weeks, even months, \
and credit union members feel it most.

ED DELANEY: (sighs) Fine. One plain cookie, hold the chip!
"""

INFO_POINTS = [
    "The chip shortage is delaying debit and credit cards by six weeks or more.",
    "Card issuance stretched from five to ten days to weeks or even months.",
    "Experts predict card delivery delays will continue throughout 2023.",
]


def main() -> None:
    lines = parse_script(RAW_SCRIPT)
    script = Script(id="demo", condition=Condition.WITHOUT_PREMISE, lines=lines)
    print(f"parsed {len(lines)} blocks, {len(script.dialog_lines())} dialog lines\n")

    print(format_script(script))

    findings = lint_script(script)
    print("lint findings (advisory):")
    for finding in findings:
        print(f"  [{finding.code}] {finding.message}")

    highlights = assign_highlights(script, INFO_POINTS, HighlightConfig(threshold=0.5))
    print("\nhighlights (info point -> best dialog line):")
    for entry in highlights.entries:
        color = COLOR_PALETTE[entry.color_index]
        line = script.lines[entry.line_index]
        print(
            f"  point {entry.info_point_index} -> line {entry.line_index} "
            f"(score {entry.score:.2f}, color {color}): {line.text[:50]}..."
        )
    matched = {e.info_point_index for e in highlights.entries}
    for index in range(len(INFO_POINTS)):
        if index not in matched:
            print(f"  point {index} -> no line above threshold")


if __name__ == "__main__":
    main()
