"""A self-contained demo scenario: article, canned replies, cassette builder.

The demo transport answers by request tag with fixed text and renders tiny
deterministic PNGs, so recording it through the real pipeline produces a
cassette whose digests match replay runs exactly, with zero network.
"""

from __future__ import annotations

import hashlib
import struct
import zlib
from pathlib import Path

from .errors import ProviderUnavailable
from .model import Article
from .providers import Cassette, CompletionRequest, ImageBlob, Mode, ProviderSession

DEMO_HEADLINE = (
    "Global chip shortage leaves consumers waiting months for new credit cards"
)

DEMO_BODY = """\
Ed Delaney expected his replacement credit card within a week. Six weeks
later, he is still paying cash. The culprit is a global shortage of the
tiny chips embedded in every modern debit and credit card, and it is
causing major delays in delivering new cards to consumers.

Credit union members seem to be particularly affected. The typical time
for card issuance has stretched from five to ten days to weeks or even
months, industry groups say, as smaller issuers wait behind bigger banks
for scarce chip supplies.

"Demand skyrocketed during the pandemic and production never caught up,"
said Patrick Penfield, a professor of supply chain management. Experts
predicted that the delays in card deliveries will continue throughout
2023 despite projections of three billion cards being manufactured this
year.

The shortage results from a perfect storm of high demand, limited
production facilities, and competition from other industries. Automakers,
phone makers, and appliance manufacturers are all chasing the same chips,
and the credit card sector has been kicked to the bottom of the priority
pile.

For consumers like Delaney, the advice is unglamorous: request
replacements early, and be prepared to wait."""

DEMO_ARTICLE = Article(headline=DEMO_HEADLINE, body=DEMO_BODY)

DEMO_FRAMING = "comedic_analogy"

CANNED_COMPLETIONS: dict[str, str] = {
    "extract.setting": (
        "Credit union branches and card factories across the United States."
    ),
    "extract.stakeholders": """\
1. Ed Delaney — a consumer trying to get a new credit card issued
2. Credit unions — card issuers struggling to deliver cards to members
3. Patrick Penfield — a supply chain professor explaining the shortage
4. Card manufacturers — ramping up production of chip-enabled cards
5. Other industries — competing for the same limited chip supply""",
    "extract.plot_summary": (
        "The global chip shortage is affecting credit and debit card issuers, "
        "particularly credit unions, causing delays of weeks or even months in "
        "consumer card delivery times."
    ),
    "extract.info_points": """\
1. The global chip shortage is causing major delays in delivering credit and debit cards.
2. Typical card issuance times have stretched from five to ten days to weeks or even months.
3. Competition from other industries has kicked the credit card sector to the bottom of the priority pile.""",
    "extract.plot_elements": """\
1. The global chip shortage is causing delays in issuing debit and credit cards, with some consumers experiencing wait times of six weeks or more.
2. Credit union members seem to be particularly affected, with typical time for card issuance stretching from five to ten days to weeks or even months.
3. Experts predicted that the delays in card deliveries will continue throughout 2023 despite projections of three billion cards being manufactured this year.
4. The chip shortage results from high demand, limited production facilities, and competition from other industries.""",
    "premise.characters": """\
1. Credit and debit card issuers (particularly credit unions)
2. Consumers (like Ed Delaney)""",
    "premise.plot": """\
1. The credit union is like the pastry chef, and consumers are hungry customers waiting in line for chip-enabled cookies
2. The credit union is like a pizza parlor out of pepperoni, and consumers are diners waiting on their favorite topping
3. The credit union is like an arcade with no tokens, and consumers are players queued at the change machine""",
    "premise.setting": "Setting: A busy bakery",
    "script.generate": """\
ED DELANEY: Excuse me, when can I expect my chip cookies?

CREDIT UNION: (apologetic) Oh, we are working on it, but we are short on chips!

ED DELANEY: Short on chips? This is a bakery!

CREDIT UNION: The global chip shortage is causing delays issuing debit and credit cards, wait times of six weeks!

ED DELANEY: (confused) Six weeks? But I am hungry now!

CREDIT UNION: Credit union members are particularly affected, card issuance stretching from five to ten days to weeks, even months!

ED DELANEY: This is ridiculous! I am starving!

CREDIT UNION: (nervously) Experts predicted card delivery delays will continue throughout 2023, despite three billion cards manufactured this year!

ED DELANEY: Just our luck, stuck in line behind every other industry.

CREDIT UNION: A perfect storm: high demand, limited production facilities, and competition from other industries!

ED DELANEY: (sighs) Fine. One plain cookie, hold the chip!""",
    "board.descriptions": """\
1. Credit Union: a woman in her mid-thirties who wears a navy blue skirt suit and looks professional
2. Ed Delaney: a man in his late twenties wearing a rumpled flannel shirt and holding an empty wallet""",
    "board.props": """\
1. Credit Union: navy blue skirt suit, business briefcase, notebook, and pen
2. Ed Delaney: rumpled flannel shirt, empty wallet, bakery queue ticket, and a coffee cup""",
    "board.visual_setting": (
        "A busy bakery counter styled like a credit union branch, with a glass "
        "display case and a long line of customers."
    ),
    "board.background_descriptions": """\
1. Credit Union: credit union office; sitting at the desk of the customer service area, with modern chairs and a few plants behind her
2. Ed Delaney: bakery queue; standing at the front of a long line beside a glass display case of cookies""",
    "board.background_prompt.0": (
        "a credit union office with a customer service desk, modern chairs, "
        "and a few plants"
    ),
    "board.background_prompt.1": (
        "a busy bakery queue beside a glass display case of cookies"
    ),
    "storyboard.shot.0": (
        "curious, tilting his head, and pointing at the display case"
    ),
    "storyboard.shot.1": (
        "apologetic, slightly frowning, and one hand on top of the other"
    ),
    "storyboard.shot.2": (
        "incredulous, arms spread wide, and glancing around the bakery"
    ),
    "storyboard.shot.3": (
        "matter-of-fact, holding up a bare cookie, and tapping the counter"
    ),
    "storyboard.shot.4": (
        "confused, scratching his head, and clutching his stomach"
    ),
    "storyboard.shot.5": (
        "sympathetic, nodding slowly, and sliding a ticket across the counter"
    ),
    "storyboard.shot.6": (
        "exasperated, throwing both hands up, and stamping one foot"
    ),
    "storyboard.shot.7": (
        "nervous, wiping her brow, and pointing at a wall calendar"
    ),
    "storyboard.shot.8": (
        "resigned, shrugging, and looking back at the long line"
    ),
    "storyboard.shot.9": (
        "earnest, counting on her fingers, and gesturing at the empty shelves"
    ),
    "storyboard.shot.10": (
        "wry, smiling faintly, and accepting a plain cookie"
    ),
}

# Expected premise fields when the demo cassette is replayed; tests and
# documentation both point here instead of duplicating the strings.
EXPECTED_PREMISE = {
    "characters": (
        "Credit and debit card issuers (particularly credit unions)",
        "Consumers (like Ed Delaney)",
    ),
    "plot": (
        "The credit union is like the pastry chef, and consumers are hungry "
        "customers waiting in line for chip-enabled cookies"
    ),
    "setting": "A busy bakery",
}


def make_png(seed: str, size: int = 16) -> bytes:
    """A tiny valid PNG whose solid color derives from the seed."""
    color = hashlib.sha256(seed.encode("utf-8")).digest()[:3]

    def chunk(kind: bytes, payload: bytes) -> bytes:
        return (
            struct.pack(">I", len(payload))
            + kind
            + payload
            + struct.pack(">I", zlib.crc32(kind + payload) & 0xFFFFFFFF)
        )

    header = struct.pack(">IIBBBBB", size, size, 8, 2, 0, 0, 0)
    row = b"\x00" + bytes(color) * size
    body = zlib.compress(row * size)
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", header)
        + chunk(b"IDAT", body)
        + chunk(b"IEND", b"")
    )


class DemoTransport:
    """Answers completions by request tag; images are seed-colored PNGs."""

    def __init__(self, completions: dict[str, str] | None = None):
        self.completions = dict(CANNED_COMPLETIONS if completions is None else completions)

    def complete(self, request: CompletionRequest) -> str:
        try:
            return self.completions[request.request_tag]
        except KeyError:
            raise ProviderUnavailable(
                f"demo transport has no reply for tag {request.request_tag!r}"
            )

    def generate_image(self, prompt: str) -> ImageBlob:
        return ImageBlob(data=make_png(prompt))

    def embed(self, text: str) -> list[float]:
        raw = hashlib.sha256(text.encode("utf-8")).digest()
        return [b / 255.0 for b in raw[:16]]


def write_demo_article(path: Path) -> None:
    """Headline on the first line, blank line, then the body."""
    Path(path).write_text(
        f"{DEMO_HEADLINE}\n\n{DEMO_BODY}\n", encoding="utf-8"
    )


def build_demo_cassette(cassette_path: Path, storage_dir: Path) -> Cassette:
    """Record the full pipeline against the demo transport."""
    from .workspace import DeterministicClock, ProjectStore, run_pipeline

    cassette = Cassette(Path(cassette_path))
    session = ProviderSession(
        mode=Mode.RECORD, transport=DemoTransport(), cassette=cassette
    )
    store = ProjectStore(Path(storage_dir), clock=DeterministicClock())
    run_pipeline(store, DEMO_ARTICLE, DEMO_FRAMING, session)
    cassette.save()
    return cassette
