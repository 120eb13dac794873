from __future__ import annotations

import pytest

from reelsmith.demo import DEMO_ARTICLE, build_demo_cassette
from reelsmith.model import (
    Framing,
    Premise,
    PremiseCharacter,
    Provenance,
)
from reelsmith.providers import Cassette, Mode, ProviderSession
from reelsmith.workspace import DeterministicClock, ProjectStore, run_pipeline


@pytest.fixture(scope="session")
def demo_cassette_path(tmp_path_factory):
    root = tmp_path_factory.mktemp("demo_cassette")
    path = root / "cassette.json"
    build_demo_cassette(path, root / "record_storage")
    return path


@pytest.fixture
def replay_session(demo_cassette_path):
    return ProviderSession(
        mode=Mode.REPLAY, cassette=Cassette.load(demo_cassette_path)
    )


@pytest.fixture
def demo_article():
    return DEMO_ARTICLE


@pytest.fixture(scope="session")
def demo_project(demo_cassette_path, tmp_path_factory):
    """A full pipeline run replayed from the demo cassette."""
    session = ProviderSession(
        mode=Mode.REPLAY, cassette=Cassette.load(demo_cassette_path)
    )
    store = ProjectStore(
        tmp_path_factory.mktemp("demo_project"), clock=DeterministicClock()
    )
    project = run_pipeline(store, DEMO_ARTICLE, "comedic_analogy", session)
    return store, project


@pytest.fixture
def comedic_premise():
    return Premise(
        id="p1",
        framing=Framing.COMEDIC_ANALOGY,
        characters=(
            PremiseCharacter(
                name="Credit and debit card issuers (particularly credit unions)",
                role_label="dominant stakeholder",
            ),
            PremiseCharacter(
                name="Consumers (like Ed Delaney)",
                role_label="dominant stakeholder",
            ),
        ),
        plot=(
            "The credit union is like the pastry chef, and consumers are hungry "
            "customers waiting in line for chip-enabled cookies"
        ),
        setting="A busy bakery",
        info_points=(
            "The global chip shortage is causing delays in issuing debit and "
            "credit cards, with some consumers experiencing wait times of six "
            "weeks or more.",
            "Credit union members seem to be particularly affected, with typical "
            "time for card issuance stretching from five to ten days to weeks or "
            "even months.",
            "Experts predicted that the delays in card deliveries will continue "
            "throughout 2023 despite projections of three billion cards being "
            "manufactured this year.",
            "The chip shortage results from high demand, limited production "
            "facilities, and competition from other industries.",
        ),
        provenance=Provenance.GENERATED,
    )


@pytest.fixture
def expository_premise():
    return Premise(
        id="p2",
        framing=Framing.EXPOSITORY_DIALOG,
        characters=(
            PremiseCharacter(
                name="Supply chain experts (like professor Patrick Penfield)",
                role_label="expert",
            ),
            PremiseCharacter(
                name="Consumers (like Ed Delaney)",
                role_label="naive newcomer",
            ),
        ),
        plot=(
            "a person (expert) explaining the information to another "
            "(naive newcomer)"
        ),
        setting="A chip manufacturer's factory",
        info_points=(
            "The global chip shortage is causing major delays in delivering "
            "credit and debit cards.",
            "Semiconductor demand has spiked during the pandemic, leading to "
            "long lead times for chip production, averaging 20-25 weeks.",
            "Competition from other industries has kicked the credit card "
            "sector to the bottom of the priority pile.",
        ),
        provenance=Provenance.GENERATED,
    )
