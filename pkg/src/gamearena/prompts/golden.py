"""Checked-in prompt goldens and the comparison used by ``validate-prompts``."""

from __future__ import annotations

import json
from importlib import resources

from gamearena.prompts.adapter import STYLES, compose

# Candidate generations listed in the tot_vote goldens.
VOTE_CHOICES = (
    "Thought:\nfirst idea\n\nMove:\n<A>",
    "Thought:\nsecond idea\n\nMove:\n<B>",
    "Thought:\nthird idea\n\nMove:\n<C>",
)


def _goldens():
    return resources.files("gamearena.prompts").joinpath("goldens")


def fixtures() -> list[dict]:
    return json.loads(_goldens().joinpath("fixtures.json").read_text(encoding="utf-8"))


def golden_text(name: str, style: str) -> str:
    return _goldens().joinpath(f"{name}__{style}.txt").read_text(encoding="utf-8")


def composed_text(fixture: dict, style: str) -> str:
    choices = VOTE_CHOICES if style == "tot_vote" else None
    return compose(fixture["game"], fixture["variables"], style, choices).text()


def check_goldens() -> list[tuple[str, str]]:
    """Return the (fixture, style) pairs whose composed prompt differs from its golden."""
    return [(fx["name"], style) for fx in fixtures() for style in STYLES
            if composed_text(fx, style) != golden_text(fx["name"], style)]
