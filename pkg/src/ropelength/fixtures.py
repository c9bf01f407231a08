"""Bundled example knots (regenerate with ``scripts/make_fixtures.py``)."""
from __future__ import annotations

from importlib import resources

FIXTURE_NAMES = ("trefoil64", "figure_eight32", "convex20", "square", "simple_unknot")


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")
    return resources.files("ropelength").joinpath("data", f"{name}.knot").read_text(encoding="utf-8")


def load_fixture(name: str):
    from .cli import parse_knot_file
    return parse_knot_file(fixture_text(name))
