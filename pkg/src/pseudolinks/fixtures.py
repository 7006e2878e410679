"""Shipped example diagrams."""
from __future__ import annotations

import json
from importlib import resources

from .diagram import Diagram, from_document


def fixture_names() -> list[str]:
    files = resources.files(__package__).joinpath("fixtures")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def fixture_document(name: str) -> dict:
    path = resources.files(__package__).joinpath("fixtures", f"{name}.json")
    if not path.is_file():
        raise KeyError(f"no fixture {name!r}")
    return json.loads(path.read_text())


def load_fixture(name: str) -> Diagram:
    return from_document(fixture_document(name))


def fixtures_on(surface: str) -> list[str]:
    return [n for n in fixture_names() if fixture_document(n)["surface"] == surface]
