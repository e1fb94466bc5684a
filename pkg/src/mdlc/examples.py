"""Access to the bundled example MDL sources."""

from __future__ import annotations

from importlib import resources

from mdlc.frontend import parse
from mdlc.frontend.ast import MdlDocument

EXAMPLES = ("mazerobot", "lock")


def example_source(name: str) -> str:
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    return resources.files("mdlc.data").joinpath(f"{name}.mdl").read_text(encoding="utf-8")


def example_document(name: str) -> MdlDocument:
    return parse(example_source(name))
