"""Small named triangulations shipped with the package."""
from __future__ import annotations

from importlib import resources

from .errors import InvalidInput
from .tri_core import Triangulation, parse

NAMES = (
    "l31_2v",
    "l31_a",
    "l31_b",
    "l41",
    "l52",
    "rp3_1v",
    "rp3_2v",
    "s2xs1",
    "s3_1v",
    "s3_2v",
)


def named_text(name: str) -> str:
    if name not in NAMES:
        raise InvalidInput(f"unknown named triangulation {name!r}; known: {', '.join(NAMES)}")
    return resources.files("effitri").joinpath("data", f"{name}.tri").read_text(encoding="utf-8")


def load(name: str) -> Triangulation:
    return parse(named_text(name))
