"""Python access to the integro-differential operator library."""

import json

from ._core import (
    OpError,
    ParseError,
    RingError,
    normalize,
    prove,
    ring_op,
    system_text,
    systems,
    taylor,
    x_n,
)
from ._core import confluence_json


def confluence(system: str, traces: bool = False) -> dict:
    """Ambiguity report of a shipped reduction system as a dict."""
    return json.loads(confluence_json(system, traces))


__all__ = [
    "OpError",
    "ParseError",
    "RingError",
    "confluence",
    "normalize",
    "prove",
    "ring_op",
    "system_text",
    "systems",
    "taylor",
    "x_n",
]
