"""The predefined rule set, shipped verbatim as a text asset.

The rules cover narrower/broader term reasoning over the generic hierarchy:
the full closure (``narrower-term``, with reflexive match), the proper
closure (``strictly-narrower-term``), depth-bounded variants 1 to 3, and the
inverse ``broader-term`` family.
"""

from __future__ import annotations

from importlib import resources
from typing import Dict, Mapping

from .ast import Rule

_cached_text: str | None = None
_cached_rules: Dict[str, Rule] | None = None


def prelude_text() -> str:
    """The rule file exactly as shipped."""
    global _cached_text
    if _cached_text is None:
        _cached_text = (
            resources.files("kbir.data").joinpath("prelude.tolog").read_text("utf-8")
        )
    return _cached_text


def prelude_rules() -> Mapping[str, Rule]:
    """Parsed prelude rules by name; parsed once per process."""
    global _cached_rules
    if _cached_rules is None:
        from .parser import parse_rules

        rules, warnings = parse_rules(prelude_text(), source="prelude")
        assert not warnings, "the bundled prelude must parse without warnings"
        _cached_rules = rules
    return _cached_rules
