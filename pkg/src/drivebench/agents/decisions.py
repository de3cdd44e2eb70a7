"""Decision grammar shared by agents and the run loop.

Agents reply in free text; the single stable element is a marker line of
the form ``DECISION: <value>``. Parsing prefers marker lines and falls
back to scanning the whole reply for exactly one decision keyword.
"""

import re
from enum import Enum

__all__ = [
    "Decision",
    "DecisionParseError",
    "FALLBACK_DECISION",
    "parse_decision",
    "parse_or_fallback",
    "render_decision",
]


class Decision(str, Enum):
    """The five actions an agent can take each decision point."""

    IDLE = "idle"
    ACCELERATE = "accelerate"
    DECELERATE = "decelerate"
    TURN_LEFT = "turn_left"
    TURN_RIGHT = "turn_right"


class DecisionParseError(ValueError):
    """Raised when a reply contains no decision or conflicting decisions."""


# A lane-change keyword tolerates space, hyphen, or underscore separators.
_KEYWORDS: dict[Decision, re.Pattern[str]] = {
    Decision.IDLE: re.compile(r"\bidle\b", re.IGNORECASE),
    Decision.ACCELERATE: re.compile(r"\baccelerate\b", re.IGNORECASE),
    Decision.DECELERATE: re.compile(r"\bdecelerate\b", re.IGNORECASE),
    Decision.TURN_LEFT: re.compile(r"\bturn[\s_-]?left\b", re.IGNORECASE),
    Decision.TURN_RIGHT: re.compile(r"\bturn[\s_-]?right\b", re.IGNORECASE),
}

_MARKER = re.compile(r"^\s*decision\s*:\s*(?P<value>.+?)\s*$", re.IGNORECASE)

# The harness never stops on a malformed reply; it substitutes the safest
# longitudinal action and keeps the loop closed.
FALLBACK_DECISION = Decision.DECELERATE


def _match_one(text: str) -> Decision | None:
    """The unique decision whose keyword occurs in ``text``, else None."""
    found = [d for d, pattern in _KEYWORDS.items() if pattern.search(text)]
    if len(found) == 1:
        return found[0]
    return None


def parse_decision(text: str) -> Decision:
    """Extract the decision from an agent reply.

    Marker lines win: if the reply contains ``DECISION: <value>`` lines
    whose values resolve to exactly one decision, that decision is
    returned; resolving to several distinct decisions is an error. With no
    usable marker the whole reply is scanned and must mention exactly one
    decision keyword.
    """
    if not text or not text.strip():
        raise DecisionParseError("empty reply")
    marked: set[Decision] = set()
    for line in text.splitlines():
        m = _MARKER.match(line)
        if m is None:
            continue
        decision = _match_one(m.group("value"))
        if decision is not None:
            marked.add(decision)
    if len(marked) == 1:
        return next(iter(marked))
    if len(marked) > 1:
        values = ", ".join(sorted(d.value for d in marked))
        raise DecisionParseError(f"conflicting decision markers: {values}")
    decision = _match_one(text)
    if decision is not None:
        return decision
    raise DecisionParseError("no single decision keyword in reply")


def parse_or_fallback(text: str) -> tuple[Decision, str]:
    """Parse a reply, degrading to the fallback decision.

    Returns ``(decision, "parsed")`` on success and
    ``(FALLBACK_DECISION, "fallback")`` when the reply is unusable.
    """
    try:
        return parse_decision(text), "parsed"
    except DecisionParseError:
        return FALLBACK_DECISION, "fallback"


def render_decision(decision: Decision) -> str:
    """Canonical marker line for a decision."""
    return f"DECISION: {decision.value}"
