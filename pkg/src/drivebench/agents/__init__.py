"""Agent-side building blocks: decision grammar, baseline policy, memory,
and the wire protocol for external agents.

Submodules are imported explicitly (``drivebench.agents.baseline`` etc.);
only the decision grammar is re-exported here because the traffic core
depends on it.
"""

from drivebench.agents.decisions import (
    Decision,
    DecisionParseError,
    parse_decision,
    parse_or_fallback,
    render_decision,
)

__all__ = [
    "Decision",
    "DecisionParseError",
    "parse_decision",
    "parse_or_fallback",
    "render_decision",
]
