"""Deterministic replay of a run from its trajectory log.

The log carries the full scenario embed and the decision taken at every
decision tick, so feeding those decisions back through the loop rebuilds
the identical world trajectory and, with it, the memory store.
"""

from drivebench.agents.decisions import Decision, render_decision
from drivebench.agents.protocol import ReplayChannel
from drivebench.harness.config import run_config_from_embed
from drivebench.harness.logio import read_log
from drivebench.harness.runner import RunResult, run_loop

__all__ = ["ReplayMismatch", "replay_log"]


class ReplayMismatch(AssertionError):
    """Replayed rows diverged from the logged rows."""


def replay_log(path, verify: bool = True) -> RunResult:
    """Re-run a logged scenario by forcing its recorded decisions.

    With ``verify`` the replayed tick records are compared field-for-field
    against the log; any divergence raises ReplayMismatch.
    """
    meta, rows, end = read_log(path)
    cfg = run_config_from_embed(meta["config"])
    texts = [
        render_decision(Decision(row["decision"])) for row in rows if "decision" in row
    ]
    result = run_loop(cfg, ReplayChannel(texts))
    if verify:
        logged = [dict(row) for row in rows]
        for row in logged:
            row.pop("decision", None)
        replayed = [dict(row) for row in result.rows]
        for row in replayed:
            row.pop("decision", None)
        if replayed != logged:
            first = next(
                i for i, (a, b) in enumerate(zip(replayed, logged)) if a != b
            ) if len(replayed) == len(logged) else min(len(replayed), len(logged))
            raise ReplayMismatch(f"replay diverged from log at row {first}")
        if result.termination != end["termination"]:
            raise ReplayMismatch(
                f"replay terminated with {result.termination}, "
                f"log says {end['termination']}"
            )
    return result
