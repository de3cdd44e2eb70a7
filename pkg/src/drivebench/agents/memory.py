"""Append-only decision memory with outcome-based reflection.

Every decision is remembered with the aggregate score its outcome window
earned. Good outcomes are stored as-is; poor ones carry a reflection note
that is fed forward in subsequent agent requests as history.
"""

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable

from drivebench.agents.decisions import Decision

__all__ = ["GOOD_THRESHOLD", "MemoryEntry", "MemoryStore", "scene_fingerprint"]

GOOD_THRESHOLD = 0.8

STATUS_IMMEDIATE = "accepted_immediately"
STATUS_REFLECTED = "accepted_after_reflection"


def scene_fingerprint(scene_text: str) -> str:
    """Short stable hash identifying a scene description."""
    return hashlib.sha256(scene_text.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class MemoryEntry:
    """One remembered decision and how its outcome scored."""

    frame: int
    fingerprint: str
    decision: Decision
    frame_score: float
    status: str
    reflection_note: str | None

    def to_dict(self) -> dict:
        return {
            "frame": self.frame,
            "fingerprint": self.fingerprint,
            "decision": self.decision.value,
            "score": self.frame_score,
            "status": self.status,
            "note": self.reflection_note,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MemoryEntry":
        return cls(
            frame=data["frame"],
            fingerprint=data["fingerprint"],
            decision=Decision(data["decision"]),
            frame_score=data["score"],
            status=data["status"],
            reflection_note=data["note"],
        )


class MemoryStore:
    """Append-only store; entries keep arrival order (monotone frames)."""

    def __init__(self, threshold: float = GOOD_THRESHOLD):
        self.threshold = threshold
        self.entries: list[MemoryEntry] = []

    def add(
        self,
        frame: int,
        scene_text: str,
        decision: Decision,
        frame_score: float,
        outcome_summary: str,
    ) -> MemoryEntry:
        """Store a decision outcome; scores below the threshold keep the
        outcome summary as a reflection note."""
        good = frame_score >= self.threshold
        entry = MemoryEntry(
            frame=frame,
            fingerprint=scene_fingerprint(scene_text),
            decision=decision,
            frame_score=frame_score,
            status=STATUS_IMMEDIATE if good else STATUS_REFLECTED,
            reflection_note=None if good else outcome_summary,
        )
        self.entries.append(entry)
        return entry

    def history(self, k: int = 8) -> list[dict]:
        """The last ``k`` outcomes, oldest first, as wire history items."""
        items = []
        for entry in self.entries[-k:]:
            item: dict = {"decision": entry.decision.value, "score": entry.frame_score}
            if entry.reflection_note is not None:
                item["note"] = entry.reflection_note
            items.append(item)
        return items

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(e.to_dict(), separators=(", ", ": ")) + "\n"
            for e in self.entries
        )

    @classmethod
    def from_jsonl(cls, lines: Iterable[str], threshold: float = GOOD_THRESHOLD) -> "MemoryStore":
        store = cls(threshold=threshold)
        for line in lines:
            line = line.strip()
            if line:
                store.entries.append(MemoryEntry.from_dict(json.loads(line)))
        return store
