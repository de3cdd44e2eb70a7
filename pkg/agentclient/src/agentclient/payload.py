"""Build a chat completion payload from a decision_request record.

The user message is the scene description followed by the task text.
When the request carries a structured LiDAR summary that the scene text
does not already narrate, a "Lidar data description" block is inserted
between them, and any decision history is rendered in arrival order so
the model sees oldest outcomes first.
"""

from agentclient.config import ClientConfig

__all__ = ["FALLBACK_TEXT", "MalformedRequest", "build_payload"]

FALLBACK_TEXT = "DECISION: decelerate"

LIDAR_MARKER = "Lidar data description"

_REQUIRED_KEYS = ("type", "frame", "system", "scene", "task", "lidar", "history")


class MalformedRequest(ValueError):
    """The record is not a usable decision_request."""


def check_request(record) -> dict:
    if not isinstance(record, dict):
        raise MalformedRequest("request must be a JSON object")
    if record.get("type") != "decision_request":
        raise MalformedRequest(f"unexpected record type {record.get('type')!r}")
    missing = [key for key in _REQUIRED_KEYS if key not in record]
    if missing:
        raise MalformedRequest(f"request lacks fields: {missing}")
    return record


def _lidar_block(lidar: dict) -> str:
    return (
        f"{LIDAR_MARKER}:\n"
        f"{lidar['num_points']} points from surrounding objects; distances "
        f"min {lidar['min_distance']} m, mean {lidar['mean_distance']} m, "
        f"max {lidar['max_distance']} m."
    )


def _history_block(history: list) -> str:
    lines = ["Recent decisions and their outcome scores:"]
    for item in history:
        line = f"- {item['decision']}: score {item['score']}"
        if item.get("note"):
            line += f" ({item['note']})"
        lines.append(line)
    return "\n".join(lines)


def user_text(record: dict) -> str:
    parts = [record["scene"]]
    lidar = record.get("lidar")
    if lidar is not None and LIDAR_MARKER not in record["scene"]:
        parts.append(_lidar_block(lidar))
    if record.get("history"):
        parts.append(_history_block(record["history"]))
    parts.append(record["task"])
    return "\n\n".join(parts)


def build_payload(record: dict, config: ClientConfig) -> dict:
    """The exact JSON body sent to the chat endpoint."""
    record = check_request(record)
    return {
        "model": config.model,
        "temperature": config.temperature,
        "messages": [
            {"role": "system", "content": record["system"]},
            {"role": "user", "content": user_text(record)},
        ],
    }
