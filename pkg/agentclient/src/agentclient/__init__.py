"""Driving agent that forwards wire-protocol requests to a chat API.

The harness speaks line-delimited JSON: one ``decision_request`` record
per line in, one ``decision`` record per line out. This package builds an
OpenAI-compatible chat completion from each request, sends it, and wraps
the raw model text in the reply. It holds no driving logic of its own; if
the API cannot be reached it degrades to the text "DECISION: decelerate",
which the harness treats as an ordinary cautious reply.
"""

from agentclient.config import ClientConfig, resolve_api_key
from agentclient.payload import FALLBACK_TEXT, build_payload

__all__ = ["ClientConfig", "FALLBACK_TEXT", "build_payload", "resolve_api_key"]
