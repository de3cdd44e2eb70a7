"""Serve the wire protocol over stdio or a TCP listener.

One decision_request line in, exactly one decision line out, in order.
Model text passes through untouched; only an API failure after retries
is replaced, by the cautious fallback text.
"""

import json
import logging
import socket
import sys
from typing import IO

from agentclient.client import ApiError, complete
from agentclient.config import ClientConfig, resolve_api_key
from agentclient.payload import FALLBACK_TEXT, MalformedRequest, build_payload

__all__ = ["serve_stdio", "serve_tcp"]

log = logging.getLogger(__name__)


def _reply_text(line: str, config: ClientConfig, api_key: str) -> str:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedRequest(f"request line is not JSON: {e.msg}") from None
    payload = build_payload(record, config)
    try:
        return complete(payload, config, api_key)
    except ApiError as e:
        log.warning("frame %s: %s; replying with the fallback", record["frame"], e)
        return FALLBACK_TEXT


def _serve_stream(lines: IO[str], out: IO[str], config: ClientConfig, api_key: str) -> int:
    """Answer every request line until EOF; returns the request count."""
    served = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        text = _reply_text(line, config, api_key)
        out.write(json.dumps({"type": "decision", "text": text}) + "\n")
        out.flush()
        served += 1
    return served


def serve_stdio(config: ClientConfig) -> int:
    api_key = resolve_api_key(config)
    return _serve_stream(sys.stdin, sys.stdout, config, api_key)


def serve_tcp(config: ClientConfig, host: str, port: int) -> int:
    """Accept one connection at a time until interrupted."""
    api_key = resolve_api_key(config)
    served = 0
    with socket.create_server((host, port)) as listener:
        log.info("listening on %s:%d", *listener.getsockname()[:2])
        while True:
            conn, peer = listener.accept()
            log.info("connection from %s:%d", *peer[:2])
            with conn, conn.makefile("rw", encoding="utf-8", newline="\n") as stream:
                served += _serve_stream(stream, stream, config, api_key)
    return served
