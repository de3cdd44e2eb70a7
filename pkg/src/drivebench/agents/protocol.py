"""Agent channels and the line-delimited wire protocol.

One JSON record per line. Request:
``{"type":"decision_request","frame":N,"system":S,"scene":T,"task":U,``
``"lidar":{...}|null,"history":[...]}``. Response:
``{"type":"decision","text":"..."}``. One request, one response, in order.

Channels normalise every agent kind to ``ask(request, observation,
timeout) -> reply text``: builtin policies run in process, ``proc:`` spawns
a child speaking the protocol on stdio, ``tcp:`` connects to a listener.
"""

import json
import logging
import os
import select
import shlex
import socket
import subprocess
import time
from dataclasses import dataclass
from typing import Protocol, Sequence

from drivebench.agents.baseline import BUILTIN_AGENTS
from drivebench.agents.decisions import (
    FALLBACK_DECISION,
    Decision,
    parse_or_fallback,
)
from drivebench.perception import LidarSummary, Observation, ScenePrompt

__all__ = [
    "AgentChannel",
    "AgentRequest",
    "AgentResponse",
    "BuiltinChannel",
    "ProcChannel",
    "ProtocolError",
    "ReplayChannel",
    "TcpChannel",
    "TransportError",
    "decode_request",
    "decode_response",
    "encode_request",
    "encode_response",
    "make_channel",
    "request_decision",
]

log = logging.getLogger(__name__)

MAX_HISTORY = 8


class TransportError(RuntimeError):
    """The agent endpoint is gone; the run cannot continue."""


class ProtocolError(ValueError):
    """The agent sent bytes that do not form a valid response record."""


@dataclass(frozen=True)
class AgentRequest:
    """One decision query; history carries recent outcomes, max 8."""

    frame: int
    prompt: ScenePrompt
    lidar: LidarSummary | None
    history: tuple[dict, ...] = ()

    def __post_init__(self):
        if len(self.history) > MAX_HISTORY:
            raise ValueError(f"history holds at most {MAX_HISTORY} items")


@dataclass(frozen=True)
class AgentResponse:
    decision: Decision
    rationale: str
    latency_ms: float


def encode_request(req: AgentRequest) -> str:
    record = {
        "type": "decision_request",
        "frame": req.frame,
        "system": req.prompt.system_text,
        "scene": req.prompt.scene_text,
        "task": req.prompt.task_text,
        "lidar": req.lidar.to_dict() if req.lidar is not None else None,
        "history": list(req.history),
    }
    return json.dumps(record, separators=(",", ":"))


def decode_request(line: str) -> dict:
    """Parse a request record (used by test agents and echo servers)."""
    try:
        record = json.loads(line)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"request is not JSON: {e}") from None
    if not isinstance(record, dict) or record.get("type") != "decision_request":
        raise ProtocolError("record is not a decision_request")
    return record


def encode_response(text: str) -> str:
    return json.dumps({"type": "decision", "text": text}, separators=(",", ":"))


def decode_response(line: str) -> str:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"response is not JSON: {e}") from None
    if not isinstance(record, dict) or record.get("type") != "decision":
        raise ProtocolError("record is not a decision response")
    text = record.get("text")
    if not isinstance(text, str):
        raise ProtocolError("decision record lacks a text field")
    return text


class AgentChannel(Protocol):
    def ask(self, req: AgentRequest, obs: Observation, timeout_s: float) -> str | None:
        """Reply text, or None on timeout. Raises TransportError when the
        endpoint is unusable and ProtocolError on malformed records."""

    def close(self) -> None: ...


class BuiltinChannel:
    """In-process policy from the builtin registry."""

    def __init__(self, name: str):
        try:
            self._fn = BUILTIN_AGENTS[name]
        except KeyError:
            known = ", ".join(sorted(BUILTIN_AGENTS))
            raise ValueError(f"unknown builtin agent {name!r}; known: {known}") from None
        self.name = name

    def ask(self, req: AgentRequest, obs: Observation, timeout_s: float) -> str | None:
        return self._fn(obs)

    def close(self) -> None:
        pass


class ReplayChannel:
    """Feeds back a fixed sequence of reply texts (log-driven replay)."""

    def __init__(self, texts: Sequence[str]):
        self._texts = list(texts)
        self._next = 0

    def ask(self, req: AgentRequest, obs: Observation, timeout_s: float) -> str | None:
        if self._next >= len(self._texts):
            raise TransportError("replay exhausted: no reply left for this frame")
        text = self._texts[self._next]
        self._next += 1
        return text

    def close(self) -> None:
        pass


class _LineStream:
    """Deadline-based line reader over a non-blocking file descriptor."""

    def __init__(self, fd: int):
        self.fd = fd
        self.buf = b""
        os.set_blocking(fd, False)

    def drain(self) -> None:
        """Discard pending bytes (stale late replies) before a new request."""
        self.buf = b""
        while True:
            ready, _, _ = select.select([self.fd], [], [], 0.0)
            if not ready:
                return
            chunk = os.read(self.fd, 65536)
            if not chunk:
                return

    def read_line(self, timeout_s: float) -> str | None:
        deadline = time.monotonic() + timeout_s
        while True:
            if b"\n" in self.buf:
                line, _, self.buf = self.buf.partition(b"\n")
                return line.decode("utf-8", errors="replace")
            remaining = deadline - time.monotonic()
            if remaining <= 0.0:
                return None
            ready, _, _ = select.select([self.fd], [], [], remaining)
            if not ready:
                return None
            chunk = os.read(self.fd, 65536)
            if not chunk:
                raise TransportError("agent stream closed")
            self.buf += chunk


class ProcChannel:
    """Child process speaking the protocol on its stdin/stdout."""

    def __init__(self, command: str):
        self.command = command
        try:
            self._proc = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
            )
        except OSError as e:
            raise TransportError(f"cannot start agent process {command!r}: {e}") from None
        self._stream = _LineStream(self._proc.stdout.fileno())

    def ask(self, req: AgentRequest, obs: Observation, timeout_s: float) -> str | None:
        if self._proc.poll() is not None:
            raise TransportError(
                f"agent process exited with status {self._proc.returncode}"
            )
        self._stream.drain()
        try:
            self._proc.stdin.write(encode_request(req).encode("utf-8") + b"\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise TransportError(f"agent process pipe broken: {e}") from None
        line = self._stream.read_line(timeout_s)
        if line is None:
            return None
        return decode_response(line)

    def close(self) -> None:
        if self._proc.poll() is None:
            self._proc.terminate()
            try:
                self._proc.wait(timeout=2.0)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()


class TcpChannel:
    """Connection to an agent listening on host:port."""

    def __init__(self, host: str, port: int):
        try:
            self._sock = socket.create_connection((host, port), timeout=5.0)
        except OSError as e:
            raise TransportError(f"cannot connect to agent at {host}:{port}: {e}") from None
        self._sock.setblocking(False)
        self._stream = _LineStream(self._sock.fileno())

    def ask(self, req: AgentRequest, obs: Observation, timeout_s: float) -> str | None:
        self._stream.drain()
        payload = encode_request(req).encode("utf-8") + b"\n"
        try:
            self._sock.setblocking(True)
            self._sock.sendall(payload)
        except OSError as e:
            raise TransportError(f"agent connection lost: {e}") from None
        finally:
            self._sock.setblocking(False)
        line = self._stream.read_line(timeout_s)
        if line is None:
            return None
        return decode_response(line)

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass


def make_channel(target: str) -> AgentChannel:
    """Build a channel from an agent target string.

    Accepted forms: ``builtin:<name>``, ``proc:<command line>``,
    ``tcp:<host>:<port>``.
    """
    scheme, _, rest = target.partition(":")
    if scheme == "builtin" and rest:
        return BuiltinChannel(rest)
    if scheme == "proc" and rest:
        return ProcChannel(rest)
    if scheme == "tcp" and rest:
        host, _, port_text = rest.rpartition(":")
        if not host or not port_text.isdigit():
            raise ValueError(f"tcp agent target needs host:port, got {rest!r}")
        return TcpChannel(host, int(port_text))
    raise ValueError(
        f"unrecognized agent target {target!r}; expected builtin:<name>, "
        "proc:<command>, or tcp:<host>:<port>"
    )


def request_decision(
    channel: AgentChannel,
    req: AgentRequest,
    obs: Observation,
    timeout_ms: float = 2000.0,
    retries: int = 1,
) -> AgentResponse:
    """One request, one response, with safe degradation.

    Timeouts and malformed replies yield the fallback decision with
    rationale "fallback"; transport failures are retried and then raised
    so the caller can stop the run with a scored partial log.
    """
    start = time.perf_counter()
    attempt = 0
    while True:
        try:
            text = channel.ask(req, obs, timeout_ms / 1000.0)
            break
        except ProtocolError as e:
            log.warning("frame %d: malformed agent reply (%s)", req.frame, e)
            text = None
            break
        except TransportError as e:
            attempt += 1
            if attempt > retries:
                raise
            log.warning(
                "frame %d: agent transport failure (%s), retry %d/%d",
                req.frame,
                e,
                attempt,
                retries,
            )
    latency_ms = (time.perf_counter() - start) * 1000.0
    if text is None:
        log.warning("frame %d: no usable reply, applying fallback", req.frame)
        return AgentResponse(FALLBACK_DECISION, "fallback", latency_ms)
    decision, status = parse_or_fallback(text)
    if status == "fallback":
        log.warning("frame %d: reply had no parsable decision, applying fallback", req.frame)
        return AgentResponse(decision, "fallback", latency_ms)
    return AgentResponse(decision, text, latency_ms)
